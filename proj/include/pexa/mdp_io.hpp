#pragma once

#include <json.hpp>

#include "pexa/mdp.hpp"

namespace pexa {

// JSON schema (probabilities as exact rational strings):
// {
//   "states": <count>,
//   "initial": [<state>, ...],
//   "labels": {"<name>": [<state>, ...], ...},
//   "actions": [ [ [[<succ>, "<prob>"], ...], ... ], ... ]  // per state
// }
nlohmann::json mdp_to_json(const Mdp& m);
Mdp mdp_from_json(const nlohmann::json& j);

// PRISM-style explicit transition format for cross-checking with external
// tools: a header line "<states> <choices> <transitions>" followed by one
// "<src> <choice> <dst> <prob>" line per transition, probabilities written
// as exact fractions.
std::string mdp_to_prism_tra(const Mdp& m);

// PRISM-style label file: a header mapping label ids to names, then
// "<state>: <id> ..." lines. Label 0 is always "init".
std::string mdp_to_prism_lab(const Mdp& m);

}  // namespace pexa
