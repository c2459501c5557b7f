#pragma once

#include <json.hpp>

#include "pexa/abstraction.hpp"
#include "pexa/mdp.hpp"
#include "pexa/rabin.hpp"

namespace pexa {

#ifndef PEXA_VERSION
#define PEXA_VERSION "0.0.0"
#endif
inline constexpr const char* kVersion = PEXA_VERSION;

// JSON serializations used by both the CLI and the python bindings.
// Rationals are written as exact strings ("3/4"), states as valuations.

nlohmann::json expectation_json(const Expectation& e, const StateSpace& space);
nlohmann::json diagnostics_json(const std::vector<Diagnostic>& diags);
nlohmann::json partition_json(const Partition& part, const PredicateSet& phi,
                              const StateSpace& space);
nlohmann::json ip_report_json(const IpReport& report, const StateSpace& space);
nlohmann::json di_report_json(const DiReport& report, const StateSpace& space);
nlohmann::json query_result_json(const QueryResult& result, const StateSpace& space);
nlohmann::json query_result_json(const QueryResult& result, const std::vector<uint32_t>& states);
nlohmann::json refinement_json(const RefinementVerdict& verdict, const StateSpace& space);
nlohmann::json rabin_trace_json(const rabin::Trace& trace);
nlohmann::json rabin_state_json(const rabin::ConcreteState& s);
nlohmann::json rabin_report_json(const rabin::PaperQueriesReport& report);

}  // namespace pexa
