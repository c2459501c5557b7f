#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pexa/expectation.hpp"
#include "pexa/wp.hpp"

namespace pexa {

// One resolution of the nondeterminism in a state: a rational probability
// distribution over successor states. Transitions are sorted by successor,
// carry positive probability and sum to exactly 1.
struct MdpAction {
    std::vector<std::pair<uint32_t, Rat>> transitions;

    auto operator<=>(const MdpAction&) const = default;
};

struct Mdp {
    uint32_t num_states = 0;
    std::vector<std::vector<MdpAction>> actions; // per state, at least one
    std::vector<uint32_t> initial;               // sorted
    std::map<std::string, std::vector<uint32_t>> labels; // sorted state lists

    bool has_label(const std::string& name, uint32_t state) const;
    std::vector<bool> label_set(const std::string& name) const;
    // Throws ModelError if the structural invariants are violated.
    void validate() const;
};

// Sorts transitions, merges duplicate entries, and drops duplicate
// distributions per state.
void merge_duplicate_actions(Mdp& m);

bool is_deterministic(const Mdp& m);

struct MdpOptions {
    size_t max_actions_per_state = 4096;
};

// Operational MDP of a loop-form model `do G -> body od` with loop-free body:
// one MDP step per loop iteration. Actions enumerate all resolutions of the
// demonic choices along the body (the demon may react to probabilistic
// outcomes within the iteration); states where G fails are absorbing. If the
// body can abort, aborting mass flows to an extra absorbing state labeled
// "sink". All states are initial; guard-false states carry label "exit".
Mdp extract_mdp(const Model& model, const StateSpace& space, const MdpOptions& opts = {});

// Quotient under a partition: one abstract state per block, abstract actions
// are the member actions with successor probabilities summed per block,
// duplicates merged. Labels survive only on fully-covered blocks.
Mdp quotient_mdp(const Mdp& m, const std::vector<uint32_t>& block_of_state, uint32_t num_blocks);

struct QueryResult {
    std::vector<Rat> values;
    std::vector<bool> infinite; // expected-reward queries only
    bool exact = true;
    size_t iterations = 0;
    double residual = 0.0;
};

// Optimal bounded reachability: probability of hitting `target` within
// `horizon` steps, minimized (demonic) or maximized over adversaries.
// Exact backward recursion over rationals.
QueryResult pbounded(const Mdp& m, const std::vector<bool>& target, size_t horizon,
                     Query::Mode mode);

struct RewardStructure {
    std::vector<Rat> state_reward; // accrued per step taken from the state
};

RewardStructure unit_rewards(const Mdp& m, const std::vector<bool>& target);

// Optimal expected accumulated reward until reaching `target`; paths that
// never reach it count as infinite, so states where the optimizing adversary
// cannot guarantee reachability with probability 1 are flagged infinite.
// Remaining states: floating value iteration to residual 1e-9 for a starting
// policy, then exact policy iteration over rationals; results are exact.
QueryResult expected_reward(const Mdp& m, const std::vector<bool>& target,
                            const RewardStructure& rewards, Query::Mode mode);

// Qualitative reachability sets (graph-only, no numerics):
//   reach_exists  - some resolution reaches the set with positive probability
//   almost_sure_exists - some adversary reaches the set with probability 1
//   almost_sure_all    - every adversary reaches the set with probability 1
std::vector<bool> reach_exists(const Mdp& m, const std::vector<bool>& target);
std::vector<bool> almost_sure_exists(const Mdp& m, const std::vector<bool>& target);
std::vector<bool> almost_sure_all(const Mdp& m, const std::vector<bool>& target);

}  // namespace pexa
