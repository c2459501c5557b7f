#pragma once

#include <compare>
#include <cstdint>
#include <optional>

#include "pexa/mdp.hpp"

namespace pexa::rabin {

// The conjugate of n: n+1 if n is even, n-1 if n is odd.
long conjugate(long n);

// ---------------------------------------------------------------------------
// Concrete protocol state: two noticeboards and four bags of notepad numbers.

struct ConcreteState {
    std::vector<long> lout, rout; // undecided tourists waiting at each side
    std::vector<long> lin, rin;   // decided tourists
    long board_left = 0;
    long board_right = 0;

    bool terminated() const { return lout.empty() && rout.empty(); }
    size_t tourists() const { return lout.size() + rout.size() + lin.size() + rin.size(); }
    void canonicalize(); // sorts the bags
    auto operator<=>(const ConcreteState&) const = default;
};

ConcreteState initial_state(unsigned a, unsigned b);

// Serves one tourist holding `pad` at the given side. Returns the successor
// distribution: a single entry, or two entries at 1/2 when the protocol
// flips a coin (pad equal to the noticeboard).
std::vector<std::pair<Rat, ConcreteState>> serve(const ConcreteState& s, bool left, long pad);

// ---------------------------------------------------------------------------
// Simulation.

enum class SchedulerPolicy { UniformRandom, RoundRobin, AdversarialHeuristic };

struct Trace {
    std::vector<ConcreteState> states; // initial state first
    size_t steps = 0;
    bool terminated = false;
    bool consensus = false;      // all tourists decided on the same side
    long max_board_diff = 0;     // max |L - R| over visited states
    long max_level_diff = 0;     // max |floor(L/2) - floor(R/2)|
    bool tourist_conservation = true;
};

Trace simulate(unsigned a, unsigned b, SchedulerPolicy policy, uint64_t seed, size_t max_steps);

// ---------------------------------------------------------------------------
// Bounded-exact explicit model of the concrete protocol. Board and pad values
// are capped; transitions that would exceed the cap divert to an absorbing
// overflow sink. With board_cap >= 3T+3 every path of length <= T stays below
// the cap (one step raises any number by at most 3), so bounded queries up to
// horizon T are exact.

struct TruncatedOptions {
    size_t max_states = 2'000'000;
    // BFS depth limit; frontier states become absorbing. Bounded queries up
    // to this horizon are unaffected.
    size_t max_depth = SIZE_MAX;
};

struct TruncatedModel {
    Mdp mdp; // labels: "done", "exit", "overflow"
    std::vector<ConcreteState> states;
    uint32_t sink_state = 0;
    bool sink_reachable = false;
    std::vector<uint32_t> depth;
};

TruncatedModel truncated_mdp(unsigned a, unsigned b, long board_cap,
                             const TruncatedOptions& opts = {});

// ---------------------------------------------------------------------------
// Slot abstraction. The boards are tracked only through their difference and
// the left board's parity; each tourist is tracked by queue and by its pad's
// position relative to the two boards. Positions at or above a board are kept
// exactly (they stay small), positions below are clamped to -1: a pad below a
// board behaves uniformly however far below it is.

struct AbsDescriptor {
    uint8_t queue = 0;    // 0 lout, 1 rout, 2 lin, 3 rin
    int8_t off_left = 0;  // pad - L, clamped to >= -1
    int8_t off_right = 0; // pad - R, clamped to >= -1
    uint8_t served = 0;   // sweep-round bookkeeping; 0 unless marks are enabled

    auto operator<=>(const AbsDescriptor&) const = default;
};

struct AbstractState {
    int8_t board_diff = 0;   // L - R, invariant |.| <= 3
    uint8_t parity_left = 0; // L mod 2
    std::vector<AbsDescriptor> descriptors; // sorted

    uint8_t parity_right() const { return parity_left ^ (board_diff & 1); }
    // 0: boards equal; 2: boards conjugate; 1: boards one level apart
    // (levels pair {2k, 2k+1}).
    int slot() const;
    int level_diff() const; // floor(L/2) - floor(R/2)
    bool terminated() const;
    bool all_in(uint8_t queue) const;
    void canonicalize();
    bool consistent() const; // invariants for construction-time assertions
    auto operator<=>(const AbstractState&) const = default;
};

// The abstraction function from concrete states.
AbstractState project(const ConcreteState& s);

struct AbstractModel {
    Mdp mdp; // labels: "done", "exit"
    std::vector<AbstractState> states;
    // In sweep mode, reward 1 on states that begin a new service round.
    std::vector<Rat> sweep_reward;
};

// Explicit MDP over abstract states, reachable from the (a, b) split. With
// sweep_marks, descriptors carry a served-this-round flag and the model
// supports the round-based reward convention.
AbstractModel abstract_mdp(unsigned a, unsigned b, bool sweep_marks = false);

// ---------------------------------------------------------------------------
// The case-study queries: Pmin/Pmax convergence curve and expected steps to
// consensus under both reward conventions.

struct CurvePoint {
    size_t horizon;
    Rat pmin;
    Rat pmax;
};

struct RewardSummary {
    bool min_infinite = false;
    bool max_infinite = false;
    Rat min_value;
    Rat max_value;
};

struct PaperQueriesReport {
    unsigned tourists = 0;
    unsigned split_left = 0;
    unsigned split_right = 0;
    std::vector<CurvePoint> curve;
    RewardSummary per_serve;              // one reward per served tourist
    std::optional<RewardSummary> sweep;   // one reward per service round
    size_t abstract_states = 0;
};

PaperQueriesReport run_paper_queries(unsigned a, unsigned b, size_t t_max,
                                     bool with_sweep = false);

// CSV with header "T,pmin,pmax"; floats at 12 significant digits.
std::string curve_csv(const PaperQueriesReport& report);

}  // namespace pexa::rabin
