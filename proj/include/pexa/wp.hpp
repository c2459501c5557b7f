#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pexa/expectation.hpp"

namespace pexa {

struct WpOptions {
    // Iteration bound per loop for the least-fixed-point computation.
    size_t loop_fuel = 100'000;
};

struct WpResult {
    Expectation value;
    // False when some loop hit the fuel bound before reaching an exact
    // fixpoint; the value is then a sound lower bound (iteration starts from
    // the all-zero expectation).
    bool exact = true;
    size_t max_loop_iterations = 0;
};

// Weakest pre-expectation of `post` under `prog`: structural recursion over
// the command tree, demonic choice as pointwise minimum, loops as Kleene
// iteration from zero with exact-repeat detection.
WpResult wp(const ProgramPtr& prog, const Expectation& post, const StateSpace& space,
            const WpOptions& opts = {});

// Value of the step-bounded loop query: the expected value of `post` at exit,
// counting only runs that leave the loop within k iterations. Computed by the
// finite recurrence X_0 = [!G]*post, X_{i+1} = [!G]*post + [G]*wp(body, X_i),
// returning X_k.
WpResult wp_bounded_loop(const BExprPtr& guard, const ProgramPtr& body, const Expectation& post,
                         size_t k, const StateSpace& space, const WpOptions& opts = {});

struct RefutationWitness {
    std::string expectation_text;
    size_t state = 0;
    Rat wp_left;  // wp(P, E) at the state
    Rat wp_right; // wp(Q, E) at the state
};

struct RefinementVerdict {
    bool refuted = false;
    std::optional<RefutationWitness> witness;
};

// Searches for a witness expectation E with wp(P,E) > wp(Q,E) somewhere,
// refuting the refinement P [= Q. Tries every single-state indicator plus the
// supplied extras. `not refuted` is not a proof.
RefinementVerdict check_refinement_refute(
    const ProgramPtr& p, const ProgramPtr& q, const StateSpace& space,
    const std::vector<std::pair<std::string, EExprPtr>>& extra_witnesses = {},
    const WpOptions& opts = {});

}  // namespace pexa
