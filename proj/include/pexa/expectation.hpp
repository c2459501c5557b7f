#pragma once

#include <vector>

#include "pexa/ast.hpp"
#include "pexa/rational.hpp"
#include "pexa/state_space.hpp"

namespace pexa {

// A dense total map state index -> non-negative rational.
using Expectation = std::vector<Rat>;

Expectation const_expectation(const StateSpace& space, const Rat& value);
Expectation indicator(const BExprPtr& pred, const StateSpace& space);

// Pointwise evaluation of an expectation expression; throws ModelError when a
// coefficient is negative or a referenced variable is undeclared.
Expectation eval_expectation(const EExprPtr& e, const StateSpace& space);

Expectation e_add(const Expectation& a, const Expectation& b);
Expectation e_scale(const Rat& alpha, const Expectation& a);
Expectation e_min(const Expectation& a, const Expectation& b);
Expectation e_max(const Expectation& a, const Expectation& b);
// Truncated subtraction: max(a - b, 0) pointwise.
Expectation e_monus(const Expectation& a, const Expectation& b);

bool e_leq(const Expectation& a, const Expectation& b);
Rat e_sup(const Expectation& a);

}  // namespace pexa
