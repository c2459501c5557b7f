#pragma once

#include <string>
#include <vector>

#include "pexa/ast.hpp"

namespace pexa {

// Parses a model: a sequence of `var` declarations followed by one statement.
// Throws ParseError (with line:column) on lexical and syntax errors and on
// duplicate declarations.
Model parse_model(const std::string& text);

// Parses a boolean predicate over program variables, e.g. "x = 0 | x = 2".
BExprPtr parse_predicate(const std::string& text);

// Parses an expectation expression, e.g. "1/2 * [x = 0] + [x = 1]".
EExprPtr parse_expectation(const std::string& text);

// Parses a performance query:
//   Pmin=? [true U<=T (pred)]   Pmax=? [...]
//   Rmin=? [F (pred)]           Rmax=? [...]
Query parse_query(const std::string& text);

// Parses a predicate file: one predicate per line, '#' starts a comment.
// Returns (display text, predicate) pairs.
std::vector<std::pair<std::string, BExprPtr>> parse_predicate_lines(const std::string& text);

// Static validation: referenced variables declared, probability literals in
// [0,1], declaration bounds ordered, and every assignment in-domain for every
// state unless the target variable is declared `wrap` (the check is
// flow-insensitive by design, so guard-protected assignments must still be
// total or wrapped).
std::vector<Diagnostic> validate_model(const Model& m);

}  // namespace pexa
