#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace pexa {

// Exact rational arithmetic. All semantic computations in this library are
// carried out over rationals; floating point appears only in value-iteration
// warm starts and CSV output.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

// Parses "3/4", "-2", "7" or an exact decimal such as "0.25".
Rat rat_from_string(const std::string& text);

// Prints "num/den", or just "num" when the denominator is 1.
std::string rat_str(const Rat& q);

inline double rat_double(const Rat& q) { return q.get_d(); }

}  // namespace pexa
