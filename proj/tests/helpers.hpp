#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "pexa/abstraction.hpp"
#include "pexa/parser.hpp"

namespace pexa::test {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline std::string model_path(const std::string& name) {
    return std::string(PEXA_MODELS_DIR) + "/" + name;
}

inline Model load_model(const std::string& name) {
    return parse_model(read_file(model_path(name)));
}

inline Rat R(long num, long den = 1) { return rat(num, den); }

inline Expectation expect_of(const std::string& text, const StateSpace& space) {
    return eval_expectation(parse_expectation(text), space);
}

inline PredicateSet preds_of(std::initializer_list<std::string> texts) {
    PredicateSet phi;
    for (const auto& t : texts) phi.add(t, parse_predicate(t));
    return phi;
}

}  // namespace pexa::test
