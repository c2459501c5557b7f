#pragma once

#include <stdexcept>
#include <string>

namespace pexa {

// Semantic-level failures on otherwise well-formed inputs: state-space or
// action explosion, non-loop-form models where a loop is required, division
// by zero, and similar.
class ModelError : public std::runtime_error {
public:
    explicit ModelError(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace pexa
