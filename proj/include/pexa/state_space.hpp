#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "pexa/ast.hpp"
#include "pexa/errors.hpp"

namespace pexa {

constexpr size_t kDefaultMaxStates = 10'000'000;

// Enumerated finite state space. States are indexed 0..count-1 in
// lexicographic order of valuations, first-declared variable most
// significant: for x:0..3, y:0..1 the state (x=1,y=0) has index 2.
class StateSpace {
public:
    explicit StateSpace(std::vector<VarDecl> decls, size_t max_states = kDefaultMaxStates);

    size_t count() const { return count_; }
    size_t var_count() const { return decls_.size(); }
    const std::vector<VarDecl>& decls() const { return decls_; }
    const VarDecl& decl(size_t var) const { return decls_[var]; }

    // Index of a declared variable; throws ModelError for unknown names.
    size_t var_index(const std::string& name) const;
    bool has_var(const std::string& name) const { return by_name_.count(name) != 0; }

    long value(size_t state, size_t var) const {
        return decls_[var].lo + static_cast<long>(state / strides_[var] % sizes_[var]);
    }

    // Replaces one variable's value; `v` must already be in-domain.
    size_t with_value(size_t state, size_t var, long v) const;

    // Maps an arbitrary integer into the variable's domain: modular reduction
    // for wrap variables, a ModelError otherwise when out of range.
    long normalize(size_t var, long v) const;

    std::vector<long> valuation(size_t state) const;
    size_t index_of(const std::vector<long>& valuation) const;
    std::string valuation_str(size_t state) const; // "x=1,y=0"

private:
    std::vector<VarDecl> decls_;
    std::vector<size_t> sizes_;
    std::vector<size_t> strides_;
    size_t count_ = 1;
    std::map<std::string, size_t> by_name_;
};

long eval_aexpr(const AExprPtr& e, const StateSpace& space, size_t state);
bool eval_bexpr(const BExprPtr& e, const StateSpace& space, size_t state);

}  // namespace pexa
