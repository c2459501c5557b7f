#include "pexa/state_space.hpp"

#include <cassert>
#include <sstream>

namespace pexa {

StateSpace::StateSpace(std::vector<VarDecl> decls, size_t max_states) : decls_(std::move(decls)) {
    sizes_.resize(decls_.size());
    strides_.resize(decls_.size());
    for (size_t i = 0; i < decls_.size(); ++i) {
        const VarDecl& d = decls_[i];
        if (d.lo > d.hi) throw ModelError("empty domain for variable '" + d.name + "'");
        sizes_[i] = static_cast<size_t>(d.hi - d.lo) + 1;
        if (!by_name_.emplace(d.name, i).second)
            throw ModelError("duplicate variable '" + d.name + "'");
    }
    // Strides from the right: the last declared variable varies fastest.
    size_t stride = 1;
    for (size_t i = decls_.size(); i-- > 0;) {
        strides_[i] = stride;
        if (stride > max_states / sizes_[i])
            throw ModelError("state space exceeds limit of " + std::to_string(max_states) +
                             " states");
        stride *= sizes_[i];
    }
    count_ = stride;
}

size_t StateSpace::var_index(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) throw ModelError("undeclared variable '" + name + "'");
    return it->second;
}

size_t StateSpace::with_value(size_t state, size_t var, long v) const {
    assert(v >= decls_[var].lo && v <= decls_[var].hi);
    long old = value(state, var);
    return state + static_cast<size_t>(v - decls_[var].lo) * strides_[var] -
           static_cast<size_t>(old - decls_[var].lo) * strides_[var];
}

long StateSpace::normalize(size_t var, long v) const {
    const VarDecl& d = decls_[var];
    if (v >= d.lo && v <= d.hi) return v;
    if (!d.wrap)
        throw ModelError("value " + std::to_string(v) + " out of domain for '" + d.name +
                         "' (declare it wrap or guard the update)");
    long size = static_cast<long>(sizes_[var]);
    long off = (v - d.lo) % size;
    if (off < 0) off += size;
    return d.lo + off;
}

std::vector<long> StateSpace::valuation(size_t state) const {
    std::vector<long> out(decls_.size());
    for (size_t i = 0; i < decls_.size(); ++i) out[i] = value(state, i);
    return out;
}

size_t StateSpace::index_of(const std::vector<long>& valuation) const {
    assert(valuation.size() == decls_.size());
    size_t idx = 0;
    for (size_t i = 0; i < decls_.size(); ++i) {
        assert(valuation[i] >= decls_[i].lo && valuation[i] <= decls_[i].hi);
        idx += static_cast<size_t>(valuation[i] - decls_[i].lo) * strides_[i];
    }
    return idx;
}

std::string StateSpace::valuation_str(size_t state) const {
    std::ostringstream os;
    for (size_t i = 0; i < decls_.size(); ++i) {
        if (i) os << ",";
        os << decls_[i].name << "=" << value(state, i);
    }
    return os.str();
}

long eval_aexpr(const AExprPtr& e, const StateSpace& space, size_t state) {
    switch (e->kind) {
        case AExpr::Kind::Const: return e->value;
        case AExpr::Kind::Var: return space.value(state, space.var_index(e->var));
        case AExpr::Kind::Add:
            return eval_aexpr(e->lhs, space, state) + eval_aexpr(e->rhs, space, state);
        case AExpr::Kind::Sub:
            return eval_aexpr(e->lhs, space, state) - eval_aexpr(e->rhs, space, state);
        case AExpr::Kind::Mul:
            return eval_aexpr(e->lhs, space, state) * eval_aexpr(e->rhs, space, state);
        case AExpr::Kind::Div: {
            long num = eval_aexpr(e->lhs, space, state);
            long den = eval_aexpr(e->rhs, space, state);
            if (den == 0) throw ModelError("division by zero");
            return num / den; // truncates toward zero
        }
    }
    return 0;
}

bool eval_bexpr(const BExprPtr& e, const StateSpace& space, size_t state) {
    switch (e->kind) {
        case BExpr::Kind::Const: return e->bval;
        case BExpr::Kind::Cmp: {
            long a = eval_aexpr(e->alhs, space, state);
            long b = eval_aexpr(e->arhs, space, state);
            switch (e->op) {
                case CmpOp::Eq: return a == b;
                case CmpOp::Ne: return a != b;
                case CmpOp::Lt: return a < b;
                case CmpOp::Le: return a <= b;
                case CmpOp::Gt: return a > b;
                case CmpOp::Ge: return a >= b;
            }
            return false;
        }
        case BExpr::Kind::Not: return !eval_bexpr(e->lhs, space, state);
        case BExpr::Kind::And:
            return eval_bexpr(e->lhs, space, state) && eval_bexpr(e->rhs, space, state);
        case BExpr::Kind::Or:
            return eval_bexpr(e->lhs, space, state) || eval_bexpr(e->rhs, space, state);
    }
    return false;
}

}  // namespace pexa
