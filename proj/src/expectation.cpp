#include "pexa/expectation.hpp"

#include <algorithm>
#include <cassert>

namespace pexa {

Expectation const_expectation(const StateSpace& space, const Rat& value) {
    return Expectation(space.count(), value);
}

Expectation indicator(const BExprPtr& pred, const StateSpace& space) {
    Expectation out(space.count(), Rat(0));
    for (size_t s = 0; s < space.count(); ++s)
        if (eval_bexpr(pred, space, s)) out[s] = 1;
    return out;
}

Expectation eval_expectation(const EExprPtr& e, const StateSpace& space) {
    switch (e->kind) {
        case EExpr::Kind::Const:
            if (e->coeff < 0) throw ModelError("negative expectation constant " + rat_str(e->coeff));
            return const_expectation(space, e->coeff);
        case EExpr::Kind::Indicator: return indicator(e->pred, space);
        case EExpr::Kind::Scale:
            if (e->coeff < 0) throw ModelError("negative scale factor " + rat_str(e->coeff));
            return e_scale(e->coeff, eval_expectation(e->lhs, space));
        case EExpr::Kind::Add:
            return e_add(eval_expectation(e->lhs, space), eval_expectation(e->rhs, space));
        case EExpr::Kind::Monus:
            return e_monus(eval_expectation(e->lhs, space), eval_expectation(e->rhs, space));
        case EExpr::Kind::Max:
            return e_max(eval_expectation(e->lhs, space), eval_expectation(e->rhs, space));
        case EExpr::Kind::Min:
            return e_min(eval_expectation(e->lhs, space), eval_expectation(e->rhs, space));
    }
    return {};
}

Expectation e_add(const Expectation& a, const Expectation& b) {
    assert(a.size() == b.size());
    Expectation out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

Expectation e_scale(const Rat& alpha, const Expectation& a) {
    Expectation out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = alpha * a[i];
    return out;
}

Expectation e_min(const Expectation& a, const Expectation& b) {
    assert(a.size() == b.size());
    Expectation out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = std::min(a[i], b[i]);
    return out;
}

Expectation e_max(const Expectation& a, const Expectation& b) {
    assert(a.size() == b.size());
    Expectation out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = std::max(a[i], b[i]);
    return out;
}

Expectation e_monus(const Expectation& a, const Expectation& b) {
    assert(a.size() == b.size());
    Expectation out(a.size(), Rat(0));
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) out[i] = a[i] - b[i];
    return out;
}

bool e_leq(const Expectation& a, const Expectation& b) {
    assert(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

Rat e_sup(const Expectation& a) {
    Rat m(0);
    for (const Rat& x : a) m = std::max(m, x);
    return m;
}

}  // namespace pexa
