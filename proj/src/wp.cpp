#include "pexa/wp.hpp"

#include <algorithm>

namespace pexa {

namespace {

struct WpCtx {
    const StateSpace& space;
    const WpOptions& opts;
    bool exact = true;
    size_t max_loop_iterations = 0;
};

Expectation wp_rec(const ProgramPtr& prog, const Expectation& post, WpCtx& ctx) {
    const StateSpace& sp = ctx.space;
    switch (prog->kind) {
        case Program::Kind::Skip: return post;
        case Program::Kind::Abort: return Expectation(sp.count(), Rat(0));
        case Program::Kind::Assign: {
            size_t var = sp.var_index(prog->var);
            Expectation out(sp.count());
            for (size_t s = 0; s < sp.count(); ++s) {
                long v = sp.normalize(var, eval_aexpr(prog->expr, sp, s));
                out[s] = post[sp.with_value(s, var, v)];
            }
            return out;
        }
        case Program::Kind::Seq: return wp_rec(prog->left, wp_rec(prog->right, post, ctx), ctx);
        case Program::Kind::ProbChoice: {
            // Skip sides with zero weight so 0-probability branches cannot
            // contribute (and cannot abort the computation).
            if (prog->prob == 1) return wp_rec(prog->left, post, ctx);
            if (prog->prob == 0) return wp_rec(prog->right, post, ctx);
            Expectation l = wp_rec(prog->left, post, ctx);
            Expectation r = wp_rec(prog->right, post, ctx);
            Rat q = Rat(1) - prog->prob;
            Expectation out(sp.count());
            for (size_t s = 0; s < sp.count(); ++s) out[s] = prog->prob * l[s] + q * r[s];
            return out;
        }
        case Program::Kind::DemonicChoice:
            return e_min(wp_rec(prog->left, post, ctx), wp_rec(prog->right, post, ctx));
        case Program::Kind::If: {
            Expectation t = wp_rec(prog->left, post, ctx);
            Expectation f = wp_rec(prog->right, post, ctx);
            Expectation out(sp.count());
            for (size_t s = 0; s < sp.count(); ++s)
                out[s] = eval_bexpr(prog->guard, sp, s) ? t[s] : f[s];
            return out;
        }
        case Program::Kind::Loop: {
            // Least fixed point of X -> [!G]*post + [G]*wp(body, X), from 0.
            std::vector<bool> g(sp.count());
            for (size_t s = 0; s < sp.count(); ++s) g[s] = eval_bexpr(prog->guard, sp, s);
            Expectation x(sp.count(), Rat(0));
            size_t iter = 0;
            for (; iter < ctx.opts.loop_fuel; ++iter) {
                Expectation body = wp_rec(prog->left, x, ctx);
                Expectation next(sp.count());
                for (size_t s = 0; s < sp.count(); ++s) next[s] = g[s] ? body[s] : post[s];
                if (next == x) break;
                x = std::move(next);
            }
            if (iter == ctx.opts.loop_fuel) ctx.exact = false;
            ctx.max_loop_iterations = std::max(ctx.max_loop_iterations, iter);
            return x;
        }
    }
    return {};
}

}  // namespace

WpResult wp(const ProgramPtr& prog, const Expectation& post, const StateSpace& space,
            const WpOptions& opts) {
    WpCtx ctx{space, opts};
    WpResult res;
    res.value = wp_rec(prog, post, ctx);
    res.exact = ctx.exact;
    res.max_loop_iterations = ctx.max_loop_iterations;
    return res;
}

WpResult wp_bounded_loop(const BExprPtr& guard, const ProgramPtr& body, const Expectation& post,
                         size_t k, const StateSpace& space, const WpOptions& opts) {
    WpCtx ctx{space, opts};
    std::vector<bool> g(space.count());
    for (size_t s = 0; s < space.count(); ++s) g[s] = eval_bexpr(guard, space, s);
    Expectation x(space.count());
    for (size_t s = 0; s < space.count(); ++s) x[s] = g[s] ? Rat(0) : post[s];
    for (size_t i = 0; i < k; ++i) {
        Expectation b = wp_rec(body, x, ctx);
        for (size_t s = 0; s < space.count(); ++s) x[s] = g[s] ? b[s] : post[s];
    }
    WpResult res;
    res.value = std::move(x);
    res.exact = ctx.exact;
    res.max_loop_iterations = ctx.max_loop_iterations;
    return res;
}

RefinementVerdict check_refinement_refute(
    const ProgramPtr& p, const ProgramPtr& q, const StateSpace& space,
    const std::vector<std::pair<std::string, EExprPtr>>& extra_witnesses, const WpOptions& opts) {
    auto try_witness = [&](const std::string& text, const Expectation& e)
        -> std::optional<RefutationWitness> {
        Expectation wp_p = wp(p, e, space, opts).value;
        Expectation wp_q = wp(q, e, space, opts).value;
        for (size_t s = 0; s < space.count(); ++s) {
            if (wp_p[s] > wp_q[s]) return RefutationWitness{text, s, wp_p[s], wp_q[s]};
        }
        return std::nullopt;
    };

    for (size_t s = 0; s < space.count(); ++s) {
        Expectation e(space.count(), Rat(0));
        e[s] = 1;
        if (auto w = try_witness("[" + space.valuation_str(s) + "]", e)) return {true, w};
    }
    for (const auto& [text, expr] : extra_witnesses) {
        if (auto w = try_witness(text, eval_expectation(expr, space))) return {true, w};
    }
    return {false, std::nullopt};
}

}  // namespace pexa
