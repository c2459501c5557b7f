#include <doctest.h>

#include <random>

#include "helpers.hpp"

using namespace pexa;
using namespace pexa::test;

TEST_CASE("state enumeration is lexicographic and total") {
    StateSpace one({VarDecl{"x", 0, 3, false, {}}});
    CHECK(one.count() == 4);

    StateSpace two({VarDecl{"x", 0, 3, false, {}}, VarDecl{"y", 0, 1, false, {}}});
    CHECK(two.count() == 8);
    CHECK(two.index_of({1, 0}) == 2);
    CHECK(two.valuation(2) == std::vector<long>{1, 0});
    for (size_t s = 0; s < two.count(); ++s) CHECK(two.index_of(two.valuation(s)) == s);

    StateSpace empty({});
    CHECK(empty.count() == 1);

    CHECK_THROWS_AS(StateSpace({VarDecl{"x", 0, 9999999, false, {}},
                                VarDecl{"y", 0, 9999999, false, {}}}),
                    ModelError);
}

TEST_CASE("expectation evaluation") {
    StateSpace space({VarDecl{"x", 0, 3, true, {}}});
    CHECK(expect_of("[x = 1]", space) == Expectation{rat(0), rat(1), rat(0), rat(0)});
    CHECK(expect_of("1/2 * [x = 0 | x = 2]", space) ==
          Expectation{rat(1, 2), rat(0), rat(1, 2), rat(0)});
    // absorption: [x=0] max [x=0 | x=2] = [x=0 | x=2]
    CHECK(expect_of("max([x = 0], [x = 0 | x = 2])", space) ==
          expect_of("[x = 0 | x = 2]", space));
}

TEST_CASE("wp of the halving/increment example") {
    Model m = load_model("inc.pgcl");
    StateSpace space(m.decls);

    // Integer division truncates: from x=3 the halving branch lands on 1, so
    // the pre-expectation of [x=1] is 1/2 at x=3 as well.
    Expectation w = wp(m.program, expect_of("[x = 1]", space), space).value;
    CHECK(w == Expectation{rat(1, 2), rat(0), rat(1, 2), rat(1, 2)});

    w = wp(m.program, expect_of("[x = 0 | x = 2]", space), space).value;
    CHECK(w == Expectation{rat(1, 2), rat(1), rat(0), rat(1, 2)});
    CHECK(w == expect_of("1/2 * [x = 0 | x = 3] + [x = 1]", space));
}

TEST_CASE("wp of skip and abort") {
    Model m = load_model("inc.pgcl");
    StateSpace space(m.decls);
    Expectation e = expect_of("1/3 * [x < 2] + 1/4", space);
    CHECK(wp(prog_skip(), e, space).value == e);
    CHECK(wp(prog_abort(), e, space).value == Expectation(space.count(), rat(0)));
}

TEST_CASE("wp composes sequentially") {
    Model m = load_model("incinc.pgcl");
    StateSpace space(m.decls);
    Expectation w = wp(m.program, expect_of("[x = 0 | x = 2]", space), space).value;
    CHECK(w == Expectation{rat(3, 4), rat(1, 4), rat(3, 4), rat(3, 4)});
}

namespace {

// Independent oracle for the countdown loop: from x, exactly x iterations
// run, so the bounded query is 1 iff k >= x.
Expectation countdown_oracle(const StateSpace& space, size_t k) {
    Expectation out(space.count());
    for (size_t s = 0; s < space.count(); ++s)
        out[s] = static_cast<size_t>(space.value(s, 0)) <= k ? 1 : 0;
    return out;
}

// Independent oracle for the geometric loop: from c=1 the loop leaves with
// probability 1/2 per iteration, so P(<= k iterations) = 1 - (1/2)^k.
Rat geometric_oracle(size_t k) {
    Rat p(1);
    for (size_t i = 0; i < k; ++i) p /= 2;
    return Rat(1) - p;
}

}  // namespace

TEST_CASE("step-bounded loop values") {
    Model countdown = load_model("countdown.pgcl");
    StateSpace cd_space(countdown.decls);
    const ProgramPtr& cd_loop = countdown.program;
    Expectation ones(cd_space.count(), Rat(1));

    for (size_t k = 0; k <= 4; ++k) {
        Expectation got = wp_bounded_loop(cd_loop->guard, cd_loop->left, ones, k, cd_space).value;
        CHECK(got == countdown_oracle(cd_space, k));
    }
    // k=3 reaches the fixpoint: 1 in every state; k=1 from x=3 is 0.
    CHECK(wp_bounded_loop(cd_loop->guard, cd_loop->left, ones, 3, cd_space).value ==
          Expectation(4, Rat(1)));
    CHECK(wp_bounded_loop(cd_loop->guard, cd_loop->left, ones, 1, cd_space).value[3] == 0);

    Model geo = load_model("geometric.pgcl");
    StateSpace geo_space(geo.decls);
    const ProgramPtr& geo_loop = geo.program;
    Expectation gones(geo_space.count(), Rat(1));
    for (size_t k = 0; k <= 6; ++k) {
        Expectation got = wp_bounded_loop(geo_loop->guard, geo_loop->left, gones, k, geo_space).value;
        CHECK(got[geo_space.index_of({1})] == geometric_oracle(k));
        CHECK(got[geo_space.index_of({0})] == 1);
    }
    CHECK(wp_bounded_loop(geo_loop->guard, geo_loop->left, gones, 2, geo_space)
              .value[geo_space.index_of({1})] == rat(3, 4));
}

TEST_CASE("bounded iterates form a non-decreasing chain") {
    Model m = load_model("demonic_walk.pgcl");
    StateSpace space(m.decls);
    Expectation ones(space.count(), Rat(1));
    Expectation prev = wp_bounded_loop(m.program->guard, m.program->left, ones, 0, space).value;
    for (size_t k = 1; k <= 8; ++k) {
        Expectation cur = wp_bounded_loop(m.program->guard, m.program->left, ones, k, space).value;
        CHECK(e_leq(prev, cur));
        prev = cur;
    }
}

TEST_CASE("loop fixpoints: exactness and fuel exhaustion") {
    Model m = load_model("countdown.pgcl");
    StateSpace space(m.decls);
    WpResult r = wp(m.program, Expectation(space.count(), Rat(1)), space);
    CHECK(r.exact);
    CHECK(r.value == Expectation(4, Rat(1)));

    // for a terminating deterministic loop, a step bound of |S| acts as an
    // infinity surrogate
    Expectation post = expect_of("1/2 * [x = 0] + 1/4", space);
    CHECK(wp_bounded_loop(m.program->guard, m.program->left, post, space.count(), space).value ==
          wp(m.program, post, space).value);

    Model geo = load_model("geometric.pgcl");
    StateSpace gs(geo.decls);
    WpOptions opts;
    opts.loop_fuel = 10;
    WpResult g = wp(geo.program, expect_of("[c = 0]", gs), gs, opts);
    CHECK_FALSE(g.exact); // the exact fixpoint is approached, never repeated
    size_t c1 = gs.index_of({1});
    CHECK(g.value[c1] < 1);             // sound lower bound
    CHECK(g.value[c1] >= rat(511, 1024)); // after 10 iterates from bottom
}

TEST_CASE("wp with state-dependent branches") {
    Model m = parse_model("var x: 0..3 wrap; if x < 2 then x := x + 1 else skip fi");
    StateSpace space(m.decls);
    Expectation w = wp(m.program, expect_of("[x >= 2]", space), space).value;
    CHECK(w == Expectation{rat(0), rat(1), rat(1), rat(1)});
}

TEST_CASE("refinement refutation") {
    StateSpace space({VarDecl{"x", 0, 1, false, {}}});
    ProgramPtr assign0 = prog_assign("x", aconst(0));
    ProgramPtr assign1 = prog_assign("x", aconst(1));
    ProgramPtr demonic = prog_demonic(assign0, assign1);

    // reflexivity
    CHECK_FALSE(check_refinement_refute(assign0, assign0, space).refuted);
    // demonic choice is refined by either branch
    CHECK_FALSE(check_refinement_refute(demonic, assign0, space).refuted);
    CHECK_FALSE(check_refinement_refute(demonic, assign1, space).refuted);
    // distinct assignments refute each other via [x=0]
    RefinementVerdict v = check_refinement_refute(assign0, assign1, space);
    REQUIRE(v.refuted);
    CHECK(v.witness->wp_left > v.witness->wp_right);
    // and the reverse direction is also refuted
    CHECK(check_refinement_refute(assign1, assign0, space).refuted);
}

TEST_CASE("basic wp laws on random straight-line programs") {
    std::mt19937_64 rng(7);
    Model m = load_model("inc.pgcl");
    StateSpace space(m.decls);
    auto random_e = [&]() {
        Expectation e(space.count());
        for (auto& v : e) v = rat(static_cast<long>(rng() % 9), static_cast<long>(rng() % 4 + 1));
        return e;
    };
    // demonic choice: minimum commutes with non-negative scaling too
    Model dem = parse_model(
        "var x: 0..3 wrap; (x := x - 1 [] (x := x - 1 [1/2] x := x + 1))");
    for (int i = 0; i < 50; ++i) {
        Expectation e = random_e();
        Expectation bump(space.count());
        for (size_t s = 0; s < space.count(); ++s)
            bump[s] = e[s] + rat(static_cast<long>(rng() % 3), 2);
        // monotone
        CHECK(e_leq(wp(m.program, e, space).value, wp(m.program, bump, space).value));
        // scaling
        Rat alpha = rat(static_cast<long>(rng() % 5), 2);
        CHECK(wp(m.program, e_scale(alpha, e), space).value ==
              e_scale(alpha, wp(m.program, e, space).value));
        CHECK(wp(dem.program, e_scale(alpha, e), space).value ==
              e_scale(alpha, wp(dem.program, e, space).value));
        // feasibility
        CHECK(e_sup(wp(m.program, e, space).value) <= e_sup(e));
        CHECK(e_sup(wp(dem.program, e, space).value) <= e_sup(e));
    }
}
