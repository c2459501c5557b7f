#include <doctest.h>

#include "pexa/parser.hpp"
#include "property_suite.hpp"

using namespace pexa::test;

TEST_CASE("algebraic laws hold on random models") {
    PropertyStats stats = run_property_suite(80, 0xC0FFEE);
    for (const std::string& f : stats.failures) {
        CAPTURE(f);
        CHECK(false);
    }
    CHECK(stats.failures.empty());
    CHECK(stats.models == 80);
    CHECK(stats.ip_passing > 5); // the exactness laws are actually exercised
}

TEST_CASE("the suite is deterministic under a fixed seed") {
    PropertyStats a = run_property_suite(10, 42);
    PropertyStats b = run_property_suite(10, 42);
    CHECK(a.checks == b.checks);
    CHECK(a.ip_passing == b.ip_passing);
    CHECK(a.failures == b.failures);
}

TEST_CASE("printing random programs round-trips") {
    PropertyGen gen(0xA11CE);
    for (int i = 0; i < 200; ++i) {
        pexa::Model m;
        m.decls = gen.random_decls();
        m.program = gen.random_prog(m.decls, 1 + static_cast<int>(gen.pick(6)), true);
        std::string printed = pexa::print_model(m);
        CAPTURE(printed);
        pexa::Model again = pexa::parse_model(printed);
        CHECK(pexa::equal_model(m, again));
        CHECK(pexa::print_model(again) == printed);
    }
}
