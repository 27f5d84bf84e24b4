#include <doctest.h>

#include <cmath>

#include "mbp/maximal_solver.hpp"
#include "mbp/verify.hpp"
#include "support.hpp"

using namespace mbp;
namespace mt = mbp::testing;

TEST_SUITE("maximal_solver") {

TEST_CASE("empty set gives the identity") {
    const SolveReport r = solve_maximal(CriticalSet());
    CHECK(r.solution.degree() == 1);
    CHECK(r.functional_value == doctest::Approx(1.0));
    CHECK(std::abs(r.solution(Complex(0.3, 0.4)) - Complex(0.3, 0.4)) < 1e-15);
}

TEST_CASE("critical points at the origin only give a monomial") {
    const SolveReport r = solve_maximal(CriticalSet({{0.0, 3}}));
    CHECK(r.solution.degree() == 4);
    CHECK(r.solution.origin_order() == 4);
    CHECK(r.functional_value == doctest::Approx(24.0).epsilon(1e-12));
}

TEST_CASE("one point against the bisection oracle") {
    for (const double p : {0.1, 0.3, 0.5, 0.7}) {
        const double a = mt::one_point_zero(p);
        const SolveReport r = solve_maximal(CriticalSet({{p, 1}}));
        REQUIRE(r.solution.degree() == 2);
        double nonzero = 0.0;
        for (const Complex& z : r.solution.zeros()) {
            nonzero = std::max(nonzero, std::abs(z));
        }
        CHECK(std::abs(nonzero - a) < 1e-10);
        CHECK(std::abs(r.functional_value - a) < 1e-10);
        CHECK(std::abs(r.solution.eta() + 1.0) < 1e-12);
    }
}

TEST_CASE("rotated one point set") {
    const Complex p = std::polar(0.5, 1.2);
    const SolveReport r = solve_maximal(CriticalSet({{p, 1}}));
    CHECK(std::abs(r.functional_value - 0.8) < 1e-12);
    CHECK(r.roundtrip_error < 1e-12);
}

TEST_CASE("symmetric pair against the bisection oracle") {
    const double x = mt::two_point_functional(0.5);
    const SolveReport r = solve_maximal(CriticalSet({{0.5, 1}, {-0.5, 1}}));
    CHECK(std::abs(r.functional_value - x) < 1e-10);
    REQUIRE(r.solution.degree() == 3);
    for (const Complex& z : r.solution.zeros()) {
        if (z != Complex(0.0)) {
            CHECK(std::abs(std::abs(z) - std::sqrt(x)) < 1e-10);
        }
    }
}

TEST_CASE("double point") {
    const SolveReport r = solve_maximal(CriticalSet({{Complex(0.2, 0.4), 2}}));
    CHECK(r.roundtrip_error < 1e-8);
    REQUIRE(r.recovered.entries().size() == 1);
    CHECK(r.recovered.entries()[0].multiplicity == 2);
}

TEST_CASE("independent homotopy paths reach the same product") {
    const CriticalSet c({{Complex(0.4, 0.3), 1}, {Complex(-0.6, 0.1), 1}, {Complex(0.0, -0.7), 2}});
    const SolveReport a = solve_maximal(c);
    HomotopyConfig cfg;
    cfg.path_seed = 7;
    const SolveReport b = solve_maximal(c, cfg);
    CHECK(std::abs(a.functional_value - b.functional_value) < 1e-10);
    CHECK(match_up_to_automorphism(a.solution, b.solution).error < 1e-10);
}

TEST_CASE("rotating the critical set rotates the product") {
    const CriticalSet c({{Complex(0.4, 0.3), 1}, {Complex(-0.2, -0.6), 2}, {0.0, 1}});
    const Complex w = std::polar(1.0, 0.9);
    const FiniteBlaschke b = solve_maximal(c).solution;
    const FiniteBlaschke r = solve_maximal(c.mapped([w](Complex z) { return w * z; })).solution;
    double worst = 0.0;
    for (const Complex& z : disk_samples(200)) {
        worst = std::max(worst, std::abs(std::abs(r(z)) - std::abs(b(std::conj(w) * z))));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("round trip over a small corpus") {
    for (const CriticalSet& c : mt::corpus(10, 6, 2)) {
        const SolveReport r = solve_maximal(c);
        CHECK(r.roundtrip_error < 1e-8);
        CHECK(r.functional_value > 0.0);
        CHECK(std::abs(r.solution(0.0)) < 1e-14);
    }
}

TEST_CASE("postcomposition keeps the critical set") {
    const CriticalSet c({{0.5, 1}});
    const FiniteBlaschke neg = solve_maximal_normalized(c, DiskAutomorphism::rotation_by(-1.0));
    CHECK(extremal_functional(neg, 0) == doctest::Approx(-0.8).epsilon(1e-12));
    CHECK(critical_set_distance(c, critical_points(neg)) < 1e-12);
    const FiniteBlaschke b = solve_maximal(c).solution;
    const Complex w(0.1, 0.3);
    const DiskAutomorphism t(1.0, b(w));
    const FiniteBlaschke moved = solve_maximal_normalized(c, t);
    CHECK(std::abs(moved(w)) < 1e-14);
    CHECK(critical_set_distance(c, critical_points(moved)) < 1e-12);
}

TEST_CASE("truncation sequence") {
    const std::vector<CriticalPoint> seq{{0.5, 1}, {-0.5, 1}, {Complex(0.0, 0.5), 1}};
    const TruncationReport t = truncation_sequence(seq, 3);
    REQUIRE(t.solves.size() == 3);
    CHECK(t.solves[0].functional_value == doctest::Approx(0.8));
    CHECK(std::abs(t.solves[1].functional_value - mt::two_point_functional(0.5)) < 1e-10);
    CHECK(t.functional_nonincreasing);
    CHECK(t.sup_differences.size() == 2);

    const std::vector<CriticalPoint> same{{0.5, 1}};
    const TruncationReport r = truncation_sequence(same, 1);
    CHECK(r.solves[0].functional_value == doctest::Approx(0.8));
}

TEST_CASE("transplant to a scaled disk") {
    const Transplant t = transplant({{1.0, 1}}, RiemannMap::scaled_disk(2.0));
    CHECK(std::abs(t.derivative(0.0) - 0.4) < 1e-10);
    const auto cps = t.critical_points();
    REQUIRE(cps.size() == 1);
    CHECK(std::abs(cps[0].point - 1.0) < 1e-8);
    const Transplant id = transplant({{0.5, 1}}, RiemannMap::identity());
    CHECK(std::abs(id.derivative(0.0) - 0.8) < 1e-10);
}

TEST_CASE("bad input") {
    HomotopyConfig cfg;
    cfg.steps = 0;
    CHECK_THROWS_AS(solve_maximal(CriticalSet({{0.5, 1}}), cfg), DomainError);
    CHECK_THROWS_AS(transplant({{3.0, 1}}, RiemannMap::scaled_disk(2.0)), DomainError);
}

}
