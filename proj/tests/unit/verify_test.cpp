#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mbp/verify.hpp"
#include "support.hpp"

using namespace mbp;

TEST_SUITE("verify") {

TEST_CASE("Cauchy derivative") {
    auto e = [](Complex z) { return std::exp(z); };
    CHECK(std::abs(cauchy_derivative(e, 0) - 1.0) < 1e-14);
    CHECK(std::abs(cauchy_derivative(e, 3) - 1.0) < 1e-13);
    auto p = [](Complex z) { return z * z * z * (2.0 - z); };
    CHECK(std::abs(cauchy_derivative(p, 3) - 12.0) < 1e-12);
    CHECK(std::abs(cauchy_derivative(p, 4) + 24.0) < 1e-11);
}

TEST_CASE("competitor specs cycle through every kind") {
    const CriticalSet c({{0.5, 1}});
    const auto specs = random_competitor_specs(c, 8, 3);
    REQUIRE(specs.size() == 8);
    for (int k = 0; k < 8; ++k) {
        CHECK(static_cast<int>(specs[static_cast<std::size_t>(k)].kind) == k % 4);
    }
    CHECK(std::string(to_string(CompetitorKind::antiderivative_family)).size() > 0);
}

TEST_CASE("scalar competitors") {
    const CriticalSet c({{0.5, 1}});
    const FiniteBlaschke b = solve_maximal(c).solution;
    CompetitorSpec same;
    same.kind = CompetitorKind::scalar_multiple;
    CompetitorSpec smaller = same;
    smaller.scalar = 0.9;
    const ExtremalityReport r = extremality_suite(c, b, {same, smaller});
    CHECK(r.pass());
    CHECK(r.evaluated == 2);
    CHECK(std::abs(r.worst_margin) < 1e-12);
    const Competitor f = make_competitor(c, b, smaller);
    CHECK(competitor_violation(c, f).empty());
    CHECK(std::abs(cauchy_derivative(f.f, 1) - 0.72) < 1e-12);
}

TEST_CASE("a larger critical set is a competitor") {
    const CriticalSet c({{0.5, 1}});
    const FiniteBlaschke b = solve_maximal(c).solution;
    CompetitorSpec s;
    s.kind = CompetitorKind::larger_critical_set;
    s.extra = {{-0.5, 1}};
    const Competitor f = make_competitor(c, b, s);
    CHECK(competitor_violation(c, f).empty());
    CHECK(std::abs(cauchy_derivative(f.f, 1).real() - mbp::testing::two_point_functional(0.5)) < 1e-10);
    CHECK(extremality_suite(c, b, {s}).worst_margin > 0.18);
}

TEST_CASE("inadmissible functions are reported") {
    const CriticalSet c({{0.5, 1}});
    const Competitor big{CompetitorKind::scalar_multiple, [](Complex z) { return 1.5 * z; },
                         [](Complex) { return Complex(1.5); }};
    CHECK_FALSE(competitor_violation(CriticalSet(), big).empty());
    const Competitor flat{CompetitorKind::scalar_multiple, [](Complex z) { return 0.5 * z; },
                          [](Complex) { return Complex(0.5); }};
    CHECK_FALSE(competitor_violation(c, flat).empty());
}

TEST_CASE("random competitors never beat the solve") {
    const CriticalSet c({{Complex(0.3, 0.2), 1}, {Complex(-0.1, -0.5), 2}});
    const FiniteBlaschke b = solve_maximal(c).solution;
    const ExtremalityReport r = extremality_suite(c, b, random_competitor_specs(c, 40, 11));
    CHECK(r.pass());
    CHECK(r.evaluated + r.skipped == 40);
}

TEST_CASE("boundary quotient") {
    const std::vector<double> radii{0.9, 0.99, 0.999};
    const BoundarySamples id = boundary_quotient(FiniteBlaschke::identity(), {Complex(0.6, 0.8), radii});
    for (const double q : id.quotients) {
        CHECK(q == doctest::Approx(1.0).epsilon(1e-12));
    }
    const BoundarySamples sq = boundary_quotient(FiniteBlaschke::monomial(2), {1.0, {0.9}});
    CHECK(sq.quotients[0] == doctest::Approx(1.8 / 1.81).epsilon(1e-14));
    CHECK(sq.quotients[0] == doctest::Approx(0.994475).epsilon(1e-6));
    const FiniteBlaschke one = solve_maximal(CriticalSet({{0.5, 1}})).solution;
    const BoundarySamples s = boundary_quotient(one, {Complex(0.0, 1.0), radii});
    CHECK(std::abs(s.quotients.back() - 1.0) < 1e-3);
}

TEST_CASE("boundary probes keep away from critical points") {
    const CriticalSet c({{0.95, 1}, {Complex(0.0, 0.92), 1}});
    const auto probes = boundary_probes(c, 8, {0.999});
    REQUIRE(probes.size() == 8);
    for (const auto& p : probes) {
        for (const auto& e : c.entries()) {
            CHECK(std::abs(0.999 * p.direction - e.point) >= 0.1);
        }
    }
}

TEST_CASE("phi on the circle") {
    const auto zeta = circle_samples(64);
    const PhiReport id = phi_boundary_bound(FiniteBlaschke::identity(), zeta);
    CHECK(id.min_re == doctest::Approx(1.0));
    CHECK(id.max_re == doctest::Approx(1.0));
    const PhiReport sq = phi_boundary_bound(FiniteBlaschke::monomial(2), zeta);
    CHECK(sq.min_re == doctest::Approx(0.5));
    CHECK(sq.max_re == doctest::Approx(0.5));
    const FiniteBlaschke one = solve_maximal(CriticalSet({{0.5, 1}})).solution;
    const PhiReport p = phi_boundary_bound(one, {std::polar(1.0, std::numbers::pi / 3.0)});
    CHECK(p.pass());
    CHECK(p.max_abs_im < 1e-12);
}

TEST_CASE("automorphism match") {
    const FiniteBlaschke b = solve_maximal(CriticalSet({{Complex(0.2, 0.5), 1}, {-0.4, 1}})).solution;
    const DiskAutomorphism t(std::polar(1.0, 0.7), Complex(-0.3, 0.1));
    const AutomorphismMatch m = match_up_to_automorphism(compose(t, b), b);
    CHECK(m.error < 1e-12);
    CHECK(std::abs(m.t.center() - t.center()) < 1e-12);
    CHECK(match_up_to_automorphism(b, FiniteBlaschke::monomial(3)).error > 1e-3);
}

TEST_CASE("semigroup examples") {
    const SemigroupReport sq = semigroup_check(FiniteBlaschke::monomial(2), FiniteBlaschke::monomial(2));
    REQUIRE(sq.composite_critical.entries().size() == 1);
    CHECK(sq.composite_critical.entries()[0].multiplicity == 3);
    CHECK(sq.pass());

    const FiniteBlaschke f = solve_maximal(CriticalSet({{0.5, 1}})).solution;
    const SemigroupReport s = semigroup_check(f, FiniteBlaschke::monomial(2));
    CHECK(critical_set_distance(CriticalSet({{0.0, 1}, {0.5, 1}, {0.8, 1}}), s.composite_critical) < 1e-12);
    CHECK(s.pass());

    CHECK(semigroup_check(FiniteBlaschke::identity(), f).pass());
}

TEST_CASE("left factor examples") {
    const FiniteBlaschke one = solve_maximal(CriticalSet({{0.5, 1}})).solution;
    CHECK(left_factor_check(FiniteBlaschke::monomial(2), FiniteBlaschke::identity()).pass());
    CHECK(left_factor_check(one, FiniteBlaschke::monomial(2)).pass());
    CHECK(left_factor_check(FiniteBlaschke::identity(), one).pass());
}

TEST_CASE("union suite zero set") {
    const UnionReport u = union_suite(CriticalSet({{0.5, 1}}), CriticalSet({{-0.5, 1}}), 0.5, PolarGrid(33, 128, 0.9));
    CHECK(u.zero_set_ok);
    CHECK(u.alpha > 0.0);
    CHECK(critical_set_distance(CriticalSet({{0.5, 1}, {-0.5, 1}}), u.expected_zeros) < 1e-12);
    const UnionReport m = union_suite(CriticalSet({{0.5, 1}}), CriticalSet({{0.5, 1}}), 0.5, PolarGrid(33, 128, 0.9));
    CHECK(m.zero_set_ok);
    REQUIRE(m.expected_zeros.entries().size() == 1);
    CHECK(m.expected_zeros.entries()[0].multiplicity == 2);
}

}
