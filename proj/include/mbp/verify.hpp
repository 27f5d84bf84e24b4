#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mbp/maximal_solver.hpp"
#include "mbp/metric_field.hpp"

namespace mbp {

/// f^{(k)}(0) by the trapezoidal rule on |z| = radius.
Complex cauchy_derivative(const std::function<Complex(Complex)>& f, int k, double radius = 0.5,
                          int nodes = 4096);

enum class CompetitorKind { postcompose_automorphism, scalar_multiple, larger_critical_set, antiderivative_family };

const char* to_string(CompetitorKind kind);

struct CompetitorSpec {
    CompetitorKind kind = CompetitorKind::scalar_multiple;
    /// postcompose_automorphism and larger_critical_set (applied after the solve).
    DiskAutomorphism automorphism = DiskAutomorphism::identity();
    /// scalar_multiple, |scalar| <= 1.
    Complex scalar{1.0};
    /// larger_critical_set.
    std::vector<CriticalPoint> extra;
    /// antiderivative_family: complex Gaussian coefficients of p.
    std::uint64_t seed = 0;
    int poly_degree = 2;
};

/// count specs cycling through the four kinds, drawn from a seeded generator.
std::vector<CompetitorSpec> random_competitor_specs(const CriticalSet& c, int count, std::uint64_t seed);

struct Competitor {
    CompetitorKind kind;
    std::function<Complex(Complex)> f;
    std::function<Complex(Complex)> df;
};

/// Builds the competitor. Antiderivative competitors are scaled to sampled
/// sup norm 1 - 1e-6 on 8192 boundary points.
Competitor make_competitor(const CriticalSet& c, const FiniteBlaschke& b, const CompetitorSpec& spec,
                           const HomotopyConfig& cfg = {});

/// Empty string when f is admissible: sampled boundary sup <= 1 and the
/// derivatives f^{(1..m)} vanish at each point of multiplicity m to 1e-10.
std::string competitor_violation(const CriticalSet& c, const Competitor& f);

struct ExtremalityReport {
    double functional = 0.0;
    /// min over competitors of B^{(N+1)}(0) - Re f^{(N+1)}(0).
    double worst_margin = 0.0;
    int evaluated = 0;
    int skipped = 0;
    int violations = 0;
    std::vector<std::string> skip_reasons;
    bool pass() const { return violations == 0 && evaluated > 0; }
};

ExtremalityReport extremality_suite(const CriticalSet& c, const FiniteBlaschke& b,
                                    const std::vector<CompetitorSpec>& specs,
                                    const HomotopyConfig& cfg = {});

struct BoundaryProbe {
    Complex direction;
    std::vector<double> radii;
};

/// Directions evenly spread on the circle whose sample points r * direction
/// all stay at least min_distance from every critical point; each is rotated
/// within its slot until it fits. Throws DomainError if none does.
std::vector<BoundaryProbe> boundary_probes(const CriticalSet& c, int count, std::vector<double> radii,
                                           double min_distance = 0.1);

struct BoundarySamples {
    Complex direction;
    std::vector<double> radii;
    std::vector<double> quotients;
    /// max |q - 1| / (1 - r).
    double fitted_k = 0.0;
    /// Observed, never asserted.
    bool monotone = true;
};

/// (1 - |z|^2) |B'(z)| / (1 - |B(z)|^2) along z = r * direction.
BoundarySamples boundary_quotient(const FiniteBlaschke& b, const BoundaryProbe& probe);

struct PhiReport {
    std::vector<Complex> values;
    double min_re = 0.0;
    double max_re = 0.0;
    double max_abs_im = 0.0;
    bool pass() const { return min_re > 0.0 && max_re <= 1.0 + 1e-10 && max_abs_im <= 1e-10; }
};

/// B(zeta) / (zeta B'(zeta)) at the given points of the unit circle.
/// Throws NumericalError where B' vanishes.
PhiReport phi_boundary_bound(const FiniteBlaschke& b, const std::vector<Complex>& zeta);

/// n equally spaced points of the unit circle.
std::vector<Complex> circle_samples(int n);

/// n deterministic points filling |z| <= 0.95.
std::vector<Complex> disk_samples(int n);

struct AutomorphismMatch {
    DiskAutomorphism t;
    /// max |a(z) - t(b(z))| over disk_samples(1000).
    double error = 0.0;
};

/// Fits T with T(b(0)) = a(0), T(b(1/4)) ~ a(1/4) and measures a - T o b.
AutomorphismMatch match_up_to_automorphism(const FiniteBlaschke& a, const FiniteBlaschke& b);

struct SemigroupReport {
    FiniteBlaschke composite = FiniteBlaschke::identity();
    CriticalSet composite_critical;
    SolveReport resolve;
    AutomorphismMatch match;
    /// Pullback ratios in both directions on a coarse polar grid. Mutual
    /// dominance means equality at grid scale, i.e. within kGridEquality.
    double dominance_forward = 0.0;
    double dominance_backward = 0.0;
    static constexpr double kGridEquality = 1e-6;
    bool pass(double tol = 1e-8) const {
        return match.error <= tol && dominance_forward <= 1.0 + kGridEquality &&
               dominance_backward <= 1.0 + kGridEquality;
    }
};

/// A = B o F, re-solved from its own critical set.
SemigroupReport semigroup_check(const FiniteBlaschke& f, const FiniteBlaschke& b,
                                const HomotopyConfig& cfg = {});

struct LeftFactorReport {
    SemigroupReport composite;
    SolveReport resolve;
    AutomorphismMatch match;
    bool pass(double tol = 1e-8) const { return composite.pass(tol) && match.error <= tol; }
};

/// For A = B o C: checks A is maximal, then that B matches the maximal
/// product of its own critical set.
LeftFactorReport left_factor_check(const FiniteBlaschke& b, const FiniteBlaschke& c,
                                   const HomotopyConfig& cfg = {});

struct UnionReport {
    CriticalSet expected_zeros;
    double alpha = 0.0;
    double h = 0.0;
    bool zero_set_ok = false;
    /// Largest stencil curvature of mu at defined nodes.
    double max_stencil_curvature = 0.0;
    /// Largest |stencil - closed form| where both factors exceed 0.05.
    double closed_form_gap = 0.0;
    SolveReport direct;
    bool pass() const {
        return zero_set_ok && max_stencil_curvature <= -4.0 + 10.0 * h * h &&
               closed_form_gap <= 10.0 * h * h;
    }
};

UnionReport union_suite(const CriticalSet& c1, const CriticalSet& c2, double c,
                        const PolarGrid& grid = PolarGrid::default_grid(),
                        const HomotopyConfig& cfg = {});

}  // namespace mbp
