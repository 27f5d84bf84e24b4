#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mbp/blaschke.hpp"
#include "mbp/disk.hpp"

namespace mbp {

struct HomotopyConfig {
    int steps = 32;
    double newton_tol = 1e-12;
    int max_newton_iters = 50;
    int step_halving_limit = 8;
    double roundtrip_tol = 1e-8;
    double merge_tol = kCriticalMergeTol;
    /// 0 follows the straight path t*C. Any other value twists every nonzero
    /// critical point by a seeded angle that unwinds to zero at t = 1, which
    /// gives an independent path to the same endpoint.
    std::uint64_t path_seed = 0;

    void validate() const;
};

struct HomotopyStep {
    double t;
    double residual;
    int newton_iters;
};

struct SolveReport {
    FiniteBlaschke solution = FiniteBlaschke::identity();
    CriticalSet requested;
    CriticalSet recovered;
    double residual_norm = 0.0;
    double roundtrip_error = 0.0;
    std::vector<HomotopyStep> homotopy_trace;
    /// B^{(N+1)}(0), real and positive.
    double functional_value = 1.0;
};

/// Normalized maximal Blaschke product for a finite critical set: B(0) = 0,
/// B^{(N+1)}(0) > 0, critical set exactly C.
///
/// Newton corrector on the coefficients of the polynomial whose roots are the
/// m - N zeros off the origin, continued along t -> t*C from z^{m+1}.
SolveReport solve_maximal(const CriticalSet& c, const HomotopyConfig& cfg = {});

/// T o B_C.
FiniteBlaschke solve_maximal_normalized(const CriticalSet& c, const DiskAutomorphism& t,
                                        const HomotopyConfig& cfg = {});

struct TruncationReport {
    std::vector<SolveReport> solves;
    /// sup over |z| <= 1/2 of |B_n - B_{n+1}|, one entry per consecutive pair.
    std::vector<double> sup_differences;
    bool functional_nonincreasing = true;
};

/// Solves for the prefixes C_1, ..., C_{n_max} of an ordered point list
/// (a prefix of length n holds the first n points).
TruncationReport truncation_sequence(const std::vector<CriticalPoint>& ordered, int n_max,
                                     const HomotopyConfig& cfg = {});

/// B_{Psi(C)} o Psi for a closed-form Riemann map Psi of Omega.
struct Transplant {
    SolveReport disk_solve;
    RiemannMap map;

    Complex operator()(Complex z) const;
    Complex derivative(Complex z) const;
    /// Critical points of the composite in Omega (Omega need not lie in the disk).
    std::vector<CriticalPoint> critical_points() const;
};

Transplant transplant(const std::vector<CriticalPoint>& domain_points, const RiemannMap& map,
                      const HomotopyConfig& cfg = {});

}  // namespace mbp
