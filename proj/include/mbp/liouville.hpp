#pragma once

#include <functional>
#include <vector>

#include "mbp/blaschke.hpp"

namespace mbp {

/// Dirichlet problem  Laplacian(u) = -kappa(z) exp(2u)  on |z| < r, u = log b on |z| = r.
///
/// The disk is discretised on an n x n Cartesian grid over [-r, r]^2 masked to
/// the open disk. With a divisor S(z) = prod (z - z_j)^{m_j} the unknown is
/// log(lambda / |S|), and the density is recovered as |S| exp(u).
struct PdeProblem {
    double radius = 0.5;
    int n = 257;
    std::function<double(Complex)> curvature;
    std::function<double(Complex)> boundary;
    CriticalSet divisor;

    /// kappa == k (k <= 0).
    static PdeProblem constant_curvature(double radius, int n, double k,
                                         std::function<double(Complex)> boundary);

    double h() const { return 2.0 * radius / (n - 1); }
    Complex node(int i, int j) const;
    /// |S(z)|; 1 without divisor.
    double divisor_modulus(Complex z) const;

    /// Throws DomainError on r outside (0, 1), n < 5, missing callbacks, or
    /// divisor points not strictly inside the disk.
    void validate() const;
};

enum class InitialGuess { min_boundary, max_boundary };

struct PdeOptions {
    InitialGuess initial = InitialGuess::min_boundary;
    int max_iters = 100;
    /// Residual of each equation divided by its Jacobian diagonal, max norm.
    /// One further full Newton step is taken after it is met.
    double tol = 1e-10;
};

struct PdeSolution {
    PdeProblem problem;
    /// Row-major n x n; NaN outside the disk.
    std::vector<double> u;
    /// 1 where u was solved for, 0 for nodes fixed by boundary data or outside.
    std::vector<char> unknown;
    double residual_norm = 0.0;
    int newton_iters = 0;

    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * problem.n + i; }
    /// |S(z)| exp(u) at the node.
    double density(int i, int j) const;
};

/// Damped Newton with Armijo backtracking and a sparse LU per step.
/// Throws NumericalError when max_iters is reached; the message carries the residual.
PdeSolution solve_dirichlet(const PdeProblem& p, const PdeOptions& opt = {});

/// kappa = -4 |S|^2, boundary b / |S|.
PdeProblem divisor_reduced_problem(const CriticalSet& c, double radius, int n,
                                   std::function<double(Complex)> boundary);

struct OracleResult {
    PdeSolution solution;
    /// Max over solved nodes of |exp(u) - lambda / |S|| / (lambda / |S|), nodes
    /// on the divisor itself excluded.
    double deviation = 0.0;
};

/// Solves the divisor-reduced problem with the boundary trace of the pullback
/// of B on |z| = r and compares with the pullback itself.
OracleResult oracle_solve(const FiniteBlaschke& b, double radius, int n = 257);

/// oracle_solve(b, radius, n).deviation
double oracle_validate(const FiniteBlaschke& b, double radius, int n = 257);

}  // namespace mbp
