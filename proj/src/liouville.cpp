#include "mbp/liouville.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mbp/disk.hpp"

namespace mbp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Nodes closer than this fraction of h to the circle are fixed from the
// boundary data instead of getting a degenerate Shortley-Weller arm.
constexpr double kSnapFraction = 1e-6;

struct Row {
    int node = 0;
    double diag = 0.0;
    double rhs = 0.0;
    std::vector<std::pair<int, double>> off;
};

class Discretisation {
public:
    explicit Discretisation(const PdeProblem& p) : p_(p), n_(p.n), h_(p.h()) {
        const std::size_t total = static_cast<std::size_t>(n_) * n_;
        slot_.assign(total, -1);
        fixed_.assign(total, kNaN);
        const double r = p.radius;
        for (int j = 0; j < n_; ++j) {
            for (int i = 0; i < n_; ++i) {
                const Complex z = p.node(i, j);
                const double gap = r - std::abs(z);
                if (gap > kSnapFraction * h_) {
                    slot_[at(i, j)] = static_cast<int>(nodes_.size());
                    nodes_.push_back(static_cast<int>(at(i, j)));
                } else if (gap > -kSnapFraction * h_) {
                    fixed_[at(i, j)] = boundary_log(z);
                }
            }
        }
        build_rows();
    }

    std::size_t at(int i, int j) const { return static_cast<std::size_t>(j) * n_ + i; }
    int size() const { return static_cast<int>(nodes_.size()); }
    const std::vector<int>& nodes() const { return nodes_; }
    const std::vector<Row>& rows() const { return rows_; }
    const std::vector<double>& kappa() const { return kappa_; }
    const std::vector<double>& fixed() const { return fixed_; }

    double boundary_log(Complex xi) const {
        const Complex on_circle = std::abs(xi) > 0.0 ? xi * (p_.radius / std::abs(xi)) : Complex(p_.radius);
        const double b = p_.boundary(on_circle);
        if (!(b > 0.0) || !std::isfinite(b)) {
            throw DomainError("solve_dirichlet: boundary data must be positive and finite");
        }
        return std::log(b);
    }

private:
    // One axis of the Shortley-Weller stencil. Returns the arm length and
    // either the neighbour's unknown index or the boundary value.
    struct Arm {
        double len;
        int slot;
        double value;
    };

    Arm arm(int i, int j, int di, int dj) const {
        const int ni = i + di;
        const int nj = j + dj;
        if (ni >= 0 && ni < n_ && nj >= 0 && nj < n_) {
            const std::size_t k = at(ni, nj);
            if (slot_[k] >= 0) {
                return {h_, slot_[k], 0.0};
            }
            if (!std::isnan(fixed_[k])) {
                return {h_, -1, fixed_[k]};
            }
        }
        // The segment towards the neighbour leaves the disk: cut it at the circle.
        const Complex z = p_.node(i, j);
        const double r = p_.radius;
        double len;
        Complex hit;
        if (di != 0) {
            const double x = std::sqrt(std::max(0.0, r * r - z.imag() * z.imag()));
            const double xb = di > 0 ? x : -x;
            len = std::abs(xb - z.real());
            hit = Complex(xb, z.imag());
        } else {
            const double y = std::sqrt(std::max(0.0, r * r - z.real() * z.real()));
            const double yb = dj > 0 ? y : -y;
            len = std::abs(yb - z.imag());
            hit = Complex(z.real(), yb);
        }
        len = std::clamp(len, kSnapFraction * h_, h_);
        return {len, -1, boundary_log(hit)};
    }

    void build_rows() {
        rows_.resize(nodes_.size());
        kappa_.resize(nodes_.size());
        for (std::size_t s = 0; s < nodes_.size(); ++s) {
            const int i = nodes_[s] % n_;
            const int j = nodes_[s] / n_;
            Row& row = rows_[s];
            row.node = nodes_[s];
            const Complex z = p_.node(i, j);
            const double k = p_.curvature(z);
            if (!(k <= 0.0) || !std::isfinite(k)) {
                throw DomainError("solve_dirichlet: curvature must be finite and nonpositive");
            }
            kappa_[s] = k;
            for (int axis = 0; axis < 2; ++axis) {
                const Arm lo = axis == 0 ? arm(i, j, -1, 0) : arm(i, j, 0, -1);
                const Arm hi = axis == 0 ? arm(i, j, 1, 0) : arm(i, j, 0, 1);
                const double sum = lo.len + hi.len;
                const double cl = 2.0 / (lo.len * sum);
                const double ch = 2.0 / (hi.len * sum);
                row.diag -= cl + ch;
                for (const auto& [a, c] : {std::pair{lo, cl}, std::pair{hi, ch}}) {
                    if (a.slot >= 0) {
                        row.off.emplace_back(a.slot, c);
                    } else {
                        row.rhs += c * a.value;
                    }
                }
            }
        }
    }

    const PdeProblem& p_;
    int n_;
    double h_;
    std::vector<int> slot_;
    std::vector<double> fixed_;
    std::vector<int> nodes_;
    std::vector<Row> rows_;
    std::vector<double> kappa_;
};

// Residual of each equation scaled by the Jacobian diagonal at u.
void residual(const Discretisation& d, const Eigen::VectorXd& u, Eigen::VectorXd& f,
              Eigen::VectorXd& scale) {
    const auto& rows = d.rows();
    const auto& kappa = d.kappa();
    for (int s = 0; s < d.size(); ++s) {
        const Row& row = rows[static_cast<std::size_t>(s)];
        double v = row.diag * u[s] + row.rhs;
        for (const auto& [t, c] : row.off) {
            v += c * u[t];
        }
        const double e = std::exp(2.0 * u[s]);
        v += kappa[static_cast<std::size_t>(s)] * e;
        f[s] = v;
        scale[s] = std::abs(row.diag) + 2.0 * std::abs(kappa[static_cast<std::size_t>(s)]) * e;
    }
}

}  // namespace

PdeProblem PdeProblem::constant_curvature(double radius, int n, double k,
                                          std::function<double(Complex)> boundary) {
    PdeProblem p;
    p.radius = radius;
    p.n = n;
    p.curvature = [k](Complex) { return k; };
    p.boundary = std::move(boundary);
    return p;
}

Complex PdeProblem::node(int i, int j) const {
    const double hh = h();
    return {-radius + i * hh, -radius + j * hh};
}

double PdeProblem::divisor_modulus(Complex z) const {
    double s = 1.0;
    for (const auto& e : divisor.entries()) {
        s *= std::pow(std::abs(z - e.point), e.multiplicity);
    }
    return s;
}

void PdeProblem::validate() const {
    if (!(radius > 0.0) || !(radius < 1.0)) {
        throw DomainError("PdeProblem: radius must lie in (0, 1)");
    }
    if (n < 5) {
        throw DomainError("PdeProblem: grid needs at least 5 nodes per side");
    }
    if (!curvature || !boundary) {
        throw DomainError("PdeProblem: curvature and boundary data are required");
    }
    for (const auto& e : divisor.entries()) {
        if (!(std::abs(e.point) < radius * (1.0 - kCircleTol))) {
            throw DomainError("PdeProblem: divisor point on or outside the sub-disk boundary");
        }
    }
}

double PdeSolution::density(int i, int j) const {
    return problem.divisor_modulus(problem.node(i, j)) * std::exp(u[index(i, j)]);
}

PdeSolution solve_dirichlet(const PdeProblem& p, const PdeOptions& opt) {
    p.validate();
    const Discretisation d(p);
    const int m = d.size();

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int k = 0; k < 64; ++k) {
        const double a = 2.0 * 3.14159265358979323846 * k / 64;
        const double v = d.boundary_log(std::polar(p.radius, a));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    for (double v : d.fixed()) {
        if (!std::isnan(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    Eigen::VectorXd u = Eigen::VectorXd::Constant(m, opt.initial == InitialGuess::min_boundary ? lo : hi);

    std::vector<Eigen::Triplet<double>> trip;
    for (int s = 0; s < m; ++s) {
        const Row& row = d.rows()[static_cast<std::size_t>(s)];
        trip.emplace_back(s, s, row.diag);
        for (const auto& [t, c] : row.off) {
            trip.emplace_back(s, t, c);
        }
    }
    Eigen::SparseMatrix<double> lap(m, m);
    lap.setFromTriplets(trip.begin(), trip.end());
    lap.makeCompressed();

    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(lap);

    Eigen::VectorXd f(m), scale(m), trial_f(m), trial_scale(m);
    residual(d, u, f, scale);
    auto norm_inf = [m](const Eigen::VectorXd& r, const Eigen::VectorXd& s) {
        double w = 0.0;
        for (int k = 0; k < m; ++k) {
            w = std::max(w, std::abs(r[k]) / s[k]);
        }
        return w;
    };
    auto norm_2 = [m](const Eigen::VectorXd& r, const Eigen::VectorXd& s) {
        double w = 0.0;
        for (int k = 0; k < m; ++k) {
            const double q = r[k] / s[k];
            w += q * q;
        }
        return std::sqrt(w);
    };

    int iters = 0;
    double res = norm_inf(f, scale);
    bool polished = false;
    while (!polished) {
        // Once within tolerance, one more full step settles u to rounding
        // level, so the answer does not remember the initial guess.
        const bool converged = res <= opt.tol;
        if (!converged && iters == opt.max_iters) {
            std::ostringstream msg;
            msg << "solve_dirichlet: no convergence after " << iters
                << " damped Newton iterations, residual " << res;
            throw NumericalError(msg.str());
        }
        ++iters;
        Eigen::SparseMatrix<double> jac = lap;
        for (int s = 0; s < m; ++s) {
            jac.coeffRef(s, s) += 2.0 * d.kappa()[static_cast<std::size_t>(s)] * std::exp(2.0 * u[s]);
        }
        lu.factorize(jac);
        if (lu.info() != Eigen::Success) {
            throw NumericalError("solve_dirichlet: sparse factorisation failed");
        }
        const Eigen::VectorXd step = lu.solve(-f);

        const double merit = norm_2(f, scale);
        double t = 1.0;
        Eigen::VectorXd trial;
        bool accepted = false;
        for (int halving = 0; halving < (converged ? 1 : 40); ++halving) {
            trial = u + t * step;
            residual(d, trial, trial_f, trial_scale);
            const double m_new = norm_2(trial_f, trial_scale);
            if (std::isfinite(m_new) && m_new <= (1.0 - 1e-4 * t) * merit) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        polished = converged;
        if (!accepted) {
            if (converged) {
                break;
            }
            // Rounding floor: the full step no longer reduces the residual.
            if (res < 1e3 * opt.tol) {
                break;
            }
            std::ostringstream msg;
            msg << "solve_dirichlet: line search failed, residual " << res;
            throw NumericalError(msg.str());
        }
        u = trial;
        f = trial_f;
        scale = trial_scale;
        res = norm_inf(f, scale);
    }
    if (res > opt.tol) {
        std::ostringstream msg;
        msg << "solve_dirichlet: residual " << res << " stalled above tolerance";
        throw NumericalError(msg.str());
    }

    PdeSolution out;
    out.problem = p;
    const std::size_t total = static_cast<std::size_t>(p.n) * p.n;
    out.u = d.fixed();
    out.unknown.assign(total, 0);
    for (int s = 0; s < m; ++s) {
        const auto k = static_cast<std::size_t>(d.nodes()[static_cast<std::size_t>(s)]);
        out.u[k] = u[s];
        out.unknown[k] = 1;
    }
    out.residual_norm = res;
    out.newton_iters = iters;
    return out;
}

PdeProblem divisor_reduced_problem(const CriticalSet& c, double radius, int n,
                                   std::function<double(Complex)> boundary) {
    PdeProblem p;
    p.radius = radius;
    p.n = n;
    p.divisor = c;
    const CriticalSet div = c;
    p.curvature = [div](Complex z) {
        double s = 1.0;
        for (const auto& e : div.entries()) {
            s *= std::pow(std::abs(z - e.point), e.multiplicity);
        }
        return -4.0 * s * s;
    };
    p.boundary = [div, b = std::move(boundary)](Complex xi) {
        double s = 1.0;
        for (const auto& e : div.entries()) {
            s *= std::pow(std::abs(xi - e.point), e.multiplicity);
        }
        return b(xi) / s;
    };
    p.validate();
    return p;
}

OracleResult oracle_solve(const FiniteBlaschke& b, double radius, int n) {
    const CriticalSet crit = critical_points(b);
    auto lambda = [b](Complex z) { return std::abs(b.derivative(z)) / (1.0 - std::norm(b(z))); };
    OracleResult out{solve_dirichlet(divisor_reduced_problem(crit, radius, n, lambda)), 0.0};
    const PdeSolution& sol = out.solution;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (!sol.unknown[sol.index(i, j)]) {
                continue;
            }
            const Complex z = sol.problem.node(i, j);
            const double s = sol.problem.divisor_modulus(z);
            // At a divisor point both sides vanish; the quotient is not sampled there.
            if (s < 1e-12) {
                continue;
            }
            const double smooth = lambda(z) / s;
            out.deviation = std::max(out.deviation, std::abs(std::exp(sol.u[sol.index(i, j)]) - smooth) / smooth);
        }
    }
    return out;
}

double oracle_validate(const FiniteBlaschke& b, double radius, int n) { return oracle_solve(b, radius, n).deviation; }

}  // namespace mbp
