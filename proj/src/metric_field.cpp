#include "mbp/metric_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mbp/disk.hpp"

namespace mbp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_same_grid(const DensityField& a, const DensityField& b) {
    if (!(a.grid == b.grid)) {
        throw DomainError("density fields live on different grids");
    }
}

double log_abs_divisor(const CriticalSet& zeros, Complex z) {
    double s = 0.0;
    for (const auto& e : zeros.entries()) {
        s += e.multiplicity * std::log(std::abs(z - e.point));
    }
    return s;
}

bool near_zero(const CriticalSet& zeros, Complex z, double min_dist, double exclusion) {
    for (const auto& e : zeros.entries()) {
        if (std::abs(z - e.point) < min_dist ||
            pseudo_hyperbolic_distance(z, e.point) < exclusion) {
            return true;
        }
    }
    return false;
}

}  // namespace

PolarGrid::PolarGrid(int n_r, int n_theta, double r_max, double stretch_end)
    : n_r_(n_r), n_theta_(n_theta), r_max_(r_max), x_end_(stretch_end) {
    if (n_r < 3 || n_theta < 4) {
        throw DomainError("PolarGrid: need at least 3 radii and 4 angles");
    }
    if (!(r_max > 0.0) || !(r_max < 1.0)) {
        throw DomainError("PolarGrid: r_max must lie in (0, 1)");
    }
    if (!(stretch_end > 0.0) || !(stretch_end < 0.5 * std::numbers::pi)) {
        throw DomainError("PolarGrid: stretch_end must lie in (0, pi/2)");
    }
    radii_.resize(static_cast<std::size_t>(n_r));
    for (int i = 0; i < n_r; ++i) {
        radii_[static_cast<std::size_t>(i)] =
            r_max * std::sin(x_end_ * i / (n_r - 1)) / std::sin(x_end_);
    }
    radii_.back() = r_max;
}

double PolarGrid::angle(int j) const {
    return 2.0 * std::numbers::pi * j / n_theta_;
}

Complex PolarGrid::node(int i, int j) const {
    return std::polar(radius(i), angle(j));
}

double PolarGrid::spacing() const {
    double h = r_max_ * 2.0 * std::numbers::pi / n_theta_;
    for (int i = 1; i < n_r_; ++i) {
        h = std::max(h, radius(i) - radius(i - 1));
    }
    return h;
}

PolarGrid PolarGrid::refined() const {
    return {2 * (n_r_ - 1) + 1, 2 * n_theta_, r_max_, x_end_};
}

double CurvatureField::max_deviation_from(double target) const {
    double worst = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (defined[k]) {
            worst = std::max(worst, std::abs(values[k] - target));
        }
    }
    return worst;
}

double CurvatureField::max_defined() const {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (defined[k]) {
            worst = std::max(worst, values[k]);
        }
    }
    return worst;
}

std::size_t CurvatureField::defined_count() const {
    return static_cast<std::size_t>(std::count(defined.begin(), defined.end(), char{1}));
}

DensityField sample_density(const PolarGrid& grid, const std::function<double(Complex)>& density,
                            CriticalSet zero_set) {
    DensityField out{grid, std::vector<double>(grid.size()), std::move(zero_set)};
    for (int i = 0; i < grid.n_r(); ++i) {
        const double centre = i == 0 ? density(Complex(0.0)) : 0.0;
        for (int j = 0; j < grid.n_theta(); ++j) {
            const double v = i == 0 ? centre : density(grid.node(i, j));
            if (!(v >= 0.0)) {
                throw DomainError("sample_density: density must be nonnegative");
            }
            out.values[grid.index(i, j)] = v;
        }
    }
    return out;
}

DensityField pullback_density(const FiniteBlaschke& f, const PolarGrid& grid) {
    CriticalSet crit = critical_points(f);
    std::vector<CriticalPoint> inside;
    for (const auto& e : crit.entries()) {
        if (std::abs(e.point) <= grid.r_max()) {
            inside.push_back(e);
        }
    }
    return sample_density(
        grid,
        [&f](Complex z) { return std::abs(f.derivative(z)) / (1.0 - std::norm(f(z))); },
        CriticalSet(std::move(inside)));
}

CurvatureField discrete_curvature(const DensityField& lambda, double exclusion) {
    const PolarGrid& g = lambda.grid;
    const int nr = g.n_r();
    const int nt = g.n_theta();
    const double h = g.spacing();
    const double dth = 2.0 * std::numbers::pi / nt;

    // Smooth part of log lambda.
    std::vector<double> smooth(g.size(), kNaN);
    for (int i = 0; i < nr; ++i) {
        for (int j = 0; j < nt; ++j) {
            const double v = lambda.at(i, j);
            if (v > 0.0) {
                smooth[g.index(i, j)] = std::log(v) - log_abs_divisor(lambda.zero_set, g.node(i, j));
            }
        }
    }

    CurvatureField out{g, std::vector<double>(g.size(), kNaN), std::vector<char>(g.size(), 0)};
    auto finish = [&](int i, int j, double laplacian) {
        const double v = lambda.at(i, j);
        const double kappa = -laplacian / (v * v);
        if (std::isfinite(kappa) && !near_zero(lambda.zero_set, g.node(i, j), 2.0 * h, exclusion)) {
            out.values[g.index(i, j)] = kappa;
            out.defined[g.index(i, j)] = 1;
        }
    };

    // Centre: 4 (ring mean - centre) / r_1^2.
    {
        double mean = 0.0;
        for (int j = 0; j < nt; ++j) {
            mean += smooth[g.index(1, j)];
        }
        mean /= nt;
        const double r1 = g.radius(1);
        finish(0, 0, 4.0 * (mean - smooth[g.index(0, 0)]) / (r1 * r1));
    }
    // Radial part in flux form in the stretching coordinate x, r = R(x):
    // (1/r) (r f_r)_r = (1 / (r R')) d/dx ((r / R') df/dx).
    const double dx = g.dx();
    auto weight = [&](double x) { return std::sin(x) / std::cos(x); };  // r / R'
    for (int i = 1; i + 1 < nr; ++i) {
        const double x = i * dx;
        const double r = g.radius(i);
        const double jac = r * g.r_max() * std::cos(x) / std::sin(g.stretch_end());
        const double w_out = weight(x + 0.5 * dx);
        const double w_in = weight(x - 0.5 * dx);
        for (int j = 0; j < nt; ++j) {
            const double c = smooth[g.index(i, j)];
            const double in = i == 1 ? smooth[g.index(0, 0)] : smooth[g.index(i - 1, j)];
            const double outv = smooth[g.index(i + 1, j)];
            const double left = smooth[g.index(i, (j + nt - 1) % nt)];
            const double right = smooth[g.index(i, (j + 1) % nt)];
            const double radial = (w_out * (outv - c) - w_in * (c - in)) / (jac * dx * dx);
            const double angular = (left - 2.0 * c + right) / (dth * dth * r * r);
            finish(i, j, radial + angular);
        }
    }
    return out;
}

DensityField product_density(const DensityField& a, const DensityField& b) {
    require_same_grid(a, b);
    DensityField out{a.grid, std::vector<double>(a.values.size()), a.zero_set.united(b.zero_set)};
    for (std::size_t k = 0; k < a.values.size(); ++k) {
        out.values[k] = a.values[k] * b.values[k];
    }
    return out;
}

CurvatureField product_curvature(const DensityField& a, const DensityField& b) {
    require_same_grid(a, b);
    CurvatureField out{a.grid, std::vector<double>(a.values.size(), kNaN),
                       std::vector<char>(a.values.size(), 0)};
    for (std::size_t k = 0; k < a.values.size(); ++k) {
        const double la = a.values[k];
        const double lb = b.values[k];
        if (la > 0.0 && lb > 0.0) {
            out.values[k] = -4.0 * (1.0 / (la * la) + 1.0 / (lb * lb));
            out.defined[k] = 1;
        }
    }
    return out;
}

UnionMetric union_metric(const FiniteBlaschke& f, const FiniteBlaschke& g, double c,
                         const PolarGrid& grid) {
    if (!(c > 0.0) || !(c < 1.0)) {
        throw DomainError("union_metric: c must lie in (0, 1)");
    }
    auto scaled = [&grid, c](const FiniteBlaschke& b) {
        DensityField pull = pullback_density(b, grid);
        return sample_density(
            grid,
            [&b, c](Complex z) { return c * std::abs(b.derivative(z)) / (1.0 - c * c * std::norm(b(z))); },
            pull.zero_set);
    };
    UnionMetric out{scaled(f), scaled(g), {grid, {}, {}}, 0.0, {grid, {}, {}}, {grid, {}, {}}};
    out.product = product_density(out.lambda_a, out.lambda_b);
    const CurvatureField kappa = product_curvature(out.lambda_a, out.lambda_b);
    out.alpha = -kappa.max_defined();
    if (!(out.alpha > 0.0) || !std::isfinite(out.alpha)) {
        throw NumericalError("union_metric: no positive curvature bound alpha on this grid");
    }
    const double scale = std::sqrt(out.alpha) / 2.0;
    out.mu = out.product;
    for (double& v : out.mu.values) {
        v *= scale;
    }
    out.mu_curvature = kappa;
    for (std::size_t k = 0; k < kappa.values.size(); ++k) {
        if (kappa.defined[k]) {
            out.mu_curvature.values[k] = 4.0 * kappa.values[k] / out.alpha;
        }
    }
    return out;
}

double ahlfors_check(const DensityField& lambda) {
    const PolarGrid& g = lambda.grid;
    double worst = 0.0;
    for (int i = 0; i < g.n_r(); ++i) {
        for (int j = 0; j < g.n_theta(); ++j) {
            worst = std::max(worst, lambda.at(i, j) / hyperbolic_density(g.node(i, j)));
        }
    }
    return worst;
}

DominanceResult dominance_check(const DensityField& lambda_star, const DensityField& lambda_max,
                                double curvature_tol, double exclusion) {
    require_same_grid(lambda_star, lambda_max);
    for (const auto& need : lambda_max.zero_set.entries()) {
        int have = 0;
        for (const auto& e : lambda_star.zero_set.entries()) {
            if (std::abs(e.point - need.point) <= 1e-8) {
                have += e.multiplicity;
            }
        }
        if (have < need.multiplicity) {
            throw DomainError("dominance_check: zero set of lambda_star does not contain that of lambda_max");
        }
    }
    const CurvatureField kappa = discrete_curvature(lambda_star, exclusion);
    if (kappa.max_defined() > -4.0 + curvature_tol) {
        throw DomainError("dominance_check: lambda_star has curvature above -4");
    }
    const PolarGrid& g = lambda_star.grid;
    DominanceResult out;
    for (int i = 0; i < g.n_r(); ++i) {
        for (int j = 0; j < g.n_theta(); ++j) {
            const double num = lambda_star.at(i, j);
            const double den = lambda_max.at(i, j);
            if (den <= 1e-300 && num <= 1e-300) {
                continue;
            }
            const double ratio = num / den;
            out.max_ratio = std::max(out.max_ratio, ratio);
            if (!near_zero(lambda_star.zero_set, g.node(i, j), 0.0, kZeroExclusion)) {
                out.max_ratio_off_zeros = std::max(out.max_ratio_off_zeros, ratio);
            }
        }
    }
    out.near_equality = lambda_star.zero_set.total_mass() > lambda_max.zero_set.total_mass() &&
                        out.max_ratio_off_zeros >= 1.0 - 1e-6;
    return out;
}

}  // namespace mbp
