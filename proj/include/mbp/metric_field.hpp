#pragma once

#include <functional>
#include <vector>

#include "mbp/blaschke.hpp"

namespace mbp {

/// Polar lattice: n_r radii r_i = r_max sin(x_i) / sin(x_end) with x_i uniform
/// on [0, x_end], x_end < pi/2, so r_0 = 0 is the centre and the rings cluster
/// toward r_max without the mapping degenerating there. n_theta uniform
/// angles; the centre value is stored once per angle.
class PolarGrid {
public:
    PolarGrid(int n_r, int n_theta, double r_max, double stretch_end = kDefaultStretchEnd);

    /// 128 x 512, r_max = 0.95.
    static PolarGrid default_grid() { return {128, 512, 0.95}; }

    static constexpr double kDefaultStretchEnd = 0.425 * 3.14159265358979323846;

    int n_r() const { return n_r_; }
    double stretch_end() const { return x_end_; }
    /// Uniform step of the stretching coordinate x.
    double dx() const { return x_end_ / (n_r_ - 1); }
    int n_theta() const { return n_theta_; }
    double r_max() const { return r_max_; }
    double radius(int i) const { return radii_[static_cast<std::size_t>(i)]; }
    double angle(int j) const;
    Complex node(int i, int j) const;
    std::size_t size() const { return static_cast<std::size_t>(n_r_) * n_theta_; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_theta_ + j; }

    /// Mesh width h: the larger of the widest radial gap and r_max * dtheta.
    double spacing() const;
    /// Nested refinement: every gap halved in both directions.
    PolarGrid refined() const;

    bool operator==(const PolarGrid& o) const {
        return n_r_ == o.n_r_ && n_theta_ == o.n_theta_ && r_max_ == o.r_max_ && x_end_ == o.x_end_;
    }

private:
    int n_r_;
    int n_theta_;
    double r_max_;
    double x_end_;
    std::vector<double> radii_;
};

/// Sampled conformal density with the points where it may vanish.
struct DensityField {
    PolarGrid grid;
    std::vector<double> values;
    CriticalSet zero_set;

    double at(int i, int j) const { return values[grid.index(i, j)]; }
};

struct CurvatureField {
    PolarGrid grid;
    std::vector<double> values;
    std::vector<char> defined;

    double max_deviation_from(double target) const;
    double max_defined() const;
    std::size_t defined_count() const;
};

/// Curvature is never evaluated within two mesh widths of an annotated zero.
/// discrete_curvature can additionally skip a pseudo-hyperbolic disk of a
/// fixed radius; that variant keeps the skipped set independent of h.
inline constexpr double kZeroExclusion = 0.1;

DensityField sample_density(const PolarGrid& grid, const std::function<double(Complex)>& density,
                            CriticalSet zero_set = {});

/// |f'(z)| / (1 - |f(z)|^2), annotated with the critical points of f.
DensityField pullback_density(const FiniteBlaschke& f, const PolarGrid& grid);

/// 5-point polar stencil for -Laplacian(log lambda) / lambda^2.
///
/// The harmonic part log|S| of the annotated divisor S(z) = prod (z - z_j)^{m_j}
/// is subtracted before differencing, so the stencil only sees the smooth
/// positive factor lambda / |S|.
CurvatureField discrete_curvature(const DensityField& lambda, double exclusion = 0.0);

/// Pointwise product; zero sets are united.
DensityField product_density(const DensityField& a, const DensityField& b);

/// -4 (lambda_a^-2 + lambda_b^-2) wherever both factors are positive.
CurvatureField product_curvature(const DensityField& a, const DensityField& b);

struct UnionMetric {
    DensityField lambda_a;
    DensityField lambda_b;
    DensityField product;
    /// alpha = -max of the product curvature over the grid.
    double alpha = 0.0;
    /// (sqrt(alpha) / 2) * product.
    DensityField mu;
    /// Closed-form curvature of mu, 4 kappa_product / alpha.
    CurvatureField mu_curvature;
};

/// c |F'| / (1 - c^2 |F|^2) times the same for G, rescaled to curvature <= -4.
UnionMetric union_metric(const FiniteBlaschke& f, const FiniteBlaschke& g, double c,
                         const PolarGrid& grid);

/// max lambda / lambda_D over the grid.
double ahlfors_check(const DensityField& lambda);

struct DominanceResult {
    double max_ratio = 0.0;
    /// Largest ratio at nodes at least kZeroExclusion away from zeros of lambda_star.
    double max_ratio_off_zeros = 0.0;
    /// lambda_star has strictly more zeros, yet the ratio off zeros reaches
    /// 1 - 1e-6. Equality somewhere would force equality everywhere, so this
    /// marks a suspicious run.
    bool near_equality = false;
};

/// max lambda_star / lambda_max over nodes, 0/0 at shared zeros skipped.
///
/// Throws DomainError when the zero annotation of lambda_star does not contain
/// that of lambda_max, or when its stencil curvature exceeds -4 + curvature_tol
/// (evaluated with the given extra exclusion around zeros).
DominanceResult dominance_check(const DensityField& lambda_star, const DensityField& lambda_max,
                                double curvature_tol, double exclusion = kZeroExclusion);

}  // namespace mbp
