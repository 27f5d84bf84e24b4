#include "mbp/maximal_solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace mbp {

void HomotopyConfig::validate() const {
    if (steps < 1 || max_newton_iters < 1 || step_halving_limit < 0) {
        throw DomainError("HomotopyConfig: steps and iteration limits must be positive");
    }
    if (!(newton_tol > 0.0) || !(roundtrip_tol > 0.0) || !(merge_tol > 0.0)) {
        throw DomainError("HomotopyConfig: tolerances must be positive");
    }
}

namespace {

using poly::ComplexL;
using poly::CoeffsL;

struct Target {
    Complex point;
    int multiplicity;
    double twist;  // radians at t = 0
};

// The critical-point conditions in the scaled variable zeta = z / t.
//
// With s = t^2 and P(zeta) = zeta^M + sum_l q_l zeta^l holding the scaled free
// zeros alpha_k = a_k / t, the map is
//     f(zeta) = zeta^{N+1} P(zeta) / P*_s(zeta),  P*_s = prod (1 - s conj(alpha_k) zeta),
// whose critical points off the origin are those of
//     W = ((N+1) P + zeta P') P*_s - zeta P P*_s'.
// The conditions are the first k_j Taylor coefficients of W at every target.
class ConditionSystem {
public:
    ConditionSystem(int origin_mult, std::vector<Target> targets)
        : n_(origin_mult), targets_(std::move(targets)) {
        for (const auto& t : targets_) {
            m_free_ += t.multiplicity;
        }
    }

    int unknowns() const { return m_free_; }

    std::vector<ComplexL> target_points(double t) const {
        std::vector<ComplexL> out;
        for (const auto& tg : targets_) {
            const Complex p = tg.point * std::polar(1.0, tg.twist * (1.0 - t));
            out.emplace_back(p.real(), p.imag());
        }
        return out;
    }

    // Exact solution at t = 0, where f is the polynomial zeta^{N+1} P and
    // (N+1) P + zeta P' = (m+1) prod (zeta - c_j)^{k_j}.
    CoeffsL start() const {
        std::vector<Complex> roots;
        for (const auto& tg : targets_) {
            const Complex p = tg.point * std::polar(1.0, tg.twist);
            roots.insert(roots.end(), static_cast<std::size_t>(tg.multiplicity), p);
        }
        const CoeffsL r = poly::from_roots(roots);
        const long double total = static_cast<long double>(n_ + m_free_ + 1);
        CoeffsL q(static_cast<std::size_t>(m_free_));
        for (int l = 0; l < m_free_; ++l) {
            q[static_cast<std::size_t>(l)] = total * r[static_cast<std::size_t>(l)] /
                                             static_cast<long double>(n_ + 1 + l);
        }
        return q;
    }

    CoeffsL full_poly(const CoeffsL& q) const {
        CoeffsL p(q.begin(), q.end());
        p.emplace_back(1.0L);
        return p;
    }

    CoeffsL reflected(const CoeffsL& p, long double s) const {
        const std::size_t m = p.size() - 1;
        CoeffsL out(p.size());
        long double sp = 1.0L;
        for (std::size_t k = 0; k <= m; ++k) {
            // coefficient of zeta^k comes from p_{m-k}
            out[k] = std::conj(p[m - k]) * sp;
            sp *= s;
        }
        return out;
    }

    // (N+1) P + zeta P'
    CoeffsL lifted(const CoeffsL& p) const {
        CoeffsL out(p.size());
        for (std::size_t l = 0; l < p.size(); ++l) {
            out[l] = p[l] * static_cast<long double>(n_ + 1 + static_cast<int>(l));
        }
        return out;
    }

    static CoeffsL shift(const CoeffsL& p, std::size_t by) {
        CoeffsL out(by, ComplexL(0.0L));
        out.insert(out.end(), p.begin(), p.end());
        return out;
    }

    CoeffsL w_poly(const CoeffsL& p, long double s) const {
        const CoeffsL ps = reflected(p, s);
        return poly::add(poly::multiply(lifted(p), ps),
                         poly::multiply(shift(p, 1), poly::derivative(ps)), -1.0L);
    }

    std::vector<ComplexL> conditions(const CoeffsL& w, double t) const {
        std::vector<ComplexL> out;
        const auto pts = target_points(t);
        for (std::size_t j = 0; j < targets_.size(); ++j) {
            const auto tc = poly::taylor_at(w, pts[j], static_cast<std::size_t>(targets_[j].multiplicity));
            out.insert(out.end(), tc.begin(), tc.end());
        }
        return out;
    }

    std::vector<ComplexL> residual(const CoeffsL& q, double t) const {
        const long double s = static_cast<long double>(t) * t;
        return conditions(w_poly(full_poly(q), s), t);
    }

    // Real 2M x 2M Jacobian in (Re q, Im q), conjugates treated as independent.
    Eigen::MatrixXd jacobian(const CoeffsL& q, double t) const {
        const long double s = static_cast<long double>(t) * t;
        const int m = m_free_;
        const CoeffsL p = full_poly(q);
        const CoeffsL ps = reflected(p, s);
        const CoeffsL dps = poly::derivative(ps);
        const CoeffsL lp = lifted(p);
        const CoeffsL zp = shift(p, 1);
        Eigen::MatrixXd jac(2 * m, 2 * m);
        for (int l = 0; l < m; ++l) {
            // d W / d q_l
            CoeffsL mono(static_cast<std::size_t>(l) + 1, ComplexL(0.0L));
            mono.back() = static_cast<long double>(n_ + 1 + l);
            const CoeffsL dq = poly::add(poly::multiply(mono, ps),
                                         shift(dps, static_cast<std::size_t>(l) + 1), -1.0L);
            // d W / d conj(q_l) = s^{M-l} zeta^{M-l} [ (N+1) P + zeta P' - (M-l) P ]
            const std::size_t deg = static_cast<std::size_t>(m - l);
            const CoeffsL inner = poly::add(lp, p, -static_cast<long double>(m - l));
            CoeffsL dqc = shift(inner, deg);
            const long double sp = std::pow(s, static_cast<long double>(m - l));
            for (auto& c : dqc) {
                c *= sp;
            }
            const auto eq = conditions(dq, t);
            const auto eqc = conditions(dqc, t);
            for (int r = 0; r < m; ++r) {
                const ComplexL dx = eq[static_cast<std::size_t>(r)] + eqc[static_cast<std::size_t>(r)];
                const ComplexL dy = ComplexL(0.0L, 1.0L) *
                                    (eq[static_cast<std::size_t>(r)] - eqc[static_cast<std::size_t>(r)]);
                jac(r, l) = static_cast<double>(dx.real());
                jac(m + r, l) = static_cast<double>(dx.imag());
                jac(r, m + l) = static_cast<double>(dy.real());
                jac(m + r, m + l) = static_cast<double>(dy.imag());
            }
        }
        return jac;
    }

private:
    int n_;
    int m_free_ = 0;
    std::vector<Target> targets_;
};

double max_norm(const std::vector<ComplexL>& v) {
    long double out = 0.0L;
    for (const auto& x : v) {
        out = std::max(out, std::abs(x));
    }
    return static_cast<double>(out);
}

struct NewtonOutcome {
    bool converged = false;
    double residual = 0.0;
    int iters = 0;
};

// With `polish` set, iteration continues past newton_tol until the residual
// stops decreasing: a k-fold critical point of the result splits by roughly
// residual^(1/k), so the endpoint is driven to the rounding floor.
NewtonOutcome newton(const ConditionSystem& sys, CoeffsL& q, double t, const HomotopyConfig& cfg,
                     bool polish = false) {
    const int m = sys.unknowns();
    NewtonOutcome out;
    auto res = sys.residual(q, t);
    out.residual = max_norm(res);
    const double start = out.residual;
    int stalled = 0;
    int extra = 0;
    while (out.residual > cfg.newton_tol || (polish && out.residual > 0.0 && extra < 4)) {
        if (out.residual <= cfg.newton_tol) {
            ++extra;
        }
        if (out.iters >= cfg.max_newton_iters || !std::isfinite(out.residual) ||
            out.residual > 1e3 * std::max(start, 1.0)) {
            return out;
        }
        const Eigen::MatrixXd jac = sys.jacobian(q, t);
        Eigen::VectorXd rhs(2 * m);
        for (int r = 0; r < m; ++r) {
            rhs(r) = -static_cast<double>(res[static_cast<std::size_t>(r)].real());
            rhs(m + r) = -static_cast<double>(res[static_cast<std::size_t>(r)].imag());
        }
        const Eigen::VectorXd step = jac.fullPivLu().solve(rhs);
        if (!step.allFinite()) {
            return out;
        }
        CoeffsL next = q;
        for (int l = 0; l < m; ++l) {
            next[static_cast<std::size_t>(l)] += ComplexL(step(l), step(m + l));
        }
        auto next_res = sys.residual(next, t);
        const double next_norm = max_norm(next_res);
        ++out.iters;
        // Rounding floor: a full step that no longer reduces the residual.
        if (!(next_norm < out.residual)) {
            if (out.residual <= cfg.newton_tol || ++stalled >= 3) {
                out.converged = out.residual <= cfg.newton_tol;
                return out;
            }
            continue;
        }
        stalled = 0;
        q = std::move(next);
        res = std::move(next_res);
        out.residual = next_norm;
    }
    out.converged = true;
    return out;
}

// Truncated power series in h, lowest order first.
using Series = std::vector<ComplexL>;

Series series_mul(const Series& a, const Series& b) {
    Series out(a.size(), ComplexL(0.0L));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; i + j < out.size(); ++j) {
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

Series series_deriv(const Series& a) {
    Series out(a.size(), ComplexL(0.0L));
    for (std::size_t i = 1; i < a.size(); ++i) {
        out[i - 1] = a[i] * static_cast<long double>(i);
    }
    return out;
}

// Endpoint refinement in the zeros themselves. The Taylor coefficients of W at
// each target come from the factored forms prod (c - a_k + h) and
// prod ((1 - conj(a_k) c) - conj(a_k) h), which keep their relative accuracy
// when targets sit close to zeros or to the circle, where the expanded
// coefficient form loses it.
class ZeroSystem {
public:
    ZeroSystem(int origin_mult, std::vector<Target> targets) : n_(origin_mult), targets_(std::move(targets)) {}

    std::vector<ComplexL> residual(const std::vector<ComplexL>& a) const {
        std::vector<ComplexL> out;
        for (const auto& tg : targets_) {
            const std::size_t k = static_cast<std::size_t>(tg.multiplicity);
            const ComplexL c(tg.point.real(), tg.point.imag());
            const Series w = w_series(product(a, c, k + 1, a.size()), reflected(a, c, k + 1, a.size()), c);
            out.insert(out.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k));
        }
        return out;
    }

    Eigen::MatrixXd jacobian(const std::vector<ComplexL>& a) const {
        const int m = static_cast<int>(a.size());
        Eigen::MatrixXd jac(2 * m, 2 * m);
        int row = 0;
        for (const auto& tg : targets_) {
            const std::size_t k = static_cast<std::size_t>(tg.multiplicity);
            const ComplexL c(tg.point.real(), tg.point.imag());
            const Series p = product(a, c, k + 1, a.size());
            const Series ps = reflected(a, c, k + 1, a.size());
            const Series lp = lifted(p, c);
            for (int col = 0; col < m; ++col) {
                const auto skip = static_cast<std::size_t>(col);
                // d/da: P -> -prod_{j != col}; d/d conj(a): P* -> -zeta prod_{j != col}.
                Series dp = product(a, c, k + 1, skip);
                for (auto& v : dp) {
                    v = -v;
                }
                Series dps = series_mul(zeta_series(c, k + 1), reflected(a, c, k + 1, skip));
                for (auto& v : dps) {
                    v = -v;
                }
                const Series e = w_series(dp, ps, c);
                const Series ec = diff(series_mul(lp, dps),
                                       series_mul(series_mul(zeta_series(c, k + 1), p), series_deriv(dps)));
                for (std::size_t r = 0; r < k; ++r) {
                    const ComplexL dx = e[r] + ec[r];
                    const ComplexL dy = ComplexL(0.0L, 1.0L) * (e[r] - ec[r]);
                    jac(row + static_cast<int>(r), col) = static_cast<double>(dx.real());
                    jac(m + row + static_cast<int>(r), col) = static_cast<double>(dx.imag());
                    jac(row + static_cast<int>(r), m + col) = static_cast<double>(dy.real());
                    jac(m + row + static_cast<int>(r), m + col) = static_cast<double>(dy.imag());
                }
            }
            row += static_cast<int>(k);
        }
        return jac;
    }

private:
    static Series zeta_series(ComplexL c, std::size_t len) {
        Series z(len, ComplexL(0.0L));
        z[0] = c;
        if (len > 1) {
            z[1] = 1.0L;
        }
        return z;
    }

    static Series diff(const Series& a, const Series& b) {
        Series out(a);
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] -= b[i];
        }
        return out;
    }

    // prod_{j != skip} (c - a_j + h)
    static Series product(const std::vector<ComplexL>& a, ComplexL c, std::size_t len, std::size_t skip) {
        Series out(len, ComplexL(0.0L));
        out[0] = 1.0L;
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (j == skip) {
                continue;
            }
            const ComplexL f = c - a[j];
            for (std::size_t i = len; i-- > 0;) {
                out[i] = out[i] * f + (i > 0 ? out[i - 1] : ComplexL(0.0L));
            }
        }
        return out;
    }

    // prod_{j != skip} ((1 - conj(a_j) c) - conj(a_j) h)
    static Series reflected(const std::vector<ComplexL>& a, ComplexL c, std::size_t len, std::size_t skip) {
        Series out(len, ComplexL(0.0L));
        out[0] = 1.0L;
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (j == skip) {
                continue;
            }
            const ComplexL ab = std::conj(a[j]);
            const ComplexL f0 = 1.0L - ab * c;
            for (std::size_t i = len; i-- > 0;) {
                out[i] = out[i] * f0 - (i > 0 ? out[i - 1] * ab : ComplexL(0.0L));
            }
        }
        return out;
    }

    // (N+1) P + zeta P'
    Series lifted(const Series& p, ComplexL c) const {
        const Series zp = series_mul(zeta_series(c, p.size()), series_deriv(p));
        Series out(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) {
            out[i] = static_cast<long double>(n_ + 1) * p[i] + zp[i];
        }
        return out;
    }

    // W = ((N+1) P + zeta P') P* - zeta P P*'
    Series w_series(const Series& p, const Series& ps, ComplexL c) const {
        return diff(series_mul(lifted(p, c), ps),
                    series_mul(series_mul(zeta_series(c, p.size()), p), series_deriv(ps)));
    }

    int n_;
    std::vector<Target> targets_;
};

// Newton on the zeros at t = 1; keeps the input unless the residual drops.
double polish_zeros(int origin_mult, const std::vector<Target>& targets, std::vector<Complex>& zeros) {
    std::vector<Target> fixed = targets;
    for (auto& t : fixed) {
        t.twist = 0.0;
    }
    const ZeroSystem sys(origin_mult, fixed);
    const int m = static_cast<int>(zeros.size());
    std::vector<ComplexL> a;
    for (const Complex z : zeros) {
        a.emplace_back(z.real(), z.imag());
    }
    auto res = sys.residual(a);
    double best = max_norm(res);
    for (int it = 0; it < 20 && best > 0.0; ++it) {
        Eigen::VectorXd rhs(2 * m);
        for (int r = 0; r < m; ++r) {
            rhs(r) = -static_cast<double>(res[static_cast<std::size_t>(r)].real());
            rhs(m + r) = -static_cast<double>(res[static_cast<std::size_t>(r)].imag());
        }
        const Eigen::VectorXd step = sys.jacobian(a).fullPivLu().solve(rhs);
        if (!step.allFinite()) {
            break;
        }
        std::vector<ComplexL> next = a;
        bool inside = true;
        for (int l = 0; l < m; ++l) {
            next[static_cast<std::size_t>(l)] += ComplexL(step(l), step(m + l));
            inside = inside && std::abs(next[static_cast<std::size_t>(l)]) < 1.0L - 1e-12L;
        }
        if (!inside) {
            break;
        }
        auto next_res = sys.residual(next);
        const double norm = max_norm(next_res);
        if (!(norm < best)) {
            break;
        }
        best = norm;
        a = std::move(next);
        res = std::move(next_res);
    }
    for (int l = 0; l < m; ++l) {
        const auto& v = a[static_cast<std::size_t>(l)];
        zeros[static_cast<std::size_t>(l)] = Complex(static_cast<double>(v.real()), static_cast<double>(v.imag()));
    }
    return best;
}

bool zeros_inside(const CoeffsL& p, double t, std::vector<Complex>* zeros) {
    std::vector<Complex> r = poly::roots(p);
    for (auto& z : r) {
        z *= t;
        if (!(std::abs(z) < 1.0 - 1e-12)) {
            return false;
        }
    }
    if (zeros != nullptr) {
        *zeros = std::move(r);
    }
    return true;
}

}  // namespace

SolveReport solve_maximal(const CriticalSet& c, const HomotopyConfig& cfg) {
    cfg.validate();
    const int n_origin = c.origin_multiplicity();

    std::vector<Target> targets;
    std::mt19937_64 rng(cfg.path_seed);
    std::uniform_real_distribution<double> angle(-std::numbers::pi / 4.0, std::numbers::pi / 4.0);
    for (const auto& e : c.entries()) {
        if (e.point == Complex(0.0)) {
            continue;
        }
        targets.push_back({e.point, e.multiplicity, cfg.path_seed == 0 ? 0.0 : angle(rng)});
    }

    SolveReport report;
    report.requested = c;
    std::vector<Complex> zeros(static_cast<std::size_t>(n_origin) + 1, Complex(0.0));

    if (!targets.empty()) {
        const ConditionSystem sys(n_origin, targets);
        CoeffsL q = sys.start();
        CoeffsL q_prev = q;
        double t = 0.0;
        double t_prev = 0.0;
        const double base = 1.0 / cfg.steps;
        double dt = base;
        int halvings = 0;
        std::vector<Complex> free_zeros;
        report.homotopy_trace.push_back({0.0, max_norm(sys.residual(q, 0.0)), 0});
        while (t < 1.0) {
            const double t_new = std::min(1.0, t + dt);
            CoeffsL guess = q;
            if (t > t_prev) {
                const long double w = static_cast<long double>((t_new - t) / (t - t_prev));
                for (std::size_t l = 0; l < q.size(); ++l) {
                    guess[l] += (q[l] - q_prev[l]) * w;
                }
            }
            const NewtonOutcome step = newton(sys, guess, t_new, cfg, t_new == 1.0);
            std::vector<Complex> scaled;
            const bool ok = step.converged && zeros_inside(sys.full_poly(guess), t_new, &scaled);
            if (!ok) {
                if (++halvings > cfg.step_halving_limit) {
                    throw NumericalError("solve_maximal: homotopy breakdown at t = " +
                                         std::to_string(t) + " (residual " +
                                         std::to_string(step.residual) + ")");
                }
                dt /= 2.0;
                continue;
            }
            halvings = 0;
            report.homotopy_trace.push_back({t_new, step.residual, step.iters});
            q_prev = std::move(q);
            q = std::move(guess);
            t_prev = t;
            t = t_new;
            free_zeros = std::move(scaled);
            dt = std::min(base, 2.0 * dt);
        }
        report.residual_norm = polish_zeros(n_origin, targets, free_zeros);
        zeros.insert(zeros.end(), free_zeros.begin(), free_zeros.end());
    }

    Complex g0(1.0);
    for (const Complex& a : zeros) {
        if (a != Complex(0.0)) {
            g0 *= -a;
        }
    }
    report.solution = FiniteBlaschke(std::conj(g0) / std::abs(g0), std::move(zeros));
    report.functional_value = report.solution.origin_derivative(n_origin).real();
    if (!(report.functional_value > 0.0)) {
        throw NumericalError("solve_maximal: functional value not positive");
    }
    report.recovered = critical_points(report.solution, cfg.merge_tol);
    report.roundtrip_error = critical_set_distance(c, report.recovered);
    if (report.roundtrip_error > cfg.roundtrip_tol) {
        throw NumericalError("solve_maximal: recovered critical set off by " +
                             std::to_string(report.roundtrip_error));
    }
    return report;
}

FiniteBlaschke solve_maximal_normalized(const CriticalSet& c, const DiskAutomorphism& t,
                                        const HomotopyConfig& cfg) {
    return compose(t, solve_maximal(c, cfg).solution);
}

TruncationReport truncation_sequence(const std::vector<CriticalPoint>& ordered, int n_max,
                                     const HomotopyConfig& cfg) {
    if (n_max < 1 || static_cast<std::size_t>(n_max) > ordered.size()) {
        throw DomainError("truncation_sequence: n_max out of range");
    }
    TruncationReport out;
    for (int n = 1; n <= n_max; ++n) {
        std::vector<CriticalPoint> prefix(ordered.begin(), ordered.begin() + n);
        out.solves.push_back(solve_maximal(CriticalSet(std::move(prefix)), cfg));
    }
    constexpr int kSamples = 4096;
    for (std::size_t k = 0; k + 1 < out.solves.size(); ++k) {
        const auto& a = out.solves[k];
        const auto& b = out.solves[k + 1];
        if (a.requested.origin_multiplicity() == b.requested.origin_multiplicity() &&
            b.functional_value > a.functional_value) {
            out.functional_nonincreasing = false;
        }
        // Maximum modulus: the sup over the closed disk sits on its boundary.
        double sup = 0.0;
        for (int j = 0; j < kSamples; ++j) {
            const Complex z = std::polar(0.5, 2.0 * std::numbers::pi * j / kSamples);
            sup = std::max(sup, std::abs(a.solution(z) - b.solution(z)));
        }
        out.sup_differences.push_back(sup);
    }
    return out;
}

Complex Transplant::operator()(Complex z) const {
    return disk_solve.solution(map(z));
}

Complex Transplant::derivative(Complex z) const {
    return disk_solve.solution.derivative(map(z)) * map.derivative(z);
}

std::vector<CriticalPoint> Transplant::critical_points() const {
    std::vector<CriticalPoint> out;
    for (const auto& e : disk_solve.recovered.entries()) {
        out.push_back({map.inverse(e.point), e.multiplicity});
    }
    return out;
}

Transplant transplant(const std::vector<CriticalPoint>& domain_points, const RiemannMap& map,
                      const HomotopyConfig& cfg) {
    std::vector<CriticalPoint> disk_points;
    for (const auto& p : domain_points) {
        disk_points.push_back({map(p.point), p.multiplicity});
    }
    return {solve_maximal(CriticalSet(std::move(disk_points)), cfg), map};
}

}  // namespace mbp
