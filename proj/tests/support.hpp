#pragma once

// Shared test fixtures: a seeded corpus of critical sets and reference values
// computed without the library's solver.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "mbp/blaschke.hpp"

namespace mbp::testing {

inline constexpr std::uint64_t kCorpusSeed = 20240611;

/// Total multiplicity 1..m_max, multiplicities 1..mult_max, |c| <= 0.85,
/// points at least 0.05 apart.
inline CriticalSet random_critical_set(std::mt19937_64& rng, int m_max, int mult_max) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int m = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(m_max));
    std::vector<CriticalPoint> pts;
    int mass = 0;
    while (mass < m) {
        int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(mult_max));
        k = std::min(k, m - mass);
        const std::complex<double> p = std::polar(0.85 * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
        bool apart = true;
        for (const auto& q : pts) {
            apart = apart && std::abs(p - q.point) >= 0.05;
        }
        if (!apart) {
            continue;
        }
        pts.push_back({p, k});
        mass += k;
    }
    return CriticalSet(std::move(pts));
}

inline std::vector<CriticalSet> corpus(int count, int m_max, int mult_max, std::uint64_t seed = kCorpusSeed) {
    std::mt19937_64 rng(seed);
    std::vector<CriticalSet> out;
    for (int i = 0; i < count; ++i) {
        out.push_back(random_critical_set(rng, m_max, mult_max));
    }
    return out;
}

/// Root of a monotone function on [lo, hi] by bisection.
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// z (z - a) / (1 - a z) has its critical point at (1 - sqrt(1 - a^2)) / a
/// (the in-disk root of a z^2 - 2 z + a). Returns the a placing it at p.
inline double one_point_zero(double p) {
    return bisect([p](double a) { return (1.0 - std::sqrt(1.0 - a * a)) / a - p; }, 1e-12, 1.0 - 1e-15);
}

/// -z (z^2 - x) / (1 - x z^2) has critical points at +-sqrt(w) with
/// x w^2 - (3 - x^2) w + x = 0. Returns x = b^2 placing them at +-p; this is
/// also the value of B'(0).
inline double two_point_functional(double p) {
    const double w = p * p;
    return bisect([w](double x) { return x * w * w - (3.0 - x * x) * w + x; }, 1e-12, 1.0 - 1e-15);
}

/// Radially symmetric solution of u'' + u'/r = 4 exp(2u) on [0, r] with
/// u(r) = log(b), by RK4 shooting on u(0). Returns exp(u(0)).
inline double radial_liouville_centre(double r, double b) {
    auto shoot = [r](double u0) {
        const int steps = 20000;
        const double h = r / steps;
        // Series start away from the removable singularity at 0.
        double s = h;
        double u = u0 + std::exp(2.0 * u0) * s * s;
        double v = 2.0 * std::exp(2.0 * u0) * s;
        auto rhs = [](double x, double uu, double vv) { return 4.0 * std::exp(2.0 * uu) - vv / x; };
        for (int i = 1; i < steps; ++i) {
            const double k1u = v, k1v = rhs(s, u, v);
            const double k2u = v + 0.5 * h * k1v, k2v = rhs(s + 0.5 * h, u + 0.5 * h * k1u, v + 0.5 * h * k1v);
            const double k3u = v + 0.5 * h * k2v, k3v = rhs(s + 0.5 * h, u + 0.5 * h * k2u, v + 0.5 * h * k2v);
            const double k4u = v + h * k3v, k4v = rhs(s + h, u + h * k3u, v + h * k3v);
            u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
            v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
            s += h;
        }
        return u;
    };
    const double target = std::log(b);
    const double u0 = bisect([&](double a) { return shoot(a) - target; }, target - 5.0, target);
    return std::exp(u0);
}

}  // namespace mbp::testing
