#include "mbp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "mbp/disk.hpp"

namespace mbp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kSupSamples = 8192;
constexpr double kDeflation = 1.0 - 1e-6;
constexpr double kDerivativeTol = 1e-10;

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) {
        f *= i;
    }
    return f;
}

Complex random_in_disk(std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return std::polar(radius * std::sqrt(u(rng)), kTwoPi * u(rng));
}

Complex random_unimodular(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return std::polar(1.0, kTwoPi * u(rng));
}

double sampled_sup(const std::function<Complex(Complex)>& f) {
    double s = 0.0;
    for (int k = 0; k < kSupSamples; ++k) {
        s = std::max(s, std::abs(f(std::polar(1.0, kTwoPi * k / kSupSamples))));
    }
    return s;
}

// Pullback ratio in both directions on a coarse polar grid, away from zeros.
std::pair<double, double> mutual_dominance(const FiniteBlaschke& a, const FiniteBlaschke& b) {
    const PolarGrid grid(48, 192, 0.9);
    const DensityField la = pullback_density(a, grid);
    const DensityField lb = pullback_density(b, grid);
    const double tol = std::numeric_limits<double>::infinity();
    return {dominance_check(la, lb, tol).max_ratio_off_zeros,
            dominance_check(lb, la, tol).max_ratio_off_zeros};
}

}  // namespace

Complex cauchy_derivative(const std::function<Complex(Complex)>& f, int k, double radius, int nodes) {
    if (k < 0 || nodes < 1 || !(radius > 0.0)) {
        throw DomainError("cauchy_derivative: bad order, radius or node count");
    }
    Complex sum = 0.0;
    for (int j = 0; j < nodes; ++j) {
        const double a = kTwoPi * j / nodes;
        sum += f(std::polar(radius, a)) * std::polar(1.0, -k * a);
    }
    return sum / static_cast<double>(nodes) * factorial(k) / std::pow(radius, k);
}

const char* to_string(CompetitorKind kind) {
    switch (kind) {
        case CompetitorKind::postcompose_automorphism: return "postcompose-automorphism";
        case CompetitorKind::scalar_multiple: return "scalar-multiple";
        case CompetitorKind::larger_critical_set: return "larger-critical-set";
        case CompetitorKind::antiderivative_family: return "antiderivative-family";
    }
    return "unknown";
}

std::vector<CompetitorSpec> random_competitor_specs(const CriticalSet& c, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<CompetitorSpec> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        CompetitorSpec s;
        s.kind = static_cast<CompetitorKind>(i % 4);
        switch (s.kind) {
            case CompetitorKind::postcompose_automorphism:
                // The first one is B itself.
                if (i > 0) {
                    s.automorphism = DiskAutomorphism(random_unimodular(rng), random_in_disk(rng, 0.9));
                }
                break;
            case CompetitorKind::scalar_multiple:
                s.scalar = random_in_disk(rng, 1.0);
                break;
            case CompetitorKind::larger_critical_set: {
                const int extra = 1 + static_cast<int>(rng() % 2);
                while (static_cast<int>(s.extra.size()) < extra) {
                    const Complex p = random_in_disk(rng, 0.85);
                    bool apart = true;
                    for (const auto& e : c.entries()) {
                        apart = apart && std::abs(p - e.point) >= 0.05;
                    }
                    for (const auto& e : s.extra) {
                        apart = apart && std::abs(p - e.point) >= 0.05;
                    }
                    if (apart) {
                        s.extra.push_back({p, 1});
                    }
                }
                s.automorphism = DiskAutomorphism(random_unimodular(rng), random_in_disk(rng, 0.5));
                break;
            }
            case CompetitorKind::antiderivative_family:
                s.seed = rng();
                s.poly_degree = static_cast<int>(rng() % 4);
                break;
        }
        out.push_back(std::move(s));
    }
    return out;
}

Competitor make_competitor(const CriticalSet& c, const FiniteBlaschke& b, const CompetitorSpec& spec,
                           const HomotopyConfig& cfg) {
    auto after = [](const DiskAutomorphism& t, FiniteBlaschke g) {
        return std::pair{[t, g](Complex z) { return t(g(z)); },
                         [t, g](Complex z) { return t.derivative(g(z)) * g.derivative(z); }};
    };
    switch (spec.kind) {
        case CompetitorKind::postcompose_automorphism: {
            auto [f, df] = after(spec.automorphism, b);
            return {spec.kind, f, df};
        }
        case CompetitorKind::scalar_multiple: {
            if (std::abs(spec.scalar) > 1.0) {
                throw DomainError("scalar competitor needs |c| <= 1");
            }
            const Complex s = spec.scalar;
            return {spec.kind, [s, b](Complex z) { return s * b(z); },
                    [s, b](Complex z) { return s * b.derivative(z); }};
        }
        case CompetitorKind::larger_critical_set: {
            std::vector<CriticalPoint> all = c.entries();
            all.insert(all.end(), spec.extra.begin(), spec.extra.end());
            const FiniteBlaschke g = solve_maximal(CriticalSet(std::move(all)), cfg).solution;
            auto [f, df] = after(spec.automorphism, g);
            return {spec.kind, f, df};
        }
        case CompetitorKind::antiderivative_family: {
            std::mt19937_64 rng(spec.seed);
            std::normal_distribution<double> gauss;
            poly::CoeffsL p(static_cast<std::size_t>(spec.poly_degree) + 1);
            for (auto& a : p) {
                a = poly::ComplexL(gauss(rng), gauss(rng));
            }
            const std::vector<Complex> roots = c.as_multiset();
            const poly::CoeffsL integrand = poly::multiply(poly::from_roots(roots), p);
            poly::CoeffsL prim(integrand.size() + 1, 0.0L);
            for (std::size_t k = 0; k < integrand.size(); ++k) {
                prim[k + 1] = integrand[k] / static_cast<long double>(k + 1);
            }
            auto eval = [](const poly::CoeffsL& q) {
                return [q](Complex z) {
                    const poly::ComplexL v = poly::evaluate(q, poly::ComplexL(z));
                    return Complex(static_cast<double>(v.real()), static_cast<double>(v.imag()));
                };
            };
            const double sup = sampled_sup(eval(prim));
            if (!(sup > 0.0)) {
                throw NumericalError("antiderivative competitor vanishes identically");
            }
            const long double scale = kDeflation / sup;
            for (auto& a : prim) {
                a *= scale;
            }
            return {spec.kind, eval(prim), eval(poly::derivative(prim))};
        }
    }
    throw DomainError("unknown competitor kind");
}

std::string competitor_violation(const CriticalSet& c, const Competitor& f) {
    if (sampled_sup(f.f) > 1.0 + 1e-12) {
        return "sampled sup norm exceeds 1";
    }
    for (const auto& e : c.entries()) {
        const double rho = 0.25 * (1.0 - std::abs(e.point));
        for (int l = 0; l < e.multiplicity; ++l) {
            const Complex v = l == 0 ? f.df(e.point)
                                     : cauchy_derivative([&](Complex w) { return f.df(e.point + w); }, l, rho, 64);
            if (!(std::abs(v) <= kDerivativeTol)) {
                return "derivative does not vanish to the prescribed order";
            }
        }
    }
    return {};
}

ExtremalityReport extremality_suite(const CriticalSet& c, const FiniteBlaschke& b,
                                    const std::vector<CompetitorSpec>& specs, const HomotopyConfig& cfg) {
    const int n = c.origin_multiplicity();
    ExtremalityReport rep;
    rep.functional = extremal_functional(b, n);
    rep.worst_margin = std::numeric_limits<double>::infinity();
    for (const auto& spec : specs) {
        Competitor f;
        try {
            f = make_competitor(c, b, spec, cfg);
        } catch (const std::exception& e) {
            ++rep.skipped;
            rep.skip_reasons.push_back(std::string(to_string(spec.kind)) + ": " + e.what());
            continue;
        }
        const std::string bad = competitor_violation(c, f);
        if (!bad.empty()) {
            ++rep.skipped;
            rep.skip_reasons.push_back(std::string(to_string(spec.kind)) + ": " + bad);
            continue;
        }
        const double value = cauchy_derivative(f.f, n + 1).real();
        const double margin = rep.functional - value;
        rep.worst_margin = std::min(rep.worst_margin, margin);
        ++rep.evaluated;
        if (margin < -1e-9) {
            ++rep.violations;
        }
    }
    return rep;
}

std::vector<BoundaryProbe> boundary_probes(const CriticalSet& c, int count, std::vector<double> radii,
                                           double min_distance) {
    auto clear = [&](Complex z) {
        return std::all_of(c.entries().begin(), c.entries().end(),
                           [&](const CriticalPoint& e) { return std::abs(z - e.point) >= min_distance; });
    };
    auto admissible = [&](Complex z) {
        return clear(z) && std::all_of(radii.begin(), radii.end(), [&](double r) { return clear(r * z); });
    };
    std::vector<BoundaryProbe> out;
    const double slot = kTwoPi / count;
    for (int k = 0; k < count; ++k) {
        bool found = false;
        // Walk outwards from the nominal angle, alternating sides.
        for (int step = 0; step < 512 && !found; ++step) {
            const double shift = (step % 2 == 0 ? 1.0 : -1.0) * ((step + 1) / 2) * slot / 1024.0;
            const Complex z = std::polar(1.0, k * slot + shift);
            if (admissible(z)) {
                out.push_back({z, radii});
                found = true;
            }
        }
        if (!found) {
            throw DomainError("boundary_probes: no admissible direction in a slot");
        }
    }
    return out;
}

BoundarySamples boundary_quotient(const FiniteBlaschke& b, const BoundaryProbe& probe) {
    BoundarySamples out{probe.direction, probe.radii, {}, 0.0, true};
    for (double r : probe.radii) {
        const Complex z = r * probe.direction;
        const double q = (1.0 - r * r) * std::abs(b.derivative(z)) / (1.0 - std::norm(b(z)));
        if (!out.quotients.empty() && q < out.quotients.back()) {
            out.monotone = false;
        }
        out.quotients.push_back(q);
        out.fitted_k = std::max(out.fitted_k, std::abs(q - 1.0) / (1.0 - r));
    }
    return out;
}

PhiReport phi_boundary_bound(const FiniteBlaschke& b, const std::vector<Complex>& zeta) {
    PhiReport rep;
    rep.min_re = std::numeric_limits<double>::infinity();
    rep.max_re = -rep.min_re;
    for (const Complex z : zeta) {
        const Complex d = b.derivative(z);
        if (std::abs(d) == 0.0) {
            throw NumericalError("phi_boundary_bound: B' vanishes on the circle");
        }
        const Complex phi = b(z) / (z * d);
        rep.values.push_back(phi);
        rep.min_re = std::min(rep.min_re, phi.real());
        rep.max_re = std::max(rep.max_re, phi.real());
        rep.max_abs_im = std::max(rep.max_abs_im, std::abs(phi.imag()));
    }
    return rep;
}

std::vector<Complex> circle_samples(int n) {
    std::vector<Complex> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        out.push_back(std::polar(1.0, kTwoPi * k / n));
    }
    return out;
}

std::vector<Complex> disk_samples(int n) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    std::vector<Complex> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        out.push_back(std::polar(0.95 * std::sqrt((k + 0.5) / n), k * golden));
    }
    return out;
}

AutomorphismMatch match_up_to_automorphism(const FiniteBlaschke& a, const FiniteBlaschke& b) {
    const Complex w0 = b(0.0);
    Complex z1 = 0.25;
    for (const Complex cand : {Complex(0.25), Complex(0.0, 0.5), Complex(-0.4), Complex(0.3, -0.3)}) {
        if (pseudo_hyperbolic_distance(b(cand), w0) > 1e-3) {
            z1 = cand;
            break;
        }
    }
    AutomorphismMatch out;
    out.t = DiskAutomorphism::fit(w0, a(0.0), b(z1), a(z1));
    for (const Complex z : disk_samples(1000)) {
        out.error = std::max(out.error, std::abs(a(z) - out.t(b(z))));
    }
    return out;
}

SemigroupReport semigroup_check(const FiniteBlaschke& f, const FiniteBlaschke& b, const HomotopyConfig& cfg) {
    SemigroupReport rep;
    rep.composite = compose(b, f);
    rep.composite_critical = critical_points(rep.composite, cfg.merge_tol);
    rep.resolve = solve_maximal(rep.composite_critical, cfg);
    rep.match = match_up_to_automorphism(rep.composite, rep.resolve.solution);
    std::tie(rep.dominance_forward, rep.dominance_backward) =
        mutual_dominance(rep.composite, rep.resolve.solution);
    return rep;
}

LeftFactorReport left_factor_check(const FiniteBlaschke& b, const FiniteBlaschke& c, const HomotopyConfig& cfg) {
    LeftFactorReport rep;
    rep.composite = semigroup_check(c, b, cfg);
    rep.resolve = solve_maximal(critical_points(b, cfg.merge_tol), cfg);
    rep.match = match_up_to_automorphism(b, rep.resolve.solution);
    return rep;
}

UnionReport union_suite(const CriticalSet& c1, const CriticalSet& c2, double c, const PolarGrid& grid,
                        const HomotopyConfig& cfg) {
    UnionReport rep;
    rep.expected_zeros = c1.united(c2);
    rep.h = grid.spacing();
    const FiniteBlaschke f = solve_maximal(c1, cfg).solution;
    const FiniteBlaschke g = solve_maximal(c2, cfg).solution;
    const UnionMetric um = union_metric(f, g, c, grid);
    rep.alpha = um.alpha;

    std::vector<CriticalPoint> visible;
    for (const auto& e : rep.expected_zeros.entries()) {
        if (std::abs(e.point) <= grid.r_max()) {
            visible.push_back(e);
        }
    }
    try {
        rep.zero_set_ok = critical_set_distance(CriticalSet(visible), um.mu.zero_set) <= cfg.roundtrip_tol;
    } catch (const OrderMismatchError&) {
        rep.zero_set_ok = false;
    }

    const CurvatureField stencil = discrete_curvature(um.mu);
    rep.max_stencil_curvature = stencil.max_defined();
    for (std::size_t k = 0; k < stencil.values.size(); ++k) {
        if (stencil.defined[k] && um.mu_curvature.defined[k] && um.lambda_a.values[k] > 0.05 &&
            um.lambda_b.values[k] > 0.05) {
            rep.closed_form_gap = std::max(rep.closed_form_gap,
                                           std::abs(stencil.values[k] - um.mu_curvature.values[k]));
        }
    }
    rep.direct = solve_maximal(rep.expected_zeros, cfg);
    return rep;
}

}  // namespace mbp
