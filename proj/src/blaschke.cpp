#include "mbp/blaschke.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mbp/disk.hpp"

namespace mbp {

namespace {

constexpr double kPoleTol = 1e-14;
constexpr double kSameEntryTol = 1e-12;
constexpr double kOriginSnap = 1e-13;

// B'/B = sum (1 - |a|^2) / ((z - a)(1 - conj(a) z)) and its derivative. Far
// better conditioned than the expanded numerator when zeros crowd the circle.
struct LogDerivative {
    poly::ComplexL value;
    poly::ComplexL slope;
    long double scale;  // sum of term moduli, for the rounding floor
};

LogDerivative log_derivative(const std::vector<Complex>& zeros, poly::ComplexL z) {
    LogDerivative out{0.0L, 0.0L, 0.0L};
    for (const Complex& a0 : zeros) {
        const poly::ComplexL a(a0.real(), a0.imag());
        const long double r = std::abs(a);
        const poly::ComplexL d1 = z - a;
        const poly::ComplexL d2 = 1.0L - std::conj(a) * z;
        const poly::ComplexL den = d1 * d2;
        const poly::ComplexL term = (1.0L - r) * (1.0L + r) / den;
        out.value += term;
        out.slope -= term * (d2 - std::conj(a) * d1) / den;
        out.scale += std::abs(term);
    }
    return out;
}

// Modified Newton on B'/B from the cluster centre; kept only if the residual drops.
Complex polish_critical(const std::vector<Complex>& zeros, Complex start, int mult) {
    for (const Complex& a : zeros) {
        if (std::abs(start - a) < 1e-6) {
            return start;
        }
    }
    poly::ComplexL z(start.real(), start.imag());
    LogDerivative cur = log_derivative(zeros, z);
    for (int it = 0; it < 30; ++it) {
        if (std::abs(cur.slope) == 0.0L) {
            break;
        }
        const poly::ComplexL next = z - static_cast<long double>(mult) * cur.value / cur.slope;
        if (!(std::abs(next) < 1.0L) || std::abs(next - z) > 1e-3L) {
            break;
        }
        const LogDerivative trial = log_derivative(zeros, next);
        if (!(std::abs(trial.value) < std::abs(cur.value))) {
            break;
        }
        z = next;
        cur = trial;
    }
    return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

}  // namespace

CriticalSet::CriticalSet(std::vector<CriticalPoint> entries) {
    for (auto& e : entries) {
        if (e.multiplicity < 1) {
            throw DomainError("CriticalSet: multiplicity must be >= 1");
        }
        if (!std::isfinite(e.point.real()) || !std::isfinite(e.point.imag()) ||
            !(std::norm(e.point) < 1.0)) {
            throw DomainError("CriticalSet: point not in the open unit disk");
        }
        if (std::abs(e.point) < kOriginSnap) {
            e.point = Complex(0.0);
        }
        auto same = std::find_if(entries_.begin(), entries_.end(), [&](const CriticalPoint& o) {
            return std::abs(o.point - e.point) <= kSameEntryTol;
        });
        if (same != entries_.end()) {
            same->multiplicity += e.multiplicity;
        } else {
            entries_.push_back(e);
        }
    }
}

CriticalSet CriticalSet::from_points(const std::vector<Complex>& points) {
    std::vector<CriticalPoint> e;
    e.reserve(points.size());
    for (const Complex& p : points) {
        e.push_back({p, 1});
    }
    return CriticalSet(std::move(e));
}

int CriticalSet::origin_multiplicity() const {
    for (const auto& e : entries_) {
        if (e.point == Complex(0.0)) {
            return e.multiplicity;
        }
    }
    return 0;
}

int CriticalSet::total_mass() const {
    int m = 0;
    for (const auto& e : entries_) {
        m += e.multiplicity;
    }
    return m;
}

std::vector<Complex> CriticalSet::as_multiset() const {
    std::vector<Complex> out;
    for (const auto& e : entries_) {
        out.insert(out.end(), static_cast<std::size_t>(e.multiplicity), e.point);
    }
    return out;
}

CriticalSet CriticalSet::united(const CriticalSet& other) const {
    std::vector<CriticalPoint> all = entries_;
    all.insert(all.end(), other.entries_.begin(), other.entries_.end());
    return CriticalSet(std::move(all));
}

double critical_set_distance(const CriticalSet& expected, const CriticalSet& actual) {
    const auto& want = expected.entries();
    const auto& got = actual.entries();
    if (want.size() != got.size() || expected.total_mass() != actual.total_mass()) {
        throw OrderMismatchError("critical sets differ in size: expected " +
                                 std::to_string(expected.total_mass()) + " points in " +
                                 std::to_string(want.size()) + " entries, got " +
                                 std::to_string(actual.total_mass()) + " in " +
                                 std::to_string(got.size()));
    }
    std::vector<bool> used(got.size(), false);
    double worst = 0.0;
    for (const auto& w : want) {
        std::size_t best = got.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < got.size(); ++k) {
            if (used[k]) {
                continue;
            }
            const double d = pseudo_hyperbolic_distance(w.point, got[k].point);
            if (d < best_d) {
                best_d = d;
                best = k;
            }
        }
        used[best] = true;
        if (got[best].multiplicity != w.multiplicity) {
            throw OrderMismatchError("critical point multiplicity mismatch");
        }
        worst = std::max(worst, best_d);
    }
    return worst;
}

FiniteBlaschke::FiniteBlaschke(Complex eta, std::vector<Complex> zeros)
    : eta_(unimodular(eta)), zeros_(std::move(zeros)) {
    if (zeros_.empty()) {
        throw DomainError("FiniteBlaschke: degree must be at least 1");
    }
    for (const Complex& a : zeros_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()) || !(std::norm(a) < 1.0)) {
            throw DomainError("FiniteBlaschke: zero not in the open unit disk");
        }
    }
}

FiniteBlaschke FiniteBlaschke::monomial(int n) {
    if (n < 1) {
        throw DomainError("FiniteBlaschke::monomial: degree must be at least 1");
    }
    return {Complex(1.0), std::vector<Complex>(static_cast<std::size_t>(n), Complex(0.0))};
}

int FiniteBlaschke::origin_order() const {
    return static_cast<int>(std::count(zeros_.begin(), zeros_.end(), Complex(0.0)));
}

Complex FiniteBlaschke::operator()(Complex z) const {
    Complex v = eta_;
    for (const Complex& a : zeros_) {
        const Complex den = 1.0 - std::conj(a) * z;
        if (std::abs(den) < kPoleTol) {
            throw NumericalError("FiniteBlaschke: evaluation too close to a pole");
        }
        v *= (z - a) / den;
    }
    return v;
}

Complex FiniteBlaschke::derivative(Complex z) const {
    const std::size_t d = zeros_.size();
    std::vector<Complex> factor(d);
    std::vector<Complex> den(d);
    for (std::size_t k = 0; k < d; ++k) {
        den[k] = 1.0 - std::conj(zeros_[k]) * z;
        if (std::abs(den[k]) < kPoleTol) {
            throw NumericalError("FiniteBlaschke: evaluation too close to a pole");
        }
        factor[k] = (z - zeros_[k]) / den[k];
    }
    // prefix[k] = prod_{j<k} factor[j]
    std::vector<Complex> prefix(d + 1, Complex(1.0));
    for (std::size_t k = 0; k < d; ++k) {
        prefix[k + 1] = prefix[k] * factor[k];
    }
    Complex suffix(1.0);
    Complex sum(0.0);
    for (std::size_t k = d; k-- > 0;) {
        sum += (1.0 - std::norm(zeros_[k])) / (den[k] * den[k]) * prefix[k] * suffix;
        suffix *= factor[k];
    }
    return eta_ * sum;
}

Complex FiniteBlaschke::origin_derivative(int N) const {
    if (N < 0 || origin_order() != N + 1) {
        throw OrderMismatchError("origin_derivative: zero order at the origin is " +
                                 std::to_string(origin_order()) + ", expected " +
                                 std::to_string(N + 1));
    }
    Complex g0 = eta_;
    for (const Complex& a : zeros_) {
        if (a != Complex(0.0)) {
            g0 *= -a;
        }
    }
    return std::tgamma(static_cast<double>(N) + 2.0) * g0;
}

FiniteBlaschke FiniteBlaschke::rotated(Complex rotation) const {
    return {eta_ * unimodular(rotation), zeros_};
}

poly::CoeffsL FiniteBlaschke::numerator() const {
    return poly::from_roots(zeros_);
}

poly::CoeffsL FiniteBlaschke::denominator() const {
    poly::CoeffsL p{poly::ComplexL(1.0L)};
    for (const Complex& a : zeros_) {
        const poly::ComplexL factor[2] = {poly::ComplexL(1.0L),
                                          -poly::ComplexL(a.real(), -a.imag())};
        p = poly::multiply(p, factor);
    }
    return p;
}

double extremal_functional(const FiniteBlaschke& b, int N) {
    return b.origin_derivative(N).real();
}

poly::CoeffsL critical_numerator(const FiniteBlaschke& b) {
    const poly::CoeffsL p = b.numerator();
    const poly::CoeffsL q = b.denominator();
    return poly::add(poly::multiply(poly::derivative(p), q),
                     poly::multiply(p, poly::derivative(q)), -1.0L);
}

CriticalSet critical_points(const FiniteBlaschke& b, double merge_tol) {
    const int expected = b.degree() - 1;
    if (expected == 0) {
        return {};
    }
    const poly::CoeffsL q = critical_numerator(b);
    const std::vector<Complex> all = poly::roots(q);
    std::vector<Complex> inside;
    for (const Complex& r : all) {
        if (std::abs(std::abs(r) - 1.0) <= 10.0 * merge_tol) {
            throw NumericalError("critical_points: multiplicity ambiguous near the unit circle");
        }
        if (std::abs(r) < 1.0) {
            inside.push_back(r);
        }
    }
    if (static_cast<int>(inside.size()) != expected) {
        throw NumericalError("critical_points: found " + std::to_string(inside.size()) +
                             " roots in the disk, expected " + std::to_string(expected));
    }
    std::vector<poly::RootCluster> clusters = poly::cluster(inside, merge_tol);
    poly::refine_clusters(q, clusters, merge_tol);
    poly::merge_numerical_multiples(q, clusters, std::max(merge_tol, kMultipleRootSearch));
    std::vector<CriticalPoint> entries;
    for (const auto& c : clusters) {
        entries.push_back({polish_critical(b.zeros(), c.center, c.multiplicity), c.multiplicity});
    }
    return CriticalSet(std::move(entries));
}

FiniteBlaschke compose(const FiniteBlaschke& outer, const FiniteBlaschke& inner) {
    const poly::CoeffsL p = inner.numerator();
    const poly::CoeffsL q = inner.denominator();
    const poly::ComplexL eta(inner.eta().real(), inner.eta().imag());
    std::vector<Complex> zeros;
    zeros.reserve(static_cast<std::size_t>(outer.degree() * inner.degree()));
    for (const Complex& w : outer.zeros()) {
        if (w == Complex(0.0)) {
            zeros.insert(zeros.end(), inner.zeros().begin(), inner.zeros().end());
            continue;
        }
        // inner(z) = w  <=>  eta P(z) - w P*(z) = 0; all roots lie in the disk.
        poly::CoeffsL eq(p.size());
        for (std::size_t k = 0; k < p.size(); ++k) {
            eq[k] = eta * p[k];
        }
        eq = poly::add(eq, q, -poly::ComplexL(w.real(), w.imag()));
        std::vector<Complex> pre = poly::roots(eq);
        if (static_cast<int>(pre.size()) != inner.degree()) {
            throw NumericalError("compose: preimage count mismatch");
        }
        for (const Complex& z : pre) {
            if (!(std::norm(z) < 1.0)) {
                throw NumericalError("compose: preimage outside the disk");
            }
        }
        zeros.insert(zeros.end(), pre.begin(), pre.end());
    }
    // Fix eta on the unit circle, where every factor is unimodular.
    const Complex z0(1.0);
    const Complex target = outer(inner(z0));
    const FiniteBlaschke bare(Complex(1.0), zeros);
    FiniteBlaschke out(target / bare(z0), std::move(zeros));
    for (const Complex z : {Complex(0.3, 0.1), Complex(-0.45, 0.6), Complex(0.0, -0.8)}) {
        if (std::abs(out(z) - outer(inner(z))) > 1e-8) {
            throw NumericalError("compose: validation by evaluation failed");
        }
    }
    return out;
}

FiniteBlaschke compose(const DiskAutomorphism& t, const FiniteBlaschke& b) {
    // T(w) = rot (c - w) / (1 - conj(c) w) = -rot * (w - c) / (1 - conj(c) w)
    return compose(FiniteBlaschke(-t.rotation(), {t.center()}), b);
}

Complex reflect_check(const FiniteBlaschke& b, Complex z) {
    if (!(std::abs(z) > 1.0)) {
        throw DomainError("reflect_check: point must lie outside the closed disk");
    }
    const Complex value = b(z);
    const Complex mirror = 1.0 / std::conj(b(1.0 / std::conj(z)));
    if (std::abs(value - mirror) > 1e-10 * std::max(1.0, std::abs(value))) {
        throw NumericalError("reflect_check: reflection identity violated");
    }
    return value;
}

}  // namespace mbp
