#pragma once

#include <vector>

#include "mbp/common.hpp"
#include "mbp/polynomial.hpp"

namespace mbp {

/// Roots closer than this are reported as one critical point of higher
/// multiplicity. A double root of a double-precision polynomial splits by
/// about sqrt(eps) ~ 1e-8, so the merge radius has to sit above that.
inline constexpr double kCriticalMergeTol = 1e-6;

/// Clusters closer than this are tested for being one badly conditioned
/// multiple root (see poly::merge_numerical_multiples).
inline constexpr double kMultipleRootSearch = 1e-3;

struct CriticalPoint {
    Complex point;
    int multiplicity = 1;
};

/// Finite multiset of points in the open unit disk.
///
/// Entries closer than 1e-12 are merged (multiplicities add), and points with
/// modulus below 1e-13 are snapped to the origin, so the entry list is always
/// pairwise distinct.
class CriticalSet {
public:
    CriticalSet() = default;
    explicit CriticalSet(std::vector<CriticalPoint> entries);

    /// Each listed point counts once; repeated points accumulate multiplicity.
    static CriticalSet from_points(const std::vector<Complex>& points);

    const std::vector<CriticalPoint>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    /// Multiplicity of the origin (N).
    int origin_multiplicity() const;
    /// Sum of all multiplicities (m).
    int total_mass() const;
    /// Each point repeated by its multiplicity.
    std::vector<Complex> as_multiset() const;
    /// Multiset union.
    CriticalSet united(const CriticalSet& other) const;
    /// Image of every point under a map, multiplicities kept.
    template <class F>
    CriticalSet mapped(F&& f) const {
        std::vector<CriticalPoint> out;
        out.reserve(entries_.size());
        for (const auto& e : entries_) {
            out.push_back({f(e.point), e.multiplicity});
        }
        return CriticalSet(std::move(out));
    }

private:
    std::vector<CriticalPoint> entries_;
};

/// Largest pseudo-hyperbolic distance between matched entries of two critical
/// sets. Matching is greedy nearest-neighbour; throws OrderMismatchError when
/// the sets differ in size or multiplicities.
double critical_set_distance(const CriticalSet& expected, const CriticalSet& actual);

/// B(z) = eta * prod_k (z - a_k) / (1 - conj(a_k) z), degree >= 1.
class FiniteBlaschke {
public:
    FiniteBlaschke(Complex eta, std::vector<Complex> zeros);

    static FiniteBlaschke identity() { return monomial(1); }
    /// z^n
    static FiniteBlaschke monomial(int n);

    Complex eta() const { return eta_; }
    const std::vector<Complex>& zeros() const { return zeros_; }
    int degree() const { return static_cast<int>(zeros_.size()); }
    /// Number of zeros exactly at the origin.
    int origin_order() const;

    /// Pole-proximity check |1 - conj(a_k) z| >= 1e-14 on every factor.
    Complex operator()(Complex z) const;
    /// Pole-free product-rule form, well defined at the zeros of B.
    Complex derivative(Complex z) const;

    /// B^{(N+1)}(0); requires a zero of order exactly N+1 at the origin.
    Complex origin_derivative(int N) const;

    /// Same function with eta replaced by rotation * eta.
    FiniteBlaschke rotated(Complex rotation) const;

    /// prod (z - a_k) and prod (1 - conj(a_k) z), without eta.
    poly::CoeffsL numerator() const;
    poly::CoeffsL denominator() const;

private:
    Complex eta_;
    std::vector<Complex> zeros_;
};

/// Re B^{(N+1)}(0), the value of the extremal functional.
double extremal_functional(const FiniteBlaschke& b, int N);

/// Q = P' P* - P P*', whose zeros in the disk are the critical points of B.
poly::CoeffsL critical_numerator(const FiniteBlaschke& b);

/// The d-1 critical points of B in the disk, clustered with `merge_tol`.
CriticalSet critical_points(const FiniteBlaschke& b, double merge_tol = kCriticalMergeTol);

/// outer o inner, with zeros the inner-preimages of the zeros of outer.
FiniteBlaschke compose(const FiniteBlaschke& outer, const FiniteBlaschke& inner);

/// Post-composition with a disk automorphism, T o B.
FiniteBlaschke compose(const class DiskAutomorphism& t, const FiniteBlaschke& b);

/// B(z) for |z| > 1, checked against 1 / conj(B(1 / conj(z))) to 1e-10.
Complex reflect_check(const FiniteBlaschke& b, Complex z);

}  // namespace mbp
