#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mbp/common.hpp"

namespace mbp::poly {

/// Coefficients in ascending order: p[0] + p[1] z + ... + p[n] z^n.
using Coeffs = std::vector<Complex>;
using ComplexL = std::complex<long double>;
using CoeffsL = std::vector<ComplexL>;

/// Monic polynomial with the given roots, expanded in extended precision.
CoeffsL from_roots(std::span<const Complex> roots);

CoeffsL multiply(std::span<const ComplexL> p, std::span<const ComplexL> q);
CoeffsL derivative(std::span<const ComplexL> p);
CoeffsL add(std::span<const ComplexL> p, std::span<const ComplexL> q, ComplexL q_scale = 1.0L);
Coeffs to_double(std::span<const ComplexL> p);
CoeffsL to_long(std::span<const Complex> p);

ComplexL evaluate(std::span<const ComplexL> p, ComplexL z);

/// First `count` Taylor coefficients of p at `c`: p(c + h) = sum_k t_k h^k.
CoeffsL taylor_at(std::span<const ComplexL> p, ComplexL c, std::size_t count);

/// All roots of p (leading coefficients below 1e-14 of the largest are
/// dropped, exact trailing zeros give exact roots at the origin).
///
/// Eigenvalues of the balanced companion matrix, then Newton polish per root
/// in extended precision until the residual stops decreasing.
std::vector<Complex> roots(std::span<const ComplexL> p);

struct RootCluster {
    Complex center;
    int multiplicity;
};

/// Union-find on pairwise distance <= tol; representative = centroid.
/// Clusters are returned sorted by (re, im) of the centroid.
std::vector<RootCluster> cluster(std::span<const Complex> roots, double tol);

/// Refines each cluster of multiplicity k > 1 as the simple root of the
/// (k-1)-th derivative of p near the centroid. The centroid is kept when
/// Newton wanders further than `tol` away.
void refine_clusters(std::span<const ComplexL> p, std::vector<RootCluster>& clusters, double tol);

/// Second pass for roots that a fixed merge radius cannot resolve: clusters
/// within `search_radius` of each other are merged into one of total
/// multiplicity k when they all lie within 4 (eps |p| / |t_k|)^{1/k} of the
/// refined centre, t_k being the k-th Taylor coefficient there. That is the
/// radius over which double-precision noise scatters a k-fold root.
void merge_numerical_multiples(std::span<const ComplexL> p, std::vector<RootCluster>& clusters,
                               double search_radius);

}  // namespace mbp::poly
