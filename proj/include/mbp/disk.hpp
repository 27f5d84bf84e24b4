#pragma once

#include "mbp/common.hpp"

namespace mbp {

/// Poincare density 1/(1-|z|^2). Throws DomainError for |z| >= 1.
double hyperbolic_density(Complex z);

/// |(z-w)/(1-conj(w) z)| for z, w in the open disk.
double pseudo_hyperbolic_distance(Complex z, Complex w);

/// Rescale a nonzero complex number onto the unit circle.
Complex unimodular(Complex u);

/// Disk automorphism T(z) = rotation * (center - z) / (1 - conj(center) z).
///
/// T(center) = 0 and T(0) = rotation * center. The rotation is kept
/// normalized to modulus one after every arithmetic step.
class DiskAutomorphism {
public:
    DiskAutomorphism() = default;
    DiskAutomorphism(Complex rotation, Complex center);

    /// The automorphism w -> rotation * w (as a map of the form above this is
    /// center 0 with rotation -rotation).
    static DiskAutomorphism rotation_by(Complex rotation);
    static DiskAutomorphism identity() { return rotation_by(Complex(1.0)); }

    /// Unique automorphism with T(w0) = v0 and T(w1) parallel to v1 (the
    /// rotation is fitted from the second pair and renormalized).
    static DiskAutomorphism fit(Complex w0, Complex v0, Complex w1, Complex v1);

    Complex rotation() const { return rotation_; }
    Complex center() const { return center_; }

    Complex operator()(Complex z) const;
    Complex derivative(Complex z) const;

    /// (this o inner)(z) = this(inner(z)).
    DiskAutomorphism compose(const DiskAutomorphism& inner) const;
    DiskAutomorphism inverse() const;

private:
    Complex rotation_{-1.0, 0.0};
    Complex center_{0.0, 0.0};
};

enum class RiemannMapKind { identity, scaled_disk, mobius };

/// Closed-form normalized Riemann map Psi : Omega -> D with Psi(0) = 0 and
/// Psi'(0) > 0.
///
/// scaled_disk: Omega = {|z| < radius}, Psi(z) = z / radius.
/// mobius:      Psi(z) = (a z + b) / (c z + d) with b = 0 required; Omega is
///              the preimage of the unit disk (a disk or a half plane).
class RiemannMap {
public:
    static RiemannMap identity();
    static RiemannMap scaled_disk(double radius);
    static RiemannMap mobius(Complex a, Complex b, Complex c, Complex d);

    RiemannMapKind kind() const { return kind_; }
    double radius() const { return radius_; }
    Complex coef_a() const { return a_; }
    Complex coef_b() const { return b_; }
    Complex coef_c() const { return c_; }
    Complex coef_d() const { return d_; }

    bool contains(Complex z) const;
    /// Psi(z); throws DomainError when z is outside Omega.
    Complex operator()(Complex z) const;
    Complex derivative(Complex z) const;
    /// Psi^{-1}(w) for |w| < 1.
    Complex inverse(Complex w) const;

private:
    RiemannMapKind kind_ = RiemannMapKind::identity;
    double radius_ = 1.0;
    Complex a_{1.0}, b_{0.0}, c_{0.0}, d_{1.0};
};

}  // namespace mbp
