#include "mbp/disk.hpp"

#include <cmath>

namespace mbp {

double hyperbolic_density(Complex z) {
    const double r2 = std::norm(z);
    if (!(r2 < 1.0)) {
        throw DomainError("hyperbolic_density: point not in the open unit disk");
    }
    return 1.0 / (1.0 - r2);
}

double pseudo_hyperbolic_distance(Complex z, Complex w) {
    return std::abs((z - w) / (1.0 - std::conj(w) * z));
}

Complex unimodular(Complex u) {
    const double m = std::abs(u);
    if (!(m > 0.0) || !std::isfinite(m)) {
        throw DomainError("unimodular: cannot normalize zero or non-finite value");
    }
    return u / m;
}

namespace {

// Mobius matrix [[a, b], [c, d]] acting as (a z + b) / (c z + d).
struct Mobius {
    Complex a, b, c, d;
};

Mobius to_matrix(const DiskAutomorphism& t) {
    const Complex rot = t.rotation();
    const Complex cen = t.center();
    return {-rot, rot * cen, -std::conj(cen), Complex(1.0)};
}

DiskAutomorphism from_matrix(const Mobius& m) {
    const Complex center = -m.b / m.a;
    const Complex rotation = -m.a / m.d;
    return {unimodular(rotation), center};
}

}  // namespace

DiskAutomorphism::DiskAutomorphism(Complex rotation, Complex center)
    : rotation_(unimodular(rotation)), center_(center) {
    if (!(std::norm(center) < 1.0)) {
        throw DomainError("DiskAutomorphism: center must lie in the open disk");
    }
}

DiskAutomorphism DiskAutomorphism::rotation_by(Complex rotation) {
    return {-unimodular(rotation), Complex(0.0)};
}

DiskAutomorphism DiskAutomorphism::fit(Complex w0, Complex v0, Complex w1, Complex v1) {
    const DiskAutomorphism to_origin(Complex(1.0), w0);
    const DiskAutomorphism from_origin(Complex(1.0), v0);
    const Complex num = from_origin(v1);
    const Complex den = to_origin(w1);
    if (std::abs(den) == 0.0 || std::abs(num) == 0.0) {
        throw NumericalError("DiskAutomorphism::fit: degenerate point pair");
    }
    // from_origin is an involution, so T = from_origin o R_u o to_origin.
    return from_origin.compose(rotation_by(num / den)).compose(to_origin);
}

Complex DiskAutomorphism::operator()(Complex z) const {
    return rotation_ * (center_ - z) / (1.0 - std::conj(center_) * z);
}

Complex DiskAutomorphism::derivative(Complex z) const {
    const Complex den = 1.0 - std::conj(center_) * z;
    return -rotation_ * (1.0 - std::norm(center_)) / (den * den);
}

DiskAutomorphism DiskAutomorphism::compose(const DiskAutomorphism& inner) const {
    const Mobius p = to_matrix(*this);
    const Mobius q = to_matrix(inner);
    return from_matrix({p.a * q.a + p.b * q.c, p.a * q.b + p.b * q.d,
                        p.c * q.a + p.d * q.c, p.c * q.b + p.d * q.d});
}

DiskAutomorphism DiskAutomorphism::inverse() const {
    const Mobius m = to_matrix(*this);
    return from_matrix({m.d, -m.b, -m.c, m.a});
}

RiemannMap RiemannMap::identity() { return {}; }

RiemannMap RiemannMap::scaled_disk(double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw DomainError("RiemannMap::scaled_disk: radius must be positive");
    }
    RiemannMap m;
    m.kind_ = RiemannMapKind::scaled_disk;
    m.radius_ = radius;
    m.a_ = Complex(1.0 / radius);
    return m;
}

RiemannMap RiemannMap::mobius(Complex a, Complex b, Complex c, Complex d) {
    if (std::abs(b) != 0.0) {
        throw DomainError("RiemannMap::mobius: Psi(0) = b/d must vanish");
    }
    if (std::abs(d) == 0.0 || std::abs(a * d - b * c) == 0.0) {
        throw DomainError("RiemannMap::mobius: degenerate coefficients");
    }
    const Complex slope = a / d;
    if (!(slope.real() > 0.0) || std::abs(slope.imag()) > 1e-14 * std::abs(slope)) {
        throw DomainError("RiemannMap::mobius: Psi'(0) must be real positive");
    }
    RiemannMap m;
    m.kind_ = RiemannMapKind::mobius;
    m.a_ = a;
    m.b_ = b;
    m.c_ = c;
    m.d_ = d;
    return m;
}

bool RiemannMap::contains(Complex z) const {
    switch (kind_) {
    case RiemannMapKind::identity:
        return std::norm(z) < 1.0;
    case RiemannMapKind::scaled_disk:
        return std::abs(z) < radius_;
    case RiemannMapKind::mobius: {
        const Complex den = c_ * z + d_;
        return std::abs(a_ * z + b_) < std::abs(den);
    }
    }
    return false;
}

Complex RiemannMap::operator()(Complex z) const {
    if (!contains(z)) {
        throw DomainError("RiemannMap: point outside the domain");
    }
    switch (kind_) {
    case RiemannMapKind::identity:
        return z;
    case RiemannMapKind::scaled_disk:
        return z / radius_;
    case RiemannMapKind::mobius:
        return (a_ * z + b_) / (c_ * z + d_);
    }
    return z;
}

Complex RiemannMap::derivative(Complex z) const {
    if (!contains(z)) {
        throw DomainError("RiemannMap: point outside the domain");
    }
    switch (kind_) {
    case RiemannMapKind::identity:
        return Complex(1.0);
    case RiemannMapKind::scaled_disk:
        return Complex(1.0 / radius_);
    case RiemannMapKind::mobius: {
        const Complex den = c_ * z + d_;
        return (a_ * d_ - b_ * c_) / (den * den);
    }
    }
    return Complex(1.0);
}

Complex RiemannMap::inverse(Complex w) const {
    if (!(std::norm(w) < 1.0)) {
        throw DomainError("RiemannMap::inverse: point not in the open unit disk");
    }
    switch (kind_) {
    case RiemannMapKind::identity:
        return w;
    case RiemannMapKind::scaled_disk:
        return w * radius_;
    case RiemannMapKind::mobius:
        return (d_ * w - b_) / (a_ - c_ * w);
    }
    return w;
}

}  // namespace mbp
