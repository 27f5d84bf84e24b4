#include "mbp/polynomial.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace mbp::poly {

CoeffsL from_roots(std::span<const Complex> roots) {
    CoeffsL p{ComplexL(1.0L)};
    p.reserve(roots.size() + 1);
    for (const Complex& r : roots) {
        const ComplexL a(r.real(), r.imag());
        p.push_back(p.back());
        for (std::size_t k = p.size() - 2; k > 0; --k) {
            p[k] = p[k - 1] - a * p[k];
        }
        p[0] = -a * p[0];
    }
    return p;
}

CoeffsL multiply(std::span<const ComplexL> p, std::span<const ComplexL> q) {
    if (p.empty() || q.empty()) {
        return {};
    }
    CoeffsL out(p.size() + q.size() - 1, ComplexL(0.0L));
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == ComplexL(0.0L)) {
            continue;
        }
        for (std::size_t j = 0; j < q.size(); ++j) {
            out[i + j] += p[i] * q[j];
        }
    }
    return out;
}

CoeffsL derivative(std::span<const ComplexL> p) {
    if (p.size() <= 1) {
        return {ComplexL(0.0L)};
    }
    CoeffsL d(p.size() - 1);
    for (std::size_t k = 1; k < p.size(); ++k) {
        d[k - 1] = p[k] * static_cast<long double>(k);
    }
    return d;
}

CoeffsL add(std::span<const ComplexL> p, std::span<const ComplexL> q, ComplexL q_scale) {
    CoeffsL out(std::max(p.size(), q.size()), ComplexL(0.0L));
    for (std::size_t k = 0; k < p.size(); ++k) {
        out[k] += p[k];
    }
    for (std::size_t k = 0; k < q.size(); ++k) {
        out[k] += q_scale * q[k];
    }
    return out;
}

Coeffs to_double(std::span<const ComplexL> p) {
    Coeffs out(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
        out[k] = Complex(static_cast<double>(p[k].real()), static_cast<double>(p[k].imag()));
    }
    return out;
}

CoeffsL to_long(std::span<const Complex> p) {
    CoeffsL out(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
        out[k] = ComplexL(p[k].real(), p[k].imag());
    }
    return out;
}

ComplexL evaluate(std::span<const ComplexL> p, ComplexL z) {
    ComplexL acc(0.0L);
    for (std::size_t k = p.size(); k-- > 0;) {
        acc = acc * z + p[k];
    }
    return acc;
}

CoeffsL taylor_at(std::span<const ComplexL> p, ComplexL c, std::size_t count) {
    // Repeated synthetic division by (z - c).
    CoeffsL work(p.begin(), p.end());
    CoeffsL out(count, ComplexL(0.0L));
    std::size_t n = work.size();
    for (std::size_t k = 0; k < count && n > 0; ++k) {
        for (std::size_t i = n - 1; i > 0; --i) {
            work[i - 1] += c * work[i];
        }
        out[k] = work[0];
        work.erase(work.begin());
        --n;
    }
    return out;
}

namespace {

// Newton in extended precision until the residual stops decreasing. Near a
// k-fold root convergence is only linear, hence the generous cap.
constexpr int kPolishIters = 60;

void polish(std::span<const ComplexL> p, Complex& root) {
    const CoeffsL dp = derivative(p);
    ComplexL z(root.real(), root.imag());
    long double best = std::abs(evaluate(p, z));
    for (int it = 0; it < kPolishIters; ++it) {
        const ComplexL d = evaluate(dp, z);
        if (std::abs(d) == 0.0L) {
            break;
        }
        const ComplexL next = z - evaluate(p, z) / d;
        const long double val = std::abs(evaluate(p, next));
        if (!(val < best)) {
            break;
        }
        best = val;
        z = next;
    }
    root = Complex(static_cast<double>(z.real()), static_cast<double>(z.imag()));
}

// Parlett-Reinsch diagonal balancing in powers of two.
void balance(Eigen::MatrixXcd& a) {
    const Eigen::Index n = a.rows();
    bool converged = false;
    while (!converged) {
        converged = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            double c = 0.0;
            double r = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) {
                    continue;
                }
                c += std::abs(a(j, i));
                r += std::abs(a(i, j));
            }
            if (c == 0.0 || r == 0.0) {
                continue;
            }
            double f = 1.0;
            const double s = c + r;
            while (c < r / 2.0) {
                c *= 2.0;
                r /= 2.0;
                f *= 2.0;
            }
            while (c >= r * 2.0) {
                c /= 2.0;
                r *= 2.0;
                f /= 2.0;
            }
            if ((c + r) < 0.95 * s) {
                converged = false;
                a.row(i) /= f;
                a.col(i) *= f;
            }
        }
    }
}

}  // namespace

std::vector<Complex> roots(std::span<const ComplexL> p_in) {
    CoeffsL p(p_in.begin(), p_in.end());
    long double scale = 0.0L;
    for (const auto& c : p) {
        scale = std::max(scale, std::abs(c));
    }
    if (scale == 0.0L) {
        throw NumericalError("poly::roots: zero polynomial");
    }
    while (!p.empty() && std::abs(p.back()) <= 1e-14L * scale) {
        p.pop_back();
    }
    std::vector<Complex> out;
    std::size_t lead_zeros = 0;
    while (lead_zeros < p.size() && p[lead_zeros] == ComplexL(0.0L)) {
        ++lead_zeros;
    }
    out.assign(lead_zeros, Complex(0.0));
    p.erase(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(lead_zeros));
    const std::size_t deg = p.empty() ? 0 : p.size() - 1;
    if (deg == 0) {
        return out;
    }
    if (deg == 1) {
        const ComplexL r = -p[0] / p[1];
        out.emplace_back(static_cast<double>(r.real()), static_cast<double>(r.imag()));
        return out;
    }
    const auto n = static_cast<Eigen::Index>(deg);
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    const ComplexL lead = p[deg];
    for (Eigen::Index k = 0; k < n; ++k) {
        const ComplexL c = -p[static_cast<std::size_t>(k)] / lead;
        comp(0, n - 1 - k) = Complex(static_cast<double>(c.real()), static_cast<double>(c.imag()));
        if (k + 1 < n) {
            comp(k + 1, k) = 1.0;
        }
    }
    balance(comp);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("poly::roots: companion eigenvalue iteration did not converge");
    }
    for (Eigen::Index k = 0; k < n; ++k) {
        Complex r = solver.eigenvalues()(k);
        if (!std::isfinite(r.real()) || !std::isfinite(r.imag())) {
            throw NumericalError("poly::roots: non-finite eigenvalue");
        }
        polish(p, r);
        out.push_back(r);
    }
    return out;
}

std::vector<RootCluster> cluster(std::span<const Complex> roots, double tol) {
    const std::size_t n = roots.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(roots[i] - roots[j]) <= tol) {
                parent[find(i)] = find(j);
            }
        }
    }
    std::vector<RootCluster> out;
    std::vector<std::size_t> slot(n, n);
    std::vector<Complex> sums;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = find(i);
        if (slot[r] == n) {
            slot[r] = out.size();
            out.push_back({Complex(0.0), 0});
            sums.emplace_back(0.0);
        }
        sums[slot[r]] += roots[i];
        out[slot[r]].multiplicity += 1;
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k].center = sums[k] / static_cast<double>(out[k].multiplicity);
    }
    std::sort(out.begin(), out.end(), [](const RootCluster& a, const RootCluster& b) {
        if (a.center.real() != b.center.real()) {
            return a.center.real() < b.center.real();
        }
        return a.center.imag() < b.center.imag();
    });
    return out;
}

void refine_clusters(std::span<const ComplexL> p, std::vector<RootCluster>& clusters, double tol) {
    for (auto& c : clusters) {
        if (c.multiplicity < 2) {
            continue;
        }
        CoeffsL d(p.begin(), p.end());
        for (int k = 1; k < c.multiplicity; ++k) {
            d = derivative(d);
        }
        const CoeffsL dd = derivative(d);
        const ComplexL start(c.center.real(), c.center.imag());
        ComplexL z = start;
        long double best = std::abs(evaluate(d, z));
        for (int it = 0; it < 20 && best > 0.0L; ++it) {
            const ComplexL slope = evaluate(dd, z);
            if (std::abs(slope) == 0.0L) {
                break;
            }
            const ComplexL next = z - evaluate(d, z) / slope;
            const long double val = std::abs(evaluate(d, next));
            if (!(val < best)) {
                break;
            }
            best = val;
            z = next;
        }
        if (std::abs(z - start) <= static_cast<long double>(tol)) {
            c.center = Complex(static_cast<double>(z.real()), static_cast<double>(z.imag()));
        }
    }
}

void merge_numerical_multiples(std::span<const ComplexL> p, std::vector<RootCluster>& clusters,
                               double search_radius) {
    const std::size_t n = clusters.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
        while (parent[i] != i) {
            i = parent[i] = parent[parent[i]];
        }
        return i;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(clusters[i].center - clusters[j].center) <= search_radius) {
                parent[find(i)] = find(j);
            }
        }
    }
    std::vector<std::vector<RootCluster>> groups(n);
    for (std::size_t i = 0; i < n; ++i) {
        groups[find(i)].push_back(clusters[i]);
    }

    std::vector<RootCluster> out;
    for (const auto& mine : groups) {
        if (mine.size() < 2) {
            out.insert(out.end(), mine.begin(), mine.end());
            continue;
        }
        int k = 0;
        Complex centroid = 0.0;
        for (const auto& m : mine) {
            k += m.multiplicity;
            centroid += static_cast<double>(m.multiplicity) * m.center;
        }
        std::vector<RootCluster> merged{{centroid / static_cast<double>(k), k}};
        refine_clusters(p, merged, search_radius);
        const ComplexL z(merged[0].center.real(), merged[0].center.imag());
        const CoeffsL t = taylor_at(p, z, static_cast<std::size_t>(k) + 1);
        long double scale = 0.0L;
        long double power = 1.0L;
        for (const auto& c : p) {
            scale += std::abs(c) * power;
            power *= std::max<long double>(1.0L, std::abs(z));
        }
        const long double lead = std::abs(t[static_cast<std::size_t>(k)]);
        // Radius over which double-precision noise in the data scatters a k-fold root.
        const double noise = std::numeric_limits<double>::epsilon() * static_cast<double>(scale);
        const double spread = lead > 0.0L ? std::pow(noise / static_cast<double>(lead), 1.0 / k)
                                          : std::numeric_limits<double>::infinity();
        double reach = 0.0;
        for (const auto& m : mine) {
            reach = std::max(reach, std::abs(m.center - merged[0].center));
        }
        if (reach <= 4.0 * spread) {
            out.push_back(merged[0]);
        } else {
            out.insert(out.end(), mine.begin(), mine.end());
        }
    }
    std::sort(out.begin(), out.end(), [](const RootCluster& a, const RootCluster& b) {
        return a.center.real() != b.center.real() ? a.center.real() < b.center.real()
                                                  : a.center.imag() < b.center.imag();
    });
    clusters = std::move(out);
}

}  // namespace mbp::poly
