#pragma once

// Samplers over the body of unit-diagonal PSD matrices ("feasible" W).
//
// Two designs with different jobs:
//  - make_bloore_spherical: per-entry hyperspherical proposal (radius and all
//    angular parameters uniform) for rejection runs. This is the only simple
//    proposal under which the quaternionic feasibility fraction is O(0.1); the
//    cube proposal of make_bloore has feasible fraction ~1e-8 for beta=4.
//  - feasible_sample: exact draw from the Lebesgue-uniform distribution on
//    the feasible body via the partial-correlation (Cholesky-row vine)
//    parameterization, so every sample is PSD by construction. Used where a
//    measure-faithful estimate is required (separability ratios at the
//    symmetric point, separability-function tables).
//
// The vine measure claim is pinned by a closed normalization:
// feasible_volume reproduces pi^12/7776000 for (d=4, beta=4) and 32 pi^2/27
// for (d=4, beta=1), the known Lebesgue volumes of those bodies.

#include <cmath>
#include <map>
#include <mutex>
#include <vector>

#include "sepfn/bloore.hpp"
#include "sepfn/special.hpp"

namespace sepfn {

/// Quantile of the angle density proportional to sin^2(theta) on [0, pi]
/// (the polar-angle marginal of the uniform measure on S^3).
inline double sin2_quantile(double u) {
    if (!(u > 0.0)) return 0.0;
    if (!(u < 1.0)) return kPi;
    double th = kPi * u;  // CDF is (th - sin th cos th)/pi; Newton with guards
    for (int it = 0; it < 60; ++it) {
        const double s = std::sin(th);
        const double f = (th - s * std::cos(th)) / kPi - u;
        const double d = 2.0 * s * s / kPi;
        double nt = d > 1e-12 ? th - f / d : (f > 0.0 ? 0.5 * th : 0.5 * (th + kPi));
        if (nt <= 0.0) nt = 0.5 * th;
        if (nt >= kPi) nt = 0.5 * (th + kPi);
        if (std::abs(nt - th) < 1e-13) return nt;
        th = nt;
    }
    return th;
}

/// Quantile of Beta(a, b): smallest x with I_x(a,b) = u. Bisection to a
/// bracketing interval, then guarded Newton polish; per-(a,b) coarse tables
/// are cached so bulk sampling costs a table lookup plus a few refinements.
inline double beta_quantile(double a, double b, double u) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("beta_quantile: a,b must be positive");
    if (!(u >= 0.0) || !(u <= 1.0))
        throw std::invalid_argument("beta_quantile: u must lie in [0,1]");
    if (u == 0.0) return 0.0;
    if (u == 1.0) return 1.0;

    constexpr int kTable = 1024;
    struct Key {
        double a, b;
        bool operator<(const Key& o) const { return a != o.a ? a < o.a : b < o.b; }
    };
    static std::map<Key, std::vector<double>> tables;
    static std::mutex mtx;
    const std::vector<double>* table = nullptr;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = tables.find({a, b});
        if (it != tables.end()) table = &it->second;
    }
    if (table == nullptr) {
        std::vector<double> t(kTable + 1);
        t[0] = 0.0;
        t[kTable] = 1.0;
        for (int i = 1; i < kTable; ++i) {
            const double ui = static_cast<double>(i) / kTable;
            double lo = 0.0, hi = 1.0;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                (reg_inc_beta(mid, a, b) > ui ? hi : lo) = mid;
            }
            t[i] = 0.5 * (lo + hi);
        }
        std::lock_guard<std::mutex> lock(mtx);
        table = &tables.emplace(Key{a, b}, std::move(t)).first->second;
    }

    const double pos = u * kTable;
    const int cell = std::min(static_cast<int>(pos), kTable - 1);
    double lo = (*table)[cell], hi = (*table)[cell + 1];
    const double frac = pos - cell;
    double x = lo + (hi - lo) * frac;
    const double ln_norm = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
    for (int it = 0; it < 60; ++it) {
        const double f = reg_inc_beta(x, a, b) - u;
        if (std::abs(f) < 1e-14) return x;
        (f > 0.0 ? hi : lo) = x;
        const double dens =
            std::exp(ln_norm + (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x));
        double nx = dens > 1e-300 ? x - f / dens : 0.5 * (lo + hi);
        if (!(nx > lo) || !(nx < hi)) nx = 0.5 * (lo + hi);
        if (std::abs(nx - x) < 1e-16 * std::max(1.0, std::abs(x))) return nx;
        x = nx;
    }
    return x;
}

namespace detail {

/// Entry with |q| <= r_max from `beta` uniforms: radius and angles all
/// uniform over their natural ranges (the hyperspherical proposal).
inline Quaternion spherical_entry(int beta, const double* u, double* jac_weight = nullptr) {
    const double r = u[0];
    double w = 1.0;
    Quaternion q;
    switch (beta) {
        case 1:
            q = Quaternion(2.0 * u[0] - 1.0);
            break;
        case 2: {
            const double ph = 2.0 * kPi * u[1];
            q = Quaternion(r * std::cos(ph), r * std::sin(ph), 0.0, 0.0);
            w = r;
            break;
        }
        case 3: {
            const double th = kPi * u[1], ph = 2.0 * kPi * u[2];
            const double s = std::sin(th);
            q = Quaternion(r * std::cos(th), r * s * std::cos(ph), r * s * std::sin(ph), 0.0);
            w = r * r * s;
            break;
        }
        default: {
            const double th1 = kPi * u[1], th2 = kPi * u[2], ph = 2.0 * kPi * u[3];
            const double s1 = std::sin(th1), s2 = std::sin(th2);
            q = Quaternion(r * std::cos(th1), r * s1 * std::cos(th2),
                           r * s1 * s2 * std::cos(ph), r * s1 * s2 * std::sin(ph));
            w = r * r * r * s1 * s1 * s2;
            break;
        }
    }
    if (jac_weight != nullptr) *jac_weight = w;
    return q;
}

/// Entry of norm < 1 with density proportional to (1 - |q|^2)^s, the level-s
/// partial-correlation law of the Lebesgue-uniform feasible body.
inline Quaternion vine_entry(int beta, double s, const double* u) {
    if (beta == 1) return Quaternion(2.0 * beta_quantile(s + 1.0, s + 1.0, u[0]) - 1.0);
    double r2;
    if (beta == 2)
        r2 = -std::expm1(std::log1p(-u[0]) / (s + 1.0));  // Beta(1, s+1) in closed form
    else
        r2 = beta_quantile(0.5 * beta, s + 1.0, u[0]);
    const double r = std::sqrt(r2);
    if (beta == 2) {
        const double ph = 2.0 * kPi * u[1];
        return Quaternion(r * std::cos(ph), r * std::sin(ph), 0.0, 0.0);
    }
    if (beta == 3) {
        const double ct = 1.0 - 2.0 * u[1];
        const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        const double ph = 2.0 * kPi * u[2];
        return Quaternion(r * ct, r * st * std::cos(ph), r * st * std::sin(ph), 0.0);
    }
    const double th1 = sin2_quantile(u[1]);
    const double th2 = std::acos(1.0 - 2.0 * u[2]);
    const double ph = 2.0 * kPi * u[3];
    const double s1 = std::sin(th1), s2 = std::sin(th2);
    return Quaternion(r * std::cos(th1), r * s1 * std::cos(th2), r * s1 * s2 * std::cos(ph),
                      r * s1 * s2 * std::sin(ph));
}

}  // namespace detail

/// Hyperspherical rejection proposal: consumes bloore_stream_dim(s, beta)
/// coordinates like make_bloore, but maps each entry through uniform
/// (radius, angles) instead of a componentwise cube. If `weight` is given it
/// receives the Lebesgue importance weight (product of radial jacobians).
inline BlooreSample make_bloore_spherical(System sys, int beta, const double* u,
                                          double* weight = nullptr) {
    if (beta < 1 || beta > 4)
        throw std::invalid_argument("make_bloore_spherical: beta must be 1..4");
    const int d = system_dim(sys);
    BlooreSample smp{sys, beta, QuatMatrix(d), false};
    for (int i = 0; i < d; ++i) smp.W(i, i) = Quaternion(1.0);
    double total_w = 1.0;
    int k = 0;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            double w = 1.0;
            const Quaternion q = detail::spherical_entry(beta, u + k, &w);
            k += beta;
            total_w *= w;
            smp.W(i, j) = q;
            smp.W(j, i) = q.conj();
        }
    if (weight != nullptr) *weight = total_w;
    return smp;
}

/// Exact Lebesgue-uniform draw from the feasible body, PSD by construction.
/// Consumes bloore_stream_dim(s, beta) coordinates. Construction: Cholesky
/// rows built from partial correlations z_{ij} (pair (i,j), i<j, conditioned
/// on 0..i-1) with |z|^2 ~ Beta(beta/2, beta(d-2-i)/2 + 1) and uniform
/// direction; W = L L^dagger has unit diagonal and the uniform law.
inline BlooreSample feasible_sample(System sys, int beta, const double* u) {
    if (beta < 1 || beta > 4)
        throw std::invalid_argument("feasible_sample: beta must be 1..4");
    const int d = system_dim(sys);
    std::vector<Quaternion> z(static_cast<size_t>(d) * d);
    int k = 0;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            const double s = 0.5 * beta * (d - 2 - i);
            z[static_cast<size_t>(j) * d + i] = detail::vine_entry(beta, s, u + k);
            k += beta;
        }
    std::vector<Quaternion> L(static_cast<size_t>(d) * d);
    for (int i = 0; i < d; ++i) {
        double prod = 1.0;
        for (int j = 0; j < i; ++j) {
            const Quaternion& zij = z[static_cast<size_t>(i) * d + j];
            L[static_cast<size_t>(i) * d + j] = zij * prod;
            prod *= std::sqrt(std::max(0.0, 1.0 - zij.norm2()));
        }
        L[static_cast<size_t>(i) * d + i] = Quaternion(prod);
    }
    BlooreSample smp{sys, beta, QuatMatrix(d), true};
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < i; ++j) {
            Quaternion sum(0.0);
            for (int m = 0; m <= j; ++m)
                sum = sum + L[static_cast<size_t>(i) * d + m] *
                                L[static_cast<size_t>(j) * d + m].conj();
            smp.W(i, j) = sum;
            smp.W(j, i) = sum.conj();
        }
        smp.W(i, i) = Quaternion(1.0);
    }
    return smp;
}

/// Closed-form Lebesgue volume of the feasible body: the product over vine
/// levels of the ball integrals of (1-|p|^2)^s,
///   integral = pi^{beta/2} Gamma(s+1) / Gamma(s + beta/2 + 1).
inline double feasible_volume(System sys, int beta) {
    const int d = system_dim(sys);
    double log_v = 0.0;
    for (int i = 0; i < d - 1; ++i) {  // level i has d-1-i edges
        const double s = 0.5 * beta * (d - 2 - i);
        const double edge = 0.5 * beta * std::log(kPi) + std::lgamma(s + 1.0) -
                            std::lgamma(s + 0.5 * beta + 1.0);
        log_v += (d - 1 - i) * edge;
    }
    return std::exp(log_v);
}

}  // namespace sepfn
