#pragma once

// Deterministic adaptive quadrature (Gauss-Kronrod 7-15) for 1-3 dimensional
// boxes and simplices, plus a quasi-Monte Carlo simplex integrator with batch
// error estimates for the 5-dimensional integrals.

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "sepfn/sobol.hpp"

namespace sepfn {

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    long long evaluations = 0;
    bool converged = false;
};

/// Thrown when the evaluation budget is exhausted; carries the partial
/// estimate reached so far.
class QuadratureError : public std::runtime_error {
  public:
    QuadratureError(const std::string& what, QuadratureResult partial)
        : std::runtime_error(what), partial_(partial) {}
    const QuadratureResult& partial() const { return partial_; }

  private:
    QuadratureResult partial_;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes/weights on [-1,1] (nonnegative nodes listed).
inline constexpr double kGK15Nodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kGK15WeightsK[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGK15WeightsG[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename F>
void gk15(const F& f, double a, double b, double& result, double& err, double& resabs) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double resk = 0.0, resg = 0.0, resa = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double x = h * kGK15Nodes[i];
        double fv, fa;
        if (i == 7) {
            fv = f(c);
            fa = std::abs(fv);
        } else {
            // Boundary-avoiding rule: roundoff may push a node onto an
            // endpoint where the integrand is singular; keep nodes interior.
            double xl = c - x, xr = c + x;
            if (!(xl > std::min(a, b))) xl = std::nextafter(std::min(a, b), c);
            if (!(xr < std::max(a, b))) xr = std::nextafter(std::max(a, b), c);
            const double f1 = f(xl), f2 = f(xr);
            fv = f1 + f2;
            fa = std::abs(f1) + std::abs(f2);
        }
        resk += kGK15WeightsK[i] * fv;
        resa += kGK15WeightsK[i] * fa;
        if (i % 2 == 1) resg += kGK15WeightsG[i / 2] * fv;  // odd indices are the Gauss-7 nodes
    }
    result = resk * h;
    resabs = resa * std::abs(h);
    const double diff = (resk - resg) * h;
    err = std::abs(diff);
    // Sharpened error estimate in the usual QUADPACK style.
    if (err != 0.0) {
        double scale = std::pow(200.0 * err / std::max(std::abs(result), 1e-300), 1.5);
        if (scale < 1.0) err = err * scale;
    }
}

struct Interval {
    double a, b, result, err, resabs;
    bool operator<(const Interval& o) const { return err < o.err; }
};

}  // namespace detail

/// Adaptive 1-D integration of f over [a,b] on a transformed axis: the
/// substitution x = a + (b-a) sin^2(pi t / 2) clusters nodes at both
/// endpoints, which integrates (1-x^2)^{-1/2}-type endpoint singularities
/// to full accuracy and leaves smooth integrands smooth.
template <typename F>
QuadratureResult integrate_1d(const F& f, double a, double b, double rel_tol = 1e-10,
                              double abs_floor = 1e-300, long long max_evals = 2000000) {
    QuadratureResult qr;
    if (a == b) {
        qr.converged = true;
        return qr;
    }
    const double lo = std::min(a, b), hi = std::max(a, b);
    constexpr double kHalfPi = 1.57079632679489661923;
    auto g = [&](double t) {
        const double s = std::sin(kHalfPi * t);
        double x = a + (b - a) * (s * s);
        if (!(x > lo)) x = std::nextafter(lo, hi);
        if (!(x < hi)) x = std::nextafter(hi, lo);
        const double jac = (b - a) * kHalfPi * std::sin(2.0 * kHalfPi * t);
        return f(x) * jac;
    };
    std::priority_queue<detail::Interval> heap;
    detail::Interval whole{0.0, 1.0, 0.0, 0.0, 0.0};
    detail::gk15(g, 0.0, 1.0, whole.result, whole.err, whole.resabs);
    qr.evaluations = 15;
    heap.push(whole);
    double total = whole.result, toterr = whole.err, totabs = whole.resabs;
    auto target = [&] {
        // Relative target, with a roundoff floor in terms of the L1 mass so
        // integrals whose value nearly cancels still terminate.
        return std::max({rel_tol * std::abs(total), 100.0 * 2.2e-16 * totabs, abs_floor});
    };
    while (toterr > target()) {
        if (qr.evaluations >= max_evals || heap.empty()) {
            qr.value = total;
            qr.abs_error_estimate = toterr;
            throw QuadratureError("integrate_1d: evaluation budget exhausted", qr);
        }
        detail::Interval top = heap.top();
        heap.pop();
        const double mid = 0.5 * (top.a + top.b);
        if (mid <= top.a || mid >= top.b) {
            // Machine resolution reached; accept this interval's estimate.
            toterr -= top.err;
            continue;
        }
        detail::Interval left{top.a, mid, 0.0, 0.0, 0.0}, right{mid, top.b, 0.0, 0.0, 0.0};
        detail::gk15(g, left.a, left.b, left.result, left.err, left.resabs);
        detail::gk15(g, right.a, right.b, right.result, right.err, right.resabs);
        qr.evaluations += 30;
        total += left.result + right.result - top.result;
        toterr += left.err + right.err - top.err;
        totabs += left.resabs + right.resabs - top.resabs;
        heap.push(left);
        heap.push(right);
    }
    qr.value = total;
    qr.abs_error_estimate = toterr;
    qr.converged = true;
    return qr;
}

/// Iterated adaptive integration over a 2-D region with y-limits depending
/// on x. Inner tolerance is tightened relative to the outer request.
template <typename F, typename Lo, typename Hi>
QuadratureResult integrate_2d(const F& f, double ax, double bx, const Lo& ylo, const Hi& yhi,
                              double rel_tol = 1e-9, long long max_inner = 200000,
                              double abs_floor = 1e-300) {
    QuadratureResult qr;
    long long evals = 0;
    auto outer = [&](double x) {
        auto inner = [&](double y) { return f(x, y); };
        QuadratureResult r =
            integrate_1d(inner, ylo(x), yhi(x), rel_tol * 0.1, abs_floor, max_inner);
        evals += r.evaluations;
        return r.value;
    };
    QuadratureResult r = integrate_1d(outer, ax, bx, rel_tol, abs_floor, 100000);
    qr.value = r.value;
    qr.abs_error_estimate = r.abs_error_estimate;
    qr.evaluations = evals;
    qr.converged = r.converged;
    return qr;
}

/// Iterated adaptive integration over a 3-D region with nested limits.
template <typename F, typename LoY, typename HiY, typename LoZ, typename HiZ>
QuadratureResult integrate_3d(const F& f, double ax, double bx, const LoY& ylo, const HiY& yhi,
                              const LoZ& zlo, const HiZ& zhi, double rel_tol = 1e-8,
                              double abs_floor = 1e-300) {
    QuadratureResult qr;
    long long evals = 0;
    auto outer = [&](double x) {
        auto mid = [&](double y) {
            auto inner = [&](double z) { return f(x, y, z); };
            QuadratureResult r =
                integrate_1d(inner, zlo(x, y), zhi(x, y), rel_tol * 0.02, abs_floor, 100000);
            evals += r.evaluations;
            return r.value;
        };
        QuadratureResult r = integrate_1d(mid, ylo(x), yhi(x), rel_tol * 0.1, abs_floor, 400000);
        evals += r.evaluations;
        return r.value;
    };
    QuadratureResult r = integrate_1d(outer, ax, bx, rel_tol, abs_floor, 100000);
    qr.value = r.value;
    qr.abs_error_estimate = r.abs_error_estimate;
    qr.evaluations = evals;
    qr.converged = r.converged;
    return qr;
}

/// Adaptive integration of f(x) over the probability simplex
/// {x_i >= 0, sum x_i <= 1} for dim 2 or 3, via nested limits.
template <typename F>
QuadratureResult integrate_simplex(const F& f, int dim, double rel_tol = 1e-9) {
    if (dim == 2) {
        return integrate_2d([&](double x, double y) { return f(std::vector<double>{x, y}); },
                            0.0, 1.0, [](double) { return 0.0; },
                            [](double x) { return 1.0 - x; }, rel_tol);
    }
    if (dim == 3) {
        return integrate_3d(
            [&](double x, double y, double z) { return f(std::vector<double>{x, y, z}); }, 0.0,
            1.0, [](double) { return 0.0; }, [](double x) { return 1.0 - x; },
            [](double, double) { return 0.0; },
            [](double x, double y) { return 1.0 - x - y; }, rel_tol);
    }
    throw std::invalid_argument("integrate_simplex: dim must be 2 or 3");
}

/// Map a point of [0,1)^d to the simplex {x_i >= 0, sum <= 1} by sorted
/// spacings (measure preserving).
inline void cube_to_simplex(const double* u, int dim, double* x) {
    double tmp[16];
    for (int i = 0; i < dim; ++i) tmp[i] = u[i];
    std::sort(tmp, tmp + dim);
    double prev = 0.0;
    for (int i = 0; i < dim; ++i) {
        x[i] = tmp[i] - prev;
        prev = tmp[i];
    }
}

inline double simplex_volume(int dim) {
    double v = 1.0;
    for (int i = 2; i <= dim; ++i) v /= i;
    return v;
}

/// Quasi-Monte Carlo integration over the probability simplex with a batch
/// variance error estimate (>= 16 batches).
template <typename F>
QuadratureResult integrate_simplex_qmc(const F& f, int dim, long long n_points,
                                       LdsStream& stream, int n_batches = 16) {
    if (dim < 1 || dim > 16) throw std::invalid_argument("integrate_simplex_qmc: bad dim");
    if (n_points < n_batches)
        throw std::invalid_argument("integrate_simplex_qmc: fewer points than batches");
    const double vol = simplex_volume(dim);
    std::vector<double> batch_means(n_batches, 0.0);
    std::vector<double> pt(dim), x(dim);
    long long done = 0;
    for (int b = 0; b < n_batches; ++b) {
        long long nb = n_points / n_batches + (b < n_points % n_batches ? 1 : 0);
        double sum = 0.0;
        for (long long k = 0; k < nb; ++k) {
            stream.next_point(pt.data());
            cube_to_simplex(pt.data(), dim, x.data());
            sum += f(x);
        }
        batch_means[b] = sum / static_cast<double>(nb);
        done += nb;
    }
    double mean = 0.0;
    for (double m : batch_means) mean += m;
    mean /= n_batches;
    double var = 0.0;
    for (double m : batch_means) var += (m - mean) * (m - mean);
    var /= (n_batches - 1.0) * n_batches;
    QuadratureResult qr;
    qr.value = mean * vol;
    qr.abs_error_estimate = std::sqrt(var) * vol;
    qr.evaluations = done;
    qr.converged = true;
    return qr;
}

}  // namespace sepfn
