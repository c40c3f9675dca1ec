#pragma once

// Eigenvalue-domain separability analysis: Haar-random eigenvector frames
// with a fixed eigenvalue grid, unitarily invariant eigenvalue measures,
// participation-ratio / spectral-bound functionals, and deterministic
// model-probability integrals over the eigenvalue simplex.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "sepfn/algebra.hpp"
#include "sepfn/estimate.hpp"
#include "sepfn/quadrature.hpp"
#include "sepfn/sampling.hpp"
#include "sepfn/sobol.hpp"
#include "sepfn/special.hpp"

namespace sepfn {

// ---------------------------------------------------------------------------
// State functionals on the eigenvalue simplex

struct StateFunctionals {
    double participation_ratio = 0.0;  // R = 1/sum(lambda^2), in [1,4]
    double s_value = 0.0;              // S = (3/2)(1 - 1/R)
    double vad = 0.0;                  // l1 - l3 - 2 sqrt(l2 l4), sorted desc
    bool in_pittenger_ball = false;    // all eigenvalues > 7/30
    bool in_separable_ball = false;    // R >= 3
};

inline void check_simplex(const std::array<double, 4>& lam) {
    double sum = 0.0;
    for (double l : lam) {
        if (l < -1e-12) throw std::invalid_argument("eigenvalues must be non-negative");
        sum += l;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("eigenvalues must sum to one");
}

inline StateFunctionals state_functionals(const std::array<double, 4>& lam) {
    check_simplex(lam);
    std::array<double, 4> s = lam;
    std::sort(s.begin(), s.end(), std::greater<double>());
    StateFunctionals f;
    const double purity = s[0] * s[0] + s[1] * s[1] + s[2] * s[2] + s[3] * s[3];
    f.participation_ratio = 1.0 / purity;
    f.s_value = 1.5 * (1.0 - purity);
    f.vad = s[0] - s[2] - 2.0 * std::sqrt(std::max(0.0, s[1] * s[3]));
    f.in_pittenger_ball = s[3] > 7.0 / 30.0;
    f.in_separable_ball = f.participation_ratio >= 3.0;
    return f;
}

// ---------------------------------------------------------------------------
// Eigenvalue measures

enum class EigenMetric { hs, bures, uniform };
enum class EigenRank { full, degenerate };

/// Unitarily invariant eigenvalue density (unnormalized). The degenerate
/// variant is the boundary (lambda4 = 0) limit: the Bures case drops the
/// divergent lambda4^{-1/2} factor.
inline double eigen_measure(const std::array<double, 4>& lam, EigenMetric metric, int beta,
                            EigenRank rank = EigenRank::full) {
    check_simplex(lam);
    if (metric == EigenMetric::uniform) return 1.0;
    if (metric == EigenMetric::bures && beta != 2)
        throw std::invalid_argument("eigen_measure: Bures measure is cataloged for beta=2 only");
    const int top = rank == EigenRank::full ? 4 : 3;
    if (rank == EigenRank::degenerate && std::abs(lam[3]) > 1e-12)
        throw std::invalid_argument("eigen_measure: degenerate rank requires lambda4 = 0");
    double v = 1.0;
    if (metric == EigenMetric::hs) {
        for (int i = 0; i < top; ++i)
            for (int j = i + 1; j < top; ++j)
                v *= std::pow(std::abs(lam[i] - lam[j]), beta);
        if (rank == EigenRank::degenerate)
            v *= std::pow(lam[0] * lam[1] * lam[2], beta);
        return v;
    }
    // Bures
    for (int i = 0; i < top; ++i)
        for (int j = i + 1; j < top; ++j) {
            const double d = lam[i] - lam[j];
            v *= d * d / (lam[i] + lam[j]);
        }
    if (rank == EigenRank::full)
        return v / std::sqrt(lam[0] * lam[1] * lam[2] * lam[3]);
    return v * std::sqrt(lam[0] * lam[1] * lam[2]);
}

// ---------------------------------------------------------------------------
// Haar-random unitaries

/// Haar-distributed unitary via QR of an i.i.d. complex-Gaussian matrix with
/// the phase correction that makes the factorization unique.
inline Eigen::MatrixXcd haar_unitary(std::mt19937_64& rng, int n = 4) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd r = qr.matrixQR();
    for (int j = 0; j < n; ++j) {
        const Complex d = r(j, j);
        const double a = std::abs(d);
        q.col(j) *= a > 0.0 ? d / a : Complex(1.0, 0.0);
    }
    return q;
}

namespace detail {

/// Deterministic unitary #index of a keyed family (used by eigen_scan so
/// results are independent of worker count and replayable).
inline Eigen::Matrix4cd haar_unitary_at(const LdsStream& stream, std::uint64_t index) {
    double u[32];
    stream.point_at(index, u);
    Eigen::Matrix4cd g;
    for (int k = 0; k < 16; ++k) {
        // Box-Muller; clamp away from 0 to keep the log finite.
        const double r = std::sqrt(-2.0 * std::log(std::max(u[2 * k], 1e-300)));
        const double t = 2.0 * kPi * u[2 * k + 1];
        g(k / 4, k % 4) = Complex(r * std::cos(t), r * std::sin(t));
    }
    Eigen::HouseholderQR<Eigen::Matrix4cd> qr(g);
    Eigen::Matrix4cd q = qr.householderQ() * Eigen::Matrix4cd::Identity();
    Eigen::Matrix4cd r = qr.matrixQR();
    for (int j = 0; j < 4; ++j) {
        const Complex d = r(j, j);
        const double a = std::abs(d);
        q.col(j) *= a > 0.0 ? d / a : Complex(1.0, 0.0);
    }
    return q;
}

/// PSD test for a trace-one Hermitian 4x4 via the sign pattern of the
/// characteristic polynomial (elementary symmetric functions from Newton's
/// identities); real spectrum is non-negative iff e1..e4 are.
inline bool psd_trace_one(const Eigen::Matrix4cd& a, double tol = 1e-11) {
    const Eigen::Matrix4cd b = a * a;
    const double p1 = a.trace().real();
    const double p2 = b.trace().real();
    const double p3 = (b.cwiseProduct(a.conjugate())).sum().real();
    const double p4 = b.squaredNorm();
    const double e1 = p1;
    const double e2 = (e1 * p1 - p2) / 2.0;
    const double e3 = (e2 * p1 - e1 * p2 + p3) / 3.0;
    const double e4 = (e3 * p1 - e2 * p2 + e1 * p3 - p4) / 4.0;
    return e1 >= -tol && e2 >= -tol && e3 >= -tol && e4 >= -tol;
}

}  // namespace detail

/// PPT verdict for U diag(lam) U^dagger (two-qubit block transpose).
inline bool eigen_separable(const Eigen::Matrix4cd& u, const std::array<double, 4>& lam) {
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    for (int i = 0; i < 4; ++i)
        rho += lam[i] * (u.col(i) * u.col(i).adjoint());
    const Eigen::Matrix4cd pt = partial_transpose(rho, 2);
    return detail::psd_trace_one(pt);
}

// ---------------------------------------------------------------------------
// Eigenvalue grid and the Haar scan

struct EigenGridPoint {
    std::array<int, 3> idx{};       // numerators of the free eigenvalues (over m)
    std::array<double, 4> lam{};    // full eigenvalue 4-vector
    long long count = 0;            // separable verdicts accumulated
};

struct EigenGrid {
    int m = 0;
    EigenRank rank = EigenRank::full;
    long long n_unitaries = 0;
    std::vector<EigenGridPoint> points;

    double fraction(std::size_t i) const {
        return n_unitaries > 0 ? static_cast<double>(points[i].count) / n_unitaries : 0.0;
    }
};

/// All eigenvalue triples (k/m) with positive entries summing to at most 1
/// (trivariate), or pairs with lambda4 = 0 (bivariate).
inline EigenGrid make_eigen_grid(int m, EigenRank rank) {
    if (m < 3) throw std::invalid_argument("make_eigen_grid: m must be at least 3");
    EigenGrid g;
    g.m = m;
    g.rank = rank;
    const double h = 1.0 / m;
    if (rank == EigenRank::full) {
        for (int i = 1; i <= m; ++i)
            for (int j = 1; i + j <= m; ++j)
                for (int k = 1; i + j + k <= m; ++k) {
                    EigenGridPoint p;
                    p.idx = {i, j, k};
                    p.lam = {i * h, j * h, k * h, 1.0 - (i + j + k) * h};
                    g.points.push_back(p);
                }
    } else {
        for (int i = 1; i <= m; ++i)
            for (int j = 1; i + j <= m; ++j) {
                EigenGridPoint p;
                p.idx = {i, j, 0};
                p.lam = {i * h, j * h, 1.0 - (i + j) * h, 0.0};
                g.points.push_back(p);
            }
    }
    return g;
}

/// For each of n_unitaries Haar frames, test PPT of U diag(lam) U^dagger at
/// every grid point and count separable verdicts. Deterministic in (seed);
/// independent of worker count (per-index unitaries, integer-count merge).
inline EigenGrid eigen_scan(int m, long long n_unitaries, EigenRank rank,
                            std::uint64_t seed = 20250825, int workers = 1) {
    if (n_unitaries < 1000)
        throw std::invalid_argument("eigen_scan: at least 1000 unitaries required");
    if (workers < 1) workers = 1;
    EigenGrid grid = make_eigen_grid(m, rank);
    const std::size_t npts = grid.points.size();
    const LdsStream stream(StreamKind::pseudo_random, 32, seed);

    auto run_range = [&](long long lo, long long hi, std::vector<long long>& counts) {
        for (long long uidx = lo; uidx < hi; ++uidx) {
            const Eigen::Matrix4cd u = detail::haar_unitary_at(stream, uidx);
            // Partial transposes of the four eigenprojectors; PT is linear,
            // so PT(rho) = sum_i lambda_i M_i.
            std::array<Eigen::Matrix4cd, 4> ms;
            for (int i = 0; i < 4; ++i)
                ms[i] = partial_transpose(Eigen::Matrix4cd(u.col(i) * u.col(i).adjoint()), 2);
            for (std::size_t p = 0; p < npts; ++p) {
                const std::array<double, 4>& lam = grid.points[p].lam;
                Eigen::Matrix4cd pt = lam[0] * ms[0] + lam[1] * ms[1];
                pt += lam[2] * ms[2];
                if (lam[3] != 0.0) pt += lam[3] * ms[3];
                if (detail::psd_trace_one(pt)) ++counts[p];
            }
        }
    };

    std::vector<std::vector<long long>> partial(workers, std::vector<long long>(npts, 0));
    std::vector<std::thread> pool;
    const long long chunk = (n_unitaries + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const long long lo = w * chunk;
        const long long hi = std::min<long long>(n_unitaries, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(run_range, lo, hi, std::ref(partial[w]));
    }
    for (std::thread& t : pool) t.join();
    for (const std::vector<long long>& c : partial)
        for (std::size_t p = 0; p < npts; ++p) grid.points[p].count += c[p];
    grid.n_unitaries = n_unitaries;
    return grid;
}

/// CSV: `l1,l2,l3,sep_fraction,n_unitaries` (trivariate) or
/// `l1,l2,sep_fraction,n_unitaries` (bivariate; l3 implied, l4 = 0).
inline void write_grid_csv(const EigenGrid& g, std::ostream& os) {
    const bool tri = g.rank == EigenRank::full;
    os << (tri ? "l1,l2,l3,sep_fraction,n_unitaries\n" : "l1,l2,sep_fraction,n_unitaries\n");
    for (std::size_t i = 0; i < g.points.size(); ++i) {
        const EigenGridPoint& p = g.points[i];
        os << p.lam[0] << ',' << p.lam[1];
        if (tri) os << ',' << p.lam[2];
        os << ',' << g.fraction(i) << ',' << g.n_unitaries << '\n';
    }
}

// ---------------------------------------------------------------------------
// Interpolation of the scanned separability function

namespace detail {

class GridInterpolant {
  public:
    explicit GridInterpolant(const EigenGrid& g) : g_(g), m_(g.m) {
        const int stride = m_ + 1;
        index_.assign(static_cast<std::size_t>(stride) * stride * stride, -1);
        for (std::size_t p = 0; p < g.points.size(); ++p) {
            const auto& id = g.points[p].idx;
            index_[(static_cast<std::size_t>(id[0]) * stride + id[1]) * stride + id[2]] =
                static_cast<long>(p);
        }
    }

    /// Value at the lattice node with eigenvalue numerators id (summing to m
    /// up to repair). The scanned fraction is symmetric in all four
    /// eigenvalues, so the lookup key is the sorted tuple with the catalog's
    /// convention (first three slots >= 1, implicit slot last). Invalid
    /// corner tuples (negative entries from cells straddling a boundary, or
    /// multiple zeros on a measure-zero edge) are repaired by moving units
    /// from the largest entries.
    double node(std::array<int, 4> id) const {
        int sum = 0;
        for (int& v : id) {
            v = std::max(v, 0);
            sum += v;
        }
        while (sum != m_) {  // restore the simplex sum after clamping
            int* ext = &id[0];
            for (int t = 1; t < 4; ++t)
                if (sum > m_ ? id[t] > *ext : id[t] < *ext) ext = &id[t];
            *ext += sum > m_ ? -1 : 1;
            sum += sum > m_ ? -1 : 1;
        }
        std::sort(id.begin(), id.end(), std::greater<int>());
        const int free_slots = g_.rank == EigenRank::full ? 3 : 2;
        while (id[free_slots - 1] == 0) {  // too many zeros for the catalog
            --id[0];
            for (int t = free_slots - 1; t >= 0; --t)
                if (id[t] == 0) {
                    id[t] = 1;
                    break;
                }
            std::sort(id.begin(), id.end(), std::greater<int>());
        }
        const int stride = m_ + 1;
        const long p = index_[(static_cast<std::size_t>(id[0]) * stride + id[1]) * stride +
                              (g_.rank == EigenRank::full ? id[2] : 0)];
        return p >= 0 ? g_.fraction(static_cast<std::size_t>(p)) : 0.0;
    }

    /// Tensor-quadratic interpolation in sorted cumulative coordinates
    /// t_k = lambda_1 + ... + lambda_k (descending sort). This makes the
    /// smallest-eigenvalue boundary face axis-aligned, which is where the
    /// singular Bures weight concentrates; cells straddling the remaining
    /// (level-repulsion-suppressed) boundaries fall back to node repair.
    /// Values are interpolated on the -log(1 - S) scale: the non-separable
    /// fraction decays near-exponentially across the boundary layer, which
    /// low-order linear-in-S rules systematically underestimate at this
    /// grid spacing.
    double operator()(double l1, double l2, double l3) const {
        std::array<double, 4> s{l1, l2, l3, 0.0};
        if (g_.rank == EigenRank::full) s[3] = 1.0 - l1 - l2 - l3;
        for (double& v : s) v = std::clamp(v, 0.0, 1.0);
        std::sort(s.begin(), s.end(), std::greater<double>());
        const double x = s[0] * m_, y = (s[0] + s[1]) * m_, z = (s[0] + s[1] + s[2]) * m_;
        const int bx = std::clamp(static_cast<int>(std::lround(x)) - 1, 0, m_ - 2);
        const int by = std::clamp(static_cast<int>(std::lround(y)) - 1, 0, m_ - 2);
        double wx[3], wy[3], wz[3];
        lagrange3(x, bx, wx);
        lagrange3(y, by, wy);
        double v = 0.0;
        if (g_.rank == EigenRank::full) {
            const int bz = std::clamp(static_cast<int>(std::lround(z)) - 1, 0, m_ - 2);
            lagrange3(z, bz, wz);
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    for (int c = 0; c < 3; ++c) {
                        const int t1 = bx + a, t2 = by + b, t3 = bz + c;
                        v += wx[a] * wy[b] * wz[c] *
                             log_scale(node({t1, t2 - t1, t3 - t2, m_ - t3}));
                    }
        } else {
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) {
                    const int t1 = bx + a, t2 = by + b;
                    v += wx[a] * wy[b] * log_scale(node({t1, t2 - t1, m_ - t2, 0}));
                }
        }
        return std::clamp(-std::expm1(-v), 0.0, 1.0);
    }

  private:
    static void lagrange3(double x, int base, double* w) {
        const double d0 = x - base, d1 = x - base - 1, d2 = x - base - 2;
        w[0] = d1 * d2 / 2.0;
        w[1] = -d0 * d2;
        w[2] = d0 * d1 / 2.0;
    }

    /// -log(1 - S), capped where S = 1 at the count resolution of the scan.
    double log_scale(double s) const {
        const double cap = 1.0 - 0.5 / static_cast<double>(std::max<long long>(
                                     1, g_.n_unitaries));
        return -std::log1p(-std::min(s, cap));
    }

    const EigenGrid& g_;
    int m_;
    std::vector<long> index_;
};

/// Uniform point on the d-simplex (d+1 coordinates) from d uniforms, via
/// the spacings of the sorted sample.
inline void simplex_point(const double* u, int d, double* lam) {
    std::array<double, 4> s{};
    for (int i = 0; i < d; ++i) s[i] = u[i];
    std::sort(s.begin(), s.begin() + d);
    double prev = 0.0;
    for (int i = 0; i < d; ++i) {
        lam[i] = s[i] - prev;
        prev = s[i];
    }
    lam[d] = 1.0 - prev;
}

/// Dirichlet(1/2,...,1/2) point on the 3-simplex via stick breaking; its
/// density absorbs the (prod lambda)^{-1/2} singularity of the full-rank
/// Bures eigenvalue measure, so sampling from it with the compensating
/// weight sqrt(prod lambda) keeps the ratio-estimator variance finite.
inline void dirichlet_half_point(const double* u, double* lam) {
    double rest = 1.0;
    lam[0] = rest * beta_quantile(0.5, 1.5, u[0]);
    rest -= lam[0];
    lam[1] = rest * beta_quantile(0.5, 1.0, u[1]);
    rest -= lam[1];
    lam[2] = rest * beta_quantile(0.5, 0.5, u[2]);
    lam[3] = rest - lam[2];
}

}  // namespace detail

/// Ratio integral of the interpolated separability function against an
/// eigenvalue measure: quasi-Monte Carlo over the eigenvalue simplex with a
/// shared point set, so the normalization cancels exactly.
inline EstimateSummary probability_from_table(const EigenGrid& grid, EigenMetric metric,
                                              int beta, long long n_points = 400000) {
    if (grid.points.empty() || grid.n_unitaries <= 0)
        throw std::invalid_argument("probability_from_table: empty or unscanned grid");
    const detail::GridInterpolant interp(grid);
    const bool tri = grid.rank == EigenRank::full;
    const int d = tri ? 3 : 2;
    // The full-rank Bures density has a (prod lambda)^{-1/2} singularity that
    // makes uniform-weight ratio estimates infinite-variance; sample from
    // Dirichlet(1/2) instead, which cancels that factor exactly.
    const bool importance = metric == EigenMetric::bures && tri;
    LdsStream stream(StreamKind::low_discrepancy, d, 0x5e9f17ULL);
    double u[3];
    std::array<double, 4> lam{};
    // 16 consecutive blocks supply a dispersion estimate for the ratio.
    constexpr int kBlocks = 16;
    std::array<double, kBlocks> num{}, den{};
    const long long per = n_points / kBlocks;
    for (int b = 0; b < kBlocks; ++b) {
        for (long long i = 0; i < per; ++i) {
            stream.next_point(u);
            if (importance)
                detail::dirichlet_half_point(u, lam.data());
            else
                detail::simplex_point(u, d, lam.data());
            if (!tri) {
                lam[3] = 0.0;
            }
            double w = eigen_measure(lam, metric, beta,
                                     tri ? EigenRank::full : EigenRank::degenerate);
            if (importance) w *= std::sqrt(lam[0] * lam[1] * lam[2] * lam[3]);
            num[b] += interp(lam[0], lam[1], lam[2]) * w;
            den[b] += w;
        }
    }
    double tot_num = 0.0, tot_den = 0.0;
    for (int b = 0; b < kBlocks; ++b) {
        tot_num += num[b];
        tot_den += den[b];
    }
    EstimateSummary est;
    est.label = tri ? "eigen-probability" : "eigen-probability-degenerate";
    est.n_samples = per * kBlocks;
    est.n_feasible = est.n_samples;
    est.value = tot_num / tot_den;
    double var = 0.0;
    for (int b = 0; b < kBlocks; ++b) {
        const double r = num[b] / den[b] - est.value;
        var += r * r;
    }
    est.std_error = std::sqrt(var / (kBlocks * (kBlocks - 1.0)));
    return est;
}

// ---------------------------------------------------------------------------
// Region probabilities under eigenvalue measures

enum class EigenRegion { separable_ball, vad_negative, pittenger_ball };

namespace detail {

/// Nested quadrature over the sorted sector l1 >= l2 >= l3 >= l4 of the
/// eigenvalue simplex; `l3_cap(l1, l2)` may lower the inner upper limit
/// (used to carve out the VAD < 0 region, whose boundary is monotone in l3).
template <typename W, typename Cap>
double sector_integral(const W& w, const Cap& l3_cap, double rel_tol) {
    auto outer = [&](double l1) {
        const double lo2 = (1.0 - l1) / 3.0;
        const double hi2 = std::min(l1, 1.0 - l1);
        if (hi2 <= lo2) return 0.0;
        auto mid = [&](double l2) {
            const double rest = 1.0 - l1 - l2;
            const double lo3 = rest / 2.0;
            const double hi3 = std::min({l2, rest, l3_cap(l1, l2)});
            if (hi3 <= lo3) return 0.0;
            auto inner = [&](double l3) {
                return w(std::array<double, 4>{l1, l2, l3, rest - l3});
            };
            return integrate_1d(inner, lo3, hi3, rel_tol * 0.02, 1e-300, 400000).value;
        };
        return integrate_1d(mid, lo2, hi2, rel_tol * 0.1, 1e-300, 400000).value;
    };
    return integrate_1d(outer, 0.25, 1.0, rel_tol, 1e-300, 400000).value;
}

}  // namespace detail

/// Probability of a certified-separability region of the eigenvalue simplex
/// under a (full-rank) eigenvalue measure, by quadrature adapted to the
/// region geometry.
inline double region_probability(EigenRegion region, EigenMetric metric, int beta) {
    auto w3 = [&](const std::vector<double>& x) {
        const std::array<double, 4> lam{x[0], x[1], x[2], 1.0 - x[0] - x[1] - x[2]};
        return eigen_measure(lam, metric, beta);
    };
    const double denom = metric == EigenMetric::uniform
                             ? 1.0 / 6.0
                             : integrate_simplex(w3, 3, 1e-9).value;

    if (region == EigenRegion::separable_ball) {
        // R >= 3 is the inscribed ball of radius 1/(2 sqrt 3) about the fully
        // mixed state; integrate in spherical coordinates of the trace-one
        // hyperplane (orthonormal basis), where the region has no kink.
        static const double b1[4] = {1 / std::sqrt(2.0), -1 / std::sqrt(2.0), 0, 0};
        static const double b2[4] = {1 / std::sqrt(6.0), 1 / std::sqrt(6.0),
                                     -2 / std::sqrt(6.0), 0};
        static const double b3[4] = {1 / std::sqrt(12.0), 1 / std::sqrt(12.0),
                                     1 / std::sqrt(12.0), -3 / std::sqrt(12.0)};
        const double r0 = 1.0 / (2.0 * std::sqrt(3.0));
        auto f = [&](double r, double th, double ph) {
            const double sx = std::sin(th) * std::cos(ph), sy = std::sin(th) * std::sin(ph),
                         cz = std::cos(th);
            std::array<double, 4> lam;
            for (int i = 0; i < 4; ++i)
                lam[i] = 0.25 + r * (sx * b1[i] + sy * b2[i] + cz * b3[i]);
            return eigen_measure(lam, metric, beta) * r * r * std::sin(th);
        };
        const double ball =
            integrate_3d(f, 0.0, r0, [](double) { return 0.0; },
                         [](double) { return kPi; }, [](double, double) { return 0.0; },
                         [](double, double) { return 2.0 * kPi; }, 1e-8)
                .value;
        // Intrinsic hyperplane volume is twice the (l1,l2,l3)-coordinate
        // volume used for the denominator.
        return 0.5 * ball / denom;
    }

    if (region == EigenRegion::pittenger_ball) {
        // Sub-simplex with every eigenvalue above 7/30; affine map onto the
        // unit simplex with scale 1/15.
        const double shift = 7.0 / 30.0, scale = 1.0 / 15.0;
        auto f = [&](const std::vector<double>& x) {
            const std::array<double, 4> lam{
                shift + scale * x[0], shift + scale * x[1], shift + scale * x[2],
                shift + scale * (1.0 - x[0] - x[1] - x[2])};
            return eigen_measure(lam, metric, beta);
        };
        const double num =
            std::pow(scale, 3) * integrate_simplex(f, 3, 1e-8).value;
        return num / denom;
    }

    // VAD < 0: in the sorted sector, VAD is increasing in l3 (at fixed
    // l1, l2 with l4 = rest - l3), so the region is l3 below the root of
    // VAD = 0. The measure is symmetric, so the sector ratio equals the
    // full ratio.
    auto w = [&](const std::array<double, 4>& lam) {
        return eigen_measure(lam, metric, beta);
    };
    auto no_cap = [](double, double) { return 1.0; };
    auto vad_cap = [](double l1, double l2) {
        const double rest = 1.0 - l1 - l2;
        auto g = [&](double l3) {
            return l1 - l3 - 2.0 * std::sqrt(std::max(0.0, l2 * (rest - l3)));
        };
        double lo = rest / 2.0, hi = std::min(l2, rest);
        if (g(lo) >= 0.0) return 0.0;  // VAD >= 0 on the whole range
        if (g(hi) <= 0.0) return hi;   // VAD < 0 on the whole range
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            (g(mid) < 0.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    const double num = detail::sector_integral(w, vad_cap, 1e-7);
    const double den = detail::sector_integral(w, no_cap, 1e-8);
    return num / den;
}

// ---------------------------------------------------------------------------
// Deterministic model probabilities and power fits

enum class EigenModel { r_power, vad_power, beta_s2, beta_vad2 };

namespace detail {

/// Base (beta = 1) model value in [0,1]; equals 1 wherever the underlying
/// bound certifies separability (mesa/plateau clamping convention).
inline double model_value(EigenModel model, double exponent, const StateFunctionals& f) {
    switch (model) {
        case EigenModel::r_power:
            return f.in_separable_ball
                       ? 1.0
                       : std::min(1.0, std::pow(f.participation_ratio / 3.0, exponent));
        case EigenModel::vad_power:
            return f.vad <= 0.0 ? 1.0 : std::pow(std::max(0.0, 1.0 - f.vad), exponent);
        case EigenModel::beta_s2: {
            if (f.in_separable_ball) return 1.0;
            const double x = std::clamp(f.s_value, 0.0, 1.0);
            return reg_inc_beta(x * x, 58.0, 22.0);
        }
        default: {
            if (f.vad <= 0.0) return 1.0;
            const double x = std::clamp(1.0 - f.vad, 0.0, 1.0);
            return reg_inc_beta(x * x, 24.0, 28.0);
        }
    }
}

}  // namespace detail

/// Probability of separability predicted by a model separability function,
/// integrated against the eigenvalue measure (shared quasi-Monte Carlo
/// points; normalization cancels). The fixed-shape beta-function models are
/// the beta = 1 functions and are raised to the Dyson power beta; the power
/// families carry their beta dependence in the exponent itself.
inline double model_probability(EigenModel model, double exponent, EigenMetric metric,
                                int beta, EigenRank rank = EigenRank::full,
                                long long n_points = 400000) {
    if (beta != 1 && beta != 2 && beta != 4)
        throw std::invalid_argument("model_probability: beta must be 1, 2 or 4");
    const bool tri = rank == EigenRank::full;
    const int d = tri ? 3 : 2;
    const bool importance = metric == EigenMetric::bures && tri;
    LdsStream stream(StreamKind::low_discrepancy, d, 0x9a2e31ULL);
    double u[3];
    std::array<double, 4> lam{};
    double num = 0.0, den = 0.0;
    for (long long i = 0; i < n_points; ++i) {
        stream.next_point(u);
        if (importance)
            detail::dirichlet_half_point(u, lam.data());
        else
            detail::simplex_point(u, d, lam.data());
        if (!tri) lam[3] = 0.0;
        double w = eigen_measure(lam, metric, beta, rank);
        if (importance) w *= std::sqrt(lam[0] * lam[1] * lam[2] * lam[3]);
        const double f = detail::model_value(model, exponent, state_functionals(lam));
        const bool dyson = model == EigenModel::beta_s2 || model == EigenModel::beta_vad2;
        num += (dyson ? std::pow(f, beta) : f) * w;
        den += w;
    }
    return num / den;
}

/// Exponent p for which the power-family model reproduces the target
/// probability; bisection to 1e-6 in probability. Larger p means a smaller
/// model, hence a smaller probability.
inline double solve_power(double target, EigenModel family, EigenMetric metric, int beta,
                          EigenRank rank = EigenRank::full) {
    if (family != EigenModel::r_power && family != EigenModel::vad_power)
        throw std::invalid_argument("solve_power: family must be a power model");
    if (!(target > 0.0 && target < 1.0))
        throw std::invalid_argument("solve_power: target must lie in (0,1)");
    const long long n = 200000;
    double lo = 0.05, hi = 24.0;
    double plo = model_probability(family, lo, metric, beta, rank, n);
    double phi = model_probability(family, hi, metric, beta, rank, n);
    if (target > plo || target < phi)
        throw std::invalid_argument("solve_power: target outside the attainable range");
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double pm = model_probability(family, mid, metric, beta, rank, n);
        if (std::abs(pm - target) <= 1e-6) return mid;
        (pm > target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace sepfn
