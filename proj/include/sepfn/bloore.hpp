#pragma once

// Bloore decomposition of density matrices: rho_ij = sqrt(rho_ii rho_jj) w_ij
// splits the diagonal (a simplex point) from a unit-diagonal correlation-like
// matrix W. Includes the canonical diagonals realizing the ratio variables mu
// and (nu1, nu2), PPT verdicts, and the jacobian function J_beta(mu).

#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "sepfn/algebra.hpp"
#include "sepfn/quadrature.hpp"

namespace sepfn {

enum class System { two_qubit, qubit_qutrit };

inline int system_dim(System s) { return s == System::two_qubit ? 4 : 6; }
inline int block_dim(System s) { return s == System::two_qubit ? 2 : 3; }
inline int offdiag_pairs(System s) { return s == System::two_qubit ? 6 : 15; }

/// Ratio variables for the canonical diagonal: mu for the two-qubit system,
/// (nu1, nu2) for qubit-qutrit, with eta = nu1*nu2.
struct RatioPoint {
    double mu = 1.0;
    double nu1 = 1.0;
    double nu2 = 1.0;
    double eta() const { return nu1 * nu2; }
};

/// Unit-diagonal Hermitian W over the field selected by beta (1 real,
/// 2 complex, 3 truncated quaternion, 4 quaternion), stored quaternionically.
struct BlooreSample {
    System system = System::two_qubit;
    int beta = 1;
    QuatMatrix W{4};
    bool feasible = false;
};

/// Number of stream coordinates consumed per sample.
inline int bloore_stream_dim(System s, int beta) { return offdiag_pairs(s) * beta; }

/// Build W from a point of [0,1)^{pairs*beta}; each real component is mapped
/// affinely to [-1,1]. Component order per (i<j) pair: a, b, c, d truncated
/// at beta (beta=3 zeroes the k-component).
inline BlooreSample make_bloore(System s, int beta, const double* u) {
    if (beta < 1 || beta > 4) throw std::invalid_argument("make_bloore: beta must be 1..4");
    const int d = system_dim(s);
    BlooreSample smp{s, beta, QuatMatrix(d), false};
    for (int i = 0; i < d; ++i) smp.W(i, i) = Quaternion(1.0);
    int k = 0;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            double comp[4] = {0.0, 0.0, 0.0, 0.0};
            for (int c = 0; c < beta; ++c) comp[c] = 2.0 * u[k++] - 1.0;
            Quaternion q(comp[0], comp[1], comp[2], comp[3]);
            smp.W(i, j) = q;
            smp.W(j, i) = q.conj();
        }
    return smp;
}

/// Complex view of a quaternionically-stored matrix whose j/k components
/// vanish (beta <= 2).
inline Eigen::MatrixXcd complex_view(const QuatMatrix& m) {
    const int d = m.dim();
    Eigen::MatrixXcd out(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out(i, j) = Complex(m(i, j).a, m(i, j).b);
    return out;
}

/// Feasibility = positive semidefiniteness of W (embedded for beta >= 3).
inline bool bloore_feasible(const BlooreSample& s, double tol = 1e-10) {
    if (s.beta <= 2) return psd_check(complex_view(s.W), tol).is_psd;
    return psd_check(quat_embed(s.W), tol).is_psd;
}

/// Fast path for scan loops (Cholesky, no eigenvalue diagnostics).
inline bool bloore_feasible_fast(const BlooreSample& s, double tol = 1e-10) {
    if (s.beta <= 2) return is_psd_fast(Eigen::MatrixXcd(complex_view(s.W)), tol);
    return is_psd_fast(quat_embed(s.W), tol);
}

/// Canonical diagonal realizing the ratio variables: two-qubit
/// (mu t, t, t, mu t) with t = 1/(2(1+mu)); qubit-qutrit
/// (nu1 t, t, t, t, t, nu2 t) with t = 1/(4 + nu1 + nu2).
inline std::vector<double> canonical_diag(System s, const RatioPoint& p) {
    if (s == System::two_qubit) {
        if (!(p.mu > 0.0)) throw std::invalid_argument("canonical_diag: mu must be positive");
        const double t = 1.0 / (2.0 * (1.0 + p.mu));
        return {p.mu * t, t, t, p.mu * t};
    }
    if (!(p.nu1 > 0.0) || !(p.nu2 > 0.0))
        throw std::invalid_argument("canonical_diag: nu1, nu2 must be positive");
    const double t = 1.0 / (4.0 + p.nu1 + p.nu2);
    return {p.nu1 * t, t, t, t, t, p.nu2 * t};
}

/// rho = D^{1/2} W D^{1/2}; PSD iff W is PSD (congruence), trace 1.
inline QuatMatrix assemble_state(const std::vector<double>& diag, const BlooreSample& s) {
    const int d = s.W.dim();
    if (static_cast<int>(diag.size()) != d)
        throw std::invalid_argument("assemble_state: dimension mismatch");
    double sum = 0.0;
    for (double v : diag) {
        if (!(v > 0.0)) throw std::invalid_argument("assemble_state: diagonal must be positive");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("assemble_state: diagonal must sum to 1");
    QuatMatrix rho(d);
    std::vector<double> r(d);
    for (int i = 0; i < d; ++i) r[i] = std::sqrt(diag[i]);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            // Diagonal entries are taken verbatim (W has unit diagonal);
            // sqrt(d_i)^2 would round away from d_i.
            rho(i, j) = i == j ? Quaternion(diag[i]) : s.W(i, j) * (r[i] * r[j]);
    return rho;
}

/// Peres-Horodecki verdict at the canonical diagonal for the given ratios.
inline bool ppt_verdict(const BlooreSample& s, const RatioPoint& p, double tol = 1e-10) {
    QuatMatrix rho = assemble_state(canonical_diag(s.system, p), s);
    QuatMatrix pt = partial_transpose(rho, block_dim(s.system));
    if (s.beta <= 2) return psd_check(complex_view(pt), tol).is_psd;
    return psd_check(quat_embed(pt), tol).is_psd;
}

/// Cholesky-based verdict for scan loops (no eigenvalue diagnostics).
inline bool ppt_verdict_fast(const BlooreSample& s, const RatioPoint& p, double tol = 1e-10) {
    QuatMatrix rho = assemble_state(canonical_diag(s.system, p), s);
    QuatMatrix pt = partial_transpose(rho, block_dim(s.system));
    if (s.beta <= 2) return is_psd_fast(Eigen::MatrixXcd(complex_view(pt)), tol);
    return is_psd_fast(quat_embed(pt), tol);
}

/// Jacobian of the diagonal-sector measure after eliminating rho33 in favor
/// of mu: J(mu) = integral over the feasible triangle of
/// (rho11 rho22 rho33 rho44)^{3 beta/2} |d rho33 / d mu|.
inline double jacobian_J(double mu, int beta, double rel_tol = 1e-8) {
    if (!(mu > 0.0)) throw std::invalid_argument("jacobian_J: mu must be positive");
    if (beta < 1 || beta > 4) throw std::invalid_argument("jacobian_J: beta must be 1..4");
    const double p = 1.5 * beta;
    auto f = [&](double r1, double r2) {
        const double rest = 1.0 - r1 - r2;
        if (rest <= 0.0 || r1 <= 0.0 || r2 <= 0.0) return 0.0;
        const double den = mu * mu * r2 + r1;
        const double r3 = r1 * rest / den;
        const double r4 = rest - r3;  // = mu^2 r2 rest / den
        if (r3 <= 0.0 || r4 <= 0.0) return 0.0;
        const double dr3 = 2.0 * mu * r2 * r3 / den;
        return std::pow(r1 * r2 * r3 * r4, p) * dr3;
    };
    // Scale estimate from the centroid keeps the inner quadrature from
    // chasing boundary layers many orders below the answer.
    const double scale = std::max(std::abs(f(1.0 / 3.0, 1.0 / 3.0)) * 0.5, 1e-290);
    auto qr = integrate_2d(f, 0.0, 1.0, [](double) { return 0.0; },
                           [](double x) { return 1.0 - x; }, rel_tol, 200000,
                           scale * rel_tol * 1e-3);
    return qr.value;
}

/// Read-mostly memo cache for jacobian_J (the R2 quadratures re-request
/// identical nodes across beta sweeps).
inline double jacobian_J_cached(double mu, int beta, double rel_tol = 1e-8) {
    struct Key {
        double mu, tol;
        int beta;
        bool operator<(const Key& o) const {
            if (mu != o.mu) return mu < o.mu;
            if (beta != o.beta) return beta < o.beta;
            return tol < o.tol;
        }
    };
    static std::map<Key, double> cache;
    static std::mutex mtx;
    const Key k{mu, rel_tol, beta};
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(k);
        if (it != cache.end()) return it->second;
    }
    const double v = jacobian_J(mu, beta, rel_tol);
    std::lock_guard<std::mutex> lock(mtx);
    cache.emplace(k, v);
    return v;
}

}  // namespace sepfn
