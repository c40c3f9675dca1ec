#pragma once

// Dense Hermitian matrices over the real, complex and quaternionic fields,
// the complex symplectic embedding of quaternionic matrices, block partial
// transposition and positive-semidefiniteness tests.

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

#include "sepfn/quaternion.hpp"

namespace sepfn {

using Complex = std::complex<double>;

/// Square matrix with quaternionic entries, row-major storage.
class QuatMatrix {
  public:
    explicit QuatMatrix(int n) : n_(n), a_(static_cast<size_t>(n) * n) {}

    int dim() const { return n_; }
    Quaternion& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
    const Quaternion& operator()(int i, int j) const {
        return a_[static_cast<size_t>(i) * n_ + j];
    }

    static QuatMatrix identity(int n) {
        QuatMatrix m(n);
        for (int i = 0; i < n; ++i) m(i, i) = Quaternion(1.0);
        return m;
    }

    bool is_hermitian(double tol = 1e-12) const {
        for (int i = 0; i < n_; ++i) {
            const Quaternion& d = (*this)(i, i);
            if (std::abs(d.b) > tol || std::abs(d.c) > tol || std::abs(d.d) > tol) return false;
            for (int j = i + 1; j < n_; ++j) {
                Quaternion r = (*this)(j, i) - (*this)(i, j).conj();
                if (r.norm2() > tol * tol) return false;
            }
        }
        return true;
    }

  private:
    int n_;
    std::vector<Quaternion> a_;
};

/// Embed an n x n quaternionic Hermitian matrix as a 2n x 2n complex
/// Hermitian matrix; the eigenvalue multiset doubles (Kramers pairs).
/// Entry a+bi+cj+dk maps to the block [[a+bi, c+di], [-c+di, a-bi]].
inline Eigen::MatrixXcd quat_embed(const QuatMatrix& q) {
    if (!q.is_hermitian())
        throw std::invalid_argument("quat_embed: input is not quaternion-Hermitian");
    const int n = q.dim();
    Eigen::MatrixXcd m(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Quaternion& e = q(i, j);
            m(2 * i, 2 * j) = Complex(e.a, e.b);
            m(2 * i, 2 * j + 1) = Complex(e.c, e.d);
            m(2 * i + 1, 2 * j) = Complex(-e.c, e.d);
            m(2 * i + 1, 2 * j + 1) = Complex(e.a, -e.b);
        }
    }
    return m;
}

/// Positional block transpose: the matrix is partitioned into square blocks
/// of shape block_dim x block_dim and each block is transposed in place.
/// Entries move without extra conjugation. For two-qubit states d=4,
/// block_dim=2; for qubit-qutrit d=6, block_dim=3 (transposing the four
/// 3x3 blocks).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> partial_transpose(
    const Eigen::MatrixBase<Derived>& m, int block_dim) {
    const int d = static_cast<int>(m.rows());
    if (m.rows() != m.cols() || block_dim <= 0 || d % block_dim != 0)
        throw std::invalid_argument("partial_transpose: dimension mismatch");
    Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(d, d);
    const int nb = d / block_dim;
    for (int bi = 0; bi < nb; ++bi)
        for (int bj = 0; bj < nb; ++bj)
            out.block(bi * block_dim, bj * block_dim, block_dim, block_dim) =
                m.block(bi * block_dim, bj * block_dim, block_dim, block_dim)
                    .transpose();
    return out;
}

inline QuatMatrix partial_transpose(const QuatMatrix& m, int block_dim) {
    const int d = m.dim();
    if (block_dim <= 0 || d % block_dim != 0)
        throw std::invalid_argument("partial_transpose: dimension mismatch");
    QuatMatrix out(d);
    const int nb = d / block_dim;
    for (int bi = 0; bi < nb; ++bi)
        for (int bj = 0; bj < nb; ++bj)
            for (int r = 0; r < block_dim; ++r)
                for (int c = 0; c < block_dim; ++c)
                    out(bi * block_dim + c, bj * block_dim + r) =
                        m(bi * block_dim + r, bj * block_dim + c);
    return out;
}

struct PsdResult {
    double min_eig = 0.0;
    bool is_psd = false;
};

inline double psd_scale(const Eigen::MatrixXcd& h) {
    double s = std::abs(h.trace().real()) / static_cast<double>(h.rows());
    return s > 0.0 ? s : 1.0;
}

/// Smallest eigenvalue and a PSD verdict: is_psd <=> min_eig >= -tol, with
/// tol relative to trace(H)/dim. Full symmetric eigen-decomposition so the
/// minimum eigenvalue is available for diagnostics near the boundary.
inline PsdResult psd_check(const Eigen::MatrixXcd& h, double tol = 1e-10) {
    if (!h.allFinite()) throw std::invalid_argument("psd_check: non-finite entries");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    PsdResult r;
    r.min_eig = es.eigenvalues().minCoeff();
    r.is_psd = r.min_eig >= -tol * psd_scale(h);
    return r;
}

inline PsdResult psd_check(const Eigen::MatrixXd& h, double tol = 1e-10) {
    return psd_check(Eigen::MatrixXcd(h.cast<Complex>()), tol);
}

/// Cholesky-based PSD verdict for hot loops (no min_eig diagnostic).
/// Agrees with psd_check away from the +-tol boundary band.
template <typename Mat>
bool is_psd_fast(const Mat& h, double tol = 1e-10) {
    const int n = static_cast<int>(h.rows());
    double scale = std::abs(std::real(h.trace())) / n;
    if (scale <= 0.0) scale = 1.0;
    Mat shifted = h;
    for (int i = 0; i < n; ++i) shifted(i, i) += tol * scale;
    Eigen::LLT<Mat> llt(shifted);
    return llt.info() == Eigen::Success;
}

}  // namespace sepfn
