#pragma once

// Deterministic point streams in [0,1)^d: a digital (t,s)-sequence in base 2
// built from primitive polynomials over GF(2) with fixed direction numbers,
// and a counter-based pseudo-random fallback. Both kinds are pure functions
// of (kind, dimension, key, index), so streams can be checkpointed, seeked
// and split into disjoint index blocks.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace sepfn {

enum class StreamKind { low_discrepancy, pseudo_random };

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// --- primitive polynomials over GF(2) -----------------------------------

// Multiply a*b mod p, all as bit-polynomials; deg(p) = s <= 12.
inline std::uint32_t polymulmod(std::uint32_t a, std::uint32_t b, std::uint32_t p, int s) {
    std::uint32_t r = 0;
    while (b) {
        if (b & 1u) r ^= a;
        b >>= 1;
        a <<= 1;
        if (a & (1u << s)) a ^= p;
    }
    return r;
}

inline std::uint32_t polypowmod(std::uint32_t base, std::uint64_t e, std::uint32_t p, int s) {
    std::uint32_t r = 1;
    while (e) {
        if (e & 1) r = polymulmod(r, base, p, s);
        base = polymulmod(base, base, p, s);
        e >>= 1;
    }
    return r;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> f;
    for (std::uint64_t q = 2; q * q <= n; ++q)
        if (n % q == 0) {
            f.push_back(q);
            while (n % q == 0) n /= q;
        }
    if (n > 1) f.push_back(n);
    return f;
}

// A degree-s polynomial p (bits, monic, constant term 1) is primitive iff
// x generates the full multiplicative group of GF(2^s).
inline bool is_primitive(std::uint32_t p, int s) {
    const std::uint64_t order = (1ULL << s) - 1;
    if (polypowmod(2, order, p, s) != 1) return false;
    for (std::uint64_t q : prime_factors(order))
        if (polypowmod(2, order / q, p, s) == 1) return false;
    return true;
}

/// First `count` primitive polynomials over GF(2) in increasing degree, each
/// encoded as its bit pattern (degree = bit length - 1).
inline std::vector<std::uint32_t> primitive_polynomials(int count) {
    std::vector<std::uint32_t> out;
    for (int s = 1; static_cast<int>(out.size()) < count; ++s) {
        if (s > 16) throw std::runtime_error("primitive_polynomials: degree limit");
        const std::uint32_t lo = 1u << s;
        for (std::uint32_t p = lo | 1u; p < (lo << 1) && static_cast<int>(out.size()) < count;
             p += 2)
            if (is_primitive(p, s)) out.push_back(p);
    }
    return out;
}

// --- direction numbers ---------------------------------------------------

inline constexpr int kMaxBits = 64;
inline constexpr std::uint64_t kDirectionKey = 0x5eb01dULL ^ 0x243f6a8885a308d3ULL;

/// Direction numbers (v_i, left-justified in 64 bits) for one dimension.
/// Dimension 0 is the radical-inverse (van der Corput) sequence; higher
/// dimensions use the recurrence driven by the dimension's primitive
/// polynomial, with deterministic odd initial values so every table is
/// reproducible without shipping data files.
inline std::array<std::uint64_t, kMaxBits> direction_numbers(int dim,
                                                            const std::vector<std::uint32_t>& polys) {
    std::array<std::uint64_t, kMaxBits> v{};
    if (dim == 0) {
        for (int i = 0; i < kMaxBits; ++i) v[i] = 1ULL << (63 - i);
        return v;
    }
    const std::uint32_t poly = polys[dim - 1];
    int s = 31;
    while (!(poly >> s & 1u)) --s;
    std::array<std::uint64_t, kMaxBits> m{};
    for (int i = 1; i <= s && i <= kMaxBits; ++i) {
        if (dim == 1 && i == 1) {
            m[i - 1] = 1;  // second dimension fixed to the canonical choice
            continue;
        }
        std::uint64_t r = splitmix64(kDirectionKey ^ (static_cast<std::uint64_t>(dim) << 16) ^
                                     static_cast<std::uint64_t>(i));
        m[i - 1] = (r & ((1ULL << i) - 1)) | 1ULL;
    }
    for (int i = s + 1; i <= kMaxBits; ++i) {
        std::uint64_t val = m[i - s - 1] ^ (m[i - s - 1] << s);
        for (int k = 1; k < s; ++k)
            if (poly >> (s - k) & 1u) val ^= m[i - k - 1] << k;
        m[i - 1] = val;
    }
    for (int i = 0; i < kMaxBits; ++i) v[i] = m[i] << (63 - i);
    return v;
}

}  // namespace detail

/// Deterministic stream of points in [0,1)^d. Points at any index can be
/// generated directly; next_point/next_block walk the stream sequentially.
class LdsStream {
  public:
    static constexpr int kMaxDim = 64;

    LdsStream(StreamKind kind, int dim, std::uint64_t key, std::uint64_t start_index = 0)
        : kind_(kind), dim_(dim), key_(key), index_(start_index) {
        if (dim < 1 || dim > kMaxDim)
            throw std::invalid_argument("LdsStream: dimension out of range 1..64");
        if (kind_ == StreamKind::low_discrepancy) {
            auto polys = detail::primitive_polynomials(dim_ > 1 ? dim_ - 1 : 0);
            dirs_.resize(dim_);
            scramble_.resize(dim_);
            for (int j = 0; j < dim_; ++j) {
                dirs_[j] = detail::direction_numbers(j, polys);
                // Digital XOR scramble derived from the user key; affects the
                // low 52 output bits only through the float conversion.
                scramble_[j] = detail::splitmix64(key_ ^ (0xabcdef12ULL + j));
            }
        }
    }

    StreamKind kind() const { return kind_; }
    int dim() const { return dim_; }
    std::uint64_t key() const { return key_; }
    std::uint64_t next_index() const { return index_; }
    void seek(std::uint64_t index) { index_ = index; }

    /// Point at an arbitrary index, independent of stream position.
    void point_at(std::uint64_t k, double* out) const {
        if (kind_ == StreamKind::pseudo_random) {
            for (int j = 0; j < dim_; ++j) {
                std::uint64_t h = detail::splitmix64(
                    key_ ^ detail::splitmix64(k ^ (static_cast<std::uint64_t>(j) << 56)));
                out[j] = static_cast<double>(h >> 12) * 0x1p-52;
            }
            return;
        }
        const std::uint64_t g = k ^ (k >> 1);  // gray code
        for (int j = 0; j < dim_; ++j) {
            std::uint64_t x = scramble_[j];
            std::uint64_t bits = g;
            int i = 0;
            while (bits) {
                if (bits & 1ULL) x ^= dirs_[j][i];
                bits >>= 1;
                ++i;
            }
            out[j] = static_cast<double>(x >> 12) * 0x1p-52;
        }
    }

    void next_point(double* out) { point_at(index_++, out); }

    /// `count` consecutive points, advancing the stream.
    std::vector<std::array<double, kMaxDim>> next_block(std::size_t count) {
        std::vector<std::array<double, kMaxDim>> pts(count);
        for (std::size_t i = 0; i < count; ++i) next_point(pts[i].data());
        return pts;
    }

    /// Child stream over a disjoint index range for block-parallel use.
    LdsStream child(std::uint64_t start_index) const {
        return LdsStream(kind_, dim_, key_, start_index);
    }

  private:
    StreamKind kind_;
    int dim_;
    std::uint64_t key_;
    std::uint64_t index_;
    std::vector<std::array<std::uint64_t, detail::kMaxBits>> dirs_;
    std::vector<std::uint64_t> scramble_;
};

}  // namespace sepfn
