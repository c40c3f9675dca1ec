#pragma once

#include <cmath>

namespace sepfn {

/// Real quaternion a + b i + c j + d k.
struct Quaternion {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;

    constexpr Quaternion() = default;
    constexpr Quaternion(double a_, double b_ = 0.0, double c_ = 0.0, double d_ = 0.0)
        : a(a_), b(b_), c(c_), d(d_) {}

    constexpr Quaternion conj() const { return {a, -b, -c, -d}; }
    constexpr double norm2() const { return a * a + b * b + c * c + d * d; }
    double norm() const { return std::sqrt(norm2()); }

    constexpr Quaternion operator+(const Quaternion& o) const {
        return {a + o.a, b + o.b, c + o.c, d + o.d};
    }
    constexpr Quaternion operator-(const Quaternion& o) const {
        return {a - o.a, b - o.b, c - o.c, d - o.d};
    }
    constexpr Quaternion operator*(double s) const { return {a * s, b * s, c * s, d * s}; }

    // Hamilton product.
    constexpr Quaternion operator*(const Quaternion& o) const {
        return {a * o.a - b * o.b - c * o.c - d * o.d,
                a * o.b + b * o.a + c * o.d - d * o.c,
                a * o.c - b * o.d + c * o.a + d * o.b,
                a * o.d + b * o.c - c * o.b + d * o.a};
    }

    constexpr bool is_real() const { return b == 0.0 && c == 0.0 && d == 0.0; }
};

inline Quaternion operator*(double s, const Quaternion& q) { return q * s; }

}  // namespace sepfn
