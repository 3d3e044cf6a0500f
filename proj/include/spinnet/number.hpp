#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>

namespace spinnet {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(const BigInt &num, const BigInt &den) { return Rational(num, den); }

inline BigInt isqrt(const BigInt &n) { return boost::multiprecision::sqrt(n); }

inline bool is_perfect_square(const BigInt &n, BigInt *root = nullptr) {
    if (n < 0)
        return false;
    BigInt r = isqrt(n);
    if (root)
        *root = r;
    return r * r == n;
}

/// (-1)^k for an integer k of either sign.
constexpr int parity_sign(std::int64_t k) noexcept { return (k % 2 == 0) ? 1 : -1; }

} // namespace spinnet
