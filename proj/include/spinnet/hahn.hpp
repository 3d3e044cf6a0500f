#pragma once

/// \file spinnet/hahn.hpp
///
/// Hahn polynomials on the grid x = 0..N-1 (M = N-1):
///   Q_n(x; a, b, M) = 3F2(-n, n+a+b+1, -x; a+1, -M; 1),   Q_n(0) = 1
///   w(x) = C(a+x, x) C(b+M-x, M-x)
///   h_n  = (-1)^n (n+a+b+1)_{M+1} (b+1)_n n! / ((2n+a+b+1) (a+1)_n (-M)_n M!)
/// and the orthonormal transform U[n][x] = sqrt(w(x)/h_n) Q_n(x), rows n,
/// columns x. Everything here is exact.

#include "spinnet/error.hpp"
#include "spinnet/number.hpp"
#include "spinnet/primes.hpp"
#include "spinnet/radical.hpp"

#include <string>
#include <vector>

namespace spinnet {

struct HahnParams {
    Rational alpha = 0;
    Rational beta = 0;
    int N = 1;
};

namespace detail {

inline void check_hahn(const HahnParams &p) {
    if (p.alpha <= -1 || p.beta <= -1)
        throw Error(ErrorKind::InvalidParams, "Hahn parameters need alpha, beta > -1");
    if (p.N < 1)
        throw Error(ErrorKind::InvalidParams, "grid size N must be positive");
}

inline void check_index(const HahnParams &p, int v, const char *what) {
    if (v < 0 || v >= p.N)
        throw Error(ErrorKind::OutOfRange,
                    std::string(what) + " = " + std::to_string(v) + " outside 0.." + std::to_string(p.N - 1));
}

/// (a)_k for rational a.
inline Rational pochhammer(const Rational &a, int k) {
    Rational out = 1;
    for (int i = 0; i < k; ++i)
        out *= a + i;
    return out;
}

/// |value| of a product of small positive rationals, kept as prime exponents.
class FactoredProduct {
  public:
    void mul(const Rational &r) { apply(r, true); }
    void div(const Rational &r) { apply(r, false); }
    void mul_pochhammer(const Rational &a, int k) {
        for (int i = 0; i < k; ++i)
            mul(a + i);
    }
    void div_pochhammer(const Rational &a, int k) {
        for (int i = 0; i < k; ++i)
            div(a + i);
    }
    void mul_factorial(int n) { exps_ *= PrimeExponents::of_factorial(static_cast<std::uint32_t>(n)); }
    void div_factorial(int n) { exps_ /= PrimeExponents::of_factorial(static_cast<std::uint32_t>(n)); }
    const PrimeExponents &exponents() const { return exps_; }

  private:
    void apply(const Rational &r, bool multiply) {
        if (r <= 0)
            throw Error(ErrorKind::InvalidParams, "factored product needs positive factors");
        const BigInt &num = boost::multiprecision::numerator(r), &den = boost::multiprecision::denominator(r);
        if (num >= (BigInt(1) << 26) || den >= (BigInt(1) << 26))
            throw Error(ErrorKind::SizeExceeded, "factor too large to factorize");
        PrimeExponents f = PrimeExponents::of_integer(static_cast<std::uint64_t>(num));
        f /= PrimeExponents::of_integer(static_cast<std::uint64_t>(den));
        if (multiply)
            exps_ *= f;
        else
            exps_ /= f;
    }
    PrimeExponents exps_;
};

inline BigInt factorial_big(int n) {
    BigInt out = 1;
    for (int i = 2; i <= n; ++i)
        out *= i;
    return out;
}

} // namespace detail

/// Q_n(x; alpha, beta, N-1) by the terminating 3F2 sum.
inline Rational hahn_eval(const HahnParams &p, int n, int x) {
    detail::check_hahn(p);
    detail::check_index(p, n, "degree n");
    detail::check_index(p, x, "grid point x");
    const int M = p.N - 1;
    Rational sum = 0, term = 1;
    for (int k = 0; k <= n; ++k) {
        sum += term;
        // ratio of consecutive terms
        term *= Rational(k - n) * (n + p.alpha + p.beta + 1 + k) * Rational(k - x);
        if (term == 0)
            break;
        term /= (p.alpha + 1 + k) * Rational(k - M) * Rational(k + 1);
    }
    return sum;
}

inline Rational hahn_weight(const HahnParams &p, int x) {
    detail::check_hahn(p);
    detail::check_index(p, x, "grid point x");
    const int M = p.N - 1;
    return detail::pochhammer(p.alpha + 1, x) / Rational(detail::factorial_big(x)) *
           detail::pochhammer(p.beta + 1, M - x) / Rational(detail::factorial_big(M - x));
}

inline Rational hahn_norm(const HahnParams &p, int n) {
    detail::check_hahn(p);
    detail::check_index(p, n, "degree n");
    const int M = p.N - 1;
    const Rational s = p.alpha + p.beta + 1;
    // (n+s)_{M+1} / (2n+s), written to stay finite when s = 0 at n = 0
    Rational lead = n == 0 ? detail::pochhammer(s + 1, M) : detail::pochhammer(n + s, M + 1) / (2 * n + s);
    Rational falling = 1; // (-1)^n (-M)_n = M!/(M-n)!
    for (int i = 0; i < n; ++i)
        falling *= M - i;
    return lead * detail::pochhammer(p.beta + 1, n) * Rational(detail::factorial_big(n)) /
           (detail::pochhammer(p.alpha + 1, n) * falling * Rational(detail::factorial_big(M)));
}

struct HahnWeightsNorms {
    std::vector<Rational> weights; // w(x), x = 0..N-1
    std::vector<Rational> norms;   // h_n, n = 0..N-1
};

inline HahnWeightsNorms hahn_weights_norms(const HahnParams &p) {
    detail::check_hahn(p);
    HahnWeightsNorms out;
    for (int i = 0; i < p.N; ++i) {
        out.weights.push_back(hahn_weight(p, i));
        out.norms.push_back(hahn_norm(p, i));
    }
    return out;
}

/// w(x)/h_n as prime exponents, from the small factors of both formulas.
inline PrimeExponents weight_over_norm(const HahnParams &p, int n, int x) {
    const int M = p.N - 1;
    const Rational s = p.alpha + p.beta + 1;
    detail::FactoredProduct f;
    f.mul_pochhammer(p.alpha + 1, x);
    f.div_factorial(x);
    f.mul_pochhammer(p.beta + 1, M - x);
    f.div_factorial(M - x);
    if (n == 0) {
        f.div_pochhammer(s + 1, M);
    } else {
        f.div_pochhammer(n + s, M + 1);
        f.mul(2 * n + s);
    }
    f.div_pochhammer(p.beta + 1, n);
    f.div_factorial(n);
    f.mul_pochhammer(p.alpha + 1, n);
    f.mul_factorial(M);
    f.div_factorial(M - n);
    f.mul_factorial(M);
    return f.exponents();
}

/// Exact orthonormal transform, U[n][x].
inline std::vector<std::vector<RadicalRational>> stereodirected_transform(const HahnParams &p) {
    detail::check_hahn(p);
    std::vector<std::vector<RadicalRational>> U(p.N, std::vector<RadicalRational>(p.N));
    for (int n = 0; n < p.N; ++n)
        for (int x = 0; x < p.N; ++x) {
            Rational q = hahn_eval(p, n, x);
            if (q == 0)
                continue;
            Rational outside;
            BigInt inside;
            weight_over_norm(p, n, x).split_sqrt(outside, inside);
            U[n][x] = RadicalRational::from_canonical(outside * q, inside);
        }
    return U;
}

} // namespace spinnet
