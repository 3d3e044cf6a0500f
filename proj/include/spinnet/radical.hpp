#pragma once

#include "spinnet/error.hpp"
#include "spinnet/number.hpp"
#include "spinnet/primes.hpp"

#include <cctype>
#include <cmath>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

namespace spinnet {

namespace detail {

/// n = square^2 * free with free square-free. Trial division stops once p^3
/// exceeds the unfactored cofactor; what is left then has at most two prime
/// factors, so a perfect-square test finishes the job.
inline void square_free_split(BigInt n, BigInt &square, BigInt &free) {
    square = 1;
    free = 1;
    if (n <= 1) {
        free = n;
        return;
    }
    std::uint32_t bound = 1024;
    auto primes = PrimeTable::instance().covering(bound);
    for (std::size_t i = 0;; ++i) {
        if (i == primes->size()) {
            bound *= 2;
            primes = PrimeTable::instance().covering(bound);
        }
        BigInt p = (*primes)[i];
        if (p * p * p > n)
            break;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e >= 2)
            square *= boost::multiprecision::pow(p, static_cast<unsigned>(e / 2));
        if (e % 2)
            free *= p;
    }
    BigInt root;
    if (n > 1 && is_perfect_square(n, &root))
        square *= root;
    else
        free *= n;
}

inline int bit_length(const BigInt &n) { return n == 0 ? 0 : static_cast<int>(boost::multiprecision::msb(n)) + 1; }

/// sqrt(num/den) for positive integers, within 1 ulp (in practice correctly
/// rounded: 64 bits are kept before the final rounding to 53).
inline double sqrt_ratio_to_double(const BigInt &num, const BigInt &den) {
    // Scale by 4^s so the integer square root carries >= 66 significant bits.
    int s = (132 + bit_length(den) - bit_length(num)) / 2 + 1;
    BigInt scaled = s >= 0 ? BigInt(num << (2 * s)) / den : num / BigInt(den << (-2 * s));
    BigInt root = isqrt(scaled);
    int bits = bit_length(root);
    int drop = bits > 64 ? bits - 64 : 0;
    auto top = static_cast<std::uint64_t>(BigInt(root >> drop));
    return std::ldexp(static_cast<double>(top), drop - s);
}

} // namespace detail

/// An exact real number coeff * sqrt(radicand). Canonical form: radicand is a
/// square-free positive integer; zero is coeff 0 with radicand 1.
class RadicalRational {
  public:
    RadicalRational() = default;
    RadicalRational(int value) : coeff_(value) {}
    explicit RadicalRational(Rational coeff) : coeff_(std::move(coeff)) {}

    /// coeff * sqrt(radicand) for any rational radicand >= 0.
    static RadicalRational from_parts(const Rational &coeff, const Rational &radicand) {
        if (radicand < 0)
            throw Error(ErrorKind::InvalidParams, "negative radicand");
        if (coeff == 0 || radicand == 0)
            return {};
        // sqrt(p/q) = sqrt(p*q)/q
        BigInt p = boost::multiprecision::numerator(radicand);
        BigInt q = boost::multiprecision::denominator(radicand);
        BigInt square, free;
        detail::square_free_split(p * q, square, free);
        RadicalRational out;
        out.coeff_ = coeff * Rational(square, q);
        out.radicand_ = std::move(free);
        return out;
    }

    static RadicalRational sqrt_of(const Rational &value) { return from_parts(Rational(1), value); }

    /// Trusts that radicand is already square-free (used by factored evaluation paths).
    static RadicalRational from_canonical(Rational coeff, BigInt radicand) {
        RadicalRational out;
        if (coeff == 0)
            return out;
        out.coeff_ = std::move(coeff);
        out.radicand_ = std::move(radicand);
        return out;
    }

    const Rational &coeff() const noexcept { return coeff_; }
    const BigInt &radicand() const noexcept { return radicand_; }

    bool is_zero() const { return coeff_ == 0; }
    int sign() const { return coeff_ > 0 ? 1 : (coeff_ < 0 ? -1 : 0); }
    /// value^2, an exact rational.
    Rational square() const { return coeff_ * coeff_ * Rational(radicand_); }

    double to_double() const {
        if (is_zero())
            return 0.0;
        Rational sq = square();
        double mag = detail::sqrt_ratio_to_double(boost::multiprecision::numerator(sq), boost::multiprecision::denominator(sq));
        return sign() < 0 ? -mag : mag;
    }

    RadicalRational operator-() const {
        RadicalRational out = *this;
        out.coeff_ = -out.coeff_;
        return out;
    }

    friend RadicalRational operator*(const RadicalRational &x, const RadicalRational &y) {
        if (x.is_zero() || y.is_zero())
            return {};
        // r1, r2 square-free: r1*r2 = g^2 (r1/g)(r2/g) with the cofactors coprime.
        BigInt g = boost::multiprecision::gcd(x.radicand_, y.radicand_);
        RadicalRational out;
        out.coeff_ = x.coeff_ * y.coeff_ * Rational(g);
        out.radicand_ = (x.radicand_ / g) * (y.radicand_ / g);
        return out;
    }

    friend RadicalRational operator/(const RadicalRational &x, const RadicalRational &y) {
        if (y.is_zero())
            throw Error(ErrorKind::DivisionByZero, "division by an exact zero");
        // 1/(c sqrt(r)) = (1/(c r)) sqrt(r)
        RadicalRational inv;
        inv.coeff_ = 1 / (y.coeff_ * Rational(y.radicand_));
        inv.radicand_ = y.radicand_;
        return x * inv;
    }

    /// Sum of two like radicals. Zero is like everything.
    friend RadicalRational add_like(const RadicalRational &x, const RadicalRational &y) {
        if (x.is_zero())
            return y;
        if (y.is_zero())
            return x;
        if (x.radicand_ != y.radicand_)
            throw Error(ErrorKind::RadicandMismatch,
                        "sqrt(" + x.radicand_.str() + ") and sqrt(" + y.radicand_.str() + ") are not like radicals");
        RadicalRational out;
        out.coeff_ = x.coeff_ + y.coeff_;
        if (out.coeff_ != 0)
            out.radicand_ = x.radicand_;
        return out;
    }
    friend RadicalRational operator+(const RadicalRational &x, const RadicalRational &y) { return add_like(x, y); }
    friend RadicalRational operator-(const RadicalRational &x, const RadicalRational &y) { return add_like(x, -y); }
    RadicalRational &operator+=(const RadicalRational &y) { return *this = add_like(*this, y); }
    RadicalRational &operator*=(const RadicalRational &y) { return *this = *this * y; }

    friend std::strong_ordering compare_abs(const RadicalRational &x, const RadicalRational &y) {
        Rational a = x.square(), b = y.square();
        if (a < b)
            return std::strong_ordering::less;
        if (b < a)
            return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    friend bool operator==(const RadicalRational &x, const RadicalRational &y) {
        return x.coeff_ == y.coeff_ && x.radicand_ == y.radicand_;
    }

    /// "p", "p/q", "p*sqrt(r)" or "p/q*sqrt(r)".
    std::string to_string() const {
        std::string out = coeff_.str();
        if (radicand_ != 1)
            out += "*sqrt(" + radicand_.str() + ")";
        return out;
    }

    /// Inverse of to_string; also accepts a bare "sqrt(r)" and rational radicands "sqrt(r/s)".
    static RadicalRational parse(std::string_view text) {
        auto fail = [&] { return Error(ErrorKind::InvalidParams, "cannot parse radical '" + std::string(text) + "'"); };
        auto rational = [&](std::string_view s) -> Rational {
            if (s.empty())
                throw fail();
            for (char ch : s)
                if (!(std::isdigit(static_cast<unsigned char>(ch)) || ch == '/' || ch == '-'))
                    throw fail();
            try {
                auto slash = s.find('/');
                if (slash == std::string_view::npos)
                    return Rational(BigInt(std::string(s)));
                BigInt den(std::string(s.substr(slash + 1)));
                if (den == 0)
                    throw fail();
                return Rational(BigInt(std::string(s.substr(0, slash))), den);
            } catch (const Error &) {
                throw;
            } catch (const std::exception &) {
                throw fail();
            }
        };
        Rational coeff(1);
        std::string_view rest = text;
        auto star = text.find('*');
        if (text.rfind("sqrt(", 0) == 0 || text.rfind("-sqrt(", 0) == 0) {
            if (text.front() == '-') {
                coeff = -1;
                rest = text.substr(1);
            }
        } else if (star == std::string_view::npos) {
            return RadicalRational(rational(text));
        } else {
            coeff = rational(text.substr(0, star));
            rest = text.substr(star + 1);
        }
        if (rest.rfind("sqrt(", 0) != 0 || rest.back() != ')')
            throw fail();
        return from_parts(coeff, rational(rest.substr(5, rest.size() - 6)));
    }

  private:
    Rational coeff_{0};
    BigInt radicand_{1};
};

} // namespace spinnet
