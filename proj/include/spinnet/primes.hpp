#pragma once

#include "spinnet/number.hpp"

#include <algorithm>
#include <cstdint>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <vector>

namespace spinnet {

/// Process-wide table of primes, grown on demand. Snapshots are immutable, so a
/// reader keeps using its snapshot while another thread publishes a longer one.
class PrimeTable {
  public:
    using Snapshot = std::shared_ptr<const std::vector<std::uint32_t>>;

    static PrimeTable &instance() {
        static PrimeTable table;
        return table;
    }

    /// A snapshot containing every prime <= bound.
    Snapshot covering(std::uint32_t bound) {
        {
            std::shared_lock lock(mutex_);
            if (bound <= limit_)
                return primes_;
        }
        std::unique_lock lock(mutex_);
        if (bound > limit_) {
            std::uint32_t limit = std::max<std::uint32_t>(limit_ * 2, bound);
            primes_ = sieve(limit);
            limit_ = limit;
        }
        return primes_;
    }

  private:
    PrimeTable() : primes_(sieve(1024)), limit_(1024) {}

    static Snapshot sieve(std::uint32_t limit) {
        std::vector<bool> composite(limit + 1, false);
        auto out = std::make_shared<std::vector<std::uint32_t>>();
        for (std::uint32_t p = 2; p <= limit; ++p) {
            if (composite[p])
                continue;
            out->push_back(p);
            for (std::uint64_t q = std::uint64_t(p) * p; q <= limit; q += p)
                composite[q] = true;
        }
        return out;
    }

    std::shared_mutex mutex_;
    Snapshot primes_;
    std::uint32_t limit_;
};

/// Signed prime exponents of a positive rational, indexed by position in the
/// prime table (2, 3, 5, ...). Trailing zeros are insignificant.
class PrimeExponents {
  public:
    PrimeExponents() = default;

    /// Factor a positive integer below 2^26 by trial division. Larger values
    /// never arise from factorials or Pochhammer factors of desk-scale spins.
    static PrimeExponents of_integer(std::uint64_t n) {
        if (n >= (1u << 26))
            throw std::overflow_error("PrimeExponents::of_integer: argument too large");
        PrimeExponents out;
        if (n <= 1)
            return out;
        auto primes = PrimeTable::instance().covering(static_cast<std::uint32_t>(n));
        for (std::size_t i = 0; i < primes->size() && n > 1; ++i) {
            std::uint64_t p = (*primes)[i];
            if (p * p > n) {
                auto it = std::lower_bound(primes->begin(), primes->end(), static_cast<std::uint32_t>(n));
                out.bump(static_cast<std::size_t>(it - primes->begin()), 1);
                break;
            }
            while (n % p == 0) {
                out.bump(i, 1);
                n /= p;
            }
        }
        return out;
    }

    /// Legendre's formula for n!.
    static PrimeExponents of_factorial(std::uint32_t n) {
        PrimeExponents out;
        auto primes = PrimeTable::instance().covering(std::max<std::uint32_t>(n, 2));
        for (std::size_t i = 0; i < primes->size() && (*primes)[i] <= n; ++i) {
            std::uint64_t p = (*primes)[i];
            int e = 0;
            for (std::uint64_t q = p; q <= n; q *= p)
                e += static_cast<int>(n / q);
            out.bump(i, e);
        }
        return out;
    }

    int exponent(std::size_t index) const noexcept { return index < exps_.size() ? exps_[index] : 0; }
    std::size_t size() const noexcept { return exps_.size(); }
    bool is_one() const noexcept {
        return std::all_of(exps_.begin(), exps_.end(), [](int e) { return e == 0; });
    }

    PrimeExponents &operator*=(const PrimeExponents &o) {
        grow(o.exps_.size());
        for (std::size_t i = 0; i < o.exps_.size(); ++i)
            exps_[i] += o.exps_[i];
        return *this;
    }
    PrimeExponents &operator/=(const PrimeExponents &o) {
        grow(o.exps_.size());
        for (std::size_t i = 0; i < o.exps_.size(); ++i)
            exps_[i] -= o.exps_[i];
        return *this;
    }
    friend PrimeExponents operator*(PrimeExponents a, const PrimeExponents &b) { return a *= b; }
    friend PrimeExponents operator/(PrimeExponents a, const PrimeExponents &b) { return a /= b; }

    /// Elementwise max (lcm of the positive parts when both are integers).
    static PrimeExponents max(const PrimeExponents &a, const PrimeExponents &b) {
        PrimeExponents out = a;
        out.grow(b.exps_.size());
        for (std::size_t i = 0; i < out.exps_.size(); ++i)
            out.exps_[i] = std::max(out.exps_[i], b.exponent(i));
        return out;
    }
    static PrimeExponents min(const PrimeExponents &a, const PrimeExponents &b) {
        PrimeExponents out = a;
        out.grow(b.exps_.size());
        for (std::size_t i = 0; i < out.exps_.size(); ++i)
            out.exps_[i] = std::min(out.exps_[i], b.exponent(i));
        return out;
    }

    /// Product of p^e over positive exponents only.
    BigInt numerator() const { return product(+1); }
    /// Product of p^-e over negative exponents only.
    BigInt denominator() const { return product(-1); }
    Rational value() const { return Rational(numerator(), denominator()); }

    /// Split sqrt(this) as outside * sqrt(inside), with inside a square-free
    /// integer and outside rational.
    void split_sqrt(Rational &outside, BigInt &inside) const {
        PrimeExponents out_part, in_part;
        out_part.grow(exps_.size());
        in_part.grow(exps_.size());
        for (std::size_t i = 0; i < exps_.size(); ++i) {
            int e = exps_[i];
            int half = (e >= 0) ? e / 2 : -((-e + 1) / 2);
            out_part.exps_[i] = half;
            in_part.exps_[i] = e - 2 * half;
        }
        outside = out_part.value();
        inside = in_part.numerator();
    }

  private:
    void grow(std::size_t n) {
        if (exps_.size() < n)
            exps_.resize(n, 0);
    }
    void bump(std::size_t index, int by) {
        grow(index + 1);
        exps_[index] += by;
    }

    BigInt product(int sign) const {
        BigInt out = 1;
        bool any = std::any_of(exps_.begin(), exps_.end(), [&](int e) { return e * sign > 0; });
        if (!any)
            return out;
        auto primes = PrimeTable::instance().covering(2);
        if (primes->size() < exps_.size())
            primes = PrimeTable::instance().covering(upper_bound_for(exps_.size()));
        for (std::size_t i = 0; i < exps_.size(); ++i) {
            int e = exps_[i] * sign;
            if (e > 0)
                out *= boost::multiprecision::pow(BigInt((*primes)[i]), static_cast<unsigned>(e));
        }
        return out;
    }

    // Crude bound on the k-th prime, enough to make the table cover index k-1.
    static std::uint32_t upper_bound_for(std::size_t count) {
        std::uint32_t bound = 1024;
        while (PrimeTable::instance().covering(bound)->size() < count)
            bound *= 2;
        return bound;
    }

    std::vector<int> exps_;
};

} // namespace spinnet
