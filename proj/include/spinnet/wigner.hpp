#pragma once

/// \file spinnet/wigner.hpp
///
/// Exact 3j, Clebsch-Gordan, 6j and 9j symbols. Every value is returned as a
/// RadicalRational; all Racah sums are carried out on prime-factorized
/// factorials, with the terms brought over a common factored denominator
/// before a single big-integer summation.
///
/// Conventions: Condon-Shortley phases; 6j arrays {j1 j2 j3; j4 j5 j6} are
/// passed row by row; the 9j is the single sum over x of
/// (-1)^(2x) (2x+1) {j1 j4 j7; j8 j9 x}{j2 j5 j8; j4 x j6}{j3 j6 j9; x j1 j2}.

#include "spinnet/halfint.hpp"
#include "spinnet/primes.hpp"
#include "spinnet/radical.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <functional>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

namespace spinnet {

/// Process-wide knobs. The cache ceiling is the largest doubled spin for which
/// 6j values are memoized; larger symbols are still evaluated exactly.
struct Config {
    std::atomic<int> max_cached_twice{400};
};

inline Config &config() {
    static Config instance;
    return instance;
}

/// n! as prime exponents, memoized. Entries live in a deque so references
/// handed out stay valid while the table grows; an entry is published only
/// after it is fully built.
class FactorialTable {
  public:
    static FactorialTable &instance() {
        static FactorialTable table;
        return table;
    }

    const PrimeExponents &operator()(std::uint32_t n) {
        {
            std::shared_lock lock(mutex_);
            if (n < table_.size())
                return table_[n];
        }
        std::unique_lock lock(mutex_);
        while (table_.size() <= n) {
            auto next = static_cast<std::uint32_t>(table_.size());
            table_.push_back(table_.back() * PrimeExponents::of_integer(next));
        }
        return table_[n];
    }

    std::size_t size() {
        std::shared_lock lock(mutex_);
        return table_.size();
    }

  private:
    FactorialTable() { table_.emplace_back(); }

    std::shared_mutex mutex_;
    std::deque<PrimeExponents> table_;
};

inline const PrimeExponents &factorial(int n) { return FactorialTable::instance()(static_cast<std::uint32_t>(n)); }

/// |a-b| <= c <= a+b with a+b+c an integer, on doubled values.
constexpr bool triangle_ok_twice(int ta, int tb, int tc) noexcept {
    if (ta < 0 || tb < 0 || tc < 0)
        return false;
    if ((ta + tb + tc) % 2 != 0)
        return false;
    return tc >= std::abs(ta - tb) && tc <= ta + tb;
}

constexpr bool triangle_ok(HalfInt a, HalfInt b, HalfInt c) noexcept {
    return triangle_ok_twice(a.twice(), b.twice(), c.twice());
}

namespace detail {

/// One term of a Racah-type sum: sign * prod(num!) / prod(den!).
struct FactorialTerm {
    int sign = 1;
    PrimeExponents value;
};

/// Exact sum of factorial terms over their common factored denominator.
inline Rational factored_sum(const std::vector<FactorialTerm> &terms) {
    if (terms.empty())
        return Rational(0);
    PrimeExponents common = terms.front().value;
    for (const auto &t : terms)
        common = PrimeExponents::min(common, t.value);
    BigInt total = 0;
    for (const auto &t : terms) {
        BigInt magnitude = (t.value / common).numerator();
        if (t.sign > 0)
            total += magnitude;
        else
            total -= magnitude;
    }
    return common.value() * Rational(total);
}

/// Delta(abc) = (a+b-c)!(a-b+c)!(-a+b+c)!/(a+b+c+1)! as exponents.
inline PrimeExponents triangle_coefficient(int ta, int tb, int tc) {
    PrimeExponents out = factorial((ta + tb - tc) / 2);
    out *= factorial((ta - tb + tc) / 2);
    out *= factorial((-ta + tb + tc) / 2);
    out /= factorial((ta + tb + tc) / 2 + 1);
    return out;
}

/// sqrt(prefactor) * sum as a canonical radical.
inline RadicalRational assemble(const PrimeExponents &prefactor, const Rational &sum) {
    if (sum == 0)
        return {};
    Rational outside;
    BigInt inside;
    prefactor.split_sqrt(outside, inside);
    return RadicalRational::from_canonical(outside * sum, std::move(inside));
}

inline RadicalRational threej_twice(int tj1, int tj2, int tj3, int tm1, int tm2, int tm3) {
    if (tm1 + tm2 + tm3 != 0)
        return {};
    if (!triangle_ok_twice(tj1, tj2, tj3))
        return {};
    if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tm3) > tj3)
        return {};

    // Racah's single sum; all bounds below are integers for valid input.
    const int a1 = (tj3 - tj2 + tm1) / 2; // j3 - j2 + m1
    const int a2 = (tj3 - tj1 - tm2) / 2; // j3 - j1 - m2
    const int b1 = (tj1 + tj2 - tj3) / 2; // j1 + j2 - j3
    const int b2 = (tj1 - tm1) / 2;       // j1 - m1
    const int b3 = (tj2 + tm2) / 2;       // j2 + m2
    const int kmin = std::max({0, -a1, -a2});
    const int kmax = std::min({b1, b2, b3});

    std::vector<FactorialTerm> terms;
    for (int k = kmin; k <= kmax; ++k) {
        FactorialTerm t;
        t.sign = parity_sign(k);
        t.value /= factorial(k);
        t.value /= factorial(a1 + k);
        t.value /= factorial(a2 + k);
        t.value /= factorial(b1 - k);
        t.value /= factorial(b2 - k);
        t.value /= factorial(b3 - k);
        terms.push_back(std::move(t));
    }

    PrimeExponents prefactor = triangle_coefficient(tj1, tj2, tj3);
    prefactor *= factorial((tj1 + tm1) / 2);
    prefactor *= factorial((tj1 - tm1) / 2);
    prefactor *= factorial((tj2 + tm2) / 2);
    prefactor *= factorial((tj2 - tm2) / 2);
    prefactor *= factorial((tj3 + tm3) / 2);
    prefactor *= factorial((tj3 - tm3) / 2);

    Rational sum = factored_sum(terms) * parity_sign((tj1 - tj2 - tm3) / 2);
    return assemble(prefactor, sum);
}

inline RadicalRational sixj_twice(const std::array<int, 6> &t) {
    const auto [j1, j2, j3, j4, j5, j6] = t;
    if (!triangle_ok_twice(j1, j2, j3) || !triangle_ok_twice(j1, j5, j6) || !triangle_ok_twice(j4, j2, j6) ||
        !triangle_ok_twice(j4, j5, j3))
        return {};

    const int a1 = (j1 + j2 + j3) / 2;
    const int a2 = (j1 + j5 + j6) / 2;
    const int a3 = (j4 + j2 + j6) / 2;
    const int a4 = (j4 + j5 + j3) / 2;
    const int b1 = (j1 + j2 + j4 + j5) / 2;
    const int b2 = (j2 + j3 + j5 + j6) / 2;
    const int b3 = (j3 + j1 + j6 + j4) / 2;
    const int tmin = std::max({a1, a2, a3, a4});
    const int tmax = std::min({b1, b2, b3});

    std::vector<FactorialTerm> terms;
    for (int k = tmin; k <= tmax; ++k) {
        FactorialTerm term;
        term.sign = parity_sign(k);
        term.value = factorial(k + 1);
        term.value /= factorial(k - a1);
        term.value /= factorial(k - a2);
        term.value /= factorial(k - a3);
        term.value /= factorial(k - a4);
        term.value /= factorial(b1 - k);
        term.value /= factorial(b2 - k);
        term.value /= factorial(b3 - k);
        terms.push_back(std::move(term));
    }

    PrimeExponents prefactor = triangle_coefficient(j1, j2, j3);
    prefactor *= triangle_coefficient(j1, j5, j6);
    prefactor *= triangle_coefficient(j4, j2, j6);
    prefactor *= triangle_coefficient(j4, j5, j3);
    return assemble(prefactor, factored_sum(terms));
}

/// The 24 classical symmetries of {j1 j2 j3; j4 j5 j6}: any permutation of
/// the columns combined with exchanging upper and lower entries in an even
/// number of columns.
inline std::array<std::array<int, 6>, 24> sixj_orbit(const std::array<int, 6> &t) {
    static constexpr std::array<std::array<int, 3>, 6> perms{
        {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    static constexpr std::array<std::array<bool, 3>, 4> flips{
        {{false, false, false}, {true, true, false}, {true, false, true}, {false, true, true}}};
    std::array<std::array<int, 6>, 24> out{};
    std::size_t n = 0;
    for (const auto &p : perms)
        for (const auto &f : flips) {
            std::array<int, 6> image{};
            for (int col = 0; col < 3; ++col) {
                int top = t[p[col]], bottom = t[p[col] + 3];
                if (f[col])
                    std::swap(top, bottom);
                image[col] = top;
                image[col + 3] = bottom;
            }
            out[n++] = image;
        }
    return out;
}

inline std::array<int, 6> sixj_canonical_key(const std::array<int, 6> &t) {
    auto orbit = sixj_orbit(t);
    return *std::min_element(orbit.begin(), orbit.end());
}

struct SixJKeyHash {
    std::size_t operator()(const std::array<int, 6> &k) const noexcept {
        std::size_t h = 0;
        for (int v : k)
            h = h * 1000003u ^ static_cast<std::size_t>(v + 1);
        return h;
    }
};

/// Shared 6j memo. Readers never block each other; two writers racing on the
/// same key store identical values, so the second insert is a no-op.
class SixJCache {
  public:
    static SixJCache &instance() {
        static SixJCache cache;
        return cache;
    }

    bool lookup(const std::array<int, 6> &key, RadicalRational &out) const {
        std::shared_lock lock(mutex_);
        auto it = map_.find(key);
        if (it == map_.end())
            return false;
        out = it->second;
        return true;
    }

    void store(const std::array<int, 6> &key, const RadicalRational &value) {
        std::unique_lock lock(mutex_);
        map_.emplace(key, value);
    }

    std::size_t size() const {
        std::shared_lock lock(mutex_);
        return map_.size();
    }

    void clear() {
        std::unique_lock lock(mutex_);
        map_.clear();
    }

  private:
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::array<int, 6>, RadicalRational, SixJKeyHash> map_;
};

} // namespace detail

/// Wigner 3j symbol (j1 j2 j3; m1 m2 m3). Exact zero when a selection rule fails.
inline RadicalRational wigner_3j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2, HalfInt m3) {
    require_pair(j1, m1);
    require_pair(j2, m2);
    require_pair(j3, m3);
    return detail::threej_twice(j1.twice(), j2.twice(), j3.twice(), m1.twice(), m2.twice(), m3.twice());
}

/// <j1 m1; j2 m2 | J M> = (-1)^(j1-j2+M) sqrt(2J+1) (j1 j2 J; m1 m2 -M).
inline RadicalRational clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M) {
    require_pair(j1, m1);
    require_pair(j2, m2);
    require_pair(J, M);
    RadicalRational threej = detail::threej_twice(j1.twice(), j2.twice(), J.twice(), m1.twice(), m2.twice(), -M.twice());
    if (threej.is_zero())
        return {};
    int phase = parity_sign((j1.twice() - j2.twice() + M.twice()) / 2);
    return threej * RadicalRational::sqrt_of(Rational(J.twice() + 1)) * phase;
}

/// {j1 j2 j3; j4 j5 j6} evaluated directly, bypassing the cache.
inline RadicalRational wigner_6j_uncached(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4, HalfInt j5, HalfInt j6) {
    for (HalfInt j : {j1, j2, j3, j4, j5, j6})
        require_magnitude(j);
    return detail::sixj_twice({j1.twice(), j2.twice(), j3.twice(), j4.twice(), j5.twice(), j6.twice()});
}

namespace detail {
inline RadicalRational sixj_cached_twice(const std::array<int, 6> &t) {
    int ceiling = config().max_cached_twice.load(std::memory_order_relaxed);
    if (*std::max_element(t.begin(), t.end()) > ceiling)
        return sixj_twice(t);
    auto key = sixj_canonical_key(t);
    RadicalRational value;
    if (SixJCache::instance().lookup(key, value))
        return value;
    value = sixj_twice(key);
    SixJCache::instance().store(key, value);
    return value;
}
} // namespace detail

/// {j1 j2 j3; j4 j5 j6}, memoized under the 24 tetrahedral symmetries.
inline RadicalRational wigner_6j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4, HalfInt j5, HalfInt j6) {
    for (HalfInt j : {j1, j2, j3, j4, j5, j6})
        require_magnitude(j);
    return detail::sixj_cached_twice({j1.twice(), j2.twice(), j3.twice(), j4.twice(), j5.twice(), j6.twice()});
}

using NineJ = std::array<std::array<HalfInt, 3>, 3>;

/// Wigner 9j symbol from its 3x3 array, row-major.
inline RadicalRational wigner_9j(const NineJ &rows) {
    for (const auto &row : rows)
        for (HalfInt j : row)
            require_magnitude(j);
    auto t = [&](int r, int c) { return rows[r][c].twice(); };
    for (int i = 0; i < 3; ++i) {
        if (!triangle_ok_twice(t(i, 0), t(i, 1), t(i, 2)) || !triangle_ok_twice(t(0, i), t(1, i), t(2, i)))
            return {};
    }
    const int j1 = t(0, 0), j2 = t(0, 1), j3 = t(0, 2);
    const int j4 = t(1, 0), j5 = t(1, 1), j6 = t(1, 2);
    const int j7 = t(2, 0), j8 = t(2, 1), j9 = t(2, 2);
    const int lo = std::max({std::abs(j1 - j9), std::abs(j4 - j8), std::abs(j2 - j6)});
    const int hi = std::min({j1 + j9, j4 + j8, j2 + j6});
    RadicalRational total;
    for (int x = lo; x <= hi; x += 2) {
        RadicalRational term = detail::sixj_cached_twice({j1, j4, j7, j8, j9, x});
        if (term.is_zero())
            continue;
        term *= detail::sixj_cached_twice({j2, j5, j8, j4, x, j6});
        if (term.is_zero())
            continue;
        term *= detail::sixj_cached_twice({j3, j6, j9, x, j1, j2});
        // (-1)^(2x) = -1 for half-integer x
        term *= RadicalRational((x % 2 == 0 ? 1 : -1) * (x + 1));
        total += term;
    }
    return total;
}

} // namespace spinnet
