#include "oracles.hpp"

#include "spinnet/wigner.hpp"

#include <gtest/gtest.h>

#include <random>
#include <thread>

using namespace spinnet;
using namespace spinnet::literals;

namespace {

HalfInt h(int twice) { return HalfInt::from_twice(twice); }

void expect_matches(const RadicalRational &value, const oracle::SignedSquare &ref) {
    EXPECT_EQ(value.sign(), ref.sign) << value.to_string();
    EXPECT_EQ(value.square(), ref.square) << value.to_string();
}

RadicalRational sixj(const std::array<int, 6> &t) {
    return wigner_6j(h(t[0]), h(t[1]), h(t[2]), h(t[3]), h(t[4]), h(t[5]));
}

RadicalRational sixj_direct(const std::array<int, 6> &t) {
    return wigner_6j_uncached(h(t[0]), h(t[1]), h(t[2]), h(t[3]), h(t[4]), h(t[5]));
}

RadicalRational ninej(const std::array<int, 9> &t) {
    NineJ rows{};
    for (int i = 0; i < 9; ++i)
        rows[i / 3][i % 3] = h(t[i]);
    return wigner_9j(rows);
}

} // namespace

TEST(Triangle, Examples) {
    EXPECT_TRUE(triangle_ok(0_hj, 0_hj, 0_hj));
    EXPECT_FALSE(triangle_ok(1_hj, 1_hj, 3_hj));
    EXPECT_TRUE(triangle_ok(1_hj, 2_hj, 1_hj));
    EXPECT_FALSE(triangle_ok(2_hj, 2_hj, 1_hj)); // 1 + 1 + 1/2 not an integer
}

TEST(FactorialTable, ReconstructsFactorialsAndIsMonotone) {
    auto &table = FactorialTable::instance();
    PrimeExponents early = table(10);
    for (int n = 0; n <= 60; ++n)
        EXPECT_EQ(table(n).numerator(), oracle::fact(n)) << n;
    (void)table(300);
    EXPECT_EQ(table(10).numerator(), early.numerator());
    EXPECT_EQ(table(300).numerator(), oracle::fact(300));
}

TEST(ThreeJ, Examples) {
    EXPECT_EQ(wigner_3j(0_hj, 0_hj, 0_hj, 0_hj, 0_hj, 0_hj), RadicalRational(1));

    auto v = wigner_3j(2_hj, 2_hj, 0_hj, 0_hj, 0_hj, 0_hj);
    expect_matches(v, oracle::threej(2, 2, 0, 0, 0, 0));
    EXPECT_EQ(v, RadicalRational::from_parts(Rational(-1, 3), Rational(3)));

    auto nonzero = wigner_3j(2_hj, 2_hj, 4_hj, 2_hj, 0_hj, HalfInt::from_twice(-2));
    EXPECT_FALSE(nonzero.is_zero());
    expect_matches(nonzero, oracle::threej(2, 2, 4, 2, 0, -2));
    EXPECT_TRUE(wigner_3j(2_hj, 2_hj, 4_hj, 2_hj, 0_hj, 2_hj).is_zero());
}

TEST(ThreeJ, SelectionRulesGiveZero) {
    EXPECT_TRUE(wigner_3j(2_hj, 2_hj, 0_hj, 0_hj, 0_hj, 2_hj).is_zero()); // |m3| > j3 and m-sum != 0
    EXPECT_TRUE(wigner_3j(1_hj, 1_hj, 6_hj, 1_hj, h(-1), 0_hj).is_zero());
    EXPECT_TRUE(wigner_3j(2_hj, 2_hj, 2_hj, 0_hj, 0_hj, 0_hj).is_zero()); // odd J with all m = 0
}

TEST(ThreeJ, MalformedSpinIsAnError) {
    auto expect_malformed = [](auto fn) {
        try {
            fn();
            FAIL() << "expected MalformedSpin";
        } catch (const Error &e) {
            EXPECT_EQ(e.kind(), ErrorKind::MalformedSpin);
        }
    };
    expect_malformed([] { (void)wigner_3j(h(-2), 2_hj, 0_hj, 0_hj, 0_hj, 0_hj); });
    expect_malformed([] { (void)wigner_3j(2_hj, 2_hj, 0_hj, 1_hj, h(-1), 0_hj); });
    expect_malformed([] { (void)wigner_6j(1_hj, 1_hj, 0_hj, 1_hj, 1_hj, h(-2)); });
}

TEST(ThreeJ, MatchesOracleOnGrid) {
    for (int j1 = 0; j1 <= 5; ++j1)
        for (int j2 = 0; j2 <= 5; ++j2)
            for (int j3 = std::abs(j1 - j2); j3 <= j1 + j2; j3 += 2)
                for (int m1 = -j1; m1 <= j1; m1 += 2)
                    for (int m2 = -j2; m2 <= j2; m2 += 2) {
                        int m3 = -m1 - m2;
                        if (std::abs(m3) > j3)
                            continue;
                        expect_matches(detail::threej_twice(j1, j2, j3, m1, m2, m3),
                                       oracle::threej(j1, j2, j3, m1, m2, m3));
                    }
}

TEST(ThreeJ, PermutationAndReflectionSymmetry) {
    for (int j1 = 0; j1 <= 4; ++j1)
        for (int j2 = 0; j2 <= 4; ++j2)
            for (int j3 = std::abs(j1 - j2); j3 <= j1 + j2; j3 += 2)
                for (int m1 = -j1; m1 <= j1; m1 += 2)
                    for (int m2 = -j2; m2 <= j2; m2 += 2) {
                        int m3 = -m1 - m2;
                        if (std::abs(m3) > j3)
                            continue;
                        auto v = detail::threej_twice(j1, j2, j3, m1, m2, m3);
                        int odd = parity_sign((j1 + j2 + j3) / 2);
                        EXPECT_EQ(detail::threej_twice(j2, j3, j1, m2, m3, m1), v);
                        EXPECT_EQ(detail::threej_twice(j3, j1, j2, m3, m1, m2), v);
                        EXPECT_EQ(detail::threej_twice(j2, j1, j3, m2, m1, m3), v * odd);
                        EXPECT_EQ(detail::threej_twice(j1, j3, j2, m1, m3, m2), v * odd);
                        EXPECT_EQ(detail::threej_twice(j1, j2, j3, -m1, -m2, -m3), v * odd);
                    }
}

TEST(ClebschGordan, Examples) {
    for (int tj = 0; tj <= 6; ++tj)
        for (int tm = -tj; tm <= tj; tm += 2)
            EXPECT_EQ(clebsch_gordan(h(tj), h(tm), 0_hj, 0_hj, h(tj), h(tm)), RadicalRational(1));

    auto table = oracle::cg_by_lowering(1, 1);
    auto singlet = clebsch_gordan(1_hj, 1_hj, 1_hj, h(-1), 0_hj, 0_hj);
    EXPECT_NEAR(singlet.to_double(), table.at({1, -1, 0, 0}), 1e-14);
    EXPECT_EQ(singlet, RadicalRational::from_parts(Rational(1, 2), Rational(2)));
    EXPECT_EQ(clebsch_gordan(1_hj, 1_hj, 1_hj, 1_hj, 2_hj, 2_hj), RadicalRational(1));
}

TEST(ClebschGordan, MatchesLoweringOperatorTables) {
    for (int tj1 = 0; tj1 <= 4; ++tj1)
        for (int tj2 = 0; tj2 <= 4; ++tj2) {
            auto table = oracle::cg_by_lowering(tj1, tj2);
            for (const auto &[key, value] : table) {
                auto [m1, m2, J, M] = key;
                auto cg = clebsch_gordan(h(tj1), h(m1), h(tj2), h(m2), h(J), h(M));
                EXPECT_NEAR(cg.to_double(), value, 1e-12) << tj1 << " " << tj2 << " " << m1 << " " << m2 << " " << J;
            }
        }
}

TEST(SixJ, Examples) {
    auto a = sixj({2, 2, 2, 2, 2, 2});
    expect_matches(a, oracle::sixj(2, 2, 2, 2, 2, 2));
    EXPECT_EQ(a, RadicalRational(Rational(1, 6)));

    auto b = sixj({2, 2, 2, 0, 2, 2});
    expect_matches(b, oracle::sixj(2, 2, 2, 0, 2, 2));
    EXPECT_EQ(b, RadicalRational(Rational(-1, 3)));
    // one-zero reduction {a b c; 0 c b} = (-1)^(a+b+c) / sqrt((2b+1)(2c+1))
    for (int ta = 0; ta <= 6; ++ta)
        for (int tb = 0; tb <= 6; ++tb)
            for (int tc = std::abs(ta - tb); tc <= ta + tb; tc += 2) {
                auto expected = RadicalRational::sqrt_of(Rational(1, (tb + 1) * (tc + 1))) * parity_sign((ta + tb + tc) / 2);
                EXPECT_EQ(sixj({ta, tb, tc, 0, tc, tb}), expected);
            }

    EXPECT_TRUE(sixj({2, 2, 6, 2, 2, 2}).is_zero());
}

TEST(SixJ, MatchesOracleAndHighPrecisionFloat) {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> spin(0, 14);
    int checked = 0;
    while (checked < 400) {
        std::array<int, 6> t{};
        for (int &x : t)
            x = spin(rng);
        if (!oracle::sixj_admissible(t[0], t[1], t[2], t[3], t[4], t[5]))
            continue;
        auto v = sixj_direct(t);
        expect_matches(v, oracle::sixj(t[0], t[1], t[2], t[3], t[4], t[5]));
        double ref = static_cast<double>(oracle::sixj_float(t[0], t[1], t[2], t[3], t[4], t[5]));
        double got = v.to_double();
        if (ref == 0)
            EXPECT_EQ(got, 0.0);
        else
            EXPECT_LE(std::abs(got - ref), std::abs(std::nextafter(ref, 2 * ref) - ref)) << got << " vs " << ref;
        ++checked;
    }
}

TEST(SixJ, AllTwentyFourSymmetriesExact) {
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; b <= 4; ++b)
            for (int c = 0; c <= 4; ++c)
                for (int d = 0; d <= 4; ++d)
                    for (int e = 0; e <= 4; ++e)
                        for (int f = 0; f <= 4; ++f) {
                            std::array<int, 6> t{a, b, c, d, e, f};
                            if (!oracle::sixj_admissible(a, b, c, d, e, f))
                                continue;
                            auto v = sixj_direct(t);
                            for (const auto &image : detail::sixj_orbit(t))
                                EXPECT_EQ(sixj_direct(image), v);
                        }
}

TEST(SixJ, Orthogonality) {
    for (int a = 0; a <= 6; ++a)
        for (int b = 0; b <= 6; ++b)
            for (int c = 0; c <= 6; ++c)
                for (int d = 0; d <= 6; ++d)
                    for (int p = 0; p <= 12; ++p)
                        for (int q = 0; q <= 12; ++q) {
                            if (!triangle_ok_twice(a, d, p) || !triangle_ok_twice(c, b, p) ||
                                !triangle_ok_twice(a, d, q) || !triangle_ok_twice(c, b, q))
                                continue;
                            RadicalRational sum;
                            for (int x = 0; x <= a + b; ++x)
                                sum += sixj({a, b, x, c, d, p}) * sixj({a, b, x, c, d, q}) *
                                       RadicalRational((x + 1) * (p + 1));
                            EXPECT_EQ(sum, RadicalRational(p == q ? 1 : 0)) << a << b << c << d << p << q;
                        }
}

TEST(SixJ, CacheKeyIsOrbitInvariantAndCacheAgrees) {
    std::array<int, 6> t{3, 4, 5, 6, 3, 4};
    auto key = detail::sixj_canonical_key(t);
    for (const auto &image : detail::sixj_orbit(t))
        EXPECT_EQ(detail::sixj_canonical_key(image), key);
    EXPECT_EQ(sixj(t), sixj_direct(t));
    EXPECT_EQ(sixj({5, 6, 3, 4, 3, 4}), sixj_direct(t));
}

TEST(SixJ, BeyondCacheCeilingStillExactButUncached) {
    int saved = config().max_cached_twice.load();
    config().max_cached_twice = 10;
    std::size_t before = detail::SixJCache::instance().size();
    std::array<int, 6> t{12, 12, 12, 12, 12, 12};
    auto v = sixj(t);
    EXPECT_EQ(detail::SixJCache::instance().size(), before);
    expect_matches(v, oracle::sixj(12, 12, 12, 12, 12, 12));
    config().max_cached_twice = saved;
}

TEST(SixJ, ConcurrentCacheUse) {
    detail::SixJCache::instance().clear();
    std::vector<std::array<int, 6>> inputs;
    for (int a = 2; a <= 10; a += 2)
        for (int b = 2; b <= 10; b += 2)
            for (int x = std::abs(a - b); x <= a + b; x += 2)
                inputs.push_back({a, b, x, b, a, 4});
    std::vector<std::vector<RadicalRational>> results(4);
    std::vector<std::thread> workers;
    for (int w = 0; w < 4; ++w)
        workers.emplace_back([&, w] {
            for (const auto &t : inputs)
                results[w].push_back(sixj(t));
        });
    for (auto &t : workers)
        t.join();
    for (std::size_t i = 0; i < inputs.size(); ++i)
        for (int w = 0; w < 4; ++w)
            EXPECT_EQ(results[w][i], sixj_direct(inputs[i]));
}

TEST(NineJ, Examples) {
    EXPECT_EQ(ninej({0, 0, 0, 0, 0, 0, 0, 0, 0}), RadicalRational(1));
    EXPECT_TRUE(ninej({2, 2, 2, 2, 2, 4, 2, 2, 0}).is_zero()); // c != f with 0 in the corner
    EXPECT_TRUE(ninej({2, 2, 2, 2, 2, 2, 2, 4, 0}).is_zero()); // g != h

    auto v = ninej({2, 2, 2, 2, 2, 2, 2, 2, 0});
    expect_matches(v, oracle::ninej({2, 2, 2, 2, 2, 2, 2, 2, 0}));
    // {a b e; c d e; f f 0} = (-1)^(b+c+e+f) {a b e; d c f} / sqrt((2e+1)(2f+1)), all spins 1
    EXPECT_EQ(v, sixj({2, 2, 2, 2, 2, 2}) * RadicalRational(Rational(1, 3)));
    EXPECT_EQ(v, RadicalRational(Rational(1, 18)));
}

TEST(NineJ, OneZeroReductionOnGrid) {
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; b <= 4; ++b)
            for (int c = 0; c <= 4; ++c)
                for (int d = 0; d <= 4; ++d)
                    for (int e = 0; e <= 6; ++e)
                        for (int f = 0; f <= 6; ++f) {
                            auto v = ninej({a, b, e, c, d, e, f, f, 0});
                            auto red = sixj({a, b, e, d, c, f}) *
                                       RadicalRational::sqrt_of(Rational(1, (e + 1) * (f + 1))) *
                                       parity_sign((b + c + e + f) / 2);
                            if (!triangle_ok_twice(a, b, e) || !triangle_ok_twice(c, d, e) ||
                                !triangle_ok_twice(a, c, f) || !triangle_ok_twice(b, d, f)) {
                                EXPECT_TRUE(v.is_zero());
                                continue;
                            }
                            EXPECT_EQ(v, red);
                        }
}

TEST(NineJ, PermutationSymmetries) {
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> spin(0, 4);
    int checked = 0;
    while (checked < 150) {
        std::array<int, 9> t{};
        for (int &x : t)
            x = spin(rng);
        auto v = ninej(t);
        if (v.is_zero())
            continue;
        ++checked;
        int sum = 0;
        for (int x : t)
            sum += x;
        int odd = parity_sign(sum / 2);
        auto [a, b, c, d, e, f, g, hh, i] = t;
        EXPECT_EQ(ninej({a, d, g, b, e, hh, c, f, i}), v);       // transpose
        EXPECT_EQ(ninej({d, e, f, a, b, c, g, hh, i}), v * odd); // swap rows 1,2
        EXPECT_EQ(ninej({b, a, c, e, d, f, hh, g, i}), v * odd); // swap columns 1,2
        EXPECT_EQ(ninej({d, e, f, g, hh, i, a, b, c}), v);       // cyclic rows
        expect_matches(v, oracle::ninej(t));
    }
}
