#include "oracles.hpp"

#include "spinnet/radical.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace spinnet;

namespace {

RadicalRational rr(long num, long den, long radicand) {
    return RadicalRational::from_parts(Rational(num, den), Rational(radicand));
}

double ulp_distance(double a, double b) {
    if (a == b)
        return 0;
    return std::abs(a - b) / std::abs(std::nextafter(a, b) - a);
}

} // namespace

TEST(RadicalRational, MultiplyLikeRadicalsGivesRational) {
    auto x = rr(1, 2, 2) * rr(1, 3, 2);
    EXPECT_EQ(x.coeff(), Rational(1, 3));
    EXPECT_EQ(x.radicand(), 1);
}

TEST(RadicalRational, AddLike) {
    auto x = add_like(rr(1, 2, 3), rr(1, 2, 3));
    EXPECT_EQ(x.coeff(), Rational(1));
    EXPECT_EQ(x.radicand(), 3);
}

TEST(RadicalRational, AddLikeRejectsUnlikeRadicals) {
    try {
        (void)add_like(rr(1, 1, 2), rr(1, 1, 3));
        FAIL() << "expected RadicandMismatch";
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::RadicandMismatch);
    }
    // zero is compatible with any radical
    EXPECT_EQ(add_like(RadicalRational(), rr(2, 1, 5)), rr(2, 1, 5));
}

TEST(RadicalRational, CancellationGivesCanonicalZero) {
    auto z = rr(1, 2, 7) - rr(1, 2, 7);
    EXPECT_TRUE(z.is_zero());
    EXPECT_EQ(z.radicand(), 1);
    EXPECT_EQ(z, RadicalRational());
}

TEST(RadicalRational, DivisionByZero) {
    try {
        (void)(rr(1, 1, 2) / RadicalRational());
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::DivisionByZero);
    }
}

TEST(RadicalRational, Canonicalization) {
    auto a = RadicalRational::sqrt_of(Rational(12));
    EXPECT_EQ(a.coeff(), Rational(2));
    EXPECT_EQ(a.radicand(), 3);
    auto b = RadicalRational::sqrt_of(Rational(1, 2));
    EXPECT_EQ(b.coeff(), Rational(1, 2));
    EXPECT_EQ(b.radicand(), 2);
    auto c = RadicalRational::sqrt_of(Rational(49, 9));
    EXPECT_EQ(c, RadicalRational(Rational(7, 3)));
    // large square factor
    auto d = RadicalRational::sqrt_of(Rational(BigInt("1000000000000000000000000") * 1009 * 1009 * 6));
    EXPECT_EQ(d.radicand(), 6);
    EXPECT_EQ(d.coeff(), Rational(BigInt("1000000000000") * 1009));
}

TEST(RadicalRational, DivisionIsInverseOfMultiplication) {
    auto x = rr(3, 7, 10), y = rr(-5, 2, 6);
    EXPECT_EQ((x * y) / y, x);
    EXPECT_EQ(x / x, RadicalRational(1));
}

TEST(RadicalRational, CompareAbs) {
    EXPECT_EQ(compare_abs(rr(1, 1, 2), rr(-3, 2, 1)), std::strong_ordering::less);
    EXPECT_EQ(compare_abs(rr(-1, 1, 4), rr(2, 1, 1)), std::strong_ordering::equal);
    EXPECT_EQ(compare_abs(rr(1, 1, 3), rr(1, 1, 2)), std::strong_ordering::greater);
}

TEST(RadicalRational, ToDoubleOneThirdSqrtThree) {
    oracle::Float200 reference = boost::multiprecision::sqrt(oracle::Float200(3)) / 3;
    const double value = rr(1, 3, 3).to_double();
    // nearest double to the 200-bit reference
    double lo = static_cast<double>(reference);
    double hi = std::nextafter(lo, 1.0);
    double nearest = (abs(oracle::Float200(lo) - reference) <= abs(oracle::Float200(hi) - reference)) ? lo : hi;
    EXPECT_EQ(value, nearest);
    EXPECT_EQ(value, 0.5773502691896257);
    // the commonly quoted 1/sqrt(3) in double arithmetic is one ulp above
    EXPECT_LE(ulp_distance(value, 0.5773502691896258), 1.0);
}

TEST(RadicalRational, ToDoubleWithinOneUlpOfHighPrecision) {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<long> num(-100000, 100000), den(1, 100000), rad(1, 5000);
    for (int i = 0; i < 2000; ++i) {
        long n = num(rng), d = den(rng), r = rad(rng);
        auto x = rr(n, d, r);
        oracle::Float200 ref = oracle::Float200(n) / d * boost::multiprecision::sqrt(oracle::Float200(r));
        EXPECT_LE(ulp_distance(x.to_double(), static_cast<double>(ref)), 1.0) << x.to_string();
    }
    // extreme magnitudes
    auto tiny = RadicalRational::from_parts(Rational(BigInt(1), boost::multiprecision::pow(BigInt(10), 250)), Rational(2));
    EXPECT_NEAR(tiny.to_double() / 1.4142135623730951e-250, 1.0, 1e-15);
}

TEST(RadicalRational, StringRoundTrip) {
    EXPECT_EQ(rr(-1, 3, 3).to_string(), "-1/3*sqrt(3)");
    EXPECT_EQ(RadicalRational(Rational(1, 6)).to_string(), "1/6");
    EXPECT_EQ(RadicalRational().to_string(), "0");
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> num(-1000, 1000), den(1, 1000), rad(1, 300);
    for (int i = 0; i < 500; ++i) {
        auto x = rr(num(rng), den(rng), rad(rng));
        EXPECT_EQ(RadicalRational::parse(x.to_string()), x) << x.to_string();
    }
    EXPECT_EQ(RadicalRational::parse("sqrt(8)"), rr(2, 1, 2));
    EXPECT_EQ(RadicalRational::parse("1/2*sqrt(1/2)"), rr(1, 4, 2));
    EXPECT_THROW(RadicalRational::parse("1/0"), Error);
    EXPECT_THROW(RadicalRational::parse("sqrt(2"), Error);
    EXPECT_THROW(RadicalRational::parse("abc"), Error);
}
