#include "oracles.hpp"

#include "spinnet/hahn.hpp"
#include "spinnet/hyperquant.hpp"
#include "spinnet/wigner.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace spinnet;

namespace {

HahnParams params(Rational a, Rational b, int N) { return HahnParams{a, b, N}; }

// 3F2 term by term with explicit rising factorials.
Rational hahn_oracle(const Rational &a, const Rational &b, int M, int n, int x) {
    auto rising = [](const Rational &v, int k) {
        Rational out = 1;
        for (int i = 0; i < k; ++i)
            out *= v + i;
        return out;
    };
    Rational sum = 0;
    for (int k = 0; k <= n; ++k) {
        Rational den = rising(a + 1, k) * rising(Rational(-M), k) * rising(Rational(1), k);
        if (den == 0)
            break;
        sum += rising(Rational(-n), k) * rising(n + a + b + 1, k) * rising(Rational(-x), k) / den;
    }
    return sum;
}

double max_abs(const Eigen::MatrixXd &m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

TEST(Hahn, DegreeZeroAndOriginNormalisation) {
    for (int N : {1, 2, 5, 9}) {
        auto p = params(Rational(1, 2), Rational(1), N);
        for (int x = 0; x < N; ++x)
            EXPECT_EQ(hahn_eval(p, 0, x), Rational(1));
        for (int n = 0; n < N; ++n)
            EXPECT_EQ(hahn_eval(p, n, 0), Rational(1));
    }
}

TEST(Hahn, AgainstTermByTermOracle) {
    EXPECT_EQ(hahn_eval(params(0, 0, 5), 1, 1), Rational(1, 2));
    EXPECT_EQ(hahn_oracle(0, 0, 4, 1, 1), Rational(1, 2));
    for (Rational a : {Rational(0), Rational(1, 2), Rational(1), Rational(-1, 3)})
        for (int N = 1; N <= 9; ++N)
            for (int n = 0; n < N; ++n)
                for (int x = 0; x < N; ++x)
                    EXPECT_EQ(hahn_eval(params(a, a + Rational(1, 4), N), n, x),
                              hahn_oracle(a, a + Rational(1, 4), N - 1, n, x));
}

TEST(Hahn, Errors) {
    try {
        hahn_eval(params(0, 0, 4), 4, 0);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::OutOfRange);
    }
    try {
        hahn_eval(params(0, 0, 4), 0, -1);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::OutOfRange);
    }
    try {
        hahn_weights_norms(params(-1, 0, 4));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidParams);
    }
    EXPECT_THROW(stereodirected_transform(params(0, 0, 0)), Error);
}

TEST(Hahn, UniformWeightAndPositiveNorms) {
    auto wn = hahn_weights_norms(params(0, 0, 7));
    for (const auto &w : wn.weights)
        EXPECT_EQ(w, Rational(1));
    for (Rational a : {Rational(0), Rational(1, 2), Rational(1), Rational(-1, 2)}) {
        auto wn2 = hahn_weights_norms(params(a, a, 12));
        for (const auto &h : wn2.norms)
            EXPECT_GT(h, 0);
    }
}

TEST(Hahn, ThreePointTable) {
    auto p = params(0, 0, 3);
    auto wn = hahn_weights_norms(p);
    // Q_0 = (1,1,1), Q_1 = (1,0,-1), Q_2 = (1,-2,1): norms 3, 2, 6
    const int q[3][3] = {{1, 1, 1}, {1, 0, -1}, {1, -2, 1}};
    for (int n = 0; n < 3; ++n)
        for (int x = 0; x < 3; ++x)
            EXPECT_EQ(hahn_eval(p, n, x), Rational(q[n][x]));
    EXPECT_EQ(wn.norms[0], Rational(3));
    EXPECT_EQ(wn.norms[1], Rational(2));
    EXPECT_EQ(wn.norms[2], Rational(6));
    for (int n = 0; n < 3; ++n)
        for (int m = 0; m < 3; ++m) {
            int s = 0;
            for (int x = 0; x < 3; ++x)
                s += q[n][x] * q[m][x];
            EXPECT_EQ(Rational(s), n == m ? wn.norms[n] : Rational(0));
        }
}

TEST(Hahn, ExactDiscreteOrthogonality) {
    for (Rational a : {Rational(0), Rational(1, 2), Rational(1)})
        for (int N = 1; N <= 20; ++N) {
            auto p = params(a, a, N);
            auto wn = hahn_weights_norms(p);
            std::vector<std::vector<Rational>> Q(N, std::vector<Rational>(N));
            for (int n = 0; n < N; ++n)
                for (int x = 0; x < N; ++x)
                    Q[n][x] = hahn_eval(p, n, x);
            for (int n = 0; n < N; ++n)
                for (int m = n; m < N; ++m) {
                    Rational s = 0;
                    for (int x = 0; x < N; ++x)
                        s += wn.weights[x] * Q[n][x] * Q[m][x];
                    ASSERT_EQ(s - (n == m ? wn.norms[n] : Rational(0)), 0) << "N=" << N << " n=" << n << " m=" << m;
                }
        }
}

TEST(StereodirectedTransform, ExactOrthonormality) {
    EXPECT_EQ(stereodirected_transform(params(0, 0, 1))[0][0], RadicalRational(1));
    auto check = [](const HahnParams &p) {
        auto U = stereodirected_transform(p);
        for (int n = 0; n < p.N; ++n)
            for (int m = n; m < p.N; ++m) {
                RadicalRational s;
                for (int x = 0; x < p.N; ++x)
                    s = add_like(s, U[n][x] * U[m][x]);
                ASSERT_EQ(s, RadicalRational(n == m ? 1 : 0)) << "N=" << p.N << " rows " << n << "," << m;
            }
        // columns too
        for (int x = 0; x < p.N; ++x) {
            RadicalRational s;
            for (int n = 0; n < p.N; ++n)
                s = add_like(s, U[n][x] * U[n][x]);
            ASSERT_EQ(s, RadicalRational(1));
        }
    };
    for (int N = 1; N <= 20; ++N)
        check(params(0, 0, N));
    for (int N = 1; N <= 10; ++N) {
        check(params(Rational(1, 2), Rational(1, 2), N));
        check(params(1, 1, N));
    }
}

// U[n][x] = (-1)^(2J - x + n) sqrt(2n+1) (J J n; x-J, J-x, 0) with N = 2J + 1.
TEST(StereodirectedTransform, BridgeToThreeJ) {
    int checked = 0;
    for (int tJ = 0; tJ <= 8; ++tJ) {
        const int N = tJ + 1;
        auto U = stereodirected_transform(params(0, 0, N));
        const HalfInt J = HalfInt::from_twice(tJ);
        for (int n = 0; n < N; ++n)
            for (int x = 0; x < N; ++x) {
                HalfInt m = HalfInt::from_twice(2 * x - tJ);
                RadicalRational expected = RadicalRational(parity_sign(tJ - x + n)) *
                                           RadicalRational::sqrt_of(Rational(2 * n + 1)) *
                                           wigner_3j(J, J, HalfInt::integer(n), m, -m, HalfInt::integer(0));
                ASSERT_EQ(U[n][x], expected) << "2J=" << tJ << " n=" << n << " x=" << x;
                ++checked;
            }
    }
    EXPECT_EQ(checked, 285);
}

TEST(GridHamiltonian, KineticPartIsTridiagonalForUniformWeight) {
    for (int N : {2, 5, 8, 12}) {
        auto T = exact_kinetic(params(0, 0, N));
        int nonzero_off = 0;
        for (int x = 0; x < N; ++x)
            for (int y = 0; y < N; ++y) {
                if (std::abs(x - y) > 1)
                    EXPECT_TRUE(T[x][y].is_zero()) << N << " " << x << "," << y;
                else if (x != y)
                    nonzero_off += !T[x][y].is_zero();
                EXPECT_EQ(T[x][y], T[y][x]);
            }
        EXPECT_EQ(nonzero_off, 2 * (N - 1));
    }
}

TEST(GridHamiltonian, FreeSpectrum) {
    for (Rational a : {Rational(0), Rational(1, 2), Rational(1)})
        for (int N : {1, 4, 10, 16}) {
            auto p = params(a, a, N);
            auto s = build_and_solve(p, std::vector<double>(N, 0.0));
            for (int j = 0; j < N; ++j)
                EXPECT_NEAR(s.eigenvalues(j), j * (j + 1.0), 1e-10 * s.norm);
            EXPECT_LE(s.residual_max, 1e-10 * s.norm);
            EXPECT_LE(max_abs(s.hamiltonian - s.hamiltonian.transpose()), 1e-12 * s.norm);
        }
}

TEST(GridHamiltonian, ConstantShift) {
    auto p = params(0, 0, 9);
    auto free = build_and_solve(p, std::vector<double>(9, 0.0));
    auto shifted = build_and_solve(p, std::vector<double>(9, 3.25));
    for (int j = 0; j < 9; ++j)
        EXPECT_NEAR(shifted.eigenvalues(j) - free.eigenvalues(j), 3.25, 1e-10 * shifted.norm);
}

TEST(GridHamiltonian, HinderedRotorAgainstJacobi) {
    const int N = 16;
    auto p = params(0, 0, N);
    auto V = builtin_potential("harmonic:0.5", N);
    auto s = build_and_solve(p, V);
    std::vector<std::vector<double>> H(N, std::vector<double>(N));
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < N; ++k)
            H[i][k] = s.hamiltonian(i, k);
    auto ref = oracle::jacobi_eigenvalues(H);
    const double vmax = *std::max_element(V.begin(), V.end());
    for (int j = 0; j < N; ++j) {
        EXPECT_NEAR(s.eigenvalues(j), ref[j], 1e-9 * s.norm);
        // bracketed by the V = 0 and V = max V spectra
        EXPECT_GE(s.eigenvalues(j), j * (j + 1.0) - 1e-9);
        EXPECT_LE(s.eigenvalues(j), j * (j + 1.0) + vmax + 1e-9);
    }
    EXPECT_LE(s.residual_max, 1e-10 * s.norm);
}

TEST(GridHamiltonian, VariationalMonotonicity) {
    const int N = 16;
    auto p = params(0, 0, N);
    auto base = build_and_solve(p, builtin_potential("harmonic:0.3", N));
    std::vector<double> bumped = builtin_potential("harmonic:0.3", N);
    for (int x = 0; x < N; ++x)
        bumped[x] += 0.1 * (x % 3);
    auto more = build_and_solve(p, bumped);
    auto stronger = build_and_solve(p, builtin_potential("harmonic:0.6", N));
    for (int j = 0; j < N; ++j) {
        EXPECT_GE(more.eigenvalues(j), base.eigenvalues(j) - 1e-10 * base.norm);
        EXPECT_GE(stronger.eigenvalues(j), base.eigenvalues(j) - 1e-10 * base.norm);
    }
}

TEST(GridHamiltonian, EigenvectorSignConvention) {
    auto s = build_and_solve(params(0, 0, 10), builtin_potential("harmonic:1", 10));
    for (int k = 0; k < 10; ++k) {
        auto v = s.eigenvectors.col(k);
        int i = 0;
        while (std::abs(v(i)) <= 1e-12 * v.cwiseAbs().maxCoeff())
            ++i;
        EXPECT_GT(v(i), 0);
    }
    auto again = build_and_solve(params(0, 0, 10), builtin_potential("harmonic:1", 10));
    EXPECT_EQ(eigenvectors_to_csv(s), eigenvectors_to_csv(again));
}

TEST(GridHamiltonian, Errors) {
    auto p = params(0, 0, 4);
    try {
        build_and_solve(p, {0, 1, std::nan(""), 2});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonFinitePotential);
    }
    try {
        build_and_solve(p, {0, 1, INFINITY, 2});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonFinitePotential);
    }
    try {
        build_and_solve(p, {0, 1});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidParams);
    }
    EXPECT_THROW(build_and_solve(params(-2, 0, 4), {0, 0, 0, 0}), Error);
}

TEST(Potential, ParsingAndJson) {
    std::istringstream in("# grid\n0,1.5\n2, -3\n1,0\n\n3,4e-1\n");
    auto v = parse_potential_csv(in, 4);
    EXPECT_EQ(v, (std::vector<double>{1.5, 0, -3, 0.4}));
    std::istringstream missing("0,1\n1,2\n");
    EXPECT_THROW(parse_potential_csv(missing, 3), Error);
    std::istringstream bad("0,abc\n");
    EXPECT_THROW(parse_potential_csv(bad, 1), Error);
    std::istringstream nan_in("0,nan\n");
    try {
        parse_potential_csv(nan_in, 1);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonFinitePotential);
    }
    EXPECT_EQ(builtin_potential("zero", 3), (std::vector<double>{0, 0, 0}));
    EXPECT_EQ(builtin_potential("harmonic:2", 3), (std::vector<double>{2, 0, 2}));
    EXPECT_THROW(builtin_potential("cubic:1", 3), Error);
    auto s = build_and_solve(params(0, 0, 3), builtin_potential("zero", 3));
    Json j = solution_to_json(s);
    ASSERT_EQ(j["eigenvalues"].size(), 3u);
    EXPECT_NEAR(j["eigenvalues"][2].get<double>(), 6.0, 1e-12);
    EXPECT_TRUE(j.contains("residual_max"));
}
