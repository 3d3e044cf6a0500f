#pragma once

/// \file spinnet/tetrahedron.hpp
///
/// Tetrahedra with edges in 6j order {j1 j2 j3; j4 j5 j6}. Opposite edges are
/// (j1,j4), (j2,j5), (j3,j6); the faces are the four triads
/// (j1 j2 j3), (j1 j5 j6), (j4 j2 j6), (j4 j5 j3).
///
/// Vertex placement used throughout:
///   j1 = V1V2, j2 = V2V3, j3 = V1V3, j4 = V3V4, j5 = V1V4, j6 = V2V4.

#include "spinnet/error.hpp"
#include "spinnet/halfint.hpp"
#include "spinnet/number.hpp"
#include "spinnet/radical.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace spinnet {

/// sqrt(q) rounded to double without forming a radical normal form.
inline double sqrt_to_double(const Rational &q) {
    if (q <= 0)
        return 0.0;
    return detail::sqrt_ratio_to_double(boost::multiprecision::numerator(q), boost::multiprecision::denominator(q));
}

enum class Regime { Allowed, Flat, Forbidden };

inline std::string to_string(Regime r) {
    switch (r) {
    case Regime::Allowed: return "allowed";
    case Regime::Flat: return "flat";
    case Regime::Forbidden: return "forbidden";
    }
    return "unknown";
}

/// Face triads as edge indices.
inline constexpr std::array<std::array<int, 3>, 4> kFaces{{{0, 1, 2}, {0, 4, 5}, {3, 1, 5}, {3, 4, 2}}};

/// Edge index -> (vertex, vertex), 0-based.
inline constexpr std::array<std::array<int, 2>, 6> kEdgeVertices{{{0, 1}, {1, 2}, {0, 2}, {2, 3}, {0, 3}, {1, 3}}};

class Tetrahedron {
  public:
    /// Squared edge lengths, exact.
    explicit Tetrahedron(const std::array<Rational, 6> &squared) : squared_(squared) {
        for (const auto &s : squared_)
            if (s < 0)
                throw Error(ErrorKind::InvalidParams, "squared edge length is negative");
    }

    /// Edge lengths as doubles; every finite double is an exact dyadic
    /// rational, so squares are exact.
    static Tetrahedron from_lengths(const std::array<double, 6> &lengths) {
        std::array<Rational, 6> sq;
        for (int r = 0; r < 6; ++r) {
            if (!std::isfinite(lengths[r]) || lengths[r] < 0)
                throw Error(ErrorKind::InvalidParams, "edge lengths must be finite and nonnegative");
            Rational x = exact_rational(lengths[r]);
            sq[r] = x * x;
        }
        return Tetrahedron(sq);
    }

    /// Edges j_r, or j_r + 1/2 when `shifted`.
    static Tetrahedron from_spins(const std::array<HalfInt, 6> &spins, bool shifted) {
        std::array<Rational, 6> sq;
        for (int r = 0; r < 6; ++r) {
            require_magnitude(spins[r]);
            Rational x(spins[r].twice() + (shifted ? 1 : 0), 2);
            sq[r] = x * x;
        }
        return Tetrahedron(sq);
    }

    const std::array<Rational, 6> &squared() const noexcept { return squared_; }
    double length(int r) const { return sqrt_to_double(squared_.at(r)); }

    /// Squared distance between vertices p and q.
    const Rational &d2(int p, int q) const {
        for (int r = 0; r < 6; ++r)
            if ((kEdgeVertices[r][0] == p && kEdgeVertices[r][1] == q) ||
                (kEdgeVertices[r][0] == q && kEdgeVertices[r][1] == p))
                return squared_[r];
        throw Error(ErrorKind::InvalidParams, "no edge between equal vertices");
    }

    /// 16 A^2 of face f (Heron on squared lengths); negative when the
    /// triangle inequality fails.
    Rational face_heron(int f) const {
        const Rational &x = squared_[kFaces[f][0]], &y = squared_[kFaces[f][1]], &z = squared_[kFaces[f][2]];
        return 2 * (x * y + y * z + z * x) - (x * x + y * y + z * z);
    }

    /// The 5x5 Cayley-Menger determinant, equal to 288 V^2.
    Rational cayley_menger() const {
        std::array<std::array<Rational, 5>, 5> m;
        for (int i = 0; i < 5; ++i)
            for (int k = 0; k < 5; ++k)
                m[i][k] = (i == k) ? 0 : ((i == 0 || k == 0) ? 1 : d2(i - 1, k - 1));
        return determinant(m);
    }

    Regime regime() const {
        for (int f = 0; f < 4; ++f)
            if (face_heron(f) < 0)
                return Regime::Forbidden;
        Rational cm = cayley_menger();
        if (cm < 0)
            return Regime::Forbidden;
        return cm == 0 ? Regime::Flat : Regime::Allowed;
    }

  private:
    static Rational exact_rational(double x) {
        int exp = 0;
        double mant = std::frexp(x, &exp);
        // 53-bit integer mantissa
        auto m = static_cast<long long>(std::ldexp(mant, 53));
        exp -= 53;
        Rational out(m);
        if (exp >= 0)
            out *= Rational(BigInt(1) << exp);
        else
            out /= Rational(BigInt(1) << -exp);
        return out;
    }

    template <std::size_t N>
    static Rational determinant(std::array<std::array<Rational, N>, N> m) {
        Rational det = 1;
        for (std::size_t c = 0; c < N; ++c) {
            std::size_t pivot = c;
            while (pivot < N && m[pivot][c] == 0)
                ++pivot;
            if (pivot == N)
                return 0;
            if (pivot != c) {
                std::swap(m[pivot], m[c]);
                det = -det;
            }
            det *= m[c][c];
            for (std::size_t r = c + 1; r < N; ++r) {
                if (m[r][c] == 0)
                    continue;
                Rational f = m[r][c] / m[c][c];
                for (std::size_t k = c; k < N; ++k)
                    m[r][k] -= f * m[c][k];
            }
        }
        return det;
    }

    std::array<Rational, 6> squared_;
};

struct VolumeResult {
    double volume = 0; // 0 unless allowed
    Regime regime = Regime::Forbidden;
};

/// V = sqrt(CM / 288), one rounding from the exact determinant.
inline VolumeResult cm_volume(const Tetrahedron &t) {
    Regime regime = t.regime();
    if (regime != Regime::Allowed)
        return {0.0, regime};
    return {sqrt_to_double(t.cayley_menger() / 288), regime};
}

/// Area of face f.
inline double face_area(const Tetrahedron &t, int f) {
    return sqrt_to_double(t.face_heron(f) / 16);
}

/// theta_r = pi - interior dihedral angle at edge r, i.e. the angle between
/// the outward normals of the two faces sharing that edge.
inline std::array<double, 6> dihedral_angles(const Tetrahedron &t) {
    Regime regime = t.regime();
    if (regime != Regime::Allowed)
        throw Error(ErrorKind::DegenerateGeometry, "dihedral angles need an allowed tetrahedron, regime is " +
                                                       to_string(regime));
    auto sq = [&](int p, int q) { return t.d2(p, q).convert_to<double>(); };
    // V1 at the origin, V2 on x, V3 in the xy plane, V4 above it; heights
    // come from exact areas and volume rather than cancelling subtractions.
    const double x2 = std::sqrt(sq(0, 1));
    const double base_area = face_area(t, 0);
    const double volume = cm_volume(t).volume;
    const double x3 = (sq(0, 1) + sq(0, 2) - sq(1, 2)) / (2 * x2);
    const double y3 = 2 * base_area / x2;
    const double x4 = (sq(0, 1) + sq(0, 3) - sq(1, 3)) / (2 * x2);
    const double y4 = (sq(0, 2) + sq(0, 3) - sq(2, 3) - 2 * x3 * x4) / (2 * y3);
    const double z4 = 3 * volume / base_area;
    const std::array<std::array<double, 3>, 4> v{{{0, 0, 0}, {x2, 0, 0}, {x3, y3, 0}, {x4, y4, z4}}};

    using Vec = std::array<double, 3>;
    auto sub = [](const Vec &a, const Vec &b) { return Vec{a[0] - b[0], a[1] - b[1], a[2] - b[2]}; };
    auto dot = [](const Vec &a, const Vec &b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; };
    auto cross = [](const Vec &a, const Vec &b) {
        return Vec{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
    };
    std::array<double, 6> theta{};
    for (int r = 0; r < 6; ++r) {
        const int p = kEdgeVertices[r][0], q = kEdgeVertices[r][1];
        int others[2], n = 0;
        for (int w = 0; w < 4; ++w)
            if (w != p && w != q)
                others[n++] = w;
        const Vec e = sub(v[q], v[p]);
        const double ee = dot(e, e);
        auto perp = [&](int w) {
            Vec u = sub(v[w], v[p]);
            double s = dot(u, e) / ee;
            return Vec{u[0] - s * e[0], u[1] - s * e[1], u[2] - s * e[2]};
        };
        const Vec u = perp(others[0]), w = perp(others[1]);
        const Vec c = cross(u, w);
        const double interior = std::atan2(std::sqrt(dot(c, c)), dot(u, w));
        theta[r] = std::numbers::pi - interior;
    }
    return theta;
}

} // namespace spinnet
