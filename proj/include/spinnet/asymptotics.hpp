#pragma once

/// \file spinnet/asymptotics.hpp
///
/// Semiclassical 6j estimates:
///   Wigner mean square   <{6j}^2> ~ 1 / (12 pi V(j))
///   Ponzano-Regge        {6j} ~ cos(S + pi/4) / sqrt(12 pi V(l)),  S = sum l_r theta_r,  l = j + 1/2
///   edge contraction     {a b c; d+R e+R f+R} ~ (-1)^(a+b+c+2(D+E+F)) (a b c; e-f f-d d-e) / sqrt(2R+1)
/// and scans comparing them with exact values.
///
/// The Ponzano-Regge normalisation is the one that reproduces exact 6j
/// values; it is sqrt(2) times the real part of the single complex branch
/// exp(i(S + pi/4)) / sqrt(24 pi V), not twice it. Its phase average is
/// therefore 1/(24 pi V).

#include "spinnet/error.hpp"
#include "spinnet/halfint.hpp"
#include "spinnet/json_io.hpp"
#include "spinnet/tetrahedron.hpp"
#include "spinnet/wigner.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

namespace spinnet {

using SixSpins = std::array<HalfInt, 6>;

namespace detail {

inline bool sixj_admissible(const SixSpins &j) {
    for (const auto &f : kFaces)
        if (!triangle_ok(j[f[0]], j[f[1]], j[f[2]]))
            return false;
    return true;
}

inline void require_admissible(const SixSpins &j) {
    for (HalfInt s : j)
        require_magnitude(s);
    if (!sixj_admissible(j))
        throw Error(ErrorKind::DegenerateGeometry, "6j argument is not admissible (a triad fails)");
}

inline double allowed_volume(const Tetrahedron &t, const char *what) {
    VolumeResult v = cm_volume(t);
    if (v.regime != Regime::Allowed)
        throw Error(ErrorKind::DegenerateGeometry, std::string(what) + ": tetrahedron is " + to_string(v.regime));
    return v.volume;
}

} // namespace detail

/// 1 / (12 pi V) with V the volume on the unshifted edges j.
inline double wigner_mean_square(const SixSpins &j) {
    detail::require_admissible(j);
    double v = detail::allowed_volume(Tetrahedron::from_spins(j, false), "Wigner mean square");
    return 1.0 / (12 * std::numbers::pi * v);
}

struct PonzanoRegge {
    double amplitude = 0;
    double action = 0;    // sum l_r theta_r
    double prefactor = 0; // 1 / sqrt(12 pi V)
    double volume = 0;
    std::array<double, 6> angles{};
};

inline PonzanoRegge ponzano_regge(const SixSpins &j) {
    detail::require_admissible(j);
    Tetrahedron t = Tetrahedron::from_spins(j, true);
    PonzanoRegge out;
    out.volume = detail::allowed_volume(t, "Ponzano-Regge");
    out.angles = dihedral_angles(t);
    for (int r = 0; r < 6; ++r)
        out.action += (j[r].to_double() + 0.5) * out.angles[r];
    out.prefactor = 1.0 / std::sqrt(12 * std::numbers::pi * out.volume);
    out.amplitude = out.prefactor * std::cos(out.action + std::numbers::pi / 4);
    return out;
}

/// Large-R contraction of {a b c; d+R e+R f+R} to a 3j symbol. Zero when
/// (a b c) is not a triad or the projections are out of range.
inline double edge_asymptotic(HalfInt a, HalfInt b, HalfInt c, HalfInt d, HalfInt e, HalfInt f, HalfInt R) {
    for (HalfInt s : {a, b, c, R})
        require_magnitude(s);
    const HalfInt D = d + R, E = e + R, F = f + R;
    for (HalfInt s : {D, E, F})
        require_magnitude(s, "shifted spin");
    const HalfInt m1 = e - f, m2 = f - d, m3 = d - e;
    if (!triangle_ok(a, b, c) || !(a - m1).is_integer() || !(b - m2).is_integer() || !(c - m3).is_integer())
        return 0.0;
    if (std::abs(m1.twice()) > a.twice() || std::abs(m2.twice()) > b.twice() || std::abs(m3.twice()) > c.twice())
        return 0.0;
    const int phase = parity_sign((a + b + c).twice() / 2 + (D + E + F).twice());
    return phase * wigner_3j(a, b, c, m1, m2, m3).to_double() / std::sqrt(R.twice() + 1.0);
}

struct ScanRow {
    int k = 0;
    double exact = 0;
    double pr_amplitude = 0;
    double rel_err = 0;     // (pr - exact) / exact
    double windowed_ms = 0; // mean of exact^2 over the trailing window of rows
    double wigner_ms = 0;
    Regime regime = Regime::Allowed;
    bool near_node = false; // |cos(S + pi/4)| small: the exact value sits near a zero
};

struct ScanOptions {
    int window = 5;
    int workers = 0; // 0: hardware concurrency
    double node_threshold = 0.1;
};

inline SixSpins scaled(const SixSpins &base, int k) {
    SixSpins out;
    for (int r = 0; r < 6; ++r)
        out[r] = HalfInt::from_twice(base[r].twice() * k);
    return out;
}

/// Exact {k j} against the asymptotic formulas, one row per scale.
inline std::vector<ScanRow> asymptotic_scan(const SixSpins &base, const std::vector<int> &scales,
                                            const ScanOptions &opts = {}) {
    detail::require_admissible(base);
    if (Tetrahedron::from_spins(base, false).regime() != Regime::Allowed ||
        Tetrahedron::from_spins(base, true).regime() != Regime::Allowed)
        throw Error(ErrorKind::DegenerateGeometry, "base spins are not in the classically allowed regime");
    for (int k : scales)
        if (k < 1)
            throw Error(ErrorKind::InvalidParams, "scale factors must be positive");

    std::vector<ScanRow> rows(scales.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) {
            try {
                const int k = scales[i];
                SixSpins j = scaled(base, k);
                detail::require_admissible(j);
                ScanRow row;
                row.k = k;
                const auto &s = j;
                row.exact = wigner_6j(s[0], s[1], s[2], s[3], s[4], s[5]).to_double();
                PonzanoRegge pr = ponzano_regge(j);
                row.pr_amplitude = pr.amplitude;
                row.rel_err = row.exact != 0 ? (pr.amplitude - row.exact) / row.exact
                                             : std::numeric_limits<double>::infinity();
                row.wigner_ms = wigner_mean_square(j);
                row.regime = Regime::Allowed;
                row.near_node = std::abs(std::cos(pr.action + std::numbers::pi / 4)) < opts.node_threshold;
                rows[i] = row;
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };
    int workers = opts.workers > 0 ? opts.workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    workers = std::min<int>(workers, static_cast<int>(std::max<std::size_t>(rows.size(), 1)));
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w)
        pool.emplace_back(work);
    work();
    for (auto &t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);

    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::size_t first = i + 1 >= static_cast<std::size_t>(opts.window) ? i + 1 - opts.window : 0;
        double sum = 0;
        for (std::size_t q = first; q <= i; ++q)
            sum += rows[q].exact * rows[q].exact;
        rows[i].windowed_ms = sum / static_cast<double>(i - first + 1);
    }
    return rows;
}

/// Root mean square of rel_err over each window of `width` consecutive rows.
inline std::vector<double> sliding_rms(const std::vector<ScanRow> &rows, int width) {
    std::vector<double> out;
    for (std::size_t i = 0; i + width <= rows.size(); ++i) {
        double s = 0;
        for (std::size_t q = i; q < i + width; ++q)
            s += rows[q].rel_err * rows[q].rel_err;
        out.push_back(std::sqrt(s / width));
    }
    return out;
}

inline std::string format_double(double x) {
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    if (std::isnan(x))
        return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string scan_to_csv(const std::vector<ScanRow> &rows) {
    std::string out = "k,exact_float,pr_amplitude,rel_err,windowed_ms,wigner_ms,regime\n";
    for (const auto &r : rows)
        out += std::to_string(r.k) + "," + format_double(r.exact) + "," + format_double(r.pr_amplitude) + "," +
               format_double(r.rel_err) + "," + format_double(r.windowed_ms) + "," + format_double(r.wigner_ms) + "," +
               to_string(r.regime) + "\n";
    return out;
}

inline Json scan_to_json(const std::vector<ScanRow> &rows) {
    Json out = Json::array();
    for (const auto &r : rows) {
        Json rel = std::isfinite(r.rel_err) ? Json(r.rel_err) : Json(nullptr);
        out.push_back(Json{{"k", r.k},
                           {"exact_float", r.exact},
                           {"pr_amplitude", r.pr_amplitude},
                           {"rel_err", rel},
                           {"windowed_ms", r.windowed_ms},
                           {"wigner_ms", r.wigner_ms},
                           {"regime", to_string(r.regime)},
                           {"near_node", r.near_node}});
    }
    return out;
}

} // namespace spinnet
