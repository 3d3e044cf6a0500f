#pragma once

/// \file spinnet/hyperquant.hpp
///
/// One-coordinate grid Hamiltonian: kinetic part diagonal in the momentum
/// labels j = 0..N-1 with eigenvalues j(j+1), potential diagonal on the grid.
/// With U[n][x] (rows n) from the Hahn transform the grid-basis operator is
///   H = U^T diag(j(j+1)) U + diag(V).

#include "spinnet/error.hpp"
#include "spinnet/hahn.hpp"
#include "spinnet/json_io.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

namespace spinnet {

/// Floating view of the exact transform.
inline Eigen::MatrixXd transform_matrix(const HahnParams &p) {
    auto exact = stereodirected_transform(p);
    Eigen::MatrixXd U(p.N, p.N);
    for (int n = 0; n < p.N; ++n)
        for (int x = 0; x < p.N; ++x)
            U(n, x) = exact[n][x].to_double();
    return U;
}

/// Exact U^T diag(j(j+1)) U. Every term of entry (x, y) carries
/// sqrt(w(x) w(y)), so the sums stay within one radical.
inline std::vector<std::vector<RadicalRational>> exact_kinetic(const HahnParams &p) {
    auto U = stereodirected_transform(p);
    std::vector<std::vector<RadicalRational>> T(p.N, std::vector<RadicalRational>(p.N));
    for (int x = 0; x < p.N; ++x)
        for (int y = 0; y < p.N; ++y)
            for (int n = 0; n < p.N; ++n)
                if (!U[n][x].is_zero() && !U[n][y].is_zero())
                    T[x][y] = add_like(T[x][y], RadicalRational(n * (n + 1)) * U[n][x] * U[n][y]);
    return T;
}

inline Eigen::MatrixXd assemble_hamiltonian(const HahnParams &p, const std::vector<double> &potential) {
    if (static_cast<int>(potential.size()) != p.N)
        throw Error(ErrorKind::InvalidParams, "potential has " + std::to_string(potential.size()) +
                                                  " samples, grid has " + std::to_string(p.N));
    for (std::size_t x = 0; x < potential.size(); ++x)
        if (!std::isfinite(potential[x]))
            throw Error(ErrorKind::NonFinitePotential, "potential sample " + std::to_string(x) + " is not finite");
    Eigen::MatrixXd U = transform_matrix(p);
    Eigen::VectorXd kin(p.N);
    for (int n = 0; n < p.N; ++n)
        kin(n) = static_cast<double>(n) * (n + 1);
    Eigen::MatrixXd H = U.transpose() * kin.asDiagonal() * U;
    H = 0.5 * (H + H.transpose());
    for (int x = 0; x < p.N; ++x)
        H(x, x) += potential[x];
    return H;
}

struct HamiltonianSolution {
    Eigen::VectorXd eigenvalues;  // ascending
    Eigen::MatrixXd eigenvectors; // columns, first nonzero component positive
    Eigen::MatrixXd hamiltonian;
    double residual_max = 0; // max_k |H v_k - l_k v_k|
    double norm = 0;         // Frobenius norm of H
};

inline HamiltonianSolution build_and_solve(const HahnParams &p, const std::vector<double> &potential) {
    detail::check_hahn(p);
    HamiltonianSolution out;
    out.hamiltonian = assemble_hamiltonian(p, potential);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(out.hamiltonian);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorKind::InvalidParams, "eigensolver did not converge");
    out.eigenvalues = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors();
    for (int k = 0; k < p.N; ++k) {
        auto v = out.eigenvectors.col(k);
        const double tiny = 1e-12 * v.cwiseAbs().maxCoeff();
        for (int i = 0; i < p.N; ++i)
            if (std::abs(v(i)) > tiny) {
                if (v(i) < 0)
                    v = -v;
                break;
            }
    }
    out.norm = out.hamiltonian.norm();
    for (int k = 0; k < p.N; ++k) {
        double r = (out.hamiltonian * out.eigenvectors.col(k) - out.eigenvalues(k) * out.eigenvectors.col(k)).norm();
        out.residual_max = std::max(out.residual_max, r);
    }
    return out;
}

namespace detail {

inline double parse_number(std::string_view text, const std::string &context) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
        text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
        text.remove_suffix(1);
    // strtod accepts nan/inf spellings, which are then rejected as non-finite
    std::string s(text);
    char *end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
        throw Error(ErrorKind::UnsupportedFormat, "cannot read a number from '" + s + "' " + context);
    return v;
}

} // namespace detail

/// Built-in potentials: "zero", "harmonic:c" with V(x) = c (x - (N-1)/2)^2.
inline std::vector<double> builtin_potential(std::string_view name, int N) {
    if (name == "zero")
        return std::vector<double>(N, 0.0);
    if (name.substr(0, 9) == "harmonic:") {
        double c = detail::parse_number(name.substr(9), "in harmonic potential");
        std::vector<double> v(N);
        for (int x = 0; x < N; ++x) {
            double d = x - (N - 1) / 2.0;
            v[x] = c * d * d;
        }
        return v;
    }
    throw Error(ErrorKind::UnsupportedFormat, "unknown built-in potential '" + std::string(name) + "'");
}

/// CSV with one "index,value" sample per line; blank lines and lines
/// starting with '#' are skipped. Every index 0..N-1 must appear once.
inline std::vector<double> parse_potential_csv(std::istream &in, int N) {
    std::vector<double> v(N, 0.0);
    std::vector<bool> seen(N, false);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos || line[line.find_first_not_of(" \t")] == '#')
            continue;
        auto comma = line.find(',');
        const std::string where = "on line " + std::to_string(lineno);
        if (comma == std::string::npos)
            throw Error(ErrorKind::UnsupportedFormat, "expected 'index,value' " + where);
        double idx = detail::parse_number(std::string_view(line).substr(0, comma), where);
        double val = detail::parse_number(std::string_view(line).substr(comma + 1), where);
        if (idx != std::floor(idx) || idx < 0 || idx >= N)
            throw Error(ErrorKind::OutOfRange, "grid index out of range " + where);
        auto i = static_cast<int>(idx);
        if (seen[i])
            throw Error(ErrorKind::UnsupportedFormat, "duplicate grid index " + std::to_string(i) + " " + where);
        if (!std::isfinite(val))
            throw Error(ErrorKind::NonFinitePotential, "potential sample " + std::to_string(i) + " is not finite");
        seen[i] = true;
        v[i] = val;
    }
    for (int i = 0; i < N; ++i)
        if (!seen[i])
            throw Error(ErrorKind::UnsupportedFormat, "potential CSV is missing grid index " + std::to_string(i));
    return v;
}

inline Json solution_to_json(const HamiltonianSolution &s) {
    Json ev = Json::array();
    for (int k = 0; k < s.eigenvalues.size(); ++k)
        ev.push_back(s.eigenvalues(k));
    return Json{{"eigenvalues", ev}, {"residual_max", s.residual_max}};
}

/// Eigenvectors as CSV: header "x,v0,v1,...", one row per grid point.
inline std::string eigenvectors_to_csv(const HamiltonianSolution &s) {
    std::string out = "x";
    for (int k = 0; k < s.eigenvectors.cols(); ++k)
        out += ",v" + std::to_string(k);
    out += "\n";
    char buf[40];
    for (int x = 0; x < s.eigenvectors.rows(); ++x) {
        out += std::to_string(x);
        for (int k = 0; k < s.eigenvectors.cols(); ++k) {
            std::snprintf(buf, sizeof buf, ",%.17g", s.eigenvectors(x, k));
            out += buf;
        }
        out += "\n";
    }
    return out;
}

} // namespace spinnet
