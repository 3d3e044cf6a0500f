#pragma once

/// \file spinnet/recoupling.hpp
///
/// Recoupling matrices between coupling trees. Entry (i, k) of the matrix from
/// tree A to tree B is the overlap <A, labels_i | B, labels_k>, so matrices
/// along a path multiply left to right.
///
/// Elementary overlaps (a, b, c are the spins of the subtrees involved; labels
/// of nodes untouched by the move must agree, nodes are matched by leaf set):
///
///   Phase at a node (a b)c:    <(a b)c | (b a)c> = (-1)^(a+b-c)
///   Racah ((a b)e c)g <-> (a (b c)f)g:
///        <(ab)e c; g | a (bc)f; g> = (-1)^(a+b+c+g) sqrt((2e+1)(2f+1)) {a b e; c g f}
///
/// A basis state is an admissible assignment of labels to all internal nodes
/// with the root fixed at J; states are sorted lexicographically by their
/// doubled labels in preorder site order.

#include "spinnet/coupling_tree.hpp"
#include "spinnet/error.hpp"
#include "spinnet/halfint.hpp"
#include "spinnet/json_io.hpp"
#include "spinnet/radical.hpp"
#include "spinnet/spin_graph.hpp"
#include "spinnet/wigner.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace spinnet {

struct RecouplingLimits {
    int max_leaves = 7;
    int max_twice = 400;
};

/// Doubled label of every preorder position (leaves included).
using BasisState = std::vector<int>;

/// Admissible labelings of `tree` with the given leaf spins and root J.
inline std::vector<BasisState> enumerate_basis(const CouplingTree &tree, const std::vector<HalfInt> &spins, HalfInt J) {
    const auto &nodes = tree.preorder();
    const int size = static_cast<int>(nodes.size());
    // partial labelings of one subtree, each paired with the subtree label
    auto build = [&](auto &&self, int pos) -> std::vector<BasisState> {
        if (tree.is_leaf(pos)) {
            BasisState s(size, 0);
            s[pos] = spins[tree.leaf_id(pos)].twice();
            return {s};
        }
        const int l = tree.left_child(pos), r = tree.right_child(pos);
        auto left = self(self, l), right = self(self, r);
        std::vector<BasisState> out;
        for (const auto &ls : left)
            for (const auto &rs : right) {
                const int a = ls[l], b = rs[r];
                for (int c = std::abs(a - b); c <= a + b; c += 2) {
                    BasisState s = ls;
                    for (int i = r; i < tree.subtree_end(r); ++i)
                        s[i] = rs[i];
                    s[pos] = c;
                    out.push_back(std::move(s));
                }
            }
        return out;
    };
    std::vector<BasisState> all = build(build, 0), out;
    for (auto &s : all)
        if (s[0] == J.twice())
            out.push_back(std::move(s));
    std::sort(out.begin(), out.end(), [&](const BasisState &x, const BasisState &y) {
        for (int i = 0; i < size; ++i)
            if (!tree.is_leaf(i) && x[i] != y[i])
                return x[i] < y[i];
        return false;
    });
    return out;
}

class RecouplingMatrix {
  public:
    RecouplingMatrix() = default;
    RecouplingMatrix(CouplingTree rows_tree, std::vector<BasisState> rows, CouplingTree cols_tree,
                     std::vector<BasisState> cols)
        : row_tree_(std::move(rows_tree)), col_tree_(std::move(cols_tree)), row_basis_(std::move(rows)),
          col_basis_(std::move(cols)), entries_(row_basis_.size() * col_basis_.size()) {}

    std::size_t rows() const noexcept { return row_basis_.size(); }
    std::size_t cols() const noexcept { return col_basis_.size(); }
    const CouplingTree &row_tree() const noexcept { return row_tree_; }
    const CouplingTree &col_tree() const noexcept { return col_tree_; }
    const std::vector<BasisState> &row_basis() const noexcept { return row_basis_; }
    const std::vector<BasisState> &col_basis() const noexcept { return col_basis_; }

    RadicalRational &at(std::size_t i, std::size_t k) { return entries_.at(i * cols() + k); }
    const RadicalRational &at(std::size_t i, std::size_t k) const { return entries_.at(i * cols() + k); }

    /// Sums run over like radicals; every term of a recoupling product shares
    /// the square-free part of the result.
    RecouplingMatrix operator*(const RecouplingMatrix &other) const {
        if (cols() != other.rows() || col_basis_ != other.row_basis_)
            throw Error(ErrorKind::InvalidParams, "recoupling matrices do not chain");
        RecouplingMatrix out(row_tree_, row_basis_, other.col_tree_, other.col_basis_);
        for (std::size_t i = 0; i < rows(); ++i)
            for (std::size_t j = 0; j < cols(); ++j) {
                const RadicalRational &a = at(i, j);
                if (a.is_zero())
                    continue;
                for (std::size_t k = 0; k < other.cols(); ++k) {
                    const RadicalRational &b = other.at(j, k);
                    if (!b.is_zero())
                        out.at(i, k) = add_like(out.at(i, k), a * b);
                }
            }
        return out;
    }

    RecouplingMatrix transpose() const {
        RecouplingMatrix out(col_tree_, col_basis_, row_tree_, row_basis_);
        for (std::size_t i = 0; i < rows(); ++i)
            for (std::size_t k = 0; k < cols(); ++k)
                out.at(k, i) = at(i, k);
        return out;
    }

    bool is_identity() const {
        if (rows() != cols())
            return false;
        for (std::size_t i = 0; i < rows(); ++i)
            for (std::size_t k = 0; k < cols(); ++k)
                if (at(i, k) != RadicalRational(i == k ? 1 : 0))
                    return false;
        return true;
    }

    bool is_orthogonal() const { return (*this * transpose()).is_identity(); }

    Json to_json(std::span<const std::string> names) const {
        auto labels = [](const CouplingTree &t, const std::vector<BasisState> &basis) {
            Json out = Json::array();
            for (const auto &s : basis) {
                Json row = Json::array();
                for (int site : t.internal_sites())
                    row.push_back(HalfInt::from_twice(s[site]).to_string());
                out.push_back(row);
            }
            return out;
        };
        Json entries = Json::array();
        for (std::size_t i = 0; i < rows(); ++i) {
            Json row = Json::array();
            for (std::size_t k = 0; k < cols(); ++k)
                row.push_back(to_json_value(at(i, k)));
            entries.push_back(row);
        }
        return Json{{"row_tree", row_tree_.encode(names)},
                    {"col_tree", col_tree_.encode(names)},
                    {"row_basis", labels(row_tree_, row_basis_)},
                    {"col_basis", labels(col_tree_, col_basis_)},
                    {"entries", entries}};
    }

  private:
    CouplingTree row_tree_, col_tree_;
    std::vector<BasisState> row_basis_, col_basis_;
    std::vector<RadicalRational> entries_;
};

namespace detail {

inline void check_recoupling_input(const CouplingTree &tree, const std::vector<HalfInt> &spins, HalfInt J,
                                   const RecouplingLimits &limits) {
    if (tree.leaf_count() > limits.max_leaves)
        throw Error(ErrorKind::SizeExceeded, "tree has " + std::to_string(tree.leaf_count()) + " leaves, limit " +
                                                 std::to_string(limits.max_leaves));
    if (static_cast<int>(spins.size()) != tree.leaf_count())
        throw Error(ErrorKind::InvalidParams, "expected " + std::to_string(tree.leaf_count()) + " leaf spins, got " +
                                                  std::to_string(spins.size()));
    for (HalfInt j : spins)
        require_magnitude(j, "leaf spin");
    require_magnitude(J, "total J");
    for (HalfInt j : spins)
        if (j.twice() > limits.max_twice)
            throw Error(ErrorKind::SizeExceeded, "leaf spin " + j.to_string() + " above the configured cap");
}

/// Label of every node keyed by the set of leaves below it.
inline std::vector<std::pair<std::uint32_t, int>> labels_by_mask(const CouplingTree &t, const BasisState &s) {
    std::vector<std::pair<std::uint32_t, int>> out;
    for (int site : t.internal_sites())
        out.emplace_back(t.leaf_mask(site), s[site]);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace detail

/// Overlap matrix for a single move applied to `tree`.
inline RecouplingMatrix elementary_matrix(const CouplingTree &tree, const Move &move, const std::vector<HalfInt> &spins,
                                          HalfInt J) {
    auto next = tree.apply(move);
    if (!next)
        throw Error(ErrorKind::InvalidParams, "move " + move.to_string() + " does not apply to " + canonical_encode(tree));
    RecouplingMatrix m(tree, enumerate_basis(tree, spins, J), *next, enumerate_basis(*next, spins, J));
    const int s = move.site;

    if (move.kind == Move::Kind::Phase) {
        const int l = tree.left_child(s), r = tree.right_child(s);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            const auto &x = m.row_basis()[i];
            auto key = detail::labels_by_mask(tree, x);
            for (std::size_t k = 0; k < m.cols(); ++k)
                if (detail::labels_by_mask(*next, m.col_basis()[k]) == key)
                    m.at(i, k) = RadicalRational(parity_sign((x[l] + x[r] - x[s]) / 2));
        }
        return m;
    }

    // Identify a, b, c subtrees and the intermediate node in the old and new tree.
    const CouplingTree &right_tree = move.turn == Move::Turn::Right ? tree : *next; // ((A B) C) form
    const CouplingTree &left_tree = move.turn == Move::Turn::Right ? *next : tree;  // (A (B C)) form
    const int ab = right_tree.left_child(s), pa = ab + 1, pb = right_tree.subtree_end(pa), pc = right_tree.subtree_end(ab);
    const int bc = left_tree.right_child(s);
    const std::uint32_t rotated_old = move.turn == Move::Turn::Right ? right_tree.leaf_mask(ab) : left_tree.leaf_mask(bc);
    const std::uint32_t rotated_new = move.turn == Move::Turn::Right ? left_tree.leaf_mask(bc) : right_tree.leaf_mask(ab);

    auto strip = [](std::vector<std::pair<std::uint32_t, int>> v, std::uint32_t mask) {
        v.erase(std::remove_if(v.begin(), v.end(), [&](const auto &p) { return p.first == mask; }), v.end());
        return v;
    };
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto &x = m.row_basis()[i];
        auto key = strip(detail::labels_by_mask(tree, x), rotated_old);
        for (std::size_t k = 0; k < m.cols(); ++k) {
            const auto &y = m.col_basis()[k];
            if (strip(detail::labels_by_mask(*next, y), rotated_new) != key)
                continue;
            const BasisState &rs = move.turn == Move::Turn::Right ? x : y;
            const BasisState &ls = move.turn == Move::Turn::Right ? y : x;
            const int a = rs[pa], b = rs[pb], c = rs[pc], g = rs[s], e = rs[ab], f = ls[bc];
            RadicalRational sixj = detail::sixj_cached_twice({a, b, e, c, g, f});
            if (sixj.is_zero())
                continue;
            m.at(i, k) = RadicalRational(parity_sign((a + b + c + g) / 2)) *
                         RadicalRational::sqrt_of(Rational((e + 1) * (f + 1))) * sixj;
        }
    }
    return m;
}

/// Product of elementary matrices along `moves` starting from `start`.
inline RecouplingMatrix compose_moves(const CouplingTree &start, const std::vector<Move> &moves,
                                      const std::vector<HalfInt> &spins, HalfInt J) {
    auto basis = enumerate_basis(start, spins, J);
    RecouplingMatrix acc(start, basis, start, basis);
    for (std::size_t i = 0; i < basis.size(); ++i)
        acc.at(i, i) = RadicalRational(1);
    CouplingTree current = start;
    for (const Move &m : moves) {
        if (!current.can_apply(m))
            throw Error(ErrorKind::NotClosed, "move " + m.to_string() + " does not apply to " + canonical_encode(current));
        acc = acc * elementary_matrix(current, m, spins, J);
        current = *current.apply(m);
    }
    return acc;
}

/// Overlaps <a, i | b, k> along the canonical shortest path from a to b.
/// `spins` is indexed by leaf id.
inline RecouplingMatrix recoupling_matrix(const CouplingTree &a, const CouplingTree &b, const std::vector<HalfInt> &spins,
                                          HalfInt J, const RecouplingLimits &limits = {}) {
    detail::check_recoupling_input(a, spins, J, limits);
    if (a.leaf_count() != b.leaf_count())
        throw Error(ErrorKind::InvalidParams, "trees have different leaf counts");
    return compose_moves(a, find_path(a, b), spins, J);
}

/// True iff the moves lead back to `start` and their composition is exactly
/// the identity.
inline bool verify_cycle(const CouplingTree &start, const std::vector<Move> &moves, const std::vector<HalfInt> &spins,
                         HalfInt J, const RecouplingLimits &limits = {}) {
    detail::check_recoupling_input(start, spins, J, limits);
    CouplingTree end = start;
    for (const Move &m : moves) {
        auto next = end.apply(m);
        if (!next)
            throw Error(ErrorKind::NotClosed, "move " + m.to_string() + " does not apply to " + canonical_encode(end));
        end = std::move(*next);
    }
    if (end != start)
        throw Error(ErrorKind::NotClosed, "walk ends at " + canonical_encode(end) + ", not at " + canonical_encode(start));
    return compose_moves(start, moves, spins, J).is_identity();
}

} // namespace spinnet
