#pragma once

/// \file spinnet/coupling_tree.hpp
///
/// Binary coupling trees over n labelled leaves and the two elementary moves
/// between them. A tree is stored as its preorder sequence: an internal node
/// is the marker `kInternal`, a leaf is its leaf id in [0, n). The preorder
/// index of an internal node is its site address.

#include "spinnet/error.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace spinnet {

struct Move {
    enum class Kind : std::uint8_t { Phase, Racah };
    /// Racah direction: Right turns ((A B) C) into (A (B C)); Left is its inverse.
    enum class Turn : std::uint8_t { None, Right, Left };

    Kind kind = Kind::Phase;
    int site = 0;
    Turn turn = Turn::None;

    static constexpr Move phase(int site) { return {Kind::Phase, site, Turn::None}; }
    static constexpr Move right(int site) { return {Kind::Racah, site, Turn::Right}; }
    static constexpr Move left(int site) { return {Kind::Racah, site, Turn::Left}; }

    /// The site of the rotated node keeps its preorder index, so the inverse
    /// acts at the same site.
    constexpr Move inverse() const {
        if (kind == Kind::Phase)
            return *this;
        return {Kind::Racah, site, turn == Turn::Right ? Turn::Left : Turn::Right};
    }

    std::string to_string() const {
        std::string s = kind == Kind::Phase ? "P" : (turn == Turn::Right ? "R>" : "R<");
        return s + "@" + std::to_string(site);
    }

    constexpr auto operator<=>(const Move &) const = default;
};

using LeafNames = std::vector<std::string>;

/// "1", "2", ..., "n".
inline LeafNames default_leaf_names(int n) {
    LeafNames names;
    for (int i = 1; i <= n; ++i)
        names.push_back(std::to_string(i));
    return names;
}

class CouplingTree {
  public:
    static constexpr std::int8_t kInternal = -1;

    CouplingTree() = default;

    /// Validates that `preorder` is a full binary tree whose leaves are a
    /// permutation of 0..n-1.
    explicit CouplingTree(std::vector<std::int8_t> preorder) : nodes_(std::move(preorder)) {
        std::size_t pos = 0;
        if (nodes_.empty() || !skip(pos) || pos != nodes_.size())
            throw Error(ErrorKind::InvalidParams, "preorder sequence is not a binary tree");
        std::vector<bool> seen(nodes_.size(), false);
        int leaves = 0;
        for (auto v : nodes_) {
            if (v == kInternal)
                continue;
            ++leaves;
            if (v < 0 || static_cast<std::size_t>(v) >= nodes_.size() || seen[v])
                throw Error(ErrorKind::InvalidParams, "leaf ids must be a permutation of 0..n-1");
            seen[v] = true;
        }
        for (int i = 0; i < leaves; ++i)
            if (!seen[i])
                throw Error(ErrorKind::InvalidParams, "leaf ids must be a permutation of 0..n-1");
        leaf_count_ = leaves;
    }

    static CouplingTree leaf(int id) { return CouplingTree(Raw{}, {static_cast<std::int8_t>(id)}); }

    /// (left right) as a new root. Leaf ids must be disjoint; validity of the
    /// whole id set is checked by the caller-facing constructor.
    static CouplingTree join(const CouplingTree &left, const CouplingTree &right) {
        std::vector<std::int8_t> nodes{kInternal};
        nodes.insert(nodes.end(), left.nodes_.begin(), left.nodes_.end());
        nodes.insert(nodes.end(), right.nodes_.begin(), right.nodes_.end());
        return CouplingTree(Raw{}, std::move(nodes));
    }

    /// (((1 2) 3) ... n)
    static CouplingTree left_comb(int n) {
        CouplingTree t = leaf(0);
        for (int i = 1; i < n; ++i)
            t = join(t, leaf(i));
        return CouplingTree(t.nodes_);
    }

    /// Parses "((s1,s2),(l1,l2))"; commas or blanks separate children. Leaf
    /// tokens are looked up in `names`.
    static CouplingTree parse(std::string_view text, std::span<const std::string> names) {
        std::vector<std::int8_t> nodes;
        std::size_t pos = 0;
        auto fail = [&](const std::string &why) {
            return Error(ErrorKind::InvalidParams, "cannot parse tree '" + std::string(text) + "': " + why);
        };
        auto skip_ws = [&] {
            while (pos < text.size() && (text[pos] == ' ' || text[pos] == ','))
                ++pos;
        };
        auto parse_node = [&](auto &&self) -> void {
            skip_ws();
            if (pos >= text.size())
                throw fail("unexpected end");
            if (text[pos] == '(') {
                ++pos;
                nodes.push_back(kInternal);
                self(self);
                self(self);
                skip_ws();
                if (pos >= text.size() || text[pos] != ')')
                    throw fail("expected ')'");
                ++pos;
                return;
            }
            std::size_t start = pos;
            while (pos < text.size() && text[pos] != '(' && text[pos] != ')' && text[pos] != ',' && text[pos] != ' ')
                ++pos;
            std::string_view token = text.substr(start, pos - start);
            if (token.empty())
                throw fail("empty leaf name");
            auto it = std::find(names.begin(), names.end(), token);
            if (it == names.end())
                throw fail("unknown leaf '" + std::string(token) + "'");
            nodes.push_back(static_cast<std::int8_t>(it - names.begin()));
        };
        parse_node(parse_node);
        skip_ws();
        if (pos != text.size())
            throw fail("trailing characters");
        CouplingTree tree(std::move(nodes));
        if (tree.leaf_count() != static_cast<int>(names.size()))
            throw fail("tree does not use every leaf exactly once");
        return tree;
    }

    int leaf_count() const noexcept { return leaf_count_; }
    const std::vector<std::int8_t> &preorder() const noexcept { return nodes_; }
    bool is_leaf(int pos) const { return nodes_[pos] != kInternal; }
    int leaf_id(int pos) const { return nodes_[pos]; }

    /// One past the last preorder index of the subtree rooted at pos.
    int subtree_end(int pos) const {
        std::size_t p = static_cast<std::size_t>(pos);
        skip(p);
        return static_cast<int>(p);
    }
    int left_child(int site) const { return site + 1; }
    int right_child(int site) const { return subtree_end(site + 1); }

    /// Preorder indices of internal nodes; the root (0) comes first.
    std::vector<int> internal_sites() const {
        std::vector<int> out;
        for (int i = 0; i < static_cast<int>(nodes_.size()); ++i)
            if (nodes_[i] == kInternal)
                out.push_back(i);
        return out;
    }

    /// Bitmask of leaf ids under pos.
    std::uint32_t leaf_mask(int pos) const {
        std::uint32_t mask = 0;
        for (int i = pos, end = subtree_end(pos); i < end; ++i)
            if (nodes_[i] != kInternal)
                mask |= 1u << nodes_[i];
        return mask;
    }

    bool can_apply(const Move &m) const {
        if (m.site < 0 || m.site >= static_cast<int>(nodes_.size()) || is_leaf(m.site))
            return false;
        switch (m.turn) {
        case Move::Turn::None: return m.kind == Move::Kind::Phase;
        case Move::Turn::Right: return m.kind == Move::Kind::Racah && !is_leaf(left_child(m.site));
        case Move::Turn::Left: return m.kind == Move::Kind::Racah && !is_leaf(right_child(m.site));
        }
        return false;
    }

    std::optional<CouplingTree> apply(const Move &m) const {
        if (!can_apply(m))
            return std::nullopt;
        const int s = m.site;
        const int end = subtree_end(s);
        std::vector<std::int8_t> out(nodes_.begin(), nodes_.begin() + s);
        auto copy = [&](int from, int to) { out.insert(out.end(), nodes_.begin() + from, nodes_.begin() + to); };
        if (m.kind == Move::Kind::Phase) {
            const int l = left_child(s), r = right_child(s);
            out.push_back(kInternal);
            copy(r, end);
            copy(l, r);
        } else if (m.turn == Move::Turn::Right) {
            // ((A B) C) -> (A (B C))
            const int ab = left_child(s), a = ab + 1, b = subtree_end(a), c = subtree_end(ab);
            out.push_back(kInternal);
            copy(a, b);
            out.push_back(kInternal);
            copy(b, c);
            copy(c, end);
        } else {
            // (A (B C)) -> ((A B) C)
            const int a = left_child(s), bc = subtree_end(a), b = bc + 1, c = subtree_end(b);
            out.push_back(kInternal);
            out.push_back(kInternal);
            copy(a, bc);
            copy(b, c);
            copy(c, end);
        }
        copy(end, static_cast<int>(nodes_.size()));
        return CouplingTree(Raw{}, std::move(out), leaf_count_);
    }

    /// Every applicable single move, phases first, then Racah turns, each by site.
    std::vector<Move> available_moves() const {
        std::vector<Move> out;
        auto sites = internal_sites();
        for (int s : sites)
            out.push_back(Move::phase(s));
        for (int s : sites) {
            if (!is_leaf(left_child(s)))
                out.push_back(Move::right(s));
            if (!is_leaf(right_child(s)))
                out.push_back(Move::left(s));
        }
        return out;
    }

    std::string encode(std::span<const std::string> names) const {
        std::string out;
        std::size_t pos = 0;
        encode_at(pos, names, out);
        return out;
    }

    friend bool operator==(const CouplingTree &, const CouplingTree &) = default;
    friend auto operator<=>(const CouplingTree &a, const CouplingTree &b) { return a.nodes_ <=> b.nodes_; }

  private:
    struct Raw {};
    CouplingTree(Raw, std::vector<std::int8_t> nodes, int leaves = -1) : nodes_(std::move(nodes)) {
        leaf_count_ = leaves >= 0 ? leaves
                                  : static_cast<int>(std::count_if(nodes_.begin(), nodes_.end(),
                                                                   [](std::int8_t v) { return v != kInternal; }));
    }

    bool skip(std::size_t &pos) const {
        if (pos >= nodes_.size())
            return false;
        if (nodes_[pos++] != kInternal)
            return true;
        return skip(pos) && skip(pos);
    }

    void encode_at(std::size_t &pos, std::span<const std::string> names, std::string &out) const {
        auto v = nodes_[pos++];
        if (v != kInternal) {
            out += static_cast<std::size_t>(v) < names.size() ? names[v] : std::to_string(v + 1);
            return;
        }
        out += '(';
        encode_at(pos, names, out);
        out += ',';
        encode_at(pos, names, out);
        out += ')';
    }

    std::vector<std::int8_t> nodes_;
    int leaf_count_ = 0;
};

/// Nested-parenthesis form, e.g. "((s1,s2),(l1,l2))". Injective for a fixed
/// list of distinct leaf names.
inline std::string canonical_encode(const CouplingTree &tree, std::span<const std::string> names) {
    return tree.encode(names);
}

inline std::string canonical_encode(const CouplingTree &tree) {
    return tree.encode(default_leaf_names(tree.leaf_count()));
}

} // namespace spinnet
