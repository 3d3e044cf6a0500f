#pragma once

/// \file spinnet/spin_graph.hpp
///
/// The recoupling "abacus": every binary coupling tree over n ordered leaves
/// is a vertex, every single Phase or Racah move is an edge. Vertices are
/// ordered by their canonical encoding with default leaf names, which makes
/// vertex indices, paths and exports reproducible.

#include "spinnet/coupling_tree.hpp"
#include "spinnet/error.hpp"

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace spinnet {

struct GraphLimits {
    int max_leaves = 7;
};

class SpinNetGraph {
  public:
    struct Step {
        Move move;
        int target;
    };
    struct Edge {
        int from;
        int to;
        Move move; // as applied at `from`
    };

    int leaf_count() const noexcept { return leaf_count_; }
    std::size_t vertex_count() const noexcept { return vertices_.size(); }
    const CouplingTree &vertex(int i) const { return vertices_.at(i); }
    const std::string &encoding(int i) const { return encodings_.at(i); }
    const std::vector<Step> &neighbours(int i) const { return adjacency_.at(i); }

    int index_of(const CouplingTree &tree) const {
        auto it = index_.find(key(tree));
        if (it == index_.end())
            throw Error(ErrorKind::NotConnected, "tree " + canonical_encode(tree) + " is not a vertex of this graph");
        return it->second;
    }

    /// Each undirected edge once, from the lower vertex index.
    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        for (int u = 0; u < static_cast<int>(adjacency_.size()); ++u)
            for (const auto &step : adjacency_[u])
                if (u < step.target)
                    out.push_back({u, step.target, step.move});
        return out;
    }

  private:
    friend SpinNetGraph build_graph(int n, const GraphLimits &limits);

    static std::string key(const CouplingTree &t) {
        const auto &p = t.preorder();
        return std::string(p.begin(), p.end());
    }

    int leaf_count_ = 0;
    std::vector<CouplingTree> vertices_;
    std::vector<std::string> encodings_;
    std::vector<std::vector<Step>> adjacency_;
    std::unordered_map<std::string, int> index_;
};

/// All (2n-2)!/(n-1)! trees over n leaves, reached by breadth-first search
/// from the left comb; the move graph is connected so nothing is missed.
inline SpinNetGraph build_graph(int n, const GraphLimits &limits = {}) {
    if (n < 2 || n > limits.max_leaves)
        throw Error(ErrorKind::SizeExceeded, "graph size n = " + std::to_string(n) + " outside [2, " +
                                                 std::to_string(limits.max_leaves) + "]");
    std::vector<CouplingTree> found{CouplingTree::left_comb(n)};
    std::unordered_map<std::string, int> seen{{SpinNetGraph::key(found[0]), 0}};
    for (std::size_t head = 0; head < found.size(); ++head) {
        CouplingTree current = found[head];
        for (const Move &m : current.available_moves()) {
            CouplingTree next = *current.apply(m);
            if (seen.emplace(SpinNetGraph::key(next), static_cast<int>(found.size())).second)
                found.push_back(std::move(next));
        }
    }

    const LeafNames names = default_leaf_names(n);
    std::vector<std::string> encodings;
    encodings.reserve(found.size());
    for (const auto &t : found)
        encodings.push_back(t.encode(names));
    std::vector<int> order(found.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return encodings[a] < encodings[b]; });

    SpinNetGraph g;
    g.leaf_count_ = n;
    for (int old : order) {
        g.index_.emplace(SpinNetGraph::key(found[old]), static_cast<int>(g.vertices_.size()));
        g.vertices_.push_back(std::move(found[old]));
        g.encodings_.push_back(std::move(encodings[old]));
    }
    g.adjacency_.resize(g.vertices_.size());
    for (std::size_t u = 0; u < g.vertices_.size(); ++u)
        for (const Move &m : g.vertices_[u].available_moves())
            g.adjacency_[u].push_back({m, g.index_.at(SpinNetGraph::key(*g.vertices_[u].apply(m)))});
    return g;
}

/// Shared immutable graphs, built once per leaf count.
inline std::shared_ptr<const SpinNetGraph> graph_for(int n, const GraphLimits &limits = {}) {
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const SpinNetGraph>> graphs;
    if (n < 2 || n > limits.max_leaves)
        throw Error(ErrorKind::SizeExceeded, "graph size n = " + std::to_string(n) + " outside [2, " +
                                                 std::to_string(limits.max_leaves) + "]");
    std::lock_guard lock(mutex);
    auto &slot = graphs[n];
    if (!slot)
        slot = std::make_shared<const SpinNetGraph>(build_graph(n, limits));
    return slot;
}

/// Shortest move sequence from a to b. Among shortest paths the one whose
/// sequence of visited encodings is lexicographically least is returned.
inline std::vector<Move> find_path(const SpinNetGraph &g, const CouplingTree &a, const CouplingTree &b) {
    const int source = g.index_of(a), target = g.index_of(b);
    std::vector<int> dist(g.vertex_count(), -1);
    std::deque<int> queue{target};
    dist[target] = 0;
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (const auto &step : g.neighbours(u))
            if (dist[step.target] < 0) {
                dist[step.target] = dist[u] + 1;
                queue.push_back(step.target);
            }
    }
    if (dist[source] < 0)
        throw Error(ErrorKind::NotConnected, "no path between " + g.encoding(source) + " and " + g.encoding(target));
    std::vector<Move> path;
    for (int u = source; u != target;) {
        const SpinNetGraph::Step *best = nullptr;
        for (const auto &step : g.neighbours(u))
            if (dist[step.target] == dist[u] - 1 && (!best || step.target < best->target))
                best = &step;
        path.push_back(best->move);
        u = best->target;
    }
    return path;
}

inline std::vector<Move> find_path(const CouplingTree &a, const CouplingTree &b) {
    if (a.leaf_count() != b.leaf_count())
        throw Error(ErrorKind::InvalidParams, "trees have different leaf counts");
    if (a == b)
        return {};
    return find_path(*graph_for(a.leaf_count()), a, b);
}

/// First simple cycle of exactly `length` moves through `start` (in
/// adjacency order) whose move sequence satisfies `accept`. Empty if none.
inline std::vector<Move> find_cycle(const SpinNetGraph &g, const CouplingTree &start, int length,
                                    const std::function<bool(const std::vector<Move> &)> &accept) {
    const int origin = g.index_of(start);
    std::vector<Move> moves;
    std::vector<int> visited{origin};
    std::function<bool(int)> dfs = [&](int u) -> bool {
        if (static_cast<int>(moves.size()) == length)
            return u == origin && accept(moves);
        for (const auto &step : g.neighbours(u)) {
            bool closing = step.target == origin && static_cast<int>(moves.size()) + 1 == length;
            if (!closing && std::find(visited.begin(), visited.end(), step.target) != visited.end())
                continue;
            moves.push_back(step.move);
            visited.push_back(step.target);
            if (dfs(step.target))
                return true;
            moves.pop_back();
            visited.pop_back();
        }
        return false;
    };
    if (dfs(origin))
        return moves;
    return {};
}

/// Five Racah moves closing on `start` (Biedenharn-Elliott pentagon); needs n >= 4.
inline std::vector<Move> pentagon_cycle(const SpinNetGraph &g, const CouplingTree &start) {
    return find_cycle(g, start, 5, [](const std::vector<Move> &ms) {
        return std::all_of(ms.begin(), ms.end(), [](const Move &m) { return m.kind == Move::Kind::Racah; });
    });
}

/// Six moves alternating Racah and Phase closing on `start` (Racah hexagon); needs n >= 3.
inline std::vector<Move> hexagon_cycle(const SpinNetGraph &g, const CouplingTree &start) {
    return find_cycle(g, start, 6, [](const std::vector<Move> &ms) {
        for (std::size_t i = 0; i < ms.size(); ++i)
            if ((ms[i].kind == Move::Kind::Racah) != (i % 2 == 0))
                return false;
        return true;
    });
}

/// Graphviz text: vertex labels are canonical encodings, Racah edges solid,
/// Phase edges dashed.
inline std::string to_dot(const SpinNetGraph &g) {
    std::ostringstream out;
    out << "graph spinnet {\n";
    out << "  node [shape=box];\n";
    for (std::size_t i = 0; i < g.vertex_count(); ++i)
        out << "  v" << i << " [label=\"" << g.encoding(static_cast<int>(i)) << "\"];\n";
    for (const auto &e : g.edges())
        out << "  v" << e.from << " -- v" << e.to << " [style="
            << (e.move.kind == Move::Kind::Racah ? "solid" : "dashed") << "];\n";
    out << "}\n";
    return out.str();
}

} // namespace spinnet
