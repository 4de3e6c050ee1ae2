#pragma once

#include <cstdint>
#include <vector>

#include "rangekit/agg.hpp"
#include "rangekit/cascade_index.hpp"
#include "rangekit/errors.hpp"

namespace rangekit {

// Rooted tree with vertex weights and nonnegative integer edge lengths.
// Vertices are 0-based ids; parent[root] is ignored.
struct RootedTree {
    int n = 0;
    int root = 0;
    std::vector<int> parent;
    std::vector<std::int64_t> edge_len;  // length(parent(i), i)
    std::vector<Weight> weight;
};

// DFS flattening: preorder number, largest preorder number in the subtree,
// and distance from the root. Subtree of i occupies [dfs_num(i), dfs_max(i)].
struct FlatTree {
    std::vector<int> dfs_num;   // 1..n
    std::vector<int> dfs_max;
    std::vector<std::int64_t> depth;  // distance from root
};

inline FlatTree dfs_flatten(const RootedTree& t) {
    const int n = t.n;
    std::vector<std::vector<int>> children(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        if (i == t.root) continue;
        int p = t.parent[static_cast<size_t>(i)];
        if (p < 0 || p >= n) throw DisconnectedVertex("bad parent id");
        children[static_cast<size_t>(p)].push_back(i);
    }
    FlatTree f;
    f.dfs_num.assign(static_cast<size_t>(n), 0);
    f.dfs_max.assign(static_cast<size_t>(n), 0);
    f.depth.assign(static_cast<size_t>(n), 0);
    // iterative preorder; second visit closes the subtree interval
    std::vector<std::pair<int, size_t>> stack;  // (vertex, next child index)
    stack.emplace_back(t.root, 0);
    int counter = 0;
    f.dfs_num[static_cast<size_t>(t.root)] = ++counter;
    int visited = 1;
    while (!stack.empty()) {
        auto& [v, ci] = stack.back();
        if (ci < children[static_cast<size_t>(v)].size()) {
            int c = children[static_cast<size_t>(v)][ci++];
            if (f.dfs_num[static_cast<size_t>(c)] != 0) throw CycleDetected();
            f.dfs_num[static_cast<size_t>(c)] = ++counter;
            f.depth[static_cast<size_t>(c)] =
                checked_add(f.depth[static_cast<size_t>(v)], t.edge_len[static_cast<size_t>(c)]);
            ++visited;
            stack.emplace_back(c, 0);
        } else {
            f.dfs_max[static_cast<size_t>(v)] = counter;
            stack.pop_back();
        }
    }
    if (visited != n) throw DisconnectedVertex();
    return f;
}

// Aggregates vertex weights over "in the subtree of i, at distance d1..d2
// from i", reduced to one 2D box query over points (dfs_num, depth).
class SubtreeIndex {
public:
    static constexpr std::int64_t kUnbounded = kPosInf;

    SubtreeIndex(const RootedTree& t, AggregateOp op)
        : flat_(dfs_flatten(t)),
          index_(make_points(t, flat_, op), op) {}

    const FlatTree& flat() const { return flat_; }

    Weight query(int vertex, std::int64_t d1, std::int64_t d2) {
        if (vertex < 0 || vertex >= static_cast<int>(flat_.dfs_num.size())) throw UnknownVertex();
        if (d1 < 0 || d2 < d1) throw BadBox("need 0 <= d1 <= d2");
        std::int64_t base = flat_.depth[static_cast<size_t>(vertex)];
        Box b;
        b.bounds.emplace_back(flat_.dfs_num[static_cast<size_t>(vertex)],
                              flat_.dfs_max[static_cast<size_t>(vertex)]);
        b.bounds.emplace_back(sat_add(base, d1), d2 == kUnbounded ? kPosInf : sat_add(base, d2));
        return index_.range_query(b);
    }

    std::uint64_t last_query_nodes() const { return index_.last_query_nodes(); }
    std::uint64_t last_query_binary_searches() const { return index_.last_query_binary_searches(); }

private:
    static std::int64_t sat_add(std::int64_t a, std::int64_t b) {
        std::int64_t r;
        if (__builtin_add_overflow(a, b, &r)) return b > 0 ? kPosInf : kNegInf;
        return r;
    }

    static PointSet make_points(const RootedTree& t, const FlatTree& f, AggregateOp op) {
        std::vector<RawPoint> pts;
        pts.reserve(static_cast<size_t>(t.n));
        for (int i = 0; i < t.n; ++i)
            pts.push_back(RawPoint{{f.dfs_num[static_cast<size_t>(i)], f.depth[static_cast<size_t>(i)]},
                                   t.weight[static_cast<size_t>(i)]});
        return PointSet(2, pts, op);
    }

    FlatTree flat_;
    CascadeIndex2D index_;
};

}  // namespace rangekit
