#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "rangekit/agg.hpp"

namespace rangekit {

using Coord = std::int64_t;

// Balanced binary tree over a sorted list of distinct coordinates. Keys live
// only at the leaves; an inner node covers the closed coordinate interval
// [left, right] of the leaves below it. Built by median split, so depth is
// ceil(log2(m)) and a query interval decomposes into at most 2*ceil(log2 m)
// disjoint canonical nodes.
class CoordTree {
public:
    struct Node {
        Coord left, right;  // smallest/largest covered coordinate
        int lo, hi;         // covered rank range, inclusive
        int lchild = -1, rchild = -1;
    };

    CoordTree() = default;

    explicit CoordTree(std::vector<Coord> sorted_distinct) : coords_(std::move(sorted_distinct)) {
        if (!coords_.empty()) {
            nodes_.reserve(2 * coords_.size());
            build(0, static_cast<int>(coords_.size()) - 1);
        }
    }

    int root() const { return 0; }
    bool empty() const { return nodes_.empty(); }
    const Node& node(int i) const { return nodes_[static_cast<size_t>(i)]; }
    size_t node_count() const { return nodes_.size(); }
    int leaf_count() const { return static_cast<int>(coords_.size()); }
    const std::vector<Coord>& coords() const { return coords_; }

    // Exact rank of c, or -1 when c is not a stored coordinate.
    int rank_of(Coord c) const {
        auto it = std::lower_bound(coords_.begin(), coords_.end(), c);
        if (it == coords_.end() || *it != c) return -1;
        return static_cast<int>(it - coords_.begin());
    }

    // First rank with coordinate >= c (leaf_count() when none).
    int lower_rank(Coord c) const {
        return static_cast<int>(std::lower_bound(coords_.begin(), coords_.end(), c) - coords_.begin());
    }

    // Last rank with coordinate <= c (-1 when none).
    int upper_rank(Coord c) const {
        return static_cast<int>(std::upper_bound(coords_.begin(), coords_.end(), c) - coords_.begin()) - 1;
    }

    // Disjoint nodes exactly covering ranks [lo, hi]; empty when lo > hi.
    std::vector<int> decompose_ranks(int lo, int hi) const {
        std::vector<int> out;
        if (!nodes_.empty() && lo <= hi) decompose(root(), lo, hi, out);
        return out;
    }

    // Canonical decomposition of the coordinate interval [lo, hi], as the
    // [left, right] coordinate intervals of the covering nodes.
    std::vector<std::pair<Coord, Coord>> canonical_decomposition(Coord lo, Coord hi) const {
        std::vector<std::pair<Coord, Coord>> out;
        if (empty()) return out;
        int lr = lower_rank(lo), ur = upper_rank(hi);
        for (int id : decompose_ranks(lr, ur)) out.emplace_back(nodes_[static_cast<size_t>(id)].left, nodes_[static_cast<size_t>(id)].right);
        return out;
    }

private:
    int build(int lo, int hi) {
        int id = static_cast<int>(nodes_.size());
        nodes_.push_back(Node{coords_[static_cast<size_t>(lo)], coords_[static_cast<size_t>(hi)], lo, hi});
        if (lo < hi) {
            int mid = lo + (hi - lo) / 2;
            int l = build(lo, mid);
            int r = build(mid + 1, hi);
            nodes_[static_cast<size_t>(id)].lchild = l;
            nodes_[static_cast<size_t>(id)].rchild = r;
        }
        return id;
    }

    void decompose(int id, int lo, int hi, std::vector<int>& out) const {
        const Node& nd = nodes_[static_cast<size_t>(id)];
        if (nd.hi < lo || nd.lo > hi) return;
        if (lo <= nd.lo && nd.hi <= hi) {
            out.push_back(id);
            return;
        }
        decompose(nd.lchild, lo, hi, out);
        decompose(nd.rchild, lo, hi, out);
    }

    std::vector<Coord> coords_;
    std::vector<Node> nodes_;
};

}  // namespace rangekit
