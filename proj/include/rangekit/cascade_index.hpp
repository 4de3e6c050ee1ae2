#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rangekit/agg.hpp"
#include "rangekit/coord_tree.hpp"
#include "rangekit/errors.hpp"
#include "rangekit/points.hpp"

namespace rangekit {

// Static 2D index: balanced tree over the second coordinate where every node
// stores its slab's points in an array sorted by the first coordinate, with
// prefix aggregates (invertible ops) or O(1) range min/max tables, and
// per-position links into the child arrays. A box query binary searches the
// first-coordinate window once at the root; every deeper window comes from
// the links in O(1).
class CascadeIndex2D {
public:
    CascadeIndex2D(const PointSet& ps, AggregateOp op) : op_(op) {
        if (ps.dim() != 2) throw BadBox("cascade index is 2D only");
        std::vector<Coord> ys;
        for (const MergedPoint& p : ps.points()) ys.push_back(p.coords[1]);
        std::sort(ys.begin(), ys.end());
        ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
        outer_ = CoordTree(std::move(ys));
        nodes_.resize(outer_.node_count());
        nodes_allocated_ = outer_.node_count();
        std::vector<int> ids(ps.size());
        for (size_t i = 0; i < ps.size(); ++i) ids[i] = static_cast<int>(i);
        // sort ids by (x, id) once; leaves pick their subsets in order
        std::sort(ids.begin(), ids.end(), [&](int a, int b) {
            Coord xa = ps.points()[static_cast<size_t>(a)].coords[0];
            Coord xb = ps.points()[static_cast<size_t>(b)].coords[0];
            return xa != xb ? xa < xb : a < b;
        });
        build(ps, outer_.root(), ids);
    }

    Weight range_query(const Box& b) {
        b.validate(2);
        last_query_nodes_ = 0;
        last_query_binary_searches_ = 0;
        const NodeArrays& root = nodes_[static_cast<size_t>(outer_.root())];
        // the single binary-search phase: locate the x window at the root
        ++last_query_binary_searches_;
        size_t u = static_cast<size_t>(std::lower_bound(root.xs.begin(), root.xs.end(), b.bounds[0].first) -
                                       root.xs.begin());
        size_t v = static_cast<size_t>(std::upper_bound(root.xs.begin(), root.xs.end(), b.bounds[0].second) -
                                       root.xs.begin());
        int ylo = outer_.lower_rank(b.bounds[1].first);
        int yhi = outer_.upper_rank(b.bounds[1].second);
        if (ylo > yhi) return op_.neutral();
        return query_rec(outer_.root(), ylo, yhi, u, v);
    }

    std::uint64_t last_query_nodes() const { return last_query_nodes_; }
    std::uint64_t last_query_binary_searches() const { return last_query_binary_searches_; }
    std::uint64_t nodes_allocated() const { return nodes_allocated_; }

    const CoordTree& outer() const { return outer_; }
    const std::vector<Coord>& node_xs(int id) const { return nodes_[static_cast<size_t>(id)].xs; }
    const std::vector<Weight>& node_pagg(int id) const { return nodes_[static_cast<size_t>(id)].pagg; }
    const std::vector<Weight>& node_weights(int id) const { return nodes_[static_cast<size_t>(id)].ws; }

private:
    struct NodeArrays {
        std::vector<Coord> xs;      // first coordinates, sorted (ties by point id)
        std::vector<int> ids;
        std::vector<Weight> ws;     // weights by position
        std::vector<Weight> pagg;   // prefix aggregates, pagg[0] = neutral
        std::vector<size_t> llink;  // per position 0..size: elements of the left child before it
        std::vector<std::vector<Weight>> rmq;  // min/max sparse table rows
    };

    void build(const PointSet& ps, int node, const std::vector<int>& ids) {
        NodeArrays& na = nodes_[static_cast<size_t>(node)];
        na.ids = ids;
        na.xs.reserve(ids.size());
        na.ws.reserve(ids.size());
        for (int id : ids) {
            na.xs.push_back(ps.points()[static_cast<size_t>(id)].coords[0]);
            na.ws.push_back(ps.points()[static_cast<size_t>(id)].weight);
        }
        if (op_.invertible()) {
            na.pagg.assign(1, op_.neutral());
            for (Weight w : na.ws) na.pagg.push_back(op_.combine(na.pagg.back(), w));
        } else {
            build_rmq(na);
        }
        const CoordTree::Node& nd = outer_.node(node);
        if (nd.lchild < 0) return;
        Coord split = outer_.node(nd.lchild).right;
        std::vector<int> left, right;
        na.llink.reserve(ids.size() + 1);
        na.llink.push_back(0);
        for (int id : ids) {
            Coord y = ps.points()[static_cast<size_t>(id)].coords[1];
            (y <= split ? left : right).push_back(id);
            na.llink.push_back(left.size());
        }
        build(ps, nd.lchild, left);
        build(ps, nd.rchild, right);
    }

    void build_rmq(NodeArrays& na) {
        if (na.ws.empty()) return;
        na.rmq.push_back(na.ws);
        for (size_t len = 2; len <= na.ws.size(); len *= 2) {
            const auto& prev = na.rmq.back();
            std::vector<Weight> row(na.ws.size() - len + 1);
            for (size_t i = 0; i + len <= na.ws.size(); ++i)
                row[i] = op_.combine(prev[i], prev[i + len / 2]);
            na.rmq.push_back(std::move(row));
        }
    }

    Weight fold_window(const NodeArrays& na, size_t u, size_t v) const {
        if (u >= v) return op_.neutral();
        if (op_.invertible()) return op_.invert(na.pagg[v], na.pagg[u]);
        size_t len = v - u;
        size_t k = 0;
        while ((size_t{2} << k) <= len) ++k;
        return op_.combine(na.rmq[k][u], na.rmq[k][v - (size_t{1} << k)]);
    }

    Weight query_rec(int node, int ylo, int yhi, size_t u, size_t v) {
        const CoordTree::Node& nd = outer_.node(node);
        if (nd.hi < ylo || nd.lo > yhi) return op_.neutral();
        ++last_query_nodes_;
        const NodeArrays& na = nodes_[static_cast<size_t>(node)];
        if (ylo <= nd.lo && nd.hi <= yhi) return fold_window(na, u, v);
        size_t lu = na.llink[u], lv = na.llink[v];
        return op_.combine(query_rec(nd.lchild, ylo, yhi, lu, lv),
                           query_rec(nd.rchild, ylo, yhi, u - lu, v - lv));
    }

    AggregateOp op_;
    CoordTree outer_;
    std::vector<NodeArrays> nodes_;
    std::uint64_t nodes_allocated_ = 0;
    std::uint64_t last_query_nodes_ = 0;
    std::uint64_t last_query_binary_searches_ = 0;
};

}  // namespace rangekit
