#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "rangekit/agg.hpp"
#include "rangekit/coord_tree.hpp"
#include "rangekit/errors.hpp"
#include "rangekit/points.hpp"

namespace rangekit {

namespace detail {

using PointRef = const MergedPoint*;

inline __int128 clamp_to_weight(__int128 x) {
    if (x < static_cast<__int128>(kNegInf)) return kNegInf;
    if (x > static_cast<__int128>(kPosInf)) return kPosInf;
    return x;
}

inline std::vector<Coord> distinct_coords(const std::vector<PointRef>& pts, int dim) {
    std::vector<Coord> cs;
    cs.reserve(pts.size());
    for (PointRef p : pts) cs.push_back(p->coords[static_cast<size_t>(dim - 1)]);
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    return cs;
}

// ---------------------------------------------------------------------------
// Plain nested tree: point weight updates, canonical-decomposition queries.
// The tree at the outermost level splits on the last dimension; nested trees
// handle the remaining ones, with qagg values at the innermost level.
// ---------------------------------------------------------------------------
struct PlainTree {
    int dim;  // absolute dimension this level splits; 1 = innermost
    CoordTree shape;
    std::vector<std::unique_ptr<PlainTree>> nested;  // dim > 1, per node
    std::vector<Weight> qagg;                        // dim == 1, per node
    std::vector<std::vector<int>> leaf_pts;          // dim == 1, per leaf node: merged point ids
};

class PlainEngine {
public:
    PlainEngine(const PointSet& ps, AggregateOp op) : op_(op) {
        weights_.reserve(ps.size());
        for (const MergedPoint& p : ps.points()) weights_.push_back(p.weight);
        std::vector<int> ids(ps.size());
        for (size_t i = 0; i < ps.size(); ++i) ids[i] = static_cast<int>(i);
        root_ = build(ps, ps.dim(), ids);
    }

    Weight query(const Box& b, std::uint64_t& visit_counter) const {
        return query_rec(*root_, b, visit_counter);
    }

    void point_update(const PointSet& ps, size_t id, Weight w) {
        weights_[id] = w;
        update_rec(*root_, ps.points()[id]);
    }

    std::uint64_t nodes_allocated() const { return nodes_allocated_; }

private:
    std::unique_ptr<PlainTree> build(const PointSet& ps, int dim, const std::vector<int>& ids) {
        auto t = std::make_unique<PlainTree>();
        t->dim = dim;
        std::vector<PointRef> refs;
        refs.reserve(ids.size());
        for (int id : ids) refs.push_back(&ps.points()[static_cast<size_t>(id)]);
        t->shape = CoordTree(distinct_coords(refs, dim));
        nodes_allocated_ += t->shape.node_count();
        size_t nn = t->shape.node_count();
        if (dim == 1) {
            t->qagg.assign(nn, op_.neutral());
            t->leaf_pts.assign(nn, {});
            for (int id : ids) {
                int leaf = leaf_node(t->shape, ps.points()[static_cast<size_t>(id)].coords[0]);
                t->leaf_pts[static_cast<size_t>(leaf)].push_back(id);
            }
            fill_qagg(*t, t->shape.root());
        } else {
            t->nested.resize(nn);
            fill_nested(ps, *t, t->shape.root(), ids);
        }
        return t;
    }

    void fill_nested(const PointSet& ps, PlainTree& t, int node, const std::vector<int>& ids) {
        t.nested[static_cast<size_t>(node)] = build(ps, t.dim - 1, ids);
        const CoordTree::Node& nd = t.shape.node(node);
        if (nd.lchild < 0) return;
        Coord split = t.shape.node(nd.lchild).right;
        std::vector<int> left, right;
        for (int id : ids) {
            Coord c = ps.points()[static_cast<size_t>(id)].coords[static_cast<size_t>(t.dim - 1)];
            (c <= split ? left : right).push_back(id);
        }
        fill_nested(ps, t, nd.lchild, left);
        fill_nested(ps, t, nd.rchild, right);
    }

    static int leaf_node(const CoordTree& shape, Coord c) {
        int v = shape.root();
        while (shape.node(v).lchild >= 0) {
            v = (c <= shape.node(shape.node(v).lchild).right) ? shape.node(v).lchild
                                                              : shape.node(v).rchild;
        }
        return v;
    }

    Weight fill_qagg(PlainTree& t, int node) {
        const CoordTree::Node& nd = t.shape.node(node);
        Weight acc = op_.neutral();
        if (nd.lchild < 0) {
            for (int id : t.leaf_pts[static_cast<size_t>(node)]) acc = op_.combine(acc, weights_[static_cast<size_t>(id)]);
        } else {
            acc = op_.combine(fill_qagg(t, nd.lchild), fill_qagg(t, nd.rchild));
        }
        t.qagg[static_cast<size_t>(node)] = acc;
        return acc;
    }

    Weight query_rec(const PlainTree& t, const Box& b, std::uint64_t& cnt) const {
        const auto& [xa, xb] = b.bounds[static_cast<size_t>(t.dim - 1)];
        int lo = t.shape.lower_rank(xa), hi = t.shape.upper_rank(xb);
        Weight acc = op_.neutral();
        for (int id : t.shape.decompose_ranks(lo, hi)) {
            ++cnt;
            acc = op_.combine(acc, t.dim == 1 ? t.qagg[static_cast<size_t>(id)]
                                              : query_rec(*t.nested[static_cast<size_t>(id)], b, cnt));
        }
        return acc;
    }

    void update_rec(PlainTree& t, const MergedPoint& p) {
        Coord c = p.coords[static_cast<size_t>(t.dim - 1)];
        if (t.dim > 1) {
            int v = t.shape.root();
            while (true) {
                update_rec(*t.nested[static_cast<size_t>(v)], p);
                const CoordTree::Node& nd = t.shape.node(v);
                if (nd.lchild < 0) break;
                v = (c <= t.shape.node(nd.lchild).right) ? nd.lchild : nd.rchild;
            }
            return;
        }
        recompute_path(t, t.shape.root(), c);
    }

    Weight recompute_path(PlainTree& t, int v, Coord c) {
        const CoordTree::Node& nd = t.shape.node(v);
        if (nd.lchild < 0) {
            Weight acc = op_.neutral();
            for (int id : t.leaf_pts[static_cast<size_t>(v)]) acc = op_.combine(acc, weights_[static_cast<size_t>(id)]);
            t.qagg[static_cast<size_t>(v)] = acc;
            return acc;
        }
        if (c <= t.shape.node(nd.lchild).right)
            t.qagg[static_cast<size_t>(v)] =
                op_.combine(recompute_path(t, nd.lchild, c), t.qagg[static_cast<size_t>(nd.rchild)]);
        else
            t.qagg[static_cast<size_t>(v)] =
                op_.combine(t.qagg[static_cast<size_t>(nd.lchild)], recompute_path(t, nd.rchild, c));
        return t.qagg[static_cast<size_t>(v)];
    }

    AggregateOp op_;
    std::vector<Weight> weights_;
    std::unique_ptr<PlainTree> root_;
    std::uint64_t nodes_allocated_ = 0;
};

// ---------------------------------------------------------------------------
// 1D sum tree with additive range updates. Two pending components per node:
// pend (plain update sum, recorded at canonical nodes, applied per original
// point) and pend_mass (subtree total of pend*mult). Queries read canonical
// nodes plus the pending values along the search paths.
// ---------------------------------------------------------------------------
class SumRu1D {
public:
    SumRu1D(const PointSet& ps, std::uint64_t& alloc) {
        std::vector<PointRef> refs;
        for (const MergedPoint& p : ps.points()) refs.push_back(&p);
        shape_ = CoordTree(distinct_coords(refs, 1));
        alloc += shape_.node_count();
        size_t nn = shape_.node_count();
        base_.assign(nn, 0);
        mult_.assign(nn, 0);
        pend_.assign(nn, 0);
        pend_mass_.assign(nn, 0);
        for (const MergedPoint& p : ps.points()) init_point(shape_.root(), p.coords[0], p.weight, p.multiplicity);
    }

    void range_add(Coord xa, Coord xb, Weight u) {
        int lo = shape_.lower_rank(xa), hi = shape_.upper_rank(xb);
        if (lo > hi) return;
        add_rec(shape_.root(), lo, hi, u);
    }

    Weight query(Coord xa, Coord xb, std::uint64_t& cnt) const {
        int lo = shape_.lower_rank(xa), hi = shape_.upper_rank(xb);
        if (lo > hi) return 0;
        return query_rec(shape_.root(), lo, hi, 0, cnt);
    }

    void point_set(Coord c, Weight w, std::uint64_t& cnt) {
        Weight cur = query(c, c, cnt);
        Weight delta = checked_sub(w, cur);
        int v = shape_.root();
        while (true) {
            base_[static_cast<size_t>(v)] = checked_add(base_[static_cast<size_t>(v)], delta);
            const CoordTree::Node& nd = shape_.node(v);
            if (nd.lchild < 0) break;
            v = (c <= shape_.node(nd.lchild).right) ? nd.lchild : nd.rchild;
        }
    }

private:
    void init_point(int v, Coord c, Weight w, std::int64_t mult) {
        base_[static_cast<size_t>(v)] = checked_add(base_[static_cast<size_t>(v)], w);
        mult_[static_cast<size_t>(v)] += mult;
        const CoordTree::Node& nd = shape_.node(v);
        if (nd.lchild < 0) return;
        init_point(c <= shape_.node(nd.lchild).right ? nd.lchild : nd.rchild, c, w, mult);
    }

    std::int64_t add_rec(int v, int lo, int hi, Weight u) {
        const CoordTree::Node& nd = shape_.node(v);
        if (nd.hi < lo || nd.lo > hi) return 0;
        size_t sv = static_cast<size_t>(v);
        if (lo <= nd.lo && nd.hi <= hi) {
            pend_[sv] = checked_add(pend_[sv], u);
            pend_mass_[sv] = checked_add(pend_mass_[sv], checked_mul(u, mult_[sv]));
            return mult_[sv];
        }
        std::int64_t m = add_rec(nd.lchild, lo, hi, u) + add_rec(nd.rchild, lo, hi, u);
        pend_mass_[sv] = checked_add(pend_mass_[sv], checked_mul(u, m));
        return m;
    }

    Weight query_rec(int v, int lo, int hi, Weight path_pend, std::uint64_t& cnt) const {
        const CoordTree::Node& nd = shape_.node(v);
        if (nd.hi < lo || nd.lo > hi) return 0;
        size_t sv = static_cast<size_t>(v);
        if (lo <= nd.lo && nd.hi <= hi) {
            ++cnt;
            return checked_add(checked_add(base_[sv], pend_mass_[sv]), checked_mul(path_pend, mult_[sv]));
        }
        Weight below = checked_add(path_pend, pend_[sv]);
        return checked_add(query_rec(nd.lchild, lo, hi, below, cnt),
                           query_rec(nd.rchild, lo, hi, below, cnt));
    }

    CoordTree shape_;
    std::vector<Weight> base_, pend_, pend_mass_;
    std::vector<std::int64_t> mult_;
};

// ---------------------------------------------------------------------------
// 1D min/max tree with additive range updates. pend[v] is the pending add
// covering v's whole slab; agg[v] excludes pend at v and above. Internal
// values use 128-bit arithmetic so near-sentinel weights stay exact.
// ---------------------------------------------------------------------------
class LazyMinMax1D {
public:
    LazyMinMax1D(const PointSet& ps, bool take_min, std::uint64_t& alloc) : take_min_(take_min) {
        std::vector<PointRef> refs;
        for (const MergedPoint& p : ps.points()) refs.push_back(&p);
        shape_ = CoordTree(distinct_coords(refs, 1));
        alloc += shape_.node_count();
        agg_.assign(shape_.node_count(), 0);
        pend_.assign(shape_.node_count(), 0);
        for (const MergedPoint& p : ps.points()) {
            int leaf = find_leaf(p.coords[0]);
            agg_[static_cast<size_t>(leaf)] = p.weight;
        }
        pull_all(shape_.root());
    }

    void range_add(Coord xa, Coord xb, Weight u) {
        int lo = shape_.lower_rank(xa), hi = shape_.upper_rank(xb);
        if (lo > hi) return;
        add_rec(shape_.root(), lo, hi, u);
    }

    Weight query(Coord xa, Coord xb, std::uint64_t& cnt) const {
        int lo = shape_.lower_rank(xa), hi = shape_.upper_rank(xb);
        Weight neutral = take_min_ ? kPosInf : kNegInf;
        if (lo > hi) return neutral;
        return static_cast<Weight>(clamp_to_weight(query_rec(shape_.root(), lo, hi, 0, cnt)));
    }

    void point_set(Coord c, Weight w) {
        set_rec(shape_.root(), c, static_cast<__int128>(w), 0);
    }

private:
    __int128 pick(__int128 a, __int128 b) const { return take_min_ ? (a < b ? a : b) : (a > b ? a : b); }

    __int128 eff(int v) const { return agg_[static_cast<size_t>(v)] + pend_[static_cast<size_t>(v)]; }

    int find_leaf(Coord c) const {
        int v = shape_.root();
        while (shape_.node(v).lchild >= 0)
            v = (c <= shape_.node(shape_.node(v).lchild).right) ? shape_.node(v).lchild : shape_.node(v).rchild;
        return v;
    }

    __int128 pull_all(int v) {
        const CoordTree::Node& nd = shape_.node(v);
        if (nd.lchild >= 0)
            agg_[static_cast<size_t>(v)] = pick(pull_all(nd.lchild), pull_all(nd.rchild));
        return eff(v);
    }

    void add_rec(int v, int lo, int hi, Weight u) {
        const CoordTree::Node& nd = shape_.node(v);
        if (nd.hi < lo || nd.lo > hi) return;
        if (lo <= nd.lo && nd.hi <= hi) {
            pend_[static_cast<size_t>(v)] += u;
            return;
        }
        add_rec(nd.lchild, lo, hi, u);
        add_rec(nd.rchild, lo, hi, u);
        agg_[static_cast<size_t>(v)] = pick(eff(nd.lchild), eff(nd.rchild));
    }

    __int128 query_rec(int v, int lo, int hi, __int128 acc, std::uint64_t& cnt) const {
        const CoordTree::Node& nd = shape_.node(v);
        if (lo <= nd.lo && nd.hi <= hi) {
            ++cnt;
            return eff(v) + acc;
        }
        acc += pend_[static_cast<size_t>(v)];
        __int128 best = take_min_ ? static_cast<__int128>(kPosInf) * 4 : static_cast<__int128>(kNegInf) * 4;
        const CoordTree::Node& l = shape_.node(nd.lchild);
        const CoordTree::Node& r = shape_.node(nd.rchild);
        if (!(l.hi < lo || l.lo > hi)) best = pick(best, query_rec(nd.lchild, lo, hi, acc, cnt));
        if (!(r.hi < lo || r.lo > hi)) best = pick(best, query_rec(nd.rchild, lo, hi, acc, cnt));
        return best;
    }

    void set_rec(int v, Coord c, __int128 w, __int128 acc) {
        const CoordTree::Node& nd = shape_.node(v);
        if (nd.lchild < 0) {
            agg_[static_cast<size_t>(v)] = w - acc - pend_[static_cast<size_t>(v)];
            return;
        }
        acc += pend_[static_cast<size_t>(v)];
        set_rec(c <= shape_.node(nd.lchild).right ? nd.lchild : nd.rchild, c, w, acc);
        agg_[static_cast<size_t>(v)] = pick(eff(nd.lchild), eff(nd.rchild));
    }

    CoordTree shape_;
    bool take_min_;
    std::vector<__int128> agg_, pend_;
};

// ---------------------------------------------------------------------------
// Multidimensional sum tree with additive range updates, d >= 2. Every node
// keeps its subtree sum fully resolved: a range update walks each level's
// decomposition and adds the exact covered mass to every intersecting node,
// restricting partially covered ancestor slabs through per-node point stores
// (sorted outer-dimension coordinates for one open restriction, tuple scans
// beyond that). Queries then read canonical nodes only.
// ---------------------------------------------------------------------------
struct MaskInterval {
    int dim;  // absolute dimension
    Coord lo, hi;
};

class EagerSumTree {
public:
    EagerSumTree(const PointSet& ps, std::uint64_t& alloc) : d_(ps.dim()) {
        std::vector<int> ids(ps.size());
        for (size_t i = 0; i < ps.size(); ++i) ids[i] = static_cast<int>(i);
        root_ = build(ps, d_, ids, alloc);
    }

    Weight query(const Box& b, std::uint64_t& cnt) const { return query_rec(*root_, b, cnt); }

    void range_add(const PointSet& ps, const Box& b, Weight u) {
        std::vector<MaskInterval> masks;
        update_rec(ps, *root_, b, u, masks);
    }

    void point_add(const MergedPoint& p, Weight delta) { point_rec(*root_, p, delta); }

private:
    struct Level {
        int dim;
        CoordTree shape;
        std::vector<std::unique_ptr<Level>> nested;  // dim > 1
        // dim == 1 payload, per node
        std::vector<Weight> sum;
        std::vector<std::int64_t> mult;
        // point stores for restricted counting, per node: coordinates of the
        // outer dimensions (2..d), one sorted column per dimension plus the
        // aligned tuples for multi-restriction scans
        std::vector<std::vector<std::vector<Coord>>> col;          // [node][outer dim index] sorted
        std::vector<std::vector<std::vector<std::int64_t>>> colp;  // matching multiplicity prefix
        std::vector<std::vector<Coord>> joint;                     // [node] (d-1) coords per point
        std::vector<std::vector<std::int64_t>> jmult;              // [node] per-point multiplicity
    };

    std::unique_ptr<Level> build(const PointSet& ps, int dim, const std::vector<int>& ids, std::uint64_t& alloc) {
        auto t = std::make_unique<Level>();
        t->dim = dim;
        std::vector<PointRef> refs;
        for (int id : ids) refs.push_back(&ps.points()[static_cast<size_t>(id)]);
        t->shape = CoordTree(distinct_coords(refs, dim));
        alloc += t->shape.node_count();
        size_t nn = t->shape.node_count();
        if (dim > 1) {
            t->nested.resize(nn);
            build_nested(ps, *t, t->shape.root(), ids, alloc);
        } else {
            t->sum.assign(nn, 0);
            t->mult.assign(nn, 0);
            t->col.resize(nn);
            t->colp.resize(nn);
            t->joint.resize(nn);
            t->jmult.resize(nn);
            fill_leaf_level(ps, *t, t->shape.root(), ids);
        }
        return t;
    }

    void build_nested(const PointSet& ps, Level& t, int node, const std::vector<int>& ids, std::uint64_t& alloc) {
        t.nested[static_cast<size_t>(node)] = build(ps, t.dim - 1, ids, alloc);
        const CoordTree::Node& nd = t.shape.node(node);
        if (nd.lchild < 0) return;
        Coord split = t.shape.node(nd.lchild).right;
        std::vector<int> left, right;
        for (int id : ids) {
            Coord c = ps.points()[static_cast<size_t>(id)].coords[static_cast<size_t>(t.dim - 1)];
            (c <= split ? left : right).push_back(id);
        }
        build_nested(ps, t, nd.lchild, left, alloc);
        build_nested(ps, t, nd.rchild, right, alloc);
    }

    void fill_leaf_level(const PointSet& ps, Level& t, int node, const std::vector<int>& ids) {
        size_t sv = static_cast<size_t>(node);
        Weight s = 0;
        std::int64_t m = 0;
        t.col[sv].assign(static_cast<size_t>(d_ - 1), {});
        t.colp[sv].assign(static_cast<size_t>(d_ - 1), {});
        for (int id : ids) {
            const MergedPoint& p = ps.points()[static_cast<size_t>(id)];
            s = checked_add(s, p.weight);
            m += p.multiplicity;
            for (int j = 2; j <= d_; ++j) t.joint[sv].push_back(p.coords[static_cast<size_t>(j - 1)]);
            t.jmult[sv].push_back(p.multiplicity);
        }
        t.sum[sv] = s;
        t.mult[sv] = m;
        for (int j = 2; j <= d_; ++j) {
            std::vector<std::pair<Coord, std::int64_t>> cs;
            for (int id : ids) {
                const MergedPoint& p = ps.points()[static_cast<size_t>(id)];
                cs.emplace_back(p.coords[static_cast<size_t>(j - 1)], p.multiplicity);
            }
            std::sort(cs.begin(), cs.end());
            auto& col = t.col[sv][static_cast<size_t>(j - 2)];
            auto& pre = t.colp[sv][static_cast<size_t>(j - 2)];
            pre.push_back(0);
            for (auto& [c, mm] : cs) {
                col.push_back(c);
                pre.push_back(pre.back() + mm);
            }
        }
        const CoordTree::Node& nd = t.shape.node(node);
        if (nd.lchild < 0) return;
        Coord split = t.shape.node(nd.lchild).right;
        std::vector<int> left, right;
        for (int id : ids) {
            Coord c = ps.points()[static_cast<size_t>(id)].coords[0];
            (c <= split ? left : right).push_back(id);
        }
        fill_leaf_level(ps, t, nd.lchild, left);
        fill_leaf_level(ps, t, nd.rchild, right);
    }

    std::int64_t masked_mult(const Level& t, int node, const std::vector<MaskInterval>& masks) const {
        size_t sv = static_cast<size_t>(node);
        if (masks.empty()) return t.mult[sv];
        if (masks.size() == 1) {
            const auto& col = t.col[sv][static_cast<size_t>(masks[0].dim - 2)];
            const auto& pre = t.colp[sv][static_cast<size_t>(masks[0].dim - 2)];
            size_t a = static_cast<size_t>(std::lower_bound(col.begin(), col.end(), masks[0].lo) - col.begin());
            size_t b = static_cast<size_t>(std::upper_bound(col.begin(), col.end(), masks[0].hi) - col.begin());
            return pre[b] - pre[a];
        }
        std::int64_t m = 0;
        size_t npts = t.jmult[sv].size();
        size_t stride = static_cast<size_t>(d_ - 1);
        for (size_t i = 0; i < npts; ++i) {
            bool ok = true;
            for (const MaskInterval& mk : masks) {
                Coord c = t.joint[sv][i * stride + static_cast<size_t>(mk.dim - 2)];
                if (c < mk.lo || c > mk.hi) { ok = false; break; }
            }
            if (ok) m += t.jmult[sv][i];
        }
        return m;
    }

    Weight query_rec(const Level& t, const Box& b, std::uint64_t& cnt) const {
        const auto& [xa, xb] = b.bounds[static_cast<size_t>(t.dim - 1)];
        int lo = t.shape.lower_rank(xa), hi = t.shape.upper_rank(xb);
        Weight acc = 0;
        for (int id : t.shape.decompose_ranks(lo, hi)) {
            ++cnt;
            acc = checked_add(acc, t.dim == 1 ? t.sum[static_cast<size_t>(id)]
                                              : query_rec(*t.nested[static_cast<size_t>(id)], b, cnt));
        }
        return acc;
    }

    void update_rec(const PointSet& ps, Level& t, const Box& b, Weight u, std::vector<MaskInterval>& masks) {
        const auto& [xa, xb] = b.bounds[static_cast<size_t>(t.dim - 1)];
        int lo = t.shape.lower_rank(xa), hi = t.shape.upper_rank(xb);
        if (lo > hi) return;
        if (t.dim == 1)
            add_level1(t, t.shape.root(), lo, hi, u, masks);
        else
            add_outer(ps, t, t.shape.root(), lo, hi, b, u, masks);
    }

    void add_outer(const PointSet& ps, Level& t, int v, int lo, int hi, const Box& b, Weight u,
                   std::vector<MaskInterval>& masks) {
        const CoordTree::Node& nd = t.shape.node(v);
        if (nd.hi < lo || nd.lo > hi) return;
        bool covered = lo <= nd.lo && nd.hi <= hi;
        if (covered) {
            update_rec(ps, *t.nested[static_cast<size_t>(v)], b, u, masks);
        } else {
            const auto& [xa, xb] = b.bounds[static_cast<size_t>(t.dim - 1)];
            masks.push_back({t.dim, std::max(xa, nd.left), std::min(xb, nd.right)});
            update_rec(ps, *t.nested[static_cast<size_t>(v)], b, u, masks);
            masks.pop_back();
        }
        if (nd.lchild >= 0) {
            add_outer(ps, t, nd.lchild, lo, hi, b, u, masks);
            add_outer(ps, t, nd.rchild, lo, hi, b, u, masks);
        }
    }

    Weight add_level1(Level& t, int v, int lo, int hi, Weight u, const std::vector<MaskInterval>& masks) {
        const CoordTree::Node& nd = t.shape.node(v);
        if (nd.hi < lo || nd.lo > hi) return 0;
        size_t sv = static_cast<size_t>(v);
        if (lo <= nd.lo && nd.hi <= hi) return cover_level1(t, v, u, masks);
        Weight m = checked_add(add_level1(t, nd.lchild, lo, hi, u, masks),
                               add_level1(t, nd.rchild, lo, hi, u, masks));
        t.sum[sv] = checked_add(t.sum[sv], m);
        return m;
    }

    Weight cover_level1(Level& t, int v, Weight u, const std::vector<MaskInterval>& masks) {
        size_t sv = static_cast<size_t>(v);
        Weight mass = checked_mul(u, masked_mult(t, v, masks));
        t.sum[sv] = checked_add(t.sum[sv], mass);
        const CoordTree::Node& nd = t.shape.node(v);
        if (nd.lchild >= 0 && mass != 0) {
            cover_level1(t, nd.lchild, u, masks);
            cover_level1(t, nd.rchild, u, masks);
        }
        return mass;
    }

    void point_rec(Level& t, const MergedPoint& p, Weight delta) {
        Coord c = p.coords[static_cast<size_t>(t.dim - 1)];
        int v = t.shape.root();
        while (true) {
            if (t.dim > 1)
                point_rec(*t.nested[static_cast<size_t>(v)], p, delta);
            else
                t.sum[static_cast<size_t>(v)] = checked_add(t.sum[static_cast<size_t>(v)], delta);
            const CoordTree::Node& nd = t.shape.node(v);
            if (nd.lchild < 0) break;
            v = (c <= t.shape.node(nd.lchild).right) ? nd.lchild : nd.rchild;
        }
    }

    int d_;
    std::unique_ptr<Level> root_;
};

}  // namespace detail

// Sparse-case d-dimensional range tree. Point weights can change (logical
// deletion = assigning the neutral element); the point set itself is fixed.
// With range updates enabled the supported pairs are (SUM, add) in any
// dimension and (MIN, add) / (MAX, add) at d == 1.
class RangeTree {
public:
    RangeTree(PointSet ps, AggregateOp op, bool range_updates_enabled = false)
        : ps_(std::move(ps)), op_(op), ru_(range_updates_enabled) {
        if (ru_) {
            switch (op_.kind()) {
                case AggKind::Sum:
                    if (ps_.dim() == 1)
                        sum1d_ = std::make_unique<detail::SumRu1D>(ps_, nodes_allocated_);
                    else
                        eager_ = std::make_unique<detail::EagerSumTree>(ps_, nodes_allocated_);
                    break;
                case AggKind::Min:
                case AggKind::Max:
                    if (ps_.dim() != 1)
                        throw UnsupportedCombination("MIN/MAX range updates are 1D only");
                    mm1d_ = std::make_unique<detail::LazyMinMax1D>(ps_, op_.kind() == AggKind::Min,
                                                                   nodes_allocated_);
                    break;
                default:
                    throw UnsupportedCombination("range updates support SUM, MIN and MAX aggregates");
            }
        } else {
            plain_ = std::make_unique<detail::PlainEngine>(ps_, op_);
            nodes_allocated_ = plain_->nodes_allocated();
        }
    }

    int dim() const { return ps_.dim(); }
    const AggregateOp& op() const { return op_; }
    const PointSet& point_set() const { return ps_; }

    Weight range_query(const Box& b) {
        b.validate(dim());
        last_query_nodes_ = 0;
        if (plain_) return plain_->query(b, last_query_nodes_);
        if (eager_) return eager_->query(b, last_query_nodes_);
        if (sum1d_) return sum1d_->query(b.bounds[0].first, b.bounds[0].second, last_query_nodes_);
        return mm1d_->query(b.bounds[0].first, b.bounds[0].second, last_query_nodes_);
    }

    void point_update(const std::vector<Coord>& coords, Weight new_weight) {
        size_t id = ps_.index_of(coords);
        if (plain_) {
            plain_->point_update(ps_, id, new_weight);
        } else if (eager_) {
            std::uint64_t scratch = 0;
            Box b;
            for (Coord c : coords) b.bounds.emplace_back(c, c);
            Weight cur = eager_->query(b, scratch);
            eager_->point_add(ps_.points()[id], checked_sub(new_weight, cur));
        } else if (sum1d_) {
            std::uint64_t scratch = 0;
            sum1d_->point_set(coords[0], new_weight, scratch);
        } else {
            mm1d_->point_set(coords[0], new_weight);
        }
    }

    // Adds u to the weight of every original point inside b.
    void range_update(const Box& b, Weight u) {
        if (!ru_) throw UnsupportedCombination("tree built without range updates");
        b.validate(dim());
        if (eager_)
            eager_->range_add(ps_, b, u);
        else if (sum1d_)
            sum1d_->range_add(b.bounds[0].first, b.bounds[0].second, u);
        else
            mm1d_->range_add(b.bounds[0].first, b.bounds[0].second, u);
    }

    // Contributing tree nodes read by the most recent range_query.
    std::uint64_t last_query_nodes() const { return last_query_nodes_; }
    std::uint64_t nodes_allocated() const { return nodes_allocated_; }

private:
    PointSet ps_;
    AggregateOp op_;
    bool ru_;
    std::unique_ptr<detail::PlainEngine> plain_;
    std::unique_ptr<detail::EagerSumTree> eager_;
    std::unique_ptr<detail::SumRu1D> sum1d_;
    std::unique_ptr<detail::LazyMinMax1D> mm1d_;
    std::uint64_t nodes_allocated_ = 0;
    std::uint64_t last_query_nodes_ = 0;
};

}  // namespace rangekit
