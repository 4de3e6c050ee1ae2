#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "rangekit/agg.hpp"
#include "rangekit/coord_tree.hpp"
#include "rangekit/errors.hpp"

namespace rangekit {

// L1 median of a multiset on the line: middle order statistic for odd n;
// for even n any point of [x(n/2), x(n/2+1)] works and the interval's left
// endpoint is the canonical location. Selection, not sorting.
struct L1Median {
    Coord location;
    Coord interval_lo, interval_hi;
};

inline L1Median l1_median(std::vector<Coord> xs) {
    if (xs.empty()) throw EmptyInput();
    const size_t n = xs.size();
    if (n % 2 == 1) {
        auto mid = xs.begin() + static_cast<std::ptrdiff_t>(n / 2);
        std::nth_element(xs.begin(), mid, xs.end());
        return {*mid, *mid, *mid};
    }
    auto lo_it = xs.begin() + static_cast<std::ptrdiff_t>(n / 2 - 1);
    std::nth_element(xs.begin(), lo_it, xs.end());
    Coord lo = *lo_it;
    Coord hi = *std::min_element(lo_it + 1, xs.end());
    return {lo, lo, hi};
}

// Least-squares location for weighted points: the weighted mean.
inline double weighted_lsq_point(const std::vector<Coord>& xs, const std::vector<double>& ws) {
    if (xs.empty()) throw EmptyInput();
    double sw = 0, swx = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sw += ws[i];
        swx += ws[i] * static_cast<double>(xs[i]);
    }
    if (sw <= 0) throw ZeroTotalWeight();
    return swx / sw;
}

namespace detail {

// Dense d-dimensional range-add / range-sum tree over cell indices. Every
// intersecting chain of nodes keeps its exact slab mass (covered counts are
// interval-length products), so queries read canonical nodes only.
class DenseAddSum {
public:
    explicit DenseAddSum(const std::vector<int>& axis_sizes) : m_(axis_sizes) {
        root_ = build(0);
    }

    void range_add(const std::vector<std::pair<int, int>>& box, Weight u) {
        check_box(box);
        add_rec(*root_, box, u, 1);
    }

    Weight range_sum(const std::vector<std::pair<int, int>>& box, std::uint64_t* nodes = nullptr) const {
        check_box(box);
        std::uint64_t local = 0;
        Weight r = sum_rec(*root_, box, nodes ? *nodes : local);
        return r;
    }

private:
    struct Level {
        size_t axis;
        CoordTree shape;  // over indices 1..m
        std::vector<std::unique_ptr<Level>> nested;  // axis not innermost
        std::vector<Weight> sum;                     // innermost
    };

    std::unique_ptr<Level> build(size_t axis) {
        auto t = std::make_unique<Level>();
        t->axis = axis;
        std::vector<Coord> idx(static_cast<size_t>(m_[axis]));
        for (int i = 0; i < m_[axis]; ++i) idx[static_cast<size_t>(i)] = i + 1;
        t->shape = CoordTree(std::move(idx));
        if (axis + 1 < m_.size()) {
            t->nested.resize(t->shape.node_count());
            for (size_t v = 0; v < t->shape.node_count(); ++v) t->nested[v] = build(axis + 1);
        } else {
            t->sum.assign(t->shape.node_count(), 0);
        }
        return t;
    }

    void check_box(const std::vector<std::pair<int, int>>& box) const {
        if (box.size() != m_.size()) throw BadBox("box dimension mismatch");
        for (size_t j = 0; j < m_.size(); ++j)
            if (box[j].first < 1 || box[j].first > box[j].second || box[j].second > m_[j])
                throw BadBox("box out of grid");
    }

    void add_rec(Level& t, const std::vector<std::pair<int, int>>& box, Weight u, std::int64_t factor) {
        add_walk(t, t.shape.root(), box, u, factor);
    }

    void add_walk(Level& t, int v, const std::vector<std::pair<int, int>>& box, Weight u,
                  std::int64_t factor) {
        const CoordTree::Node& nd = t.shape.node(v);
        auto [a, b] = box[t.axis];
        std::int64_t o = std::min<std::int64_t>(b, nd.right) - std::max<std::int64_t>(a, nd.left) + 1;
        if (o <= 0) return;
        std::int64_t f = checked_mul(factor, o);
        if (t.axis + 1 < m_.size())
            add_rec(*t.nested[static_cast<size_t>(v)], box, u, f);
        else
            t.sum[static_cast<size_t>(v)] = checked_add(t.sum[static_cast<size_t>(v)], checked_mul(u, f));
        if (nd.lchild >= 0) {
            add_walk(t, nd.lchild, box, u, factor);
            add_walk(t, nd.rchild, box, u, factor);
        }
    }

    Weight sum_rec(const Level& t, const std::vector<std::pair<int, int>>& box, std::uint64_t& cnt) const {
        auto [a, b] = box[t.axis];
        Weight acc = 0;
        for (int id : t.shape.decompose_ranks(a - 1, b - 1)) {
            ++cnt;
            acc = checked_add(acc, t.axis + 1 < m_.size()
                                       ? sum_rec(*t.nested[static_cast<size_t>(id)], box, cnt)
                                       : t.sum[static_cast<size_t>(id)]);
        }
        return acc;
    }

    std::vector<int> m_;
    std::unique_ptr<Level> root_;
};

}  // namespace detail

// Dynamic weighted-L1 range median on a d-dimensional grid. Cell (c1..cd)
// carries a nonnegative weight and represents the point (x(1,c1)..x(d,cd));
// one sum index tracks the weights and one per dimension the coordinate-
// scaled weights, so slab sums resolve medians and distance costs.
class MedianCube {
public:
    MedianCube(std::vector<std::vector<Coord>> axis_coords, std::vector<Weight> weights)
        : axes_(std::move(axis_coords)) {
        for (size_t j = 0; j < axes_.size(); ++j) {
            if (axes_[j].empty()) throw BadBox("empty axis");
            for (size_t k = 0; k + 1 < axes_[j].size(); ++k)
                if (axes_[j][k] > axes_[j][k + 1]) throw BadBox("axis coordinates must be nondecreasing");
            m_.push_back(static_cast<int>(axes_[j].size()));
        }
        std::int64_t np = 1;
        for (int mj : m_) np = checked_mul(np, mj);
        if (static_cast<std::int64_t>(weights.size()) != np) throw BadBox("weight count mismatch");
        shadow_ = std::move(weights);
        wsum_ = std::make_unique<detail::DenseAddSum>(m_);
        for (size_t j = 0; j < m_.size(); ++j) dsum_.push_back(std::make_unique<detail::DenseAddSum>(m_));
        std::vector<int> idx(m_.size(), 1);
        size_t off = 0;
        std::vector<std::pair<int, int>> cellbox(m_.size());
        do {
            Weight w = shadow_[off++];
            if (w < 0) throw NegativeWeight();
            if (w != 0) {
                for (size_t j = 0; j < m_.size(); ++j) cellbox[j] = {idx[j], idx[j]};
                wsum_->range_add(cellbox, w);
                for (size_t j = 0; j < m_.size(); ++j)
                    dsum_[j]->range_add(cellbox, checked_mul(coord(j, idx[j]), w));
            }
        } while (advance(idx));
    }

    int dim() const { return static_cast<int>(m_.size()); }
    const std::vector<int>& axis_sizes() const { return m_; }
    Coord coord(size_t j, int cj) const { return axes_[j][static_cast<size_t>(cj - 1)]; }

    // Cube(cell) += delta, and every coordinate-scaled index follows.
    void point_update(const std::vector<int>& cell, Weight delta) {
        size_t off = offset(cell);
        if (shadow_[off] + delta < 0) throw NegativeWeight();
        shadow_[off] += delta;
        last_structure_updates_ = 0;
        std::vector<std::pair<int, int>> cellbox(m_.size());
        for (size_t j = 0; j < m_.size(); ++j) cellbox[j] = {cell[j], cell[j]};
        wsum_->range_add(cellbox, delta);
        ++last_structure_updates_;
        for (size_t j = 0; j < m_.size(); ++j) {
            dsum_[j]->range_add(cellbox, checked_mul(coord(j, cell[j]), delta));
            ++last_structure_updates_;
        }
    }

    // Every cell in the box gains u; per dimension, each slice of the scaled
    // index gains x(j, c(j)) * u over the slice's sub-box.
    void range_update(const std::vector<std::pair<int, int>>& box, Weight u) {
        check_box(box);
        for_each_cell(box, [&](size_t off) {
            if (shadow_[off] + u < 0) throw NegativeWeight();
        });
        for_each_cell(box, [&](size_t off) { shadow_[off] += u; });
        last_structure_updates_ = 0;
        wsum_->range_add(box, u);
        ++last_structure_updates_;
        for (size_t j = 0; j < m_.size(); ++j) {
            std::vector<std::pair<int, int>> slice = box;
            for (int cj = box[j].first; cj <= box[j].second; ++cj) {
                slice[j] = {cj, cj};
                dsum_[j]->range_add(slice, checked_mul(coord(j, cj), u));
                ++last_structure_updates_;
            }
        }
    }

    struct MedianResult {
        std::vector<int> cell;      // 1-based indices per dimension
        std::vector<Coord> coords;  // the point P
        Weight cost;                // weighted L1 distance sum
    };

    // Per dimension independently: the smallest in-box index whose prefix
    // slab holds at least half the box weight (lower weighted median), then
    // the exact cost from the slab sums.
    MedianResult range_median(const std::vector<std::pair<int, int>>& box, std::uint64_t* nodes = nullptr) {
        check_box(box);
        Weight total = wsum_->range_sum(box, nodes);
        if (total <= 0) throw EmptyRange();
        Weight half = (total + 1) / 2;  // ceil(W/2)
        MedianResult out;
        out.cost = 0;
        for (size_t j = 0; j < m_.size(); ++j) {
            int lo = box[j].first, hi = box[j].second;
            while (lo < hi) {
                int mid = lo + (hi - lo) / 2;
                std::vector<std::pair<int, int>> slab = box;
                slab[j] = {box[j].first, mid};
                if (wsum_->range_sum(slab, nodes) >= half)
                    hi = mid;
                else
                    lo = mid + 1;
            }
            out.cell.push_back(lo);
            Coord px = coord(j, lo);
            out.coords.push_back(px);
            std::vector<std::pair<int, int>> slab = box;
            slab[j] = {box[j].first, lo};
            Weight wl = wsum_->range_sum(slab, nodes);
            Weight sl = dsum_[j]->range_sum(slab, nodes);
            Weight wr = checked_sub(total, wl);
            Weight sr = checked_sub(dsum_[j]->range_sum(box, nodes), sl);
            // cost along j: px*WL - SL + SR - px*WR
            Weight cj = checked_add(checked_sub(checked_mul(px, wl), sl),
                                    checked_sub(sr, checked_mul(px, wr)));
            out.cost = checked_add(out.cost, cj);
        }
        return out;
    }

    Weight cell_weight(const std::vector<int>& cell) const { return shadow_[offset(cell)]; }

    // Index contents for audits: singleton sums from the internal trees.
    Weight index_cell_weight(const std::vector<int>& cell) const {
        std::vector<std::pair<int, int>> cb(m_.size());
        for (size_t j = 0; j < m_.size(); ++j) cb[j] = {cell[j], cell[j]};
        return wsum_->range_sum(cb);
    }
    Weight index_scaled_cell(size_t j, const std::vector<int>& cell) const {
        std::vector<std::pair<int, int>> cb(m_.size());
        for (size_t t = 0; t < m_.size(); ++t) cb[t] = {cell[t], cell[t]};
        return dsum_[j]->range_sum(cb);
    }

    std::uint64_t last_structure_updates() const { return last_structure_updates_; }

    bool advance(std::vector<int>& idx) const {
        for (int j = static_cast<int>(m_.size()) - 1; j >= 0; --j) {
            if (idx[static_cast<size_t>(j)] < m_[static_cast<size_t>(j)]) {
                ++idx[static_cast<size_t>(j)];
                for (size_t t = static_cast<size_t>(j) + 1; t < m_.size(); ++t) idx[t] = 1;
                return true;
            }
        }
        return false;
    }

private:
    size_t offset(const std::vector<int>& cell) const {
        if (cell.size() != m_.size()) throw BadBox("cell dimension mismatch");
        size_t off = 0;
        for (size_t j = 0; j < m_.size(); ++j) {
            if (cell[j] < 1 || cell[j] > m_[j]) throw BadBox("cell index out of range");
            off = off * static_cast<size_t>(m_[j]) + static_cast<size_t>(cell[j] - 1);
        }
        return off;
    }

    void check_box(const std::vector<std::pair<int, int>>& box) const {
        if (box.size() != m_.size()) throw BadBox("box dimension mismatch");
        for (size_t j = 0; j < m_.size(); ++j)
            if (box[j].first < 1 || box[j].first > box[j].second || box[j].second > m_[j])
                throw BadBox("box out of grid");
    }

    template <typename F>
    void for_each_cell(const std::vector<std::pair<int, int>>& box, F&& f) const {
        std::vector<int> idx(m_.size());
        for (size_t j = 0; j < m_.size(); ++j) idx[j] = box[j].first;
        while (true) {
            f(offset(idx));
            int j = static_cast<int>(m_.size()) - 1;
            for (; j >= 0; --j) {
                if (idx[static_cast<size_t>(j)] < box[static_cast<size_t>(j)].second) {
                    ++idx[static_cast<size_t>(j)];
                    for (size_t t = static_cast<size_t>(j) + 1; t < m_.size(); ++t)
                        idx[t] = box[t].first;
                    break;
                }
            }
            if (j < 0) break;
        }
    }

    std::vector<std::vector<Coord>> axes_;
    std::vector<int> m_;
    std::vector<Weight> shadow_;
    std::unique_ptr<detail::DenseAddSum> wsum_;
    std::vector<std::unique_ptr<detail::DenseAddSum>> dsum_;
    std::uint64_t last_structure_updates_ = 0;
};

}  // namespace rangekit
