#pragma once

#include <map>
#include <utility>
#include <vector>

#include "rangekit/agg.hpp"
#include "rangekit/coord_tree.hpp"
#include "rangekit/errors.hpp"

namespace rangekit {

struct RawPoint {
    std::vector<Coord> coords;
    Weight weight = 0;
};

// One stored point after merging raw points with identical coordinate
// tuples; weight is the fold of the merged weights and multiplicity the
// number of original points.
struct MergedPoint {
    std::vector<Coord> coords;
    Weight weight = 0;
    std::int64_t multiplicity = 1;
};

// Closed per-dimension coordinate intervals. Inverted bounds are rejected;
// a box that misses all points is fine.
struct Box {
    std::vector<std::pair<Coord, Coord>> bounds;

    int dim() const { return static_cast<int>(bounds.size()); }

    void validate(int expected_dim) const {
        if (dim() != expected_dim) throw BadBox("box dimension mismatch");
        for (const auto& [lo, hi] : bounds)
            if (lo > hi) throw BadBox("inverted box bounds");
    }

    static Box whole(int d) {
        Box b;
        b.bounds.assign(static_cast<size_t>(d), {kNegInf, kPosInf});
        return b;
    }

    bool contains(const std::vector<Coord>& c) const {
        for (size_t j = 0; j < bounds.size(); ++j)
            if (c[j] < bounds[j].first || c[j] > bounds[j].second) return false;
        return true;
    }
};

class PointSet {
public:
    PointSet(int d, const std::vector<RawPoint>& raw, const AggregateOp& op) : d_(d) {
        if (raw.empty()) throw EmptyPointSet();
        std::map<std::vector<Coord>, size_t> at;
        for (const RawPoint& p : raw) {
            if (static_cast<int>(p.coords.size()) != d) throw BadBox("point dimension mismatch");
            auto [it, fresh] = at.try_emplace(p.coords, points_.size());
            if (fresh) {
                points_.push_back(MergedPoint{p.coords, p.weight, 1});
            } else {
                MergedPoint& mp = points_[it->second];
                mp.weight = op.combine(mp.weight, p.weight);
                mp.multiplicity += 1;
            }
        }
    }

    int dim() const { return d_; }
    size_t size() const { return points_.size(); }
    const std::vector<MergedPoint>& points() const { return points_; }

    // Index of the stored point with exactly these coordinates.
    size_t index_of(const std::vector<Coord>& coords) const {
        for (size_t i = 0; i < points_.size(); ++i)
            if (points_[i].coords == coords) return i;
        throw UnknownPoint();
    }

    // Number of distinct coordinates per dimension.
    std::vector<size_t> distinct_counts() const {
        std::vector<size_t> m(static_cast<size_t>(d_));
        for (int j = 0; j < d_; ++j) {
            std::vector<Coord> cs;
            cs.reserve(points_.size());
            for (const MergedPoint& p : points_) cs.push_back(p.coords[static_cast<size_t>(j)]);
            std::sort(cs.begin(), cs.end());
            cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
            m[static_cast<size_t>(j)] = cs.size();
        }
        return m;
    }

private:
    int d_;
    std::vector<MergedPoint> points_;
};

}  // namespace rangekit
