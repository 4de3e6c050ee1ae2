#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "rangekit/agg.hpp"
#include "rangekit/errors.hpp"

namespace rangekit {

// A line of stations where station i forwards to i+1. s(i) is the sending
// rate, r(i) > s(i) the processing capacity, c(i) >= 0 the cost of an
// artificial collapse. A collapsed station forwards its inflow plus s(i);
// station j falls naturally when the inflow from the collapsed run before it
// exceeds r(j) - s(j).
struct StationLine {
    std::vector<std::int64_t> s, r, c;

    int n() const { return static_cast<int>(s.size()); }

    void validate() const {
        if (s.empty()) throw EmptyInput();
        for (int i = 0; i < n(); ++i) {
            if (s[static_cast<size_t>(i)] <= 0) throw Error("sending rate must be positive");
            if (r[static_cast<size_t>(i)] <= s[static_cast<size_t>(i)])
                throw Error("processing rate must exceed sending rate");
            if (c[static_cast<size_t>(i)] < 0) throw Error("security cost must be nonnegative");
        }
    }
};

inline std::vector<std::int64_t> station_prefix_sums(const StationLine& line) {
    std::vector<std::int64_t> ps(static_cast<size_t>(line.n()) + 1, 0);
    for (int i = 1; i <= line.n(); ++i)
        ps[static_cast<size_t>(i)] = checked_add(ps[static_cast<size_t>(i - 1)], line.s[static_cast<size_t>(i - 1)]);
    return ps;
}

// prev(i): smallest run start k such that station i survives the inflow of
// the collapsed run [k, i-1], i.e. ps(i) - ps(k-1) <= r(i). Binary searched
// over the strictly increasing prefix sums; prev(i) = i always qualifies.
inline std::vector<int> compute_prev(const StationLine& line) {
    line.validate();
    std::vector<std::int64_t> ps = station_prefix_sums(line);
    std::vector<int> prev(static_cast<size_t>(line.n()));
    for (int i = 1; i <= line.n(); ++i) {
        // smallest k with ps(k-1) >= ps(i) - r(i)
        std::int64_t need = ps[static_cast<size_t>(i)] - line.r[static_cast<size_t>(i - 1)];
        auto it = std::lower_bound(ps.begin(), ps.begin() + i, need);
        prev[static_cast<size_t>(i - 1)] = static_cast<int>(it - ps.begin()) + 1;
    }
    return prev;
}

namespace detail {

// Minimal segment tree holding one pending-add per node; a point value is
// the sum of the pending values on its root-to-leaf path.
class AddSegTree {
public:
    explicit AddSegTree(int n) : n_(n), add_(4 * static_cast<size_t>(std::max(n, 1)), 0) {}

    void range_add(int lo, int hi, std::int64_t u) { rec_add(1, 1, n_, lo, hi, u); }

    std::int64_t point_query(int pos) const {
        int node = 1, lo = 1, hi = n_;
        std::int64_t acc = 0;
        while (true) {
            acc = checked_add(acc, add_[static_cast<size_t>(node)]);
            if (lo == hi) return acc;
            int mid = lo + (hi - lo) / 2;
            if (pos <= mid) {
                node = 2 * node;
                hi = mid;
            } else {
                node = 2 * node + 1;
                lo = mid + 1;
            }
        }
    }

private:
    void rec_add(int node, int lo, int hi, int a, int b, std::int64_t u) {
        if (b < lo || hi < a) return;
        if (a <= lo && hi <= b) {
            add_[static_cast<size_t>(node)] = checked_add(add_[static_cast<size_t>(node)], u);
            return;
        }
        int mid = lo + (hi - lo) / 2;
        rec_add(2 * node, lo, mid, a, b, u);
        rec_add(2 * node + 1, mid + 1, hi, a, b, u);
    }

    int n_;
    std::vector<std::int64_t> add_;
};

}  // namespace detail

// e(j) = total effort of a plan whose first artificial collapse is station j:
// every station i >= j that the run from j cannot topple (prev(i) <= j) must
// be paid for. Computed twice, by segment-tree interval adds and by a
// difference array; both must agree.
struct EffortArrays {
    std::vector<std::int64_t> via_segment_tree;
    std::vector<std::int64_t> via_difference;
};

inline EffortArrays compute_efforts(const StationLine& line, const std::vector<int>& prev) {
    const int n = line.n();
    detail::AddSegTree st(n);
    std::vector<std::int64_t> diff(static_cast<size_t>(n) + 2, 0);
    for (int i = 1; i <= n; ++i) {
        int lo = prev[static_cast<size_t>(i - 1)];
        std::int64_t ci = line.c[static_cast<size_t>(i - 1)];
        st.range_add(lo, i, ci);
        diff[static_cast<size_t>(lo)] = checked_add(diff[static_cast<size_t>(lo)], ci);
        diff[static_cast<size_t>(i) + 1] = checked_sub(diff[static_cast<size_t>(i) + 1], ci);
    }
    EffortArrays out;
    out.via_segment_tree.resize(static_cast<size_t>(n));
    out.via_difference.resize(static_cast<size_t>(n));
    std::int64_t run = 0;
    for (int j = 1; j <= n; ++j) {
        out.via_segment_tree[static_cast<size_t>(j - 1)] = st.point_query(j);
        run = checked_add(run, diff[static_cast<size_t>(j)]);
        out.via_difference[static_cast<size_t>(j - 1)] = run;
    }
    return out;
}

// Minimum total effort to collapse the last station, with the starting
// station of an optimal plan (smallest index on ties).
inline std::pair<std::int64_t, int> min_collapse_effort(const StationLine& line) {
    std::vector<int> prev = compute_prev(line);
    EffortArrays e = compute_efforts(line, prev);
    if (e.via_segment_tree != e.via_difference)
        throw Error("effort computations disagree");
    int best = 0;
    for (int j = 1; j < line.n(); ++j)
        if (e.via_difference[static_cast<size_t>(j)] < e.via_difference[static_cast<size_t>(best)]) best = j;
    return {e.via_difference[static_cast<size_t>(best)], best + 1};
}

}  // namespace rangekit
