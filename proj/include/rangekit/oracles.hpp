#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "rangekit/agg.hpp"
#include "rangekit/errors.hpp"
#include "rangekit/points.hpp"
#include "rangekit/sequence_editor.hpp"
#include "rangekit/station_collapse.hpp"
#include "rangekit/sweep_select.hpp"

// Brute-force reference implementations. Each is a direct transcription of
// its problem statement and shares no code with the fast structures; they
// are deliberately slow and capped at desk scale by their callers.
namespace rangekit::oracles {

// Linear-scan fold of the weights inside the box.
inline Weight naive_range_agg(const std::vector<std::pair<std::vector<Coord>, Weight>>& points,
                              AggregateOp op, const Box& box) {
    Weight acc = op.neutral();
    for (const auto& [coords, w] : points)
        if (box.contains(coords)) acc = op.combine(acc, w);
    return acc;
}

// Step-by-step cascade: walking left to right, a station falls when it is
// artificially collapsed or the inflow of the contiguous collapsed run in
// front of it exceeds its spare capacity; a fallen station forwards its
// inflow plus its own sending rate.
inline std::vector<bool> cascade_simulate(const StationLine& line, const std::vector<bool>& artificial) {
    const int n = line.n();
    std::vector<bool> collapsed(static_cast<size_t>(n), false);
    std::int64_t run_inflow = 0;
    for (int i = 0; i < n; ++i) {
        bool falls = artificial[static_cast<size_t>(i)] ||
                     run_inflow > line.r[static_cast<size_t>(i)] - line.s[static_cast<size_t>(i)];
        collapsed[static_cast<size_t>(i)] = falls;
        run_inflow = falls ? run_inflow + line.s[static_cast<size_t>(i)] : 0;
    }
    return collapsed;
}

// Exhaustive minimum over artificial-collapse subsets that topple the last
// station. Caller keeps n small (<= 18).
inline std::int64_t min_effort_bruteforce(const StationLine& line) {
    const int n = line.n();
    std::int64_t best = -1;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::int64_t cost = 0;
        std::vector<bool> art(static_cast<size_t>(n), false);
        for (int i = 0; i < n; ++i)
            if (mask & (std::uint64_t{1} << i)) {
                art[static_cast<size_t>(i)] = true;
                cost += line.c[static_cast<size_t>(i)];
            }
        if (best >= 0 && cost >= best) continue;
        if (cascade_simulate(line, art)[static_cast<size_t>(n - 1)]) best = cost;
    }
    return best;
}

// Full merge, then index.
inline Weight merge_kth(const std::vector<std::vector<Weight>>& seqs, std::int64_t k) {
    std::vector<Weight> all;
    for (const auto& s : seqs) all.insert(all.end(), s.begin(), s.end());
    if (k < 1 || k > static_cast<std::int64_t>(all.size())) throw RankOutOfRange();
    std::sort(all.begin(), all.end());
    return all[static_cast<size_t>(k - 1)];
}

// Exhaustive weighted-L1 grid median: tries every candidate point of the box
// and scans every cell for its cost.
struct NaiveMedianResult {
    std::vector<int> cell;
    Weight cost;
};

inline NaiveMedianResult naive_median_cube(const std::vector<std::vector<Coord>>& axes,
                                           const std::vector<Weight>& cells,
                                           const std::vector<std::pair<int, int>>& box) {
    const size_t d = axes.size();
    std::vector<int> m(d);
    for (size_t j = 0; j < d; ++j) m[j] = static_cast<int>(axes[j].size());
    auto offset = [&](const std::vector<int>& idx) {
        size_t off = 0;
        for (size_t j = 0; j < d; ++j) off = off * static_cast<size_t>(m[j]) + static_cast<size_t>(idx[j] - 1);
        return off;
    };
    auto advance_in = [&](std::vector<int>& idx, const std::vector<std::pair<int, int>>& bounds) {
        for (int j = static_cast<int>(d) - 1; j >= 0; --j) {
            if (idx[static_cast<size_t>(j)] < bounds[static_cast<size_t>(j)].second) {
                ++idx[static_cast<size_t>(j)];
                for (size_t t = static_cast<size_t>(j) + 1; t < d; ++t) idx[t] = bounds[t].first;
                return true;
            }
        }
        return false;
    };

    std::optional<NaiveMedianResult> best;
    std::vector<int> cand(d);
    for (size_t j = 0; j < d; ++j) cand[j] = box[j].first;
    bool any_weight = false;
    while (true) {
        Weight cost = 0;
        std::vector<int> cell(d);
        for (size_t j = 0; j < d; ++j) cell[j] = box[j].first;
        while (true) {
            Weight w = cells[offset(cell)];
            if (w != 0) {
                any_weight = true;
                Weight l1 = 0;
                for (size_t j = 0; j < d; ++j)
                    l1 += std::abs(axes[j][static_cast<size_t>(cell[j] - 1)] -
                                   axes[j][static_cast<size_t>(cand[j] - 1)]);
                cost += w * l1;
            }
            if (!advance_in(cell, box)) break;
        }
        if (!best || cost < best->cost) best = NaiveMedianResult{cand, cost};
        if (!advance_in(cand, box)) break;
    }
    if (!any_weight) throw EmptyRange();
    return *best;
}

// Flat-array sequence editor.
class NaiveSequence {
public:
    explicit NaiveSequence(std::vector<std::int64_t> v) : v_(std::move(v)) {}

    std::int64_t size() const { return static_cast<std::int64_t>(v_.size()); }

    void reverse(std::int64_t i, std::int64_t j) {
        std::reverse(v_.begin() + i - 1, v_.begin() + j);
    }

    void cut_paste(std::int64_t i, std::int64_t j, std::int64_t p) {
        std::vector<std::int64_t> block(v_.begin() + i - 1, v_.begin() + j);
        v_.erase(v_.begin() + i - 1, v_.begin() + j);
        if (p == -1) return;
        v_.insert(v_.begin() + p, block.begin(), block.end());
    }

    void insert(std::int64_t p, const std::vector<std::int64_t>& values) {
        v_.insert(v_.begin() + p, values.begin(), values.end());
    }

    std::int64_t get(std::int64_t i) const { return v_[static_cast<size_t>(i - 1)]; }

    const std::vector<std::int64_t>& state() const { return v_; }

private:
    std::vector<std::int64_t> v_;
};

inline std::vector<std::int64_t> naive_seq_run(const std::vector<std::int64_t>& initial,
                                               const std::vector<SeqOp>& ops,
                                               std::vector<std::int64_t>* final_state = nullptr) {
    NaiveSequence ns(initial);
    std::vector<std::int64_t> answers;
    for (const SeqOp& op : ops) {
        switch (op.kind) {
            case SeqOp::Kind::Reverse: ns.reverse(op.i, op.j); break;
            case SeqOp::Kind::CutPaste: ns.cut_paste(op.i, op.j, op.p); break;
            case SeqOp::Kind::Insert: ns.insert(op.p, op.values); break;
            case SeqOp::Kind::Get: answers.push_back(ns.get(op.i)); break;
        }
    }
    if (final_state) *final_state = ns.state();
    return answers;
}

// Plain stack; a rotation reverses the top min(K, size) elements in place.
struct NaiveStackOp {
    bool is_push;
    Weight value;
};

inline std::vector<Weight> naive_stack(std::int64_t k, const std::vector<NaiveStackOp>& script) {
    std::vector<Weight> st;
    for (const NaiveStackOp& op : script) {
        if (op.is_push) {
            st.push_back(op.value);
        } else {
            size_t cnt = std::min<size_t>(static_cast<size_t>(k), st.size());
            std::reverse(st.end() - static_cast<std::ptrdiff_t>(cnt), st.end());
        }
    }
    return st;
}

// Filter the eligible half plane, sort squared distances, index.
inline std::optional<std::int64_t> naive_kth_distance(const std::vector<PlanarPoint>& pts,
                                                      std::int64_t xq, std::int64_t k) {
    std::vector<std::int64_t> d2;
    for (const PlanarPoint& p : pts)
        if (p.x <= xq) {
            std::int64_t dx = p.x - xq;
            d2.push_back(dx * dx + p.y * p.y);
        }
    if (k < 1 || k > static_cast<std::int64_t>(d2.size())) return std::nullopt;
    std::nth_element(d2.begin(), d2.begin() + (k - 1), d2.end());
    return d2[static_cast<size_t>(k - 1)];
}

}  // namespace rangekit::oracles
