#pragma once

#include <algorithm>
#include <cstdint>
#include <queue>
#include <set>
#include <utility>
#include <vector>

#include "rangekit/agg.hpp"
#include "rangekit/errors.hpp"

namespace rangekit {

// Position-probe access to n hidden ascending sequences. Every probe is
// counted and logged, so tests can assert that no position is fetched twice.
class SequenceOracle {
public:
    explicit SequenceOracle(std::vector<std::vector<Weight>> seqs) : seqs_(std::move(seqs)) {
        for (const auto& s : seqs_)
            for (size_t j = 0; j < s.size(); ++j) {
                if (s[j] == kNegInf || s[j] == kPosInf) throw Error("sequence uses a sentinel value");
                if (j > 0 && s[j] <= s[j - 1]) throw Error("sequence not strictly increasing");
            }
    }

    int n() const { return static_cast<int>(seqs_.size()); }
    std::int64_t length(int i) const { return static_cast<std::int64_t>(seqs_[static_cast<size_t>(i)].size()); }

    Weight probe(int i, std::int64_t j) {
        ++query_count_;
        log_.emplace(i, j);
        return seqs_[static_cast<size_t>(i)][static_cast<size_t>(j - 1)];
    }

    std::uint64_t query_count() const { return query_count_; }
    std::uint64_t distinct_probes() const { return log_.size(); }
    std::uint64_t duplicate_probes() const { return query_count_ - log_.size(); }

private:
    std::vector<std::vector<Weight>> seqs_;
    std::uint64_t query_count_ = 0;
    std::set<std::pair<int, std::int64_t>> log_;
};

// Probe adapter exposing positions [a(i), b(i)] of each sequence.
class SubrangeOracle {
public:
    SubrangeOracle(SequenceOracle& base, std::vector<std::pair<std::int64_t, std::int64_t>> ranges)
        : base_(base), ranges_(std::move(ranges)) {
        for (int i = 0; i < base_.n(); ++i) {
            auto [a, b] = ranges_[static_cast<size_t>(i)];
            if (a < 1 || a > b || b > base_.length(i)) throw BadSubrange();
        }
    }

    int n() const { return base_.n(); }
    std::int64_t length(int i) const {
        return ranges_[static_cast<size_t>(i)].second - ranges_[static_cast<size_t>(i)].first + 1;
    }
    Weight probe(int i, std::int64_t j) { return base_.probe(i, j + ranges_[static_cast<size_t>(i)].first - 1); }

private:
    SequenceOracle& base_;
    std::vector<std::pair<std::int64_t, std::int64_t>> ranges_;
};

struct SelectionStats {
    std::uint64_t iterations = 0;
    std::uint64_t max_probes_per_iteration = 0;
    bool finish_phase = false;
    std::int64_t finish_snv = 0;
    std::uint64_t finish_probes = 0;
    bool windows_monotonic = true;
};

struct SelectionOptions {
    // Alternative main-loop exit once snv > k and snv - k < n.
    bool early_overshoot_exit = false;
};

namespace detail {

// Per-sequence cache of probed values, ordered by position. Positions 0 and
// b+1 hold the -inf/+inf sentinels, so neighbour lookups always succeed.
struct ProbeCache {
    std::vector<std::pair<std::int64_t, Weight>> known;  // sorted by position

    void seed(std::int64_t b) {
        known = {{0, kNegInf}, {b + 1, kPosInf}};
    }

    bool lookup(std::int64_t pos, Weight& out) const {
        auto it = std::lower_bound(known.begin(), known.end(), pos,
                                   [](const auto& e, std::int64_t p) { return e.first < p; });
        if (it != known.end() && it->first == pos) {
            out = it->second;
            return true;
        }
        return false;
    }

    void remember(std::int64_t pos, Weight v) {
        auto it = std::lower_bound(known.begin(), known.end(), pos,
                                   [](const auto& e, std::int64_t p) { return e.first < p; });
        known.insert(it, {pos, v});
    }

    // Largest cached position with value <= pivot; the next cached position
    // is the smallest with value > pivot. Values grow with position.
    std::int64_t floor_pos(Weight pivot) const {
        auto it = std::upper_bound(known.begin(), known.end(), pivot,
                                   [](Weight p, const auto& e) { return p < e.second; });
        return std::prev(it)->first;
    }

    std::int64_t next_pos_after(std::int64_t pos) const {
        auto it = std::upper_bound(known.begin(), known.end(), pos,
                                   [](std::int64_t p, const auto& e) { return p < e.first; });
        return it->first;
    }
};

}  // namespace detail

// How many values of sequence i are <= pivot. Probes only positions between
// the cached floor/ceiling neighbours of pivot, at most ceil(log2(gap)) + 1
// of them, caching every answer.
template <typename Oracle>
std::int64_t count_leq(Oracle& oracle, detail::ProbeCache& cache, int i, Weight pivot,
                       std::uint64_t* new_probes = nullptr) {
    std::int64_t u = cache.floor_pos(pivot);
    std::int64_t v = cache.next_pos_after(u);
    std::int64_t ulow = u, uhigh = v - 1, uok = u;
    while (ulow <= uhigh) {
        std::int64_t umid = ulow + (uhigh - ulow) / 2;
        Weight x;
        if (!cache.lookup(umid, x)) {
            x = oracle.probe(i, umid);
            if (new_probes) ++*new_probes;
            cache.remember(umid, x);
        }
        if (x <= pivot) {
            uok = umid;
            ulow = umid + 1;
        } else {
            uhigh = umid - 1;
        }
    }
    return uok;
}

// k-th smallest element of the merged multiset, probing as little as the
// iterative window-narrowing allows: pick the widest open window, probe its
// middle, count <=pivot in every sequence by binary search between cached
// neighbours, then shrink all windows. A max-priority-queue walk finishes
// the job once every window is closed.
template <typename Oracle>
Weight kth_smallest(Oracle& oracle, std::int64_t k, SelectionStats* stats = nullptr,
                    const SelectionOptions& opt = {}) {
    const int n = oracle.n();
    std::int64_t total = 0;
    for (int i = 0; i < n; ++i) total += oracle.length(i);
    if (k < 1 || k > total) throw RankOutOfRange();

    std::vector<std::int64_t> low(static_cast<size_t>(n), 1), high(static_cast<size_t>(n));
    std::vector<detail::ProbeCache> cache(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        high[static_cast<size_t>(i)] = oracle.length(i);
        cache[static_cast<size_t>(i)].seed(oracle.length(i));
    }

    std::uint64_t probes_now = 0;
    auto value_at = [&](int i, std::int64_t j) {
        Weight v;
        if (cache[static_cast<size_t>(i)].lookup(j, v)) return v;
        v = oracle.probe(i, j);
        ++probes_now;
        cache[static_cast<size_t>(i)].remember(j, v);
        return v;
    };

    SelectionStats local;
    SelectionStats& st = stats ? *stats : local;
    std::vector<std::int64_t> nv(static_cast<size_t>(n));

    while (true) {
        int q = -1;
        std::int64_t span = -1;
        for (int i = 0; i < n; ++i)
            if (low[static_cast<size_t>(i)] < high[static_cast<size_t>(i)] &&
                high[static_cast<size_t>(i)] - low[static_cast<size_t>(i)] > span) {
                span = high[static_cast<size_t>(i)] - low[static_cast<size_t>(i)];
                q = i;
            }
        if (q < 0) break;

        ++st.iterations;
        probes_now = 0;
        std::int64_t mid = (low[static_cast<size_t>(q)] + high[static_cast<size_t>(q)]) / 2;
        Weight pivot = value_at(q, mid);
        std::int64_t snv = 0;
        for (int i = 0; i < n; ++i) {
            nv[static_cast<size_t>(i)] =
                i == q ? mid : count_leq(oracle, cache[static_cast<size_t>(i)], i, pivot, &probes_now);
            snv += nv[static_cast<size_t>(i)];
        }
        st.max_probes_per_iteration = std::max(st.max_probes_per_iteration, probes_now);
        if (snv == k) return pivot;
        if (snv < k) {
            for (int i = 0; i < n; ++i) {
                std::int64_t nl = std::max(low[static_cast<size_t>(i)], nv[static_cast<size_t>(i)] + 1);
                if (nl < low[static_cast<size_t>(i)]) st.windows_monotonic = false;
                low[static_cast<size_t>(i)] = nl;
            }
        } else {
            for (int i = 0; i < n; ++i) {
                std::int64_t nh = std::min(high[static_cast<size_t>(i)], nv[static_cast<size_t>(i)]);
                if (nh > high[static_cast<size_t>(i)]) st.windows_monotonic = false;
                high[static_cast<size_t>(i)] = nh;
            }
            if (opt.early_overshoot_exit && snv > k && snv - k < n) break;
        }
    }

    // Finish phase: sum of high(*) overshoots k by less than n; walk a
    // max-priority-queue down to the k-th value.
    st.finish_phase = true;
    std::int64_t snv = 0;
    for (int i = 0; i < n; ++i) snv += high[static_cast<size_t>(i)];
    st.finish_snv = snv;
    probes_now = 0;
    std::priority_queue<std::pair<Weight, int>> heap;  // ties by larger id first; order is stable anyway
    std::vector<std::int64_t> idx(high.begin(), high.end());
    for (int i = 0; i < n; ++i)
        if (idx[static_cast<size_t>(i)] > 0) heap.emplace(value_at(i, idx[static_cast<size_t>(i)]), i);
    while (snv > k) {
        auto [v, i] = heap.top();
        heap.pop();
        --idx[static_cast<size_t>(i)];
        if (idx[static_cast<size_t>(i)] > 0) heap.emplace(value_at(i, idx[static_cast<size_t>(i)]), i);
        --snv;
    }
    st.finish_probes = probes_now;
    if (heap.empty()) throw Error("selection finish phase ran dry");
    return heap.top().first;
}

inline Weight kth_smallest(SequenceOracle& oracle, std::int64_t k, SelectionStats* stats = nullptr,
                           const SelectionOptions& opt = {}) {
    return kth_smallest<SequenceOracle>(oracle, k, stats, opt);
}

// k-th smallest among positions [a(i), b(i)] of every sequence.
inline Weight kth_in_subranges(SequenceOracle& oracle,
                               std::vector<std::pair<std::int64_t, std::int64_t>> ranges,
                               std::int64_t k, SelectionStats* stats = nullptr) {
    SubrangeOracle view(oracle, std::move(ranges));
    return kth_smallest(view, k, stats);
}

}  // namespace rangekit
