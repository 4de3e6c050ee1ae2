#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "rangekit/cascade_index.hpp"
#include "rangekit/kth_selection.hpp"
#include "rangekit/median.hpp"
#include "rangekit/oracles.hpp"
#include "rangekit/prefix_cube.hpp"
#include "rangekit/range_tree.hpp"
#include "rangekit/rotating_stack.hpp"
#include "rangekit/sequence_editor.hpp"
#include "rangekit/station_collapse.hpp"
#include "rangekit/sweep_select.hpp"
#include "rangekit/tree_queries.hpp"

// Differential suites pitting every fast structure against its brute-force
// oracle. The command line's selftest runs them at a light scale; the
// acceptance harness runs them at full scale.
namespace rangekit::selfcheck {

struct Outcome {
    bool pass = true;
    std::uint64_t cases = 0;
    std::string detail;

    void fail(const std::string& msg) {
        if (pass) detail = msg;
        pass = false;
    }
};

namespace detail {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed + 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    bool chance(double p) { return static_cast<double>(next() >> 11) / 9007199254740992.0 < p; }

private:
    std::uint64_t state_;
};

inline Weight brute_box_fold(const DenseCube& c, const std::vector<std::pair<int, int>>& box) {
    Weight acc = c.op().neutral();
    std::vector<int> idx(static_cast<size_t>(c.dim()), 1);
    do {
        bool in = true;
        for (size_t j = 0; j < box.size(); ++j)
            if (idx[j] < box[j].first || idx[j] > box[j].second) in = false;
        if (in) acc = c.op().combine(acc, c.at(idx));
    } while (c.next_index(idx));
    return acc;
}

}  // namespace detail

// Criterion 1: the per-entry and dimension-sweep prefix builders agree.
inline Outcome check_prefix_builders(std::uint64_t seed, int cubes) {
    detail::Rng rng(seed ^ 0xA1);
    Outcome out;
    for (int rep = 0; rep < cubes; ++rep) {
        int d = static_cast<int>(rng.range(1, 4));
        std::vector<int> shape;
        for (int j = 0; j < d; ++j) shape.push_back(static_cast<int>(rng.range(1, 6)));
        AggregateOp ops[] = {kSum, kXor, kProduct};
        AggregateOp op = ops[rng.range(0, 2)];
        DenseCube c(shape, op);
        for (Weight& w : c.cells())
            w = op.kind() == AggKind::Product ? (rng.chance(0.85) ? 1 : 2) : rng.range(-60, 60);
        PrefixCube a = build_prefix_naive(c);
        PrefixCube b = build_prefix_sweep(c);
        ++out.cases;
        if (a.data().cells() != b.data().cells()) out.fail("builders disagree");
        std::uint64_t np = static_cast<std::uint64_t>(c.cell_count());
        if (a.build_op_calls > np * (1u << d)) out.fail("per-entry builder over budget");
        if (b.build_op_calls > np * static_cast<std::uint64_t>(d)) out.fail("sweep builder over budget");
    }
    return out;
}

// Criterion 2: box queries equal the cell fold on every box of a 4x4x4 cube.
inline Outcome check_prefix_queries_exhaustive(std::uint64_t seed) {
    detail::Rng rng(seed ^ 0xA2);
    Outcome out;
    for (AggregateOp op : {kSum, kXor}) {
        DenseCube c({4, 4, 4}, op);
        for (Weight& w : c.cells()) w = rng.range(-99, 99);
        PrefixCube ps = build_prefix_sweep(c);
        for (int a1 = 1; a1 <= 4; ++a1)
            for (int b1 = a1; b1 <= 4; ++b1)
                for (int a2 = 1; a2 <= 4; ++a2)
                    for (int b2 = a2; b2 <= 4; ++b2)
                        for (int a3 = 1; a3 <= 4; ++a3)
                            for (int b3 = a3; b3 <= 4; ++b3) {
                                std::vector<std::pair<int, int>> box{{a1, b1}, {a2, b2}, {a3, b3}};
                                ++out.cases;
                                if (prefix_range_query(ps, box) != detail::brute_box_fold(c, box))
                                    out.fail("box query disagrees with the cell fold");
                            }
    }
    return out;
}

// Criterion 3: batched stamps equal per-cell application; corner counts.
inline Outcome check_batched_updates(std::uint64_t seed, int batches) {
    detail::Rng rng(seed ^ 0xA3);
    Outcome out;
    std::vector<int> shape{6, 6, 6};
    for (int rep = 0; rep < batches; ++rep) {
        AggregateOp op = rep % 2 == 0 ? kSum : kXor;
        std::vector<RangeStamp> stamps;
        int q = static_cast<int>(rng.range(1, 60));
        for (int s = 0; s < q; ++s) {
            RangeStamp st;
            for (int j = 0; j < 3; ++j) {
                int a = static_cast<int>(rng.range(1, 6)), b = static_cast<int>(rng.range(1, 6));
                if (a > b) std::swap(a, b);
                st.box.emplace_back(a, b);
            }
            st.u = rng.range(-25, 25);
            stamps.push_back(std::move(st));
        }
        auto res = batched_range_updates(shape, stamps, op);
        DenseCube naive(shape, op);
        std::vector<int> idx(3, 1);
        do {
            Weight acc = op.neutral();
            for (const RangeStamp& st : stamps) {
                bool in = true;
                for (int j = 0; j < 3; ++j)
                    if (idx[static_cast<size_t>(j)] < st.box[static_cast<size_t>(j)].first ||
                        idx[static_cast<size_t>(j)] > st.box[static_cast<size_t>(j)].second)
                        in = false;
                if (in) acc = op.combine(acc, st.u);
            }
            naive.at(idx) = acc;
        } while (naive.next_index(idx));
        ++out.cases;
        if (res.cube.cells() != naive.cells()) out.fail("batched result differs from per-cell application");
        for (size_t s = 0; s < stamps.size(); ++s) {
            int out_of_grid = 0;
            for (int j = 0; j < 3; ++j)
                if (stamps[s].box[static_cast<size_t>(j)].second + 1 > 6) ++out_of_grid;
            if (res.corners_per_stamp[s] != (1 << (3 - out_of_grid)))
                out.fail("corner stamp count is off");
        }
    }
    return out;
}

// Criterion 4a: interleaved point/range updates and queries vs the oracle.
inline Outcome check_range_tree_interleaved(std::uint64_t seed, int d, int n_points, int ops) {
    detail::Rng rng(seed ^ (0xA4 + static_cast<std::uint64_t>(d)));
    Outcome out;
    std::vector<RawPoint> raw;
    for (int i = 0; i < n_points; ++i) {
        RawPoint p;
        for (int j = 0; j < d; ++j) p.coords.push_back(rng.range(0, 50));
        p.weight = rng.range(-40, 40);
        raw.push_back(std::move(p));
    }
    PointSet ps(d, raw, kSum);
    RangeTree t(ps, kSum, true);
    std::vector<Weight> w;
    for (const MergedPoint& p : ps.points()) w.push_back(p.weight);
    auto random_box = [&]() {
        Box b;
        for (int j = 0; j < d; ++j) {
            Coord a = rng.range(-2, 52), c = rng.range(-2, 52);
            if (a > c) std::swap(a, c);
            b.bounds.emplace_back(a, c);
        }
        return b;
    };
    for (int step = 0; step < ops; ++step) {
        double dice = static_cast<double>(rng.next() % 100) / 100.0;
        ++out.cases;
        if (dice < 0.3) {
            size_t id = static_cast<size_t>(rng.range(0, static_cast<std::int64_t>(ps.size()) - 1));
            Weight nw = rng.range(-40, 40);
            t.point_update(ps.points()[id].coords, nw);
            w[id] = nw;
        } else if (dice < 0.6) {
            Box b = random_box();
            Weight u = rng.range(-9, 9);
            t.range_update(b, u);
            for (size_t i = 0; i < w.size(); ++i)
                if (b.contains(ps.points()[i].coords)) w[i] += u * ps.points()[i].multiplicity;
        } else {
            Box b = random_box();
            std::vector<std::pair<std::vector<Coord>, Weight>> pts;
            for (size_t i = 0; i < w.size(); ++i) pts.emplace_back(ps.points()[i].coords, w[i]);
            if (t.range_query(b) != oracles::naive_range_agg(pts, kSum, b))
                out.fail("interleaved query disagrees with the oracle");
        }
    }
    return out;
}

// Criterion 4b: per-query contributing-node counter at n=1024, d=2.
inline Outcome check_range_tree_counter(std::uint64_t seed) {
    detail::Rng rng(seed ^ 0xA5);
    Outcome out;
    std::vector<RawPoint> raw;
    for (int i = 0; i < 1024; ++i)
        raw.push_back(RawPoint{{rng.range(0, 5000), rng.range(0, 5000)}, rng.range(-50, 50)});
    PointSet ps(2, raw, kSum);
    double logn = std::ceil(std::log2(static_cast<double>(ps.size())));
    std::uint64_t budget = static_cast<std::uint64_t>(4.0 * (logn + 1) * (logn + 1));
    RangeTree plain(ps, kSum, false);
    RangeTree ru(ps, kSum, true);
    for (int i = 0; i < 8; ++i) {
        Box b;
        for (int j = 0; j < 2; ++j) {
            Coord a = rng.range(0, 5000), c = rng.range(0, 5000);
            if (a > c) std::swap(a, c);
            b.bounds.emplace_back(a, c);
        }
        ru.range_update(b, rng.range(-5, 5));
    }
    for (int q = 0; q < 400; ++q) {
        Box b;
        for (int j = 0; j < 2; ++j) {
            Coord a = rng.range(-10, 5010), c = rng.range(-10, 5010);
            if (a > c) std::swap(a, c);
            b.bounds.emplace_back(a, c);
        }
        plain.range_query(b);
        ru.range_query(b);
        out.cases += 2;
        if (plain.last_query_nodes() > budget) out.fail("plain-tree query counter over budget");
        if (ru.last_query_nodes() > budget) out.fail("range-update tree query counter over budget");
    }
    return out;
}

// Criterion 5: cascading index vs the nested tree, one root search only.
inline Outcome check_cascade_vs_nested(std::uint64_t seed, int boxes) {
    detail::Rng rng(seed ^ 0xA6);
    Outcome out;
    std::vector<RawPoint> raw;
    for (int i = 0; i < 256; ++i)
        raw.push_back(RawPoint{{rng.range(0, 120), rng.range(0, 120)}, rng.range(-70, 70)});
    for (AggregateOp op : {kSum, kMin, kMax, kXor}) {
        PointSet ps(2, raw, op);
        CascadeIndex2D ix(ps, op);
        RangeTree nested(ps, op);
        for (int q = 0; q < boxes; ++q) {
            Box b;
            for (int j = 0; j < 2; ++j) {
                Coord a = rng.range(-5, 125), c = rng.range(-5, 125);
                if (a > c) std::swap(a, c);
                b.bounds.emplace_back(a, c);
            }
            ++out.cases;
            if (ix.range_query(b) != nested.range_query(b)) out.fail("cascade disagrees with nested");
            if (ix.last_query_binary_searches() != 1) out.fail("not exactly one binary search");
        }
    }
    return out;
}

// Criterion 6: subtree distance-band queries vs a walking oracle.
inline Outcome check_tree_queries(std::uint64_t seed, int queries) {
    detail::Rng rng(seed ^ 0xA7);
    Outcome out;
    for (AggregateOp op : {kSum, kMin, kXor}) {
        int n = static_cast<int>(rng.range(2, 500));
        RootedTree t;
        t.n = n;
        t.root = 0;
        t.parent.assign(static_cast<size_t>(n), -1);
        t.edge_len.assign(static_cast<size_t>(n), 0);
        t.weight.assign(static_cast<size_t>(n), 0);
        for (int i = 1; i < n; ++i) {
            t.parent[static_cast<size_t>(i)] = static_cast<int>(rng.range(0, i - 1));
            t.edge_len[static_cast<size_t>(i)] = rng.range(0, 5);
        }
        for (int i = 0; i < n; ++i) t.weight[static_cast<size_t>(i)] = rng.range(-60, 60);
        SubtreeIndex ix(t, op);
        std::vector<std::vector<int>> children(static_cast<size_t>(n));
        for (int v = 1; v < n; ++v) children[static_cast<size_t>(t.parent[static_cast<size_t>(v)])].push_back(v);
        for (int q = 0; q < queries; ++q) {
            int i = static_cast<int>(rng.range(0, n - 1));
            std::int64_t d1 = rng.range(0, 15);
            std::int64_t d2 = d1 + rng.range(0, 15);
            Weight want = op.neutral();
            std::vector<std::pair<int, std::int64_t>> stack{{i, 0}};
            while (!stack.empty()) {
                auto [v, dist] = stack.back();
                stack.pop_back();
                if (dist >= d1 && dist <= d2) want = op.combine(want, t.weight[static_cast<size_t>(v)]);
                for (int c : children[static_cast<size_t>(v)])
                    stack.push_back({c, dist + t.edge_len[static_cast<size_t>(c)]});
            }
            ++out.cases;
            if (ix.query(i, d1, d2) != want) out.fail("subtree query disagrees with the DFS oracle");
        }
    }
    return out;
}

// Criterion 7: minimum collapse effort vs exhaustive subsets.
inline Outcome check_stations(std::uint64_t seed, int instances) {
    detail::Rng rng(seed ^ 0xA8);
    Outcome out;
    for (int rep = 0; rep < instances; ++rep) {
        int n = static_cast<int>(rng.range(1, 18));
        StationLine line;
        for (int i = 0; i < n; ++i) {
            std::int64_t s = rng.range(1, 20);
            line.s.push_back(s);
            line.r.push_back(s + rng.range(1, 25));
            line.c.push_back(rng.range(0, 30));
        }
        auto prev = compute_prev(line);
        EffortArrays e = compute_efforts(line, prev);
        ++out.cases;
        if (e.via_segment_tree != e.via_difference) out.fail("effort paths disagree");
        auto [effort, start] = min_collapse_effort(line);
        if (effort != oracles::min_effort_bruteforce(line)) out.fail("effort differs from the subset optimum");
        if (start < 1 || start > n) out.fail("bad start index");
    }
    return out;
}

// Criterion 8: selection vs the merge oracle, probe discipline included.
inline Outcome check_kth_selection(std::uint64_t seed, int instances) {
    detail::Rng rng(seed ^ 0xA9);
    Outcome out;
    for (int rep = 0; rep < instances; ++rep) {
        int n = static_cast<int>(rng.range(1, 8));
        std::vector<std::vector<Weight>> seqs(static_cast<size_t>(n));
        std::int64_t maxb = 1;
        for (auto& s : seqs) {
            int b = static_cast<int>(rng.range(1, 64));
            maxb = std::max<std::int64_t>(maxb, b);
            Weight v = rng.range(-50, 10);
            for (int j = 0; j < b; ++j) {
                v += rng.range(1, 5);
                s.push_back(v);
            }
        }
        std::int64_t total = 0;
        for (const auto& s : seqs) total += static_cast<std::int64_t>(s.size());
        std::uint64_t budget =
            1 + static_cast<std::uint64_t>(n) *
                    (static_cast<std::uint64_t>(std::ceil(std::log2(static_cast<double>(maxb)))) + 1);
        for (int t = 0; t < 3; ++t) {
            std::int64_t k = rng.range(1, total);
            SequenceOracle o(seqs);
            SelectionStats st;
            ++out.cases;
            if (kth_smallest(o, k, &st) != oracles::merge_kth(seqs, k))
                out.fail("selection differs from the merge oracle");
            if (o.duplicate_probes() != 0) out.fail("a position was probed twice");
            if (st.max_probes_per_iteration > budget) out.fail("iteration probe budget exceeded");
            if (!st.windows_monotonic) out.fail("window moved the wrong way");
            if (st.finish_phase &&
                (st.finish_snv < k || st.finish_snv - k >= static_cast<std::int64_t>(n)))
                out.fail("finish-phase guard violated");
        }
    }
    return out;
}

// Criterion 9: the three medians.
inline Outcome check_median_l1(std::uint64_t seed, int instances) {
    detail::Rng rng(seed ^ 0xAA);
    Outcome out;
    for (int rep = 0; rep < instances; ++rep) {
        int n = static_cast<int>(rng.range(1, 30));
        std::vector<Coord> xs;
        for (int i = 0; i < n; ++i) xs.push_back(rng.range(-80, 80));
        auto m = l1_median(xs);
        auto cost = [&](Coord p) {
            std::int64_t c = 0;
            for (Coord x : xs) c += std::abs(x - p);
            return c;
        };
        ++out.cases;
        std::int64_t got = cost(m.location);
        for (Coord cand : xs)
            if (got > cost(cand)) out.fail("a candidate beats the reported median");
    }
    return out;
}

inline Outcome check_median_lsq(std::uint64_t seed, int instances) {
    detail::Rng rng(seed ^ 0xAB);
    Outcome out;
    for (int rep = 0; rep < instances; ++rep) {
        int n = static_cast<int>(rng.range(1, 16));
        std::vector<Coord> xs;
        std::vector<double> ws;
        for (int i = 0; i < n; ++i) {
            xs.push_back(rng.range(-100, 100));
            ws.push_back(static_cast<double>(rng.range(1, 9)));
        }
        double xp = weighted_lsq_point(xs, ws);
        auto s = [&](double p) {
            double acc = 0;
            for (int i = 0; i < n; ++i) {
                double dd = static_cast<double>(xs[static_cast<size_t>(i)]) - p;
                acc += ws[static_cast<size_t>(i)] * dd * dd;
            }
            return acc;
        };
        double base = s(xp);
        double tol = 1e-9 * std::max(1.0, std::abs(base));
        ++out.cases;
        if (base > s(xp + 1e-6) + tol || base > s(xp - 1e-6) + tol)
            out.fail("a perturbation beats the weighted mean");
    }
    return out;
}

inline Outcome check_median_cube(std::uint64_t seed, int boxes) {
    detail::Rng rng(seed ^ 0xAC);
    Outcome out;
    std::vector<std::vector<Coord>> axes(2);
    for (auto& ax : axes) {
        Coord v = rng.range(-20, 0);
        for (int k = 0; k < 8; ++k) {
            ax.push_back(v);
            v += rng.range(1, 6);
        }
    }
    std::vector<Weight> cells(64);
    for (Weight& w : cells) w = rng.range(0, 9);
    MedianCube mc(axes, cells);
    int done = 0;
    while (done < boxes) {
        double dice = static_cast<double>(rng.next() % 100) / 100.0;
        if (dice < 0.2) {
            std::vector<int> cell{static_cast<int>(rng.range(1, 8)), static_cast<int>(rng.range(1, 8))};
            size_t off = static_cast<size_t>((cell[0] - 1) * 8 + (cell[1] - 1));
            Weight delta = rng.range(0, 6) - std::min<Weight>(cells[off], 3);
            mc.point_update(cell, delta);
            cells[off] += delta;
        } else if (dice < 0.35) {
            std::vector<std::pair<int, int>> box(2);
            for (auto& [a, b] : box) {
                a = static_cast<int>(rng.range(1, 8));
                b = static_cast<int>(rng.range(1, 8));
                if (a > b) std::swap(a, b);
            }
            Weight u = rng.range(0, 4);
            mc.range_update(box, u);
            for (int c1 = box[0].first; c1 <= box[0].second; ++c1)
                for (int c2 = box[1].first; c2 <= box[1].second; ++c2)
                    cells[static_cast<size_t>((c1 - 1) * 8 + (c2 - 1))] += u;
        } else {
            std::vector<std::pair<int, int>> box(2);
            for (auto& [a, b] : box) {
                a = static_cast<int>(rng.range(1, 8));
                b = static_cast<int>(rng.range(1, 8));
                if (a > b) std::swap(a, b);
            }
            Weight total = 0;
            for (int c1 = box[0].first; c1 <= box[0].second; ++c1)
                for (int c2 = box[1].first; c2 <= box[1].second; ++c2)
                    total += cells[static_cast<size_t>((c1 - 1) * 8 + (c2 - 1))];
            if (total == 0) continue;
            auto fast = mc.range_median(box);
            auto naive = oracles::naive_median_cube(axes, cells, box);
            ++done;
            ++out.cases;
            if (fast.cost != naive.cost) out.fail("median cost differs from the exhaustive scan");
            Weight scan = 0;
            for (int c1 = box[0].first; c1 <= box[0].second; ++c1)
                for (int c2 = box[1].first; c2 <= box[1].second; ++c2) {
                    Weight w = cells[static_cast<size_t>((c1 - 1) * 8 + (c2 - 1))];
                    scan += w * (std::abs(axes[0][static_cast<size_t>(c1 - 1)] - fast.coords[0]) +
                                 std::abs(axes[1][static_cast<size_t>(c2 - 1)] - fast.coords[1]));
                }
            if (scan != fast.cost) out.fail("reported cost fails the separability recomputation");
        }
    }
    return out;
}

// Criterion 10: the interval-list editor vs the flat simulator.
inline Outcome check_sequence_editor(std::uint64_t seed, int scripts) {
    detail::Rng rng(seed ^ 0xAD);
    Outcome out;
    for (int rep = 0; rep < scripts; ++rep) {
        std::int64_t n0 = rng.range(0, 64);
        int m = static_cast<int>(rng.range(1, 128));
        std::vector<std::int64_t> init;
        for (std::int64_t i = 0; i < n0; ++i) init.push_back(rng.range(-999, 999));
        std::vector<SeqOp> ops;
        std::int64_t n = n0;
        for (int t = 0; t < m; ++t) {
            int kind = static_cast<int>(rng.range(0, 3));
            if (n == 0 && kind != 2) kind = 2;
            SeqOp op;
            if (kind == 0) {
                op.kind = SeqOp::Kind::Reverse;
                op.i = rng.range(1, n);
                op.j = rng.range(op.i, n);
            } else if (kind == 1) {
                op.kind = SeqOp::Kind::CutPaste;
                op.i = rng.range(1, n);
                op.j = rng.range(op.i, n);
                std::int64_t cut = op.j - op.i + 1;
                if (rng.chance(0.2)) {
                    op.p = -1;
                    n -= cut;
                } else {
                    op.p = rng.range(0, n - cut);
                }
            } else if (kind == 2) {
                op.kind = SeqOp::Kind::Insert;
                op.p = rng.range(0, n);
                int k = static_cast<int>(rng.range(1, 4));
                for (int x = 0; x < k; ++x) op.values.push_back(rng.range(-999, 999));
                n += k;
            } else {
                op.kind = SeqOp::Kind::Get;
                op.i = rng.range(1, n);
            }
            ops.push_back(std::move(op));
        }
        std::vector<std::int64_t> naive_final;
        auto naive_answers = oracles::naive_seq_run(init, ops, &naive_final);

        IntervalList sl(init);
        std::vector<std::int64_t> got;
        bool lengths_ok = true;
        for (const SeqOp& op : ops) {
            switch (op.kind) {
                case SeqOp::Kind::Reverse: sl.reverse(op.i, op.j); break;
                case SeqOp::Kind::CutPaste: sl.cut_paste(op.i, op.j, op.p); break;
                case SeqOp::Kind::Insert: sl.insert(op.p, op.values); break;
                case SeqOp::Kind::Get: got.push_back(sl.get(op.i)); break;
            }
            if (!sl.lengths_consistent()) lengths_ok = false;
        }
        ++out.cases;
        if (!lengths_ok) out.fail("length bookkeeping broke");
        if (got != naive_answers) out.fail("plain editor answers differ");
        if (sl.materialize() != naive_final) out.fail("plain editor final state differs");
        std::int64_t zs[] = {1, static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(std::max<std::int64_t>(1, n0))))),
                             static_cast<std::int64_t>(m)};
        for (std::int64_t z : zs) {
            GroupedEditor ge(init, z);
            if (run_script(ge, ops) != naive_answers) out.fail("grouped answers differ");
            if (ge.materialize() != naive_final) out.fail("grouped final state differs");
        }
    }
    return out;
}

// Criterion 11: the two-cursor stack vs the reversing model.
inline Outcome check_rotating_stack(std::uint64_t seed, int scripts, int jumbo_every = 500) {
    detail::Rng rng(seed ^ 0xAE);
    Outcome out;
    for (int rep = 0; rep < scripts; ++rep) {
        std::int64_t k = rng.range(1, 8);
        int m = rep % jumbo_every == jumbo_every - 1 ? 10000 : static_cast<int>(rng.range(1, 256));
        std::vector<oracles::NaiveStackOp> script;
        for (int t = 0; t < m; ++t) {
            if (rng.chance(0.72))
                script.push_back({true, rng.range(-5000, 5000)});
            else
                script.push_back({false, 0});
        }
        RotStack st(k, m);
        bool op_cost_ok = true;
        for (const auto& op : script) {
            if (op.is_push)
                st.push(op.value);
            else
                st.rotate();
            if (st.last_op_steps() > 4 || !st.cursors_in_range()) op_cost_ok = false;
        }
        ++out.cases;
        if (!op_cost_ok) out.fail("an operation exceeded its constant step budget");
        if (st.finish() != oracles::naive_stack(k, script)) out.fail("final order differs from the model");
    }
    return out;
}

// Criterion 12: sweep answers vs the per-query oracle, with order audits.
inline Outcome check_sweep(std::uint64_t seed, int instances, int max_n, int max_m, int audits) {
    detail::Rng rng(seed ^ 0xAF);
    Outcome out;
    for (int rep = 0; rep < instances; ++rep) {
        int n = rep == 0 ? max_n : static_cast<int>(rng.range(1, max_n));
        int m = rep == 0 ? max_m : static_cast<int>(rng.range(1, max_m));
        std::int64_t span = rep % 3 == 1 ? 30 : 1000000;
        std::vector<PlanarPoint> pts;
        std::vector<DistanceQuery> qs;
        for (int i = 0; i < n; ++i) pts.push_back({rng.range(-span, span), rng.range(0, span)});
        for (int j = 0; j < m; ++j) qs.push_back({rng.range(-span, span), rng.range(1, n + 2)});

        SweepOptions probe;
        probe.collect_gaps = true;
        probe.eager_delete = rep % 2 == 1;  // gap ordinals depend on the queue mode
        auto first = solve_offline(pts, qs, probe);
        SweepOptions audited;
        audited.eager_delete = probe.eager_delete;
        std::vector<std::uint64_t> gaps = first.strict_gap_ordinals;
        // sample distinct gap ordinals; audit them all when few exist
        size_t want = std::min<size_t>(gaps.size(), static_cast<size_t>(audits));
        for (size_t a = 0; a < want; ++a) {
            size_t pick = static_cast<size_t>(rng.range(static_cast<std::int64_t>(a),
                                                        static_cast<std::int64_t>(gaps.size()) - 1));
            std::swap(gaps[a], gaps[pick]);
            audited.audit_ordinals.push_back(gaps[a]);
        }
        std::sort(audited.audit_ordinals.begin(), audited.audit_ordinals.end());
        auto res = solve_offline(pts, qs, audited);
        ++out.cases;
        if (res.audits_done != audited.audit_ordinals.size()) out.fail("an audit was skipped");
        std::uint64_t floor = std::min<std::uint64_t>(
            {static_cast<std::uint64_t>(audits), 100, first.strict_gap_ordinals.size()});
        if (rep == 0 && res.audits_done < floor)
            out.fail("audit coverage fell short on the full-size run");
        if (res.audits_passed != res.audits_done) out.fail("an order audit failed");
        if (res.type3_valid > static_cast<std::uint64_t>(n) * (n - 1) / 2)
            out.fail("too many swap events processed");
        for (size_t j = 0; j < qs.size(); ++j) {
            auto want = oracles::naive_kth_distance(pts, qs[j].xq, qs[j].k);
            if (want.has_value() != res.answers[j].ok) {
                out.fail("eligibility flag differs from the oracle");
            } else if (want) {
                if (res.answers[j].dist2 != *want) out.fail("squared distance differs from the oracle");
                double w = std::sqrt(static_cast<double>(*want));
                double rel = w == 0.0 ? std::abs(res.answers[j].dist)
                                      : std::abs(res.answers[j].dist - w) / w;
                if (rel > 1e-12) out.fail("distance outside the relative tolerance");
            }
        }
    }
    return out;
}

}  // namespace rangekit::selfcheck
