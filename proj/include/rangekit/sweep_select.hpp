#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <queue>
#include <set>
#include <tuple>
#include <vector>

#include "rangekit/errors.hpp"

namespace rangekit {

// Half-plane point for the k-th distance sweep; y must be nonnegative and
// coordinates stay within +-10^7 so squared distances fit 64 bits.
struct PlanarPoint {
    std::int64_t x, y;
};

struct DistanceQuery {
    std::int64_t xq;
    std::int64_t k;
};

// Exact rational abscissa, den > 0.
struct SweepRational {
    std::int64_t num = 0;
    std::int64_t den = 1;
};

inline int cmp_rational(const SweepRational& a, const SweepRational& b) {
    __int128 l = static_cast<__int128>(a.num) * b.den;
    __int128 r = static_cast<__int128>(b.num) * a.den;
    return l < r ? -1 : (l > r ? 1 : 0);
}

inline int cmp_rational_int(const SweepRational& a, std::int64_t v) {
    __int128 l = a.num;
    __int128 r = static_cast<__int128>(v) * a.den;
    return l < r ? -1 : (l > r ? 1 : 0);
}

// Abscissa where a and b are equidistant from the sweep anchor (X, 0):
// the unique root of a first-degree equation; requires x(a) != x(b).
inline SweepRational crossover_x(const PlanarPoint& a, const PlanarPoint& b) {
    if (a.x == b.x) throw NoCrossover();
    std::int64_t num = b.x * b.x + b.y * b.y - a.x * a.x - a.y * a.y;
    std::int64_t den = 2 * (b.x - a.x);
    if (den < 0) {
        num = -num;
        den = -den;
    }
    return {num, den};
}

struct SweepAnswer {
    bool ok = false;        // false: rank exceeds the eligible point count
    std::int64_t dist2 = 0;
    double dist = 0.0;
};

struct SweepOptions {
    bool eager_delete = false;
    // Audit od against a full re-sort after these processed-event ordinals
    // (sorted ascending). Audits run at an abscissa strictly inside the gap
    // to the next event, so zero-width gaps are skipped.
    std::vector<std::uint64_t> audit_ordinals;
    bool collect_gaps = false;  // record ordinals followed by a strict gap
};

struct SweepResult {
    std::vector<SweepAnswer> answers;
    std::uint64_t events_total = 0;
    std::uint64_t type1 = 0, type2 = 0;
    std::uint64_t type3_valid = 0, type3_stale = 0;
    std::uint64_t audits_done = 0, audits_passed = 0;
    std::vector<std::uint64_t> strict_gap_ordinals;
};

namespace detail {

struct SwapEvent {
    SweepRational x;
    int a, b;  // a currently ordered before b
};

struct SwapEventLess {
    bool operator()(const SwapEvent& l, const SwapEvent& r) const {
        int c = cmp_rational(l.x, r.x);
        if (c != 0) return c < 0;
        if (l.a != r.a) return l.a < r.a;
        return l.b < r.b;
    }
};

struct SwapEventGreater {
    bool operator()(const SwapEvent& l, const SwapEvent& r) const { return SwapEventLess{}(r, l); }
};

class SweepDriver {
public:
    SweepDriver(const std::vector<PlanarPoint>& pts, const std::vector<DistanceQuery>& qs,
                const SweepOptions& opt)
        : pts_(pts), qs_(qs), opt_(opt) {
        for (const PlanarPoint& p : pts_) {
            if (p.y < 0) throw Error("point below the x axis");
            if (std::abs(p.x) > kCoordCap || p.y > kCoordCap) throw Error("coordinate too large");
        }
        for (const DistanceQuery& q : qs_) {
            if (q.k < 1) throw RankOutOfRange();
            if (std::abs(q.xq) > kCoordCap) throw Error("query abscissa too large");
        }
    }

    SweepResult run() {
        SweepResult res;
        res.answers.assign(qs_.size(), {});
        if (qs_.empty()) return res;

        porder_.resize(pts_.size());
        for (size_t i = 0; i < pts_.size(); ++i) porder_[i] = static_cast<int>(i);
        std::sort(porder_.begin(), porder_.end(), [&](int a, int b) {
            if (pts_[static_cast<size_t>(a)].x != pts_[static_cast<size_t>(b)].x)
                return pts_[static_cast<size_t>(a)].x < pts_[static_cast<size_t>(b)].x;
            return a < b;
        });
        qorder_.resize(qs_.size());
        for (size_t j = 0; j < qs_.size(); ++j) qorder_[j] = static_cast<int>(j);
        std::stable_sort(qorder_.begin(), qorder_.end(),
                         [&](int a, int b) { return qs_[static_cast<size_t>(a)].xq < qs_[static_cast<size_t>(b)].xq; });

        pos_.assign(pts_.size(), -1);
        if (opt_.eager_delete) owner_.assign(pts_.size(), std::nullopt);

        // bulk phase: points at or left of the first query, pre-sorted by
        // distance to the first anchor
        std::int64_t x0 = qs_[static_cast<size_t>(qorder_[0])].xq;
        size_t t1 = 0;
        while (t1 < porder_.size() && pts_[static_cast<size_t>(porder_[t1])].x <= x0) {
            od_.push_back(porder_[t1]);
            ++t1;
        }
        std::sort(od_.begin(), od_.end(), [&](int a, int b) {
            std::int64_t da = dist2(a, x0), db = dist2(b, x0);
            return da != db ? da < db : a < b;
        });
        for (size_t p = 0; p < od_.size(); ++p) pos_[static_cast<size_t>(od_[p])] = static_cast<std::int64_t>(p);
        for (size_t p = 0; p + 1 < od_.size(); ++p) try_add_event(od_[p], od_[p + 1], {x0, 1});

        size_t t2 = 0;
        size_t audit_idx = 0;
        while (t2 < qorder_.size()) {
            // next event: smallest abscissa, type 1 before type 3 before type 2
            int kind = next_kind(t1, t2);
            SweepRational xd{};
            if (kind == 1) {
                int i = porder_[t1++];
                xd = {pts_[static_cast<size_t>(i)].x, 1};
                handle_insert(i);
                ++res.type1;
            } else if (kind == 3) {
                SwapEvent ev = pop_event();
                xd = ev.x;
                if (is_current(ev)) {
                    handle_swap(ev);
                    ++res.type3_valid;
                } else {
                    ++res.type3_stale;
                }
            } else {
                int j = qorder_[t2++];
                xd = {qs_[static_cast<size_t>(j)].xq, 1};
                const DistanceQuery& q = qs_[static_cast<size_t>(j)];
                if (q.k <= static_cast<std::int64_t>(od_.size())) {
                    std::int64_t d2 = dist2(od_[static_cast<size_t>(q.k - 1)], q.xq);
                    res.answers[static_cast<size_t>(j)] = {true, d2, std::sqrt(static_cast<double>(d2))};
                }
                ++res.type2;
            }
            ++res.events_total;

            bool strict_gap = false;
            std::optional<SweepRational> nx = peek_abscissa(t1, t2);
            if (!nx || cmp_rational(xd, *nx) < 0) strict_gap = true;
            if (opt_.collect_gaps && strict_gap) res.strict_gap_ordinals.push_back(res.events_total - 1);
            while (audit_idx < opt_.audit_ordinals.size() &&
                   opt_.audit_ordinals[audit_idx] < res.events_total - 1)
                ++audit_idx;
            if (audit_idx < opt_.audit_ordinals.size() &&
                opt_.audit_ordinals[audit_idx] == res.events_total - 1 && strict_gap) {
                ++audit_idx;
                ++res.audits_done;
                if (audit_order(xd, nx)) ++res.audits_passed;
            }
        }
        return res;
    }

private:
    static constexpr std::int64_t kCoordCap = 10'000'000;

    std::int64_t dist2(int i, std::int64_t X) const {
        std::int64_t dx = pts_[static_cast<size_t>(i)].x - X;
        return dx * dx + pts_[static_cast<size_t>(i)].y * pts_[static_cast<size_t>(i)].y;
    }

    int next_kind(size_t t1, size_t t2) const {
        std::optional<SweepRational> x1, x3, xq;
        if (t1 < porder_.size()) x1 = SweepRational{pts_[static_cast<size_t>(porder_[t1])].x, 1};
        if (auto e = peek_event()) x3 = e->x;
        if (t2 < qorder_.size()) xq = SweepRational{qs_[static_cast<size_t>(qorder_[t2])].xq, 1};
        // minimum with tie priority 1 < 3 < 2
        int best = 2;  // queries always remain (loop guard)
        SweepRational bx = *xq;
        if (x3 && cmp_rational(*x3, bx) <= 0) {
            best = 3;
            bx = *x3;
        }
        if (x1 && cmp_rational(*x1, bx) <= 0) {
            best = 1;
            bx = *x1;
        }
        return best;
    }

    std::optional<SweepRational> peek_abscissa(size_t t1, size_t t2) const {
        std::optional<SweepRational> out;
        auto take = [&](const SweepRational& r) {
            if (!out || cmp_rational(r, *out) < 0) out = r;
        };
        if (t1 < porder_.size()) take({pts_[static_cast<size_t>(porder_[t1])].x, 1});
        if (t2 < qorder_.size()) take({qs_[static_cast<size_t>(qorder_[t2])].xq, 1});
        if (auto e = peek_event()) take(e->x);
        return out;
    }

    // --- swap event queue (lazy heap or eager set) ---

    std::optional<SwapEvent> peek_event() const {
        if (opt_.eager_delete) {
            if (eager_.empty()) return std::nullopt;
            return *eager_.begin();
        }
        if (heap_.empty()) return std::nullopt;
        return heap_.top();
    }

    SwapEvent pop_event() {
        if (opt_.eager_delete) {
            SwapEvent e = *eager_.begin();
            eager_.erase(eager_.begin());
            owner_[static_cast<size_t>(e.a)] = std::nullopt;
            return e;
        }
        SwapEvent e = heap_.top();
        heap_.pop();
        return e;
    }

    bool is_current(const SwapEvent& e) const {
        return pos_[static_cast<size_t>(e.a)] >= 0 && pos_[static_cast<size_t>(e.b)] >= 0 &&
               pos_[static_cast<size_t>(e.b)] == pos_[static_cast<size_t>(e.a)] + 1;
    }

    void try_add_event(int a, int b, const SweepRational& xd) {
        // a ordered before b; a crossover exists only under the x-condition,
        // and one in the past is already resolved
        if (pts_[static_cast<size_t>(a)].x >= pts_[static_cast<size_t>(b)].x) return;
        SweepRational X = crossover_x(pts_[static_cast<size_t>(a)], pts_[static_cast<size_t>(b)]);
        if (cmp_rational(X, xd) < 0) return;
        if (opt_.eager_delete) {
            if (owner_[static_cast<size_t>(a)]) {
                eager_.erase(*owner_[static_cast<size_t>(a)]);
            }
            owner_[static_cast<size_t>(a)] = SwapEvent{X, a, b};
            eager_.insert(SwapEvent{X, a, b});
        } else {
            heap_.push(SwapEvent{X, a, b});
        }
    }

    void drop_event_of(int left) {
        if (!opt_.eager_delete) return;
        if (owner_[static_cast<size_t>(left)]) {
            eager_.erase(*owner_[static_cast<size_t>(left)]);
            owner_[static_cast<size_t>(left)] = std::nullopt;
        }
    }

    void handle_insert(int i) {
        std::int64_t X = pts_[static_cast<size_t>(i)].x;
        auto it = std::lower_bound(od_.begin(), od_.end(), i, [&](int e, int val) {
            std::int64_t de = dist2(e, X), dv = dist2(val, X);
            return de != dv ? de < dv : e < val;
        });
        size_t p = static_cast<size_t>(it - od_.begin());
        if (p > 0 && p < od_.size()) drop_event_of(od_[p - 1]);
        od_.insert(it, i);
        for (size_t t = p; t < od_.size(); ++t) pos_[static_cast<size_t>(od_[t])] = static_cast<std::int64_t>(t);
        SweepRational xd{X, 1};
        if (p > 0) try_add_event(od_[p - 1], i, xd);
        if (p + 1 < od_.size()) try_add_event(i, od_[p + 1], xd);
    }

    void handle_swap(const SwapEvent& ev) {
        size_t p = static_cast<size_t>(pos_[static_cast<size_t>(ev.a)]);
        if (p > 0) drop_event_of(od_[p - 1]);
        drop_event_of(ev.b);
        od_[p] = ev.b;
        od_[p + 1] = ev.a;
        pos_[static_cast<size_t>(ev.b)] = static_cast<std::int64_t>(p);
        pos_[static_cast<size_t>(ev.a)] = static_cast<std::int64_t>(p + 1);
        if (p > 0) try_add_event(od_[p - 1], od_[p], ev.x);
        if (p + 2 < od_.size()) try_add_event(od_[p + 1], od_[p + 2], ev.x);
    }

    // od must equal a full sort by squared distance (ties by id) at an
    // abscissa strictly inside (xd, next); uses the pairwise linear form so
    // all arithmetic stays exact.
    bool audit_order(const SweepRational& xd, const std::optional<SweepRational>& next) const {
        __int128 na, da;
        if (next) {
            na = static_cast<__int128>(xd.num) * next->den + static_cast<__int128>(next->num) * xd.den;
            da = static_cast<__int128>(2) * xd.den * next->den;
        } else {
            na = static_cast<__int128>(xd.num) + xd.den;
            da = xd.den;
        }
        std::vector<int> expect = od_;
        std::sort(expect.begin(), expect.end(), [&](int p, int q) {
            const PlanarPoint& P = pts_[static_cast<size_t>(p)];
            const PlanarPoint& Q = pts_[static_cast<size_t>(q)];
            __int128 C = static_cast<__int128>(P.x) * P.x + static_cast<__int128>(P.y) * P.y -
                         static_cast<__int128>(Q.x) * Q.x - static_cast<__int128>(Q.y) * Q.y;
            __int128 D = P.x - Q.x;
            __int128 lhs = C * da - 2 * na * D;  // sign of dist2(p) - dist2(q) at na/da
            if (lhs != 0) return lhs < 0;
            return p < q;
        });
        return expect == od_;
    }

    const std::vector<PlanarPoint>& pts_;
    const std::vector<DistanceQuery>& qs_;
    SweepOptions opt_;
    std::vector<int> porder_, qorder_, od_;
    std::vector<std::int64_t> pos_;
    std::priority_queue<SwapEvent, std::vector<SwapEvent>, SwapEventGreater> heap_;
    std::set<SwapEvent, SwapEventLess> eager_;
    std::vector<std::optional<SwapEvent>> owner_;
};

}  // namespace detail

// Offline k-th smallest distances from the eligible half plane x(i) <= xq to
// the anchor (xq, 0), answered in input order by a left-to-right sweep with
// insert, swap and query events.
inline SweepResult solve_offline(const std::vector<PlanarPoint>& points,
                                 const std::vector<DistanceQuery>& queries,
                                 const SweepOptions& opt = {}) {
    detail::SweepDriver drv(points, queries, opt);
    return drv.run();
}

}  // namespace rangekit
