#include <catch_amalgamated.hpp>

#include <cmath>

#include "rangekit/oracles.hpp"
#include "rangekit/range_tree.hpp"
#include "testutil.hpp"

using namespace rangekit;

namespace {

Box make_box(std::initializer_list<std::pair<Coord, Coord>> bounds) {
    Box b;
    for (auto& p : bounds) b.bounds.push_back(p);
    return b;
}

std::vector<RawPoint> random_points(testutil::Rng& rng, int n, int d, Coord coord_lo, Coord coord_hi,
                                    Weight w_lo, Weight w_hi) {
    std::vector<RawPoint> pts;
    for (int i = 0; i < n; ++i) {
        RawPoint p;
        for (int j = 0; j < d; ++j) p.coords.push_back(rng.range(coord_lo, coord_hi));
        p.weight = rng.range(w_lo, w_hi);
        pts.push_back(std::move(p));
    }
    return pts;
}

Box random_box(testutil::Rng& rng, int d, Coord lo, Coord hi) {
    Box b;
    for (int j = 0; j < d; ++j) {
        Coord a = rng.range(lo, hi), c = rng.range(lo, hi);
        if (a > c) std::swap(a, c);
        b.bounds.emplace_back(a, c);
    }
    return b;
}

// reference state over the merged points of a tree
struct RefState {
    std::vector<std::vector<Coord>> coords;
    std::vector<Weight> w;
    std::vector<std::int64_t> mult;

    explicit RefState(const PointSet& ps) {
        for (const MergedPoint& p : ps.points()) {
            coords.push_back(p.coords);
            w.push_back(p.weight);
            mult.push_back(p.multiplicity);
        }
    }

    void point_set(const std::vector<Coord>& c, Weight nw) {
        for (size_t i = 0; i < coords.size(); ++i)
            if (coords[i] == c) {
                w[i] = nw;
                return;
            }
        FAIL("reference point missing");
    }

    void range_add_per_original(const Box& b, Weight u) {
        for (size_t i = 0; i < coords.size(); ++i)
            if (b.contains(coords[i])) w[i] += u * mult[i];
    }

    void range_add_flat(const Box& b, Weight u) {
        for (size_t i = 0; i < coords.size(); ++i)
            if (b.contains(coords[i])) w[i] += u;
    }

    Weight query(AggregateOp op, const Box& b) const {
        std::vector<std::pair<std::vector<Coord>, Weight>> pts;
        for (size_t i = 0; i < coords.size(); ++i) pts.emplace_back(coords[i], w[i]);
        return oracles::naive_range_agg(pts, op, b);
    }
};

}  // namespace

TEST_CASE("single point build") {
    PointSet ps(1, {RawPoint{{5}, 9}}, kSum);
    RangeTree t(ps, kSum);
    CHECK(t.range_query(make_box({{5, 5}})) == 9);
    CHECK(t.range_query(Box::whole(1)) == 9);
}

TEST_CASE("1D total") {
    std::vector<RawPoint> pts{{{1}, 2}, {{2}, 5}, {{3}, 1}, {{4}, 7}};
    RangeTree t(PointSet(1, pts, kSum), kSum);
    CHECK(t.range_query(Box::whole(1)) == 15);
}

TEST_CASE("identical coordinates merge") {
    std::vector<RawPoint> pts{{{3, 3}, 3}, {{3, 3}, 4}};
    PointSet ps(2, pts, kSum);
    REQUIRE(ps.size() == 1);
    CHECK(ps.points()[0].weight == 7);
    CHECK(ps.points()[0].multiplicity == 2);
    RangeTree t(ps, kSum);
    CHECK(t.range_query(Box::whole(2)) == 7);
}

TEST_CASE("disjoint box yields the neutral element") {
    std::vector<RawPoint> pts{{{1, 1}, 4}, {{2, 2}, 6}};
    RangeTree t(PointSet(2, pts, kMin), kMin);
    CHECK(t.range_query(make_box({{5, 9}, {5, 9}})) == kMin.neutral());
}

TEST_CASE("inverted boxes are rejected") {
    RangeTree t(PointSet(1, {RawPoint{{1}, 1}}, kSum), kSum);
    CHECK_THROWS_AS(t.range_query(make_box({{4, 2}})), BadBox);
}

TEST_CASE("random 2D boxes match the naive oracle for SUM MIN XOR") {
    testutil::Rng rng(10);
    auto raw = random_points(rng, 128, 2, 0, 60, -50, 50);
    for (AggregateOp op : {kSum, kMin, kXor}) {
        PointSet ps(2, raw, op);
        RangeTree t(ps, op);
        RefState ref(ps);
        for (int q = 0; q < 200; ++q) {
            Box b = random_box(rng, 2, -5, 65);
            CHECK(t.range_query(b) == ref.query(op, b));
        }
    }
}

TEST_CASE("point updates: set then read back") {
    std::vector<RawPoint> pts{{{1, 1}, 4}, {{2, 5}, 6}, {{9, 3}, 2}};
    PointSet ps(2, pts, kSum);
    RangeTree t(ps, kSum);
    t.point_update({2, 5}, 11);
    CHECK(t.range_query(make_box({{2, 2}, {5, 5}})) == 11);
    CHECK(t.range_query(Box::whole(2)) == 17);
    CHECK_THROWS_AS(t.point_update({7, 7}, 1), UnknownPoint);
}

TEST_CASE("logical deletion in a MAX tree") {
    std::vector<RawPoint> pts{{{1}, 10}, {{2}, 99}, {{3}, 5}};
    PointSet ps(1, pts, kMax);
    RangeTree t(ps, kMax);
    CHECK(t.range_query(Box::whole(1)) == 99);
    t.point_update({2}, kMax.neutral());
    CHECK(t.range_query(Box::whole(1)) == 10);
    CHECK(t.range_query(make_box({{2, 2}})) == kMax.neutral());
}

TEST_CASE("500 interleaved point updates and queries vs naive") {
    testutil::Rng rng(11);
    for (AggregateOp op : {kSum, kMax, kXor, kProduct}) {
        bool product = op.kind() == AggKind::Product;
        auto draw_weight = [&]() -> Weight {
            if (product) return rng.chance(0.9) ? 1 : 2;  // keep the total product in range
            return rng.range(-40, 40);
        };
        auto raw = random_points(rng, 64, 2, 0, 30, 0, 0);
        for (RawPoint& p : raw) p.weight = draw_weight();
        PointSet ps(2, raw, op);
        RangeTree t(ps, op);
        RefState ref(ps);
        for (int step = 0; step < 500; ++step) {
            if (rng.chance(0.5)) {
                size_t id = static_cast<size_t>(rng.range(0, static_cast<std::int64_t>(ps.size()) - 1));
                Weight nw = draw_weight();
                t.point_update(ps.points()[id].coords, nw);
                ref.point_set(ps.points()[id].coords, nw);
            } else {
                Box b = random_box(rng, 2, -2, 32);
                CHECK(t.range_query(b) == ref.query(op, b));
            }
        }
    }
}

TEST_CASE("range update examples") {
    SECTION("full-box add raises the total by u per original point") {
        std::vector<RawPoint> pts{{{1, 1}, 4}, {{2, 5}, 6}, {{2, 5}, 1}, {{9, 3}, 2}};
        PointSet ps(2, pts, kSum);
        RangeTree t(ps, kSum, true);
        Weight before = t.range_query(Box::whole(2));
        t.range_update(Box::whole(2), 5);
        CHECK(t.range_query(Box::whole(2)) == before + 5 * 4);
    }
    SECTION("1D add over [3,11], singleton read at 7") {
        std::vector<RawPoint> pts;
        for (Coord c = 1; c <= 16; ++c) pts.push_back(RawPoint{{c}, c * 10});
        RangeTree t(PointSet(1, pts, kSum), kSum, true);
        t.range_update(make_box({{3, 11}}), 1000);
        CHECK(t.range_query(make_box({{7, 7}})) == 70 + 1000);
        CHECK(t.range_query(make_box({{2, 2}})) == 20);
        CHECK(t.range_query(make_box({{12, 12}})) == 120);
    }
    SECTION("overlapping adds then MIN query") {
        std::vector<RawPoint> pts{{{1}, 10}, {{2}, 20}, {{3}, 30}, {{4}, 40}};
        PointSet ps(1, pts, kMin);
        RangeTree t(ps, kMin, true);
        t.range_update(make_box({{1, 3}}), 7);
        t.range_update(make_box({{2, 4}}), -5);
        // weights now 17, 22, 32, 35
        CHECK(t.range_query(Box::whole(1)) == 17);
        CHECK(t.range_query(make_box({{2, 4}})) == 22);
        CHECK(t.range_query(make_box({{3, 4}})) == 32);
    }
}

TEST_CASE("unsupported range-update combinations") {
    PointSet ps1(1, {RawPoint{{1}, 1}}, kXor);
    CHECK_THROWS_AS(RangeTree(ps1, kXor, true), UnsupportedCombination);
    std::vector<RawPoint> p2{{{1, 2}, 1}};
    PointSet ps2(2, p2, kMax);
    CHECK_THROWS_AS(RangeTree(ps2, kMax, true), UnsupportedCombination);
    PointSet ps3(1, {RawPoint{{1}, 1}}, kSum);
    RangeTree plain(ps3, kSum, false);
    CHECK_THROWS_AS(plain.range_update(Box::whole(1), 1), UnsupportedCombination);
}

static void interleaved_sum_fuzz(int d, std::uint64_t seed, int n_points, int steps) {
    testutil::Rng rng(seed);
    auto raw = random_points(rng, n_points, d, 0, 40, -30, 30);
    PointSet ps(d, raw, kSum);
    RangeTree t(ps, kSum, true);
    RefState ref(ps);
    for (int step = 0; step < steps; ++step) {
        double dice = static_cast<double>(rng.next() % 100) / 100.0;
        if (dice < 0.3) {
            size_t id = static_cast<size_t>(rng.range(0, static_cast<std::int64_t>(ps.size()) - 1));
            Weight nw = rng.range(-30, 30);
            t.point_update(ps.points()[id].coords, nw);
            ref.point_set(ps.points()[id].coords, nw);
        } else if (dice < 0.6) {
            Box b = random_box(rng, d, -2, 42);
            Weight u = rng.range(-9, 9);
            t.range_update(b, u);
            ref.range_add_per_original(b, u);
        } else {
            Box b = random_box(rng, d, -2, 42);
            REQUIRE(t.range_query(b) == ref.query(kSum, b));
        }
    }
}

TEST_CASE("interleaved point/range updates and queries vs naive, SUM") {
    interleaved_sum_fuzz(1, 21, 48, 400);
    interleaved_sum_fuzz(2, 22, 64, 400);
    interleaved_sum_fuzz(3, 23, 48, 300);
}

TEST_CASE("interleaved additive updates on 1D MIN and MAX trees") {
    testutil::Rng rng(24);
    for (AggregateOp op : {kMin, kMax}) {
        auto raw = random_points(rng, 40, 1, 0, 60, -1000, 1000);
        PointSet ps(1, raw, op);
        RangeTree t(ps, op, true);
        RefState ref(ps);
        for (int step = 0; step < 400; ++step) {
            double dice = static_cast<double>(rng.next() % 100) / 100.0;
            if (dice < 0.25) {
                size_t id = static_cast<size_t>(rng.range(0, static_cast<std::int64_t>(ps.size()) - 1));
                Weight nw = rng.range(-1000, 1000);
                t.point_update(ps.points()[id].coords, nw);
                ref.point_set(ps.points()[id].coords, nw);
            } else if (dice < 0.55) {
                Box b = random_box(rng, 1, -2, 62);
                Weight u = rng.range(-50, 50);
                t.range_update(b, u);
                ref.range_add_flat(b, u);
            } else {
                Box b = random_box(rng, 1, -2, 62);
                REQUIRE(t.range_query(b) == ref.query(op, b));
            }
        }
    }
}

TEST_CASE("per-query node counter stays within the polylog budget at n=1024, d=2") {
    testutil::Rng rng(25);
    auto raw = random_points(rng, 1024, 2, 0, 5000, -100, 100);
    PointSet ps(2, raw, kSum);
    double logn = std::ceil(std::log2(static_cast<double>(ps.size())));
    std::uint64_t budget = static_cast<std::uint64_t>(4.0 * (logn + 1) * (logn + 1));

    RangeTree plain(ps, kSum);
    RangeTree ru(ps, kSum, true);
    ru.range_update(random_box(rng, 2, 0, 5000), 3);
    ru.range_update(random_box(rng, 2, 0, 5000), -2);
    for (int q = 0; q < 300; ++q) {
        Box b = random_box(rng, 2, -10, 5010);
        Weight a = plain.range_query(b);
        CHECK(plain.last_query_nodes() <= budget);
        Weight c = ru.range_query(b);
        CHECK(ru.last_query_nodes() <= budget);
        (void)a;
        (void)c;
    }
}

TEST_CASE("empty point set is rejected") {
    CHECK_THROWS_AS(PointSet(1, {}, kSum), EmptyPointSet);
}
