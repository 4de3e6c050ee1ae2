#include <catch_amalgamated.hpp>

#include "rangekit/prefix_cube.hpp"
#include "testutil.hpp"

using namespace rangekit;

namespace {

DenseCube cube_from(std::vector<int> shape, AggregateOp op, std::vector<Weight> cells) {
    DenseCube c(std::move(shape), op);
    c.cells() = std::move(cells);
    return c;
}

DenseCube random_cube(testutil::Rng& rng, std::vector<int> shape, AggregateOp op) {
    DenseCube c(std::move(shape), op);
    for (Weight& w : c.cells())
        w = op.kind() == AggKind::Product ? (rng.chance(0.85) ? 1 : 2) : rng.range(-50, 50);
    return c;
}

Weight brute_box_fold(const DenseCube& c, const std::vector<std::pair<int, int>>& box) {
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

}  // namespace

TEST_CASE("1D prefix sums") {
    DenseCube c = cube_from({3}, kSum, {1, 2, 3});
    CHECK(build_prefix_naive(c).data().cells() == std::vector<Weight>{1, 3, 6});
    CHECK(build_prefix_sweep(c).data().cells() == std::vector<Weight>{1, 3, 6});
}

TEST_CASE("2D prefix sums by hand") {
    DenseCube c = cube_from({2, 2}, kSum, {1, 2, 3, 4});
    std::vector<Weight> expect{1, 3, 4, 10};
    CHECK(build_prefix_naive(c).data().cells() == expect);
    CHECK(build_prefix_sweep(c).data().cells() == expect);
}

TEST_CASE("single cell") {
    DenseCube c = cube_from({1}, kMax, {5});
    CHECK_THROWS_AS(build_prefix_sweep(c), UnsupportedCombination);
    DenseCube c2 = cube_from({1}, kXor, {5});
    CHECK(build_prefix_sweep(c2).data().cells() == std::vector<Weight>{5});
}

TEST_CASE("builders agree on random cubes across dimensions and ops") {
    testutil::Rng rng(41);
    std::vector<std::vector<int>> shapes{{5}, {3, 4}, {3, 3, 3}, {4, 4, 4, 4}, {2, 3, 2, 3}};
    for (AggregateOp op : {kSum, kXor, kProduct}) {
        for (const auto& shape : shapes) {
            for (int rep = 0; rep < 8; ++rep) {
                DenseCube c = random_cube(rng, shape, op);
                PrefixCube a = build_prefix_naive(c);
                PrefixCube b = build_prefix_sweep(c);
                REQUIRE(a.data().cells() == b.data().cells());
            }
        }
    }
}

TEST_CASE("builder op-call counters respect their budgets") {
    testutil::Rng rng(42);
    DenseCube c = random_cube(rng, {4, 4, 4}, kSum);
    PrefixCube naive = build_prefix_naive(c);
    PrefixCube sweep = build_prefix_sweep(c);
    std::uint64_t np = static_cast<std::uint64_t>(c.cell_count());
    CHECK(naive.build_op_calls <= np * (1u << c.dim()));
    CHECK(sweep.build_op_calls <= np * static_cast<std::uint64_t>(c.dim()));
}

TEST_CASE("box query at d=2 by hand") {
    DenseCube c = cube_from({2, 2}, kSum, {1, 2, 3, 4});
    PrefixCube ps = build_prefix_sweep(c);
    CHECK(ps.data().cells() == std::vector<Weight>{1, 3, 4, 10});
    CHECK(prefix_range_query(ps, {{2, 2}, {2, 2}}) == 4);  // 10 - 4 - 3 + 1
    CHECK(prefix_range_query(ps, {{1, 2}, {1, 2}}) == 10);
    CHECK(prefix_range_query(ps, {{1, 1}, {2, 2}}) == 2);
}

TEST_CASE("queries equal the cell fold, exhaustively on a 3x3x3 cube") {
    testutil::Rng rng(43);
    for (AggregateOp op : {kSum, kXor}) {
        DenseCube c = random_cube(rng, {3, 3, 3}, op);
        PrefixCube ps = build_prefix_sweep(c);
        for (int a1 = 1; a1 <= 3; ++a1)
            for (int b1 = a1; b1 <= 3; ++b1)
                for (int a2 = 1; a2 <= 3; ++a2)
                    for (int b2 = a2; b2 <= 3; ++b2)
                        for (int a3 = 1; a3 <= 3; ++a3)
                            for (int b3 = a3; b3 <= 3; ++b3) {
                                std::vector<std::pair<int, int>> box{{a1, b1}, {a2, b2}, {a3, b3}};
                                REQUIRE(prefix_range_query(ps, box) == brute_box_fold(c, box));
                            }
    }
}

TEST_CASE("product cubes require nonzero cells") {
    DenseCube c = cube_from({2}, kProduct, {3, 0});
    CHECK_THROWS_AS(build_prefix_naive(c), ZeroInProductCube);
    CHECK_THROWS_AS(build_prefix_sweep(c), ZeroInProductCube);
}

TEST_CASE("bad query boxes are rejected") {
    DenseCube c = cube_from({2, 2}, kSum, {1, 2, 3, 4});
    PrefixCube ps = build_prefix_sweep(c);
    CHECK_THROWS_AS(prefix_range_query(ps, {{2, 1}, {1, 2}}), BadBox);
    CHECK_THROWS_AS(prefix_range_query(ps, {{1, 3}, {1, 2}}), BadBox);
    CHECK_THROWS_AS(prefix_range_query(ps, {{1, 2}}), BadBox);
}

TEST_CASE("one stamp covering the whole cube") {
    RangeStamp st{{{1, 2}, {1, 2}}, 7};
    auto res = batched_range_updates({2, 2}, {st}, kSum);
    CHECK(res.cube.cells() == std::vector<Weight>{7, 7, 7, 7});
    CHECK(res.corners_per_stamp == std::vector<int>{1});  // only (1,1) is in grid
}

TEST_CASE("single-cell stamp touches four corners on a 2x2 grid") {
    RangeStamp st{{{1, 1}, {1, 1}}, 9};
    auto res = batched_range_updates({2, 2}, {st}, kSum);
    CHECK(res.corners_per_stamp == std::vector<int>{4});
    CHECK(res.cube.cells() == std::vector<Weight>{9, 0, 0, 0});
}

TEST_CASE("random stamp batches match per-cell application") {
    testutil::Rng rng(44);
    for (AggregateOp op : {kSum, kXor}) {
        for (int rep = 0; rep < 10; ++rep) {
            std::vector<int> shape{6, 6, 6};
            std::vector<RangeStamp> stamps;
            int q = static_cast<int>(rng.range(1, 50));
            for (int s = 0; s < q; ++s) {
                RangeStamp st;
                for (int j = 0; j < 3; ++j) {
                    int a = static_cast<int>(rng.range(1, 6)), b = static_cast<int>(rng.range(1, 6));
                    if (a > b) std::swap(a, b);
                    st.box.emplace_back(a, b);
                }
                st.u = rng.range(-20, 20);
                stamps.push_back(std::move(st));
            }
            auto res = batched_range_updates(shape, stamps, op);
            // naive per-cell application
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
            REQUIRE(res.cube.cells() == naive.cells());
            for (size_t s = 0; s < stamps.size(); ++s) {
                int out_of_grid = 0;
                for (int j = 0; j < 3; ++j)
                    if (stamps[s].box[static_cast<size_t>(j)].second + 1 > 6) ++out_of_grid;
                // corners drop by halving per out-of-grid axis
                CHECK(res.corners_per_stamp[s] == (1 << (3 - out_of_grid)));
            }
        }
    }
}

TEST_CASE("stamp linearity for SUM") {
    testutil::Rng rng(45);
    std::vector<int> shape{4, 5};
    auto draw = [&](int cnt) {
        std::vector<RangeStamp> stamps;
        for (int s = 0; s < cnt; ++s) {
            RangeStamp st;
            for (int j = 0; j < 2; ++j) {
                int a = static_cast<int>(rng.range(1, shape[static_cast<size_t>(j)]));
                int b = static_cast<int>(rng.range(1, shape[static_cast<size_t>(j)]));
                if (a > b) std::swap(a, b);
                st.box.emplace_back(a, b);
            }
            st.u = rng.range(-9, 9);
            stamps.push_back(std::move(st));
        }
        return stamps;
    };
    auto a = draw(7), b = draw(5);
    auto ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    auto ra = batched_range_updates(shape, a, kSum);
    auto rb = batched_range_updates(shape, b, kSum);
    auto rab = batched_range_updates(shape, ab, kSum);
    for (size_t i = 0; i < ra.cube.cells().size(); ++i)
        CHECK(rab.cube.cells()[i] == ra.cube.cells()[i] + rb.cube.cells()[i]);
}

TEST_CASE("product stamps stay exact through inverse corners") {
    RangeStamp st{{{1, 2}}, 2};           // multiply cells 1..2 by 2 on a length-3 axis
    RangeStamp st2{{{2, 3}}, 3};
    auto res = batched_range_updates({3}, {st, st2}, kProduct);
    CHECK(res.cube.cells() == std::vector<Weight>{2, 6, 3});
    CHECK_THROWS_AS(batched_range_updates({3}, {RangeStamp{{{1, 2}}, 0}}, kProduct),
                    ZeroUpdateInProductMode);
}
