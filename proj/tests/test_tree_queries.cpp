#include <catch_amalgamated.hpp>

#include <cmath>

#include "rangekit/tree_queries.hpp"
#include "testutil.hpp"

using namespace rangekit;

namespace {

RootedTree random_tree(testutil::Rng& rng, int n, std::int64_t max_len, bool allow_zero_len) {
    RootedTree t;
    t.n = n;
    t.root = 0;
    t.parent.assign(static_cast<size_t>(n), -1);
    t.edge_len.assign(static_cast<size_t>(n), 0);
    t.weight.assign(static_cast<size_t>(n), 0);
    for (int i = 1; i < n; ++i) {
        t.parent[static_cast<size_t>(i)] = static_cast<int>(rng.range(0, i - 1));
        t.edge_len[static_cast<size_t>(i)] = rng.range(allow_zero_len ? 0 : 1, max_len);
    }
    for (int i = 0; i < n; ++i) t.weight[static_cast<size_t>(i)] = rng.range(-50, 50);
    return t;
}

// direct walk from vertex i, folding weights at distance d1..d2
Weight naive_subtree_query(const RootedTree& t, int i, std::int64_t d1, std::int64_t d2, AggregateOp op) {
    std::vector<std::vector<int>> children(static_cast<size_t>(t.n));
    for (int v = 0; v < t.n; ++v)
        if (v != t.root) children[static_cast<size_t>(t.parent[static_cast<size_t>(v)])].push_back(v);
    Weight acc = op.neutral();
    std::vector<std::pair<int, std::int64_t>> stack{{i, 0}};
    while (!stack.empty()) {
        auto [v, dist] = stack.back();
        stack.pop_back();
        if (dist >= d1 && dist <= d2) acc = op.combine(acc, t.weight[static_cast<size_t>(v)]);
        for (int c : children[static_cast<size_t>(v)])
            stack.push_back({c, dist + t.edge_len[static_cast<size_t>(c)]});
    }
    return acc;
}

}  // namespace

TEST_CASE("single vertex flattening") {
    RootedTree t;
    t.n = 1;
    t.root = 0;
    t.parent = {-1};
    t.edge_len = {0};
    t.weight = {42};
    FlatTree f = dfs_flatten(t);
    CHECK(f.dfs_num == std::vector<int>{1});
    CHECK(f.dfs_max == std::vector<int>{1});
    CHECK(f.depth == std::vector<std::int64_t>{0});
    SubtreeIndex ix(t, kSum);
    CHECK(ix.query(0, 0, 0) == 42);
}

TEST_CASE("chain flattening") {
    RootedTree t;
    t.n = 3;
    t.root = 0;
    t.parent = {-1, 0, 1};
    t.edge_len = {0, 1, 1};
    t.weight = {10, 20, 30};
    FlatTree f = dfs_flatten(t);
    CHECK(f.dfs_num == std::vector<int>{1, 2, 3});
    CHECK(f.dfs_max == std::vector<int>{3, 3, 3});
    CHECK(f.depth == std::vector<std::int64_t>{0, 1, 2});
    SubtreeIndex ix(t, kSum);
    CHECK(ix.query(0, 1, 2) == 50);
    CHECK(ix.query(0, 0, SubtreeIndex::kUnbounded) == 60);
    CHECK(ix.query(1, 0, 0) == 20);
    CHECK(ix.query(1, 1, 1) == 30);
}

TEST_CASE("malformed trees are rejected") {
    RootedTree cyc;
    cyc.n = 3;
    cyc.root = 0;
    cyc.parent = {-1, 2, 1};
    cyc.edge_len = {0, 1, 1};
    cyc.weight = {1, 1, 1};
    CHECK_THROWS_AS(dfs_flatten(cyc), Error);

    RootedTree bad;
    bad.n = 2;
    bad.root = 0;
    bad.parent = {-1, 5};
    bad.edge_len = {0, 1};
    bad.weight = {1, 1};
    CHECK_THROWS_AS(dfs_flatten(bad), DisconnectedVertex);
}

TEST_CASE("subtree intervals match explicit enumeration") {
    testutil::Rng rng(51);
    RootedTree t = random_tree(rng, 200, 4, true);
    FlatTree f = dfs_flatten(t);
    // dfs numbers are a permutation of 1..n
    std::vector<int> seen(static_cast<size_t>(t.n) + 1, 0);
    for (int v : f.dfs_num) {
        REQUIRE(v >= 1);
        REQUIRE(v <= t.n);
        ++seen[static_cast<size_t>(v)];
    }
    for (int v = 1; v <= t.n; ++v) CHECK(seen[static_cast<size_t>(v)] == 1);
    // explicit subtree membership vs interval containment
    for (int i = 0; i < t.n; ++i) {
        std::vector<bool> in_subtree(static_cast<size_t>(t.n), false);
        for (int v = 0; v < t.n; ++v) {
            int w = v;
            while (w != t.root && w != i) w = t.parent[static_cast<size_t>(w)];
            in_subtree[static_cast<size_t>(v)] = w == i;
        }
        for (int v = 0; v < t.n; ++v) {
            bool by_interval = f.dfs_num[static_cast<size_t>(v)] >= f.dfs_num[static_cast<size_t>(i)] &&
                               f.dfs_num[static_cast<size_t>(v)] <= f.dfs_max[static_cast<size_t>(i)];
            REQUIRE(by_interval == in_subtree[static_cast<size_t>(v)]);
        }
    }
}

TEST_CASE("random queries match the walking oracle") {
    testutil::Rng rng(52);
    for (AggregateOp op : {kSum, kMin, kXor}) {
        RootedTree t = random_tree(rng, 180, 5, true);
        SubtreeIndex ix(t, op);
        for (int q = 0; q < 400; ++q) {
            int i = static_cast<int>(rng.range(0, t.n - 1));
            std::int64_t d1 = rng.range(0, 12);
            std::int64_t d2 = d1 + rng.range(0, 12);
            REQUIRE(ix.query(i, d1, d2) == naive_subtree_query(t, i, d1, d2, op));
        }
        // distance identity: depth(p) - depth(i) for p in the subtree
        FlatTree f = ix.flat();
        for (int rep = 0; rep < 50; ++rep) {
            int i = static_cast<int>(rng.range(0, t.n - 1));
            for (int p = 0; p < t.n; ++p) {
                if (f.dfs_num[static_cast<size_t>(p)] < f.dfs_num[static_cast<size_t>(i)] ||
                    f.dfs_num[static_cast<size_t>(p)] > f.dfs_max[static_cast<size_t>(i)])
                    continue;
                std::int64_t dist = 0;
                int w = p;
                while (w != i) {
                    dist += t.edge_len[static_cast<size_t>(w)];
                    w = t.parent[static_cast<size_t>(w)];
                }
                REQUIRE(dist == f.depth[static_cast<size_t>(p)] - f.depth[static_cast<size_t>(i)]);
            }
        }
    }
}

TEST_CASE("query counters stay within the cascading budget") {
    testutil::Rng rng(53);
    RootedTree t = random_tree(rng, 500, 3, false);
    SubtreeIndex ix(t, kSum);
    double logn = std::ceil(std::log2(500.0));
    std::uint64_t budget = static_cast<std::uint64_t>(8.0 * (logn + 1));
    for (int q = 0; q < 500; ++q) {
        int i = static_cast<int>(rng.range(0, t.n - 1));
        std::int64_t d1 = rng.range(0, 20);
        ix.query(i, d1, d1 + rng.range(0, 20));
        CHECK(ix.last_query_nodes() <= budget);
        CHECK(ix.last_query_binary_searches() == 1);
    }
}

TEST_CASE("vertex and distance validation") {
    RootedTree t;
    t.n = 2;
    t.root = 0;
    t.parent = {-1, 0};
    t.edge_len = {0, 3};
    t.weight = {1, 2};
    SubtreeIndex ix(t, kSum);
    CHECK_THROWS_AS(ix.query(5, 0, 1), UnknownVertex);
    CHECK_THROWS_AS(ix.query(0, 2, 1), BadBox);
    CHECK_THROWS_AS(ix.query(0, -1, 1), BadBox);
}
