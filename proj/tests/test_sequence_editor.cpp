#include <catch_amalgamated.hpp>

#include <cmath>

#include "rangekit/oracles.hpp"
#include "rangekit/sequence_editor.hpp"
#include "testutil.hpp"

using namespace rangekit;

namespace {

std::vector<std::int64_t> iota_seq(int n) {
    std::vector<std::int64_t> v(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = i + 1;
    return v;
}

// a random script that stays legal against a tracked length
std::vector<SeqOp> random_script(testutil::Rng& rng, std::int64_t n, int m) {
    std::vector<SeqOp> ops;
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
    return ops;
}

}  // namespace

TEST_CASE("find splits a fresh list into three pieces") {
    IntervalList sl(iota_seq(5));
    auto h = sl.find(3);
    REQUIRE(sl.entries().size() == 3);
    CHECK(sl.entries()[0].a == 1);
    CHECK(sl.entries()[0].b == 2);
    CHECK(sl.entries()[1].a == 3);
    CHECK(sl.entries()[1].b == 3);
    CHECK(sl.entries()[2].a == 4);
    CHECK(sl.entries()[2].b == 5);
    CHECK(h == 1);
    SECTION("find on an existing singleton is a no-op") {
        auto again = sl.find(3);
        CHECK(again == 1);
        CHECK(sl.entries().size() == 3);
    }
    SECTION("find never changes the logical sequence") {
        CHECK(sl.materialize() == iota_seq(5));
    }
}

TEST_CASE("find handles reversed descriptors") {
    // build [1,1]+1, [5,5]-1, [3,4]-1, [2,2]-1, [6,6]+1 via reverse(2,5)
    IntervalList sl(iota_seq(6));
    sl.reverse(2, 5);
    CHECK(sl.materialize() == std::vector<std::int64_t>{1, 5, 4, 3, 2, 6});
    // logical position 3 (value 4) lies inside the reversed run [3,4]-1
    auto before = sl.materialize();
    auto h = sl.find(3);
    CHECK(sl.entries()[static_cast<size_t>(h)].a == 4);
    CHECK(sl.entries()[static_cast<size_t>(h)].b == 4);
    CHECK(sl.entries()[static_cast<size_t>(h)].dir == -1);
    // the reversed split keeps order: [4,4]-1 then [3,3]-1
    CHECK(sl.entries()[static_cast<size_t>(h) + 1].a == 3);
    CHECK(sl.entries()[static_cast<size_t>(h) + 1].b == 3);
    CHECK(sl.materialize() == before);
}

TEST_CASE("reverse examples") {
    IntervalList sl({10, 20, 30, 40, 50});
    sl.reverse(2, 4);
    CHECK(sl.get(2) == 40);
    CHECK(sl.get(4) == 20);
    SECTION("reversing a singleton changes nothing") {
        auto before = sl.materialize();
        sl.reverse(3, 3);
        CHECK(sl.materialize() == before);
    }
    SECTION("a double reverse restores the sequence") {
        sl.reverse(2, 4);
        CHECK(sl.materialize() == std::vector<std::int64_t>{10, 20, 30, 40, 50});
    }
}

TEST_CASE("cut and paste") {
    IntervalList sl({1, 2, 3, 4});
    sl.cut_paste(1, 2, 2);
    CHECK(sl.materialize() == std::vector<std::int64_t>{3, 4, 1, 2});
    CHECK(sl.get(1) == 3);
    SECTION("deletion shrinks the sequence") {
        sl.cut_paste(2, 3, -1);
        CHECK(sl.size() == 2);
        CHECK(sl.materialize() == std::vector<std::int64_t>{3, 2});
    }
    SECTION("cutting everything and pasting at the front is the identity") {
        auto before = sl.materialize();
        sl.cut_paste(1, sl.size(), 0);
        CHECK(sl.materialize() == before);
    }
}

TEST_CASE("insert examples") {
    IntervalList sl({1, 2});
    sl.insert(0, {9, 8});
    CHECK(sl.materialize() == std::vector<std::int64_t>{9, 8, 1, 2});
    CHECK(sl.get(1) == 9);
    sl.insert(sl.size(), {7});
    CHECK(sl.get(sl.size()) == 7);
    SECTION("inserting then deleting the block restores the sequence") {
        auto before = sl.materialize();
        sl.insert(2, {100, 200, 300});
        sl.cut_paste(3, 5, -1);
        CHECK(sl.materialize() == before);
    }
}

TEST_CASE("reads and materialization") {
    IntervalList sl(iota_seq(7));
    for (std::int64_t i = 1; i <= 7; ++i) CHECK(sl.get(i) == i);
    size_t entries_before = sl.entries().size();
    sl.get(4);
    CHECK(sl.entries().size() == entries_before);  // reads never split
    sl.reverse(1, 7);
    for (std::int64_t i = 1; i <= 7; ++i) CHECK(sl.get(i) == 8 - i);
    CHECK(sl.materialize() == sl.materialize());
}

TEST_CASE("position validation") {
    IntervalList sl(iota_seq(3));
    CHECK_THROWS_AS(sl.get(0), PositionOutOfRange);
    CHECK_THROWS_AS(sl.get(4), PositionOutOfRange);
    CHECK_THROWS_AS(sl.reverse(0, 2), PositionOutOfRange);
    CHECK_THROWS_AS(sl.reverse(2, 4), PositionOutOfRange);
    CHECK_THROWS_AS(sl.cut_paste(1, 2, 2), BadPasteTarget);
    CHECK_THROWS_AS(sl.cut_paste(1, 2, -2), BadPasteTarget);
    CHECK_THROWS_AS(sl.insert(4, {1}), PositionOutOfRange);
}

TEST_CASE("fuzzed scripts match the flat-array simulator") {
    testutil::Rng rng(91);
    for (int rep = 0; rep < 1500; ++rep) {
        int n0 = static_cast<int>(rng.range(0, 64));
        int m = static_cast<int>(rng.range(1, 128));
        std::vector<std::int64_t> init;
        for (int i = 0; i < n0; ++i) init.push_back(rng.range(-999, 999));
        auto ops = random_script(rng, n0, m);

        std::vector<std::int64_t> naive_final;
        auto naive_answers = oracles::naive_seq_run(init, ops, &naive_final);

        IntervalList sl(init);
        std::vector<std::int64_t> got;
        for (const SeqOp& op : ops) {
            switch (op.kind) {
                case SeqOp::Kind::Reverse: {
                    size_t before = sl.entries().size();
                    sl.reverse(op.i, op.j);
                    REQUIRE(sl.entries().size() <= before + 4);
                    break;
                }
                case SeqOp::Kind::CutPaste: {
                    size_t before = sl.entries().size();
                    sl.cut_paste(op.i, op.j, op.p);
                    REQUIRE(sl.entries().size() <= before + 6);
                    break;
                }
                case SeqOp::Kind::Insert: {
                    size_t before = sl.entries().size();
                    sl.insert(op.p, op.values);
                    REQUIRE(sl.entries().size() <= before + 3);
                    break;
                }
                case SeqOp::Kind::Get: got.push_back(sl.get(op.i)); break;
            }
            REQUIRE(sl.lengths_consistent());
        }
        REQUIRE(got == naive_answers);
        REQUIRE(sl.materialize() == naive_final);
    }
}

TEST_CASE("grouped runs answer exactly like the plain editor") {
    testutil::Rng rng(92);
    for (int rep = 0; rep < 400; ++rep) {
        int n0 = static_cast<int>(rng.range(0, 48));
        int m = static_cast<int>(rng.range(1, 96));
        std::vector<std::int64_t> init;
        for (int i = 0; i < n0; ++i) init.push_back(rng.range(-999, 999));
        auto ops = random_script(rng, n0, m);
        auto naive_answers = oracles::naive_seq_run(init, ops);
        std::int64_t zs[] = {1, static_cast<std::int64_t>(std::ceil(std::sqrt(std::max(1, n0)))),
                             static_cast<std::int64_t>(m)};
        for (std::int64_t z : zs) {
            GroupedEditor ge(init, z);
            auto answers = run_script(ge, ops);
            REQUIRE(answers == naive_answers);
            std::vector<std::int64_t> naive_final;
            oracles::naive_seq_run(init, ops, &naive_final);
            REQUIRE(ge.materialize() == naive_final);
        }
    }
}

TEST_CASE("grouping with z >= m behaves identically to the plain editor") {
    testutil::Rng rng(93);
    int n0 = 20, m = 30;
    std::vector<std::int64_t> init;
    for (int i = 0; i < n0; ++i) init.push_back(rng.range(-99, 99));
    auto ops = random_script(rng, n0, m);
    IntervalList plain(init);
    GroupedEditor grouped(init, m + 5);
    CHECK(run_script(plain, ops) == run_script(grouped, ops));
    CHECK(plain.materialize() == grouped.materialize());
}
