#include <catch_amalgamated.hpp>

#include <cmath>

#include "rangekit/kth_selection.hpp"
#include "rangekit/oracles.hpp"
#include "testutil.hpp"

using namespace rangekit;

namespace {

std::vector<std::vector<Weight>> random_instance(testutil::Rng& rng, int max_n, int max_b) {
    int n = static_cast<int>(rng.range(1, max_n));
    std::vector<std::vector<Weight>> seqs(static_cast<size_t>(n));
    for (auto& s : seqs) {
        int b = static_cast<int>(rng.range(1, max_b));
        Weight v = rng.range(-40, 10);
        for (int j = 0; j < b; ++j) {
            v += rng.range(1, 6);  // strictly increasing; duplicates across sequences happen
            s.push_back(v);
        }
    }
    return seqs;
}

}  // namespace

TEST_CASE("direct indexing on one sequence") {
    SequenceOracle o({{10, 20, 30}});
    CHECK(kth_smallest(o, 2) == 20);
}

TEST_CASE("two interleaved sequences") {
    SequenceOracle o({{1, 3, 5}, {2, 4, 6}});
    CHECK(kth_smallest(o, 4) == 4);
}

TEST_CASE("rank bounds") {
    SequenceOracle o({{1, 2}, {3}});
    CHECK_THROWS_AS(kth_smallest(o, 0), RankOutOfRange);
    CHECK_THROWS_AS(kth_smallest(o, 4), RankOutOfRange);
    CHECK(kth_smallest(o, 3) == 3);
}

TEST_CASE("count_leq probes only between cached neighbours") {
    SequenceOracle o({{2, 4, 6, 8}});
    detail::ProbeCache cache;
    cache.seed(4);
    SECTION("pivot below the first element") {
        CHECK(count_leq(o, cache, 0, 1) == 0);
    }
    SECTION("pivot above the last element") {
        CHECK(count_leq(o, cache, 0, 100) == 4);
    }
    SECTION("pivot in the middle") {
        CHECK(count_leq(o, cache, 0, 5) == 2);
    }
    SECTION("cached values are never probed twice") {
        count_leq(o, cache, 0, 5);
        std::uint64_t before = o.query_count();
        count_leq(o, cache, 0, 5);
        CHECK(o.query_count() == before);
        CHECK(o.duplicate_probes() == 0);
    }
}

TEST_CASE("each count stays within its logarithmic probe budget") {
    testutil::Rng rng(74);
    for (int rep = 0; rep < 200; ++rep) {
        int b = static_cast<int>(rng.range(1, 200));
        std::vector<Weight> seq;
        Weight v = rng.range(-500, 0);
        for (int j = 0; j < b; ++j) {
            v += rng.range(1, 7);
            seq.push_back(v);
        }
        SequenceOracle o({seq});
        detail::ProbeCache cache;
        cache.seed(b);
        for (int t = 0; t < 30; ++t) {
            Weight pivot = rng.range(seq.front() - 3, seq.back() + 3);
            // the open gap between the cached neighbours bounds the work
            std::int64_t u = cache.floor_pos(pivot);
            std::int64_t gap = cache.next_pos_after(u) - u;
            std::uint64_t budget =
                gap <= 1 ? 1
                         : static_cast<std::uint64_t>(std::ceil(std::log2(static_cast<double>(gap)))) + 1;
            std::uint64_t probes = 0;
            std::int64_t got = count_leq(o, cache, 0, pivot, &probes);
            std::int64_t want = 0;
            for (Weight x : seq)
                if (x <= pivot) ++want;
            REQUIRE(got == want);
            REQUIRE(probes <= budget);
        }
        REQUIRE(o.duplicate_probes() == 0);
    }
}

TEST_CASE("random instances match the merge oracle at every rank") {
    testutil::Rng rng(71);
    for (int rep = 0; rep < 60; ++rep) {
        auto seqs = random_instance(rng, 8, 64);
        std::int64_t total = 0;
        for (const auto& s : seqs) total += static_cast<std::int64_t>(s.size());
        std::int64_t maxb = 0;
        for (const auto& s : seqs) maxb = std::max<std::int64_t>(maxb, static_cast<std::int64_t>(s.size()));
        std::uint64_t budget =
            1 + static_cast<std::uint64_t>(seqs.size()) *
                    (static_cast<std::uint64_t>(std::ceil(std::log2(static_cast<double>(maxb)))) + 1);
        for (std::int64_t k = 1; k <= total; ++k) {
            SequenceOracle o(seqs);
            SelectionStats st;
            Weight got = kth_smallest(o, k, &st);
            REQUIRE(got == oracles::merge_kth(seqs, k));
            REQUIRE(o.duplicate_probes() == 0);
            REQUIRE(st.max_probes_per_iteration <= budget);
            REQUIRE(st.windows_monotonic);
            if (st.finish_phase) {
                REQUIRE(st.finish_snv >= k);
                REQUIRE(st.finish_snv - k < static_cast<std::int64_t>(seqs.size()));
            }
        }
    }
}

TEST_CASE("overshoot early exit gives the same answers") {
    testutil::Rng rng(72);
    SelectionOptions early{true};
    for (int rep = 0; rep < 80; ++rep) {
        auto seqs = random_instance(rng, 6, 32);
        std::int64_t total = 0;
        for (const auto& s : seqs) total += static_cast<std::int64_t>(s.size());
        std::int64_t k = rng.range(1, total);
        SequenceOracle a(seqs), b(seqs);
        CHECK(kth_smallest(a, k) == kth_smallest(b, k, nullptr, early));
    }
}

TEST_CASE("subranges: shifted view of each sequence") {
    std::vector<std::vector<Weight>> seqs{{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, {5, 7}};
    SECTION("positions 4..6 of the first plus the whole second") {
        SequenceOracle o(seqs);
        CHECK(kth_in_subranges(o, {{4, 6}, {1, 2}}, 2) == 5);  // multiset {4,5,6,5,7}
    }
    SECTION("degenerate windows expose single values") {
        SequenceOracle o(seqs);
        CHECK(kth_in_subranges(o, {{4, 4}, {2, 2}}, 1) == 4);
    }
    SECTION("full ranges behave like the plain selection") {
        SequenceOracle o1(seqs), o2(seqs);
        CHECK(kth_in_subranges(o1, {{1, 10}, {1, 2}}, 7) == kth_smallest(o2, 7));
    }
    SECTION("bad subranges are rejected") {
        SequenceOracle o(seqs);
        CHECK_THROWS_AS(kth_in_subranges(o, {{4, 3}, {1, 2}}, 1), BadSubrange);
        CHECK_THROWS_AS(kth_in_subranges(o, {{1, 11}, {1, 2}}, 1), BadSubrange);
        CHECK_THROWS_AS(kth_in_subranges(o, {{1, 10}, {1, 2}}, 13), RankOutOfRange);
    }
}

TEST_CASE("random subrange instances match the sliced merge oracle") {
    testutil::Rng rng(73);
    for (int rep = 0; rep < 100; ++rep) {
        auto seqs = random_instance(rng, 5, 40);
        std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
        std::vector<std::vector<Weight>> sliced;
        std::int64_t total = 0;
        for (const auto& s : seqs) {
            std::int64_t b = static_cast<std::int64_t>(s.size());
            std::int64_t a1 = rng.range(1, b), b1 = rng.range(1, b);
            if (a1 > b1) std::swap(a1, b1);
            ranges.emplace_back(a1, b1);
            sliced.emplace_back(s.begin() + a1 - 1, s.begin() + b1);
            total += b1 - a1 + 1;
        }
        std::int64_t k = rng.range(1, total);
        SequenceOracle o(seqs);
        CHECK(kth_in_subranges(o, ranges, k) == oracles::merge_kth(sliced, k));
    }
}

TEST_CASE("sequences must be strictly increasing and sentinel-free") {
    CHECK_THROWS_AS(SequenceOracle({{3, 3}}), Error);
    CHECK_THROWS_AS(SequenceOracle({{5, 4}}), Error);
    std::vector<std::vector<Weight>> sentinel{{kPosInf}};
    CHECK_THROWS_AS(SequenceOracle(sentinel), Error);
}
