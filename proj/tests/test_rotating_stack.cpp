#include <catch_amalgamated.hpp>

#include "rangekit/oracles.hpp"
#include "rangekit/rotating_stack.hpp"
#include "testutil.hpp"

using namespace rangekit;

TEST_CASE("pushes settle once the window overflows") {
    RotStack st(3, 5);
    for (Weight x = 1; x <= 5; ++x) st.push(x);
    CHECK(st.finish() == std::vector<Weight>{1, 2, 3, 4, 5});
}

TEST_CASE("rotate reverses the window") {
    RotStack st(3, 4);
    st.push(1);
    st.push(2);
    st.push(3);
    st.rotate();
    CHECK(st.finish() == std::vector<Weight>{3, 2, 1});
}

TEST_CASE("rotate then push") {
    RotStack st(2, 3);
    st.push(1);
    st.push(2);
    st.rotate();
    st.push(3);
    CHECK(st.finish() == std::vector<Weight>{2, 1, 3});
}

TEST_CASE("double rotation cancels") {
    RotStack st(4, 6);
    for (Weight x = 1; x <= 5; ++x) st.push(x);
    st.rotate();
    st.rotate();
    st.push(6);
    RotStack plain(4, 6);
    for (Weight x = 1; x <= 6; ++x) plain.push(x);
    CHECK(st.finish() == plain.finish());
}

TEST_CASE("rotation on an empty stack is legal") {
    RotStack st(3, 1);
    st.rotate();
    st.push(7);
    CHECK(st.finish() == std::vector<Weight>{7});
}

TEST_CASE("rotation with fewer than K elements reverses them all") {
    RotStack st(5, 2);
    st.push(1);
    st.push(2);
    st.rotate();
    CHECK(st.finish() == std::vector<Weight>{2, 1});
}

TEST_CASE("capacity and lifecycle guards") {
    RotStack st(2, 1);
    st.push(1);
    CHECK_THROWS_AS(st.push(2), CapacityExceeded);
    st.finish();
    CHECK_THROWS_AS(st.finish(), Error);
    CHECK_THROWS_AS(st.rotate(), Error);
}

TEST_CASE("fuzzed scripts equal the reversing stack model") {
    testutil::Rng rng(101);
    for (int rep = 0; rep < 3000; ++rep) {
        std::int64_t k = rng.range(1, 8);
        int m = static_cast<int>(rng.range(1, 300));
        std::vector<oracles::NaiveStackOp> script;
        int pushes = 0;
        for (int t = 0; t < m; ++t) {
            if (pushes < m && rng.chance(0.7)) {
                script.push_back({true, rng.range(-1000, 1000)});
                ++pushes;
            } else {
                script.push_back({false, 0});
            }
        }
        RotStack st(k, m);
        for (const auto& op : script) {
            if (op.is_push)
                st.push(op.value);
            else
                st.rotate();
            REQUIRE(st.cursors_in_range());
        }
        REQUIRE(st.finish() == oracles::naive_stack(k, script));
    }
}

TEST_CASE("long scripts near the declared budget") {
    testutil::Rng rng(102);
    std::int64_t k = 6;
    int m = 10000;
    std::vector<oracles::NaiveStackOp> script;
    for (int t = 0; t < m; ++t) {
        if (rng.chance(0.8))
            script.push_back({true, rng.range(-5000, 5000)});
        else
            script.push_back({false, 0});
    }
    RotStack st(k, m);
    for (const auto& op : script) {
        if (op.is_push)
            st.push(op.value);
        else
            st.rotate();
    }
    auto got = st.finish();
    auto want = oracles::naive_stack(k, script);
    REQUIRE(got == want);
}
