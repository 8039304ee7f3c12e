#include <doctest.h>

#include <set>
#include <vector>

#include "splitcount/rng.hpp"

#include "support.hpp"

using namespace splitcount;

TEST_CASE("same derivation path gives the same sequence") {
    RngStream a = RngStream::derive(42, {kStreamChain, 3, 7});
    RngStream b = RngStream::derive(42, {kStreamChain, 3, 7});
    for (int i = 0; i < 64; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different paths give different sequences") {
    RngStream a = RngStream::derive(42, {kStreamChain, 3, 7});
    RngStream b = RngStream::derive(42, {kStreamChain, 3, 8});
    RngStream c = RngStream::derive(42, {kStreamChain, 4, 7});
    RngStream d = RngStream::derive(43, {kStreamChain, 3, 7});
    std::set<std::uint64_t> firsts{a.next_u64(), b.next_u64(), c.next_u64(), d.next_u64()};
    CHECK(firsts.size() == 4);
}

TEST_CASE("below is unbiased over a small range") {
    RngStream rng(123);
    std::vector<std::uint64_t> counts(7, 0);
    for (int i = 0; i < 70000; ++i) ++counts[rng.below(7)];
    CHECK(testsupport::uniformity_pvalue(counts) > 0.01);
}

TEST_CASE("below covers the full range and stays in bounds") {
    RngStream rng(9);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 1000; ++i) {
        const auto v = rng.below(5);
        CHECK(v < 5);
        seen.insert(v);
    }
    CHECK(seen.size() == 5);
    CHECK(rng.below(1) == 0);
}

TEST_CASE("uniform01 lies in [0,1)") {
    RngStream rng(77);
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}
