#include "doctest.h"

#include <set>
#include <vector>

#include "kesbn/rng.hpp"

using kesbn::Rng;

TEST_CASE("generator output is pinned") {
    // Reference values from an independent big-integer reimplementation of
    // the seeding and output functions. Any platform or refactoring drift
    // would break reproducibility of stored runs, so these are exact.
    Rng rng(42);
    CHECK(rng.next_u64() == 15021278609987233951ULL);
    CHECK(rng.next_u64() == 5881210131331364753ULL);
    CHECK(rng.next_u64() == 18149643915985481100ULL);
    CHECK(rng.next_u64() == 12933668939759105464ULL);
    CHECK(rng.next_u64() == 14637574242682825331ULL);

    CHECK(Rng::substream(42, 0) == 13679457532755275413ULL);
    CHECK(Rng::substream(42, 1) == 2949826092126892291ULL);
    CHECK(Rng::substream(7, 3) == 10753165928301472203ULL);

    Rng d(42);
    CHECK(d.next_double() == doctest::Approx(0.8143051451229099).epsilon(1e-15));

    Rng u(42);
    const std::vector<std::uint64_t> expect{1, 3, 0, 4, 1};
    for (std::uint64_t e : expect) CHECK(u.uniform_int(10) == e);
}

TEST_CASE("same seed, same stream") {
    Rng a(991), b(991);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("uniform_int stays in range and covers all residues") {
    Rng rng(3);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        const auto v = rng.uniform_int(7);
        CHECK(v < 7);
        seen.insert(v);
    }
    CHECK(seen.size() == 7);
    for (int i = 0; i < 50; ++i) CHECK(rng.uniform_int(1) == 0);
}

TEST_CASE("next_double lands in the unit interval") {
    Rng rng(17);
    for (int i = 0; i < 2000; ++i) {
        const double v = rng.next_double();
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("substreams differ from each other and the base stream") {
    std::set<std::uint64_t> seeds;
    seeds.insert(42);
    for (int i = 0; i < 64; ++i) seeds.insert(Rng::substream(42, i));
    CHECK(seeds.size() == 65);
}
