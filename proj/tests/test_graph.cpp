#include "doctest.h"

#include <algorithm>
#include <vector>

#include "helpers.hpp"
#include "kesbn/graph.hpp"

using namespace kesbn;

namespace {

// The two four-node benchmark structures used throughout: same skeleton
// density, overlapping arc sets, no v-structures in either.
Dag bench_g1() {
    return Dag::from_arcs(4, {{0, 1}, {0, 3}, {1, 2}, {3, 2}, {1, 3}});
}

Dag bench_g2() {
    return Dag::from_arcs(4, {{0, 1}, {0, 3}, {1, 2}, {2, 3}, {0, 2}});
}

}  // namespace

TEST_CASE("arc editing keeps the graph acyclic") {
    Dag chain = Dag::from_arcs(3, {{0, 1}, {1, 2}});
    CHECK(chain.arc_count() == 2);
    CHECK(chain.reaches(0, 2));
    CHECK_FALSE(chain.reaches(2, 0));

    CHECK_THROWS_AS(add_arc(chain, {2, 0}), CycleError);
    CHECK_THROWS_AS(add_arc(chain, {0, 1}), AdjacentError);
    CHECK_THROWS_AS(add_arc(chain, {1, 0}), AdjacentError);
    CHECK_THROWS_AS(add_arc(chain, {1, 1}), DomainError);
    CHECK_THROWS_AS(add_arc(chain, {0, 3}), IndexError);
    CHECK_THROWS_AS(remove_arc(chain, {0, 2}), MissingArcError);

    Dag shorter = remove_arc(chain, {1, 2});
    CHECK(shorter.arc_count() == 1);
    CHECK_FALSE(shorter.reaches(0, 2));
    // values are independent: the original is untouched
    CHECK(chain.arc_count() == 2);
}

TEST_CASE("descendant matrix survives removals") {
    // diamond: two routes to node 3; dropping one must keep the other visible
    Dag g = Dag::from_arcs(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
    CHECK(g.reaches(0, 3));
    Dag h = remove_arc(g, {1, 3});
    CHECK_FALSE(h.reaches(1, 3));
    CHECK(h.reaches(0, 3));
    CHECK(h.reaches(2, 3));
}

TEST_CASE("descendant matrix agrees with naive reachability on random graphs") {
    Rng rng(2024);
    for (int trial = 0; trial < 30; ++trial) {
        const Dag g = test::random_dag(8, 25, rng);
        for (int x = 0; x < 8; ++x)
            for (int y = 0; y < 8; ++y)
                CHECK(g.reaches(x, y) == test::reaches_naive(g, x, y));
    }
}

TEST_CASE("covered arcs are exactly those with matching families") {
    const Dag g1 = bench_g1();
    CHECK(is_covered(g1, {0, 1}));
    CHECK(is_covered(g1, {1, 3}));
    CHECK_FALSE(is_covered(g1, {0, 3}));
    CHECK_FALSE(is_covered(g1, {1, 2}));
    CHECK_FALSE(is_covered(g1, {3, 2}));
    CHECK(g1.covered_arcs() == std::vector<Arc>{{0, 1}, {1, 3}});

    const Dag g2 = bench_g2();
    CHECK_FALSE(is_covered(g2, {0, 2}));
    CHECK_THROWS_AS(reverse_covered_arc(g2, {0, 2}), NotCoveredError);
    CHECK_THROWS_AS(is_covered(g1, {2, 0}), MissingArcError);
}

TEST_CASE("covered arc reversal preserves the model") {
    const Dag g1 = bench_g1();
    const Dag rev = reverse_covered_arc(g1, {1, 3});
    CHECK(rev.arc(3, 1));
    CHECK_FALSE(rev.arc(1, 3));
    CHECK(rev.arc_count() == 5);
    CHECK(same_model(g1, rev));
    CHECK_FALSE(rev == g1);

    // and reversal is acyclic-safe: closure got rebuilt
    CHECK(rev.reaches(3, 2));
    CHECK(rev.reaches(3, 1));
    CHECK_FALSE(rev.reaches(1, 3));
}

TEST_CASE("random covered arc reversal never changes the fingerprint") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        Dag g = test::random_dag(6, 14, rng);
        const Fingerprint fp = fingerprint(g);
        for (int step = 0; step < 10; ++step) {
            g = random_car(g, rng);
            CHECK(fingerprint(g) == fp);
        }
    }
}

TEST_CASE("random_car on a graph without covered arcs is the identity") {
    // a pure collider has no covered arc
    const Dag collider = Dag::from_arcs(3, {{0, 2}, {1, 2}});
    CHECK(collider.covered_arcs().empty());
    Rng rng(9);
    CHECK(random_car(collider, rng) == collider);
    // and it consumed no randomness
    Rng fresh(9);
    CHECK(rng.next_u64() == fresh.next_u64());
}

TEST_CASE("causal order is topological and deterministic") {
    CHECK(causal_order(bench_g1()) == std::vector<int>{0, 1, 3, 2});
    CHECK(causal_order(bench_g2()) == std::vector<int>{0, 1, 2, 3});
    CHECK(causal_order(Dag(3)) == std::vector<int>{0, 1, 2});

    Rng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const Dag g = test::random_dag(7, 18, rng);
        const auto order = causal_order(g);
        std::vector<int> pos(7);
        for (int i = 0; i < 7; ++i) pos[order[i]] = i;
        for (const Arc a : g.arcs()) CHECK(pos[a.tail] < pos[a.head]);
    }
}

TEST_CASE("d-separation: chains, forks, colliders") {
    const std::vector<int> none;
    const std::vector<int> n0{0}, n1{1}, n2{2}, n3{3};

    const Dag chain = Dag::from_arcs(3, {{0, 1}, {1, 2}});
    CHECK_FALSE(d_separated(chain, n0, n2, none));
    CHECK(d_separated(chain, n0, n2, n1));

    const Dag fork = Dag::from_arcs(3, {{1, 0}, {1, 2}});
    CHECK_FALSE(d_separated(fork, n0, n2, none));
    CHECK(d_separated(fork, n0, n2, n1));

    const Dag collider = Dag::from_arcs(3, {{0, 1}, {2, 1}});
    CHECK(d_separated(collider, n0, n2, none));
    CHECK_FALSE(d_separated(collider, n0, n2, n1));

    // conditioning on a collider's descendant opens it too
    const Dag desc = Dag::from_arcs(4, {{0, 1}, {2, 1}, {1, 3}});
    CHECK(d_separated(desc, n0, n2, none));
    CHECK_FALSE(d_separated(desc, n0, n2, n3));
}

TEST_CASE("d-separation: argument handling") {
    const Dag chain = Dag::from_arcs(3, {{0, 1}, {1, 2}});
    const std::vector<int> none, n0{0}, n2{2};
    CHECK(d_separated(chain, none, n2, none));
    CHECK(d_separated(chain, n0, none, none));
    CHECK_THROWS_AS(d_separated(chain, n0, n0, none), OverlapError);
    const std::vector<int> bad{5};
    CHECK_THROWS_AS(d_separated(chain, bad, n2, none), IndexError);
}

TEST_CASE("d-separation in the benchmark graphs") {
    const Dag g1 = bench_g1();
    const std::vector<int> x{0}, y{1}, z{2}, u{3};
    const std::vector<int> yu{1, 3}, xz{0, 2};
    // the only nontrivial independence in the first structure
    CHECK(d_separated(g1, x, z, yu));
    CHECK_FALSE(d_separated(g1, y, u, xz));
    CHECK_FALSE(d_separated(g1, x, z, std::vector<int>{1}));

    const Dag g2 = bench_g2();
    CHECK(d_separated(g2, y, u, xz));
    CHECK_FALSE(d_separated(g2, x, z, yu));
}

TEST_CASE("fingerprints: skeleton plus v-structures") {
    const Dag g1 = bench_g1();
    const Fingerprint fp1 = fingerprint(g1);
    CHECK(fp1.skeleton ==
          std::vector<std::pair<int, int>>{{0, 1}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    CHECK(fp1.vstructures.empty());
    CHECK(to_string(fp1) == "0-1,0-3,1-2,1-3,2-3;");

    const Dag g2 = bench_g2();
    const Fingerprint fp2 = fingerprint(g2);
    CHECK(fp2.skeleton ==
          std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {2, 3}});
    CHECK(fp2.vstructures.empty());
    CHECK_FALSE(same_model(g1, g2));

    const Dag collider = Dag::from_arcs(3, {{0, 2}, {1, 2}});
    CHECK(to_string(fingerprint(collider)) == "0-2,1-2;0>2<1");
    // shielded collider is no v-structure
    const Dag shielded = Dag::from_arcs(3, {{0, 2}, {1, 2}, {0, 1}});
    CHECK(fingerprint(shielded).vstructures.empty());

    CHECK_THROWS_AS(same_model(g1, Dag(3)), SizeMismatchError);
}

TEST_CASE("fingerprint order breaks ties deterministically") {
    // same number of edges, different skeletons: order is total and stable
    const Fingerprint a = fingerprint(Dag::from_arcs(3, {{0, 1}}));
    const Fingerprint b = fingerprint(Dag::from_arcs(3, {{0, 2}}));
    CHECK(a < b);
    CHECK_FALSE(b < a);
    CHECK(a == fingerprint(Dag::from_arcs(3, {{1, 0}})));
}

TEST_CASE("dot rendering lists nodes and arcs") {
    const Dag g = Dag::from_arcs(2, {{0, 1}});
    const std::vector<std::string> names{"A", "B"};
    const std::string dot = to_dot(g, names);
    CHECK(dot.find("\"A\" -> \"B\";") != std::string::npos);
    const std::string plain = to_dot(g);
    CHECK(plain.find("\"v0\" -> \"v1\";") != std::string::npos);
}
