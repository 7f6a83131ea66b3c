#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <map>

#include "lgt/lattice.hpp"
#include "lgt/random.hpp"

using namespace lgt;

TEST_CASE("grid counts") {
    Lattice l34({3, 4});
    CHECK(l34.n_links() == 17);
    CHECK(l34.n_vertices() == 12);
    CHECK(l34.n_plaquettes() == 6);

    Lattice l23({2, 3});
    CHECK(l23.n_links() == 7);
    CHECK(l23.n_vertices() == 6);
    CHECK(l23.n_plaquettes() == 2);

    Lattice l22({2, 2});
    CHECK(l22.n_links() == 4);
    CHECK(l22.n_vertices() == 4);
    CHECK(l22.n_plaquettes() == 1);
}

TEST_CASE("rejects degenerate specs") {
    CHECK_THROWS_AS(Lattice({1, 4}), std::invalid_argument);
    CHECK_THROWS_AS(Lattice({3, 1}), std::invalid_argument);
    // interior attachment for a left pin
    CHECK_THROWS_AS(Lattice({3, 3, {{Side::Left, 1, 1}}}), std::invalid_argument);
    CHECK_NOTHROW(Lattice({3, 3, {{Side::Left, 1, 0}}}));
}

TEST_CASE("index order is row-major, horizontal first, pins last") {
    Lattice l({3, 2, {{Side::Left, 0, 0}}});
    // Row 0: H(0,0), H(0,1) then V(0,0..2); row 1: H(1,0), H(1,1); pin last.
    CHECK(l.horizontal_link(0, 0) == 0);
    CHECK(l.horizontal_link(0, 1) == 1);
    CHECK(l.vertical_link(0, 0) == 2);
    CHECK(l.vertical_link(0, 2) == 4);
    CHECK(l.horizontal_link(1, 0) == 5);
    CHECK(l.pinned_link(0) == 7);
    CHECK(l.links().back().pinned);
}

TEST_CASE("supports") {
    Lattice l({3, 4});
    for (PlaquetteId p = 0; p < l.n_plaquettes(); ++p)
        CHECK(l.plaquette_support(p).size() == 4);

    // Every link appears in exactly two vertex supports.
    std::map<LinkId, int> uses;
    for (VertexId v = 0; v < l.n_vertices(); ++v) {
        auto [r, c] = l.vertex_coords(v);
        size_t expected = 4;
        if (r == 0 || r == l.ly() - 1) --expected;
        if (c == 0 || c == l.lx() - 1) --expected;
        CHECK(l.vertex_support(v).size() == expected);
        for (LinkId x : l.vertex_support(v)) uses[x]++;
    }
    for (auto [link, n] : uses) CHECK(n == 2);

    // Parity constraint: the product of all vertex operators is the identity,
    // so the total charge of any bitstring is even.
    RandomSource rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        uint64_t bits = rng.next_u64() & ((1u << l.n_links()) - 1);
        int violated = 0;
        for (VertexId v = 0; v < l.n_vertices(); ++v) {
            uint64_t mask = 0;
            for (LinkId x : l.vertex_support(v)) mask |= uint64_t{1} << x;
            violated += std::popcount(bits & mask) & 1;
        }
        CHECK(violated % 2 == 0);
    }
}

TEST_CASE("pinned link promotes its vertex") {
    Lattice plain({3, 3});
    Lattice pinned({3, 3, {{Side::Left, 1, 0}}});
    VertexId v = pinned.vertex_at(1, 0);
    CHECK(pinned.vertex_support(v).size() == plain.vertex_support(v).size() + 1);
    CHECK(pinned.pinned_attachment(0) == v);
    auto [a, b] = pinned.link_endpoints(pinned.pinned_link(0));
    CHECK(a == v);
    CHECK(b == -1);
}

TEST_CASE("manhattan distance") {
    Lattice l({3, 4});
    CHECK(l.manhattan_distance(l.vertex_at(0, 0), l.vertex_at(0, 0)) == 0);
    CHECK(l.manhattan_distance(l.vertex_at(0, 0), l.vertex_at(1, 2)) == 3);

    // Mean over all unordered distinct pairs on 2x3 is 5/3.
    Lattice s({2, 3});
    long long sum = 0, pairs = 0;
    for (VertexId a = 0; a < s.n_vertices(); ++a)
        for (VertexId b = a + 1; b < s.n_vertices(); ++b) {
            sum += s.manhattan_distance(a, b);
            ++pairs;
        }
    CHECK(3 * sum == 5 * pairs);
}

TEST_CASE("entangling count closed form") {
    CHECK(entangling_count_per_cycle(3, 4) == 116);
    CHECK(entangling_count_per_cycle(2, 2) == 24);
    CHECK(entangling_count_per_cycle(2, 3) == 44);
}

TEST_CASE("mixed-state mean separation") {
    CHECK(mixed_state_mean_separation(3, 4) == Rational{7, 3});
    CHECK(mixed_state_mean_separation(2, 3) == Rational{5, 3});
    CHECK(mixed_state_mean_separation(2, 2) == Rational{4, 3});

    // Monte-Carlo oracle: uniform random link bitstrings post-selected to the
    // two-charge sector reproduce the closed value within 3 sigma.
    Lattice l({2, 3});
    std::vector<uint64_t> masks(l.n_vertices(), 0);
    for (VertexId v = 0; v < l.n_vertices(); ++v)
        for (LinkId x : l.vertex_support(v)) masks[v] |= uint64_t{1} << x;
    RandomSource rng(202);
    double sum = 0, sumsq = 0;
    int n = 0;
    for (int trial = 0; trial < 400000; ++trial) {
        uint64_t bits = rng.next_u64() & ((1u << l.n_links()) - 1);
        VertexId a = -1, b = -1;
        int violated = 0;
        for (VertexId v = 0; v < l.n_vertices(); ++v)
            if (std::popcount(bits & masks[v]) & 1) {
                (violated == 0 ? a : b) = v;
                ++violated;
            }
        if (violated != 2) continue;
        double d = l.manhattan_distance(a, b);
        sum += d;
        sumsq += d * d;
        ++n;
    }
    double mean = sum / n;
    double sem = std::sqrt((sumsq / n - mean * mean) / (n - 1));
    CHECK(std::abs(mean - 5.0 / 3.0) < 3 * sem);
}

TEST_CASE("path endpoints") {
    Lattice l({3, 4});
    // Two vertical links down the middle column: endpoints two rows apart.
    PathSpec path{{l.vertical_link(0, 1), l.vertical_link(1, 1)}};
    auto ends = path_endpoints(l, path);
    REQUIRE(ends.size() == 2);
    CHECK(l.manhattan_distance(ends[0], ends[1]) == 2);

    PathSpec broken{{l.vertical_link(0, 0), l.vertical_link(2, 2)}};
    CHECK_THROWS_AS(path_endpoints(l, broken), std::invalid_argument);
    CHECK_THROWS_AS(path_endpoints(l, PathSpec{}), std::invalid_argument);
}

TEST_CASE("json shape") {
    Lattice l({2, 3, {{Side::Right, 1, 1}}});
    auto j = l.to_json();
    CHECK(j["lx"] == 2);
    CHECK(j["ly"] == 3);
    CHECK(j["links"].size() == 8);
    CHECK(j["links"].back()["pinned"] == true);
    CHECK(j["vertex_supports"].size() == 6);
    CHECK(j["plaquette_supports"].size() == 2);
}
