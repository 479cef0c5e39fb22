#include "doctest.h"

#include <algorithm>

#include "lindlab/lattice.hpp"

using namespace lindlab;

TEST_CASE("box and ring construction") {
    auto chain = build_chain(10);
    CHECK(chain->size() == 10);
    CHECK(chain->edge_count() == 9);

    auto ring = build_ring(6);
    CHECK(ring->size() == 6);
    CHECK(ring->edge_count() == 6);
    CHECK(ring->adjacent(0, 5));

    auto box = build_box({3, 3});
    CHECK(box->size() == 9);
    CHECK(box->edge_count() == 12);

    CHECK_THROWS(build_box({0}));
    CHECK_THROWS(build_explicit_lattice(1, {{0}, {0}}));
}

TEST_CASE("graph distance") {
    auto chain = build_chain(10);
    CHECK(chain->distance(2, 7) == 5);

    auto box = build_box({2, 2});
    CHECK(box->distance(box->site_index({0, 0}), box->site_index({1, 1})) == 2);

    auto disconnected = build_explicit_lattice(2, {{0, 0}, {1, 1}});
    CHECK(disconnected->distance(0, 1) == Lattice::kInfinity);
    CHECK_THROWS(disconnected->site_index({5, 5}));
}

TEST_CASE("distance symmetry and triangle inequality") {
    auto box = build_box({4, 3});
    for (int a = 0; a < box->size(); ++a) {
        for (int b = 0; b < box->size(); ++b) {
            CHECK(box->distance(a, b) == box->distance(b, a));
            for (int c = 0; c < box->size(); ++c) {
                CHECK(box->distance(a, c) <= box->distance(a, b) + box->distance(b, c));
            }
        }
    }
}

TEST_CASE("full box distance equals l1 distance") {
    auto box = build_box({4, 4});
    for (int a = 0; a < box->size(); ++a) {
        for (int b = 0; b < box->size(); ++b) {
            int l1 = 0;
            for (int axis = 0; axis < 2; ++axis) {
                l1 += std::abs(box->sites[a][axis] - box->sites[b][axis]);
            }
            CHECK(box->distance(a, b) == l1);
        }
    }
}

TEST_CASE("balls") {
    auto chain = build_chain(16);
    const Region b3 = ball(chain, 0, 3);
    CHECK(b3.members == std::vector<int>{0, 1, 2, 3});

    const Region b0 = ball(chain, 5, 0);
    CHECK(b0.members == std::vector<int>{5});

    auto box = build_box({3, 3});
    const Region center = ball(box, box->site_index({1, 1}), 1);
    CHECK(center.size() == 5);

    // nesting in the radius
    for (int r1 = 0; r1 <= 4; ++r1) {
        const Region inner = ball(chain, 8, r1);
        const Region outer = ball(chain, 8, r1 + 1);
        CHECK(std::includes(outer.members.begin(), outer.members.end(), inner.members.begin(),
                            inner.members.end()));
    }
}

TEST_CASE("bipartition boundary families on a chain") {
    auto chain = build_chain(10);
    const Region half = make_region(chain, {0, 1, 2, 3});

    SUBCASE("R = 1") {
        const BoundaryFamily fam = bipartition_boundaries(half, 1);
        REQUIRE(fam.crossing_sets.size() == 1);
        CHECK(fam.crossing_sets[0].members == std::vector<int>{3, 4});
        CHECK(fam.r_boundary_half == std::vector<int>{3, 4});
        for (const auto& z : fam.crossing_sets) {
            CHECK(z.diameter() <= 1);
        }
        for (const auto& z : fam.inner_boundary) {
            for (int u : z.members) CHECK(half.contains(u));
            CHECK(z.diameter() <= 1);
        }
    }

    SUBCASE("R = 0 has no crossing sets") {
        const BoundaryFamily fam = bipartition_boundaries(half, 0);
        CHECK(fam.crossing_sets.empty());
    }

    SUBCASE("R = 2") {
        const BoundaryFamily fam = bipartition_boundaries(half, 2);
        CHECK(fam.r_boundary_half == std::vector<int>{2, 3, 4, 5});
        for (const auto& z : fam.crossing_sets) {
            bool in = false, out = false;
            for (int u : z.members) (half.contains(u) ? in : out) = true;
            CHECK(in);
            CHECK(out);
            CHECK(z.diameter() <= 2);
        }
    }
}

TEST_CASE("inradius") {
    auto chain = build_chain(20);
    const Region seg = make_region(chain, {5, 6, 7, 8, 9});
    CHECK(region_inradius(seg) == 3);  // site 7 is three steps from both 4 and 10

    auto box = build_box({5, 5});
    std::vector<int> interior;
    for (int u = 0; u < box->size(); ++u) {
        if (box->sites[u][0] > 0 && box->sites[u][0] < 4 && box->sites[u][1] > 0 &&
            box->sites[u][1] < 4) {
            interior.push_back(u);
        }
    }
    CHECK(region_inradius(make_region(box, interior)) == 2);
}

TEST_CASE("lattice json round trip") {
    auto box = build_box({2, 3});
    const auto j = box->to_json();
    CHECK(j["dimension"] == 2);
    auto back = lattice_from_json(j);
    CHECK(back->size() == box->size());
    CHECK(back->edge_count() == box->edge_count());
}
