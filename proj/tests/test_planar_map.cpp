#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "quadlab/cvs.hpp"
#include "quadlab/planar_map.hpp"
#include "quadlab/rng.hpp"

using namespace quadlab;

TEST_CASE("one edge map") {
    HalfEdgeMap m = build_map({1, 0}, {0, 1}, 0);
    CHECK(m.vertex_count() == 2);
    CHECK(m.edge_count() == 1);
    CHECK(m.face_count() == 1);
    CHECK(m.face_degree(0) == 2);
}

TEST_CASE("invalid alpha rejected") {
    CHECK_THROWS_AS(build_map({0, 1}, {1, 0}, 0), NotInvolution);
    CHECK_THROWS_AS(build_map({1, 0, 3, 2}, {0, 1, 2, 3}, 0), Disconnected);
}

TEST_CASE("one face quadrangulation accepted") {
    // Path u - w - x embedded in the sphere: a single face of degree 4.
    // Darts: 0 = u->w, 1 = w->u, 2 = w->x, 3 = x->w.
    HalfEdgeMap m = build_map({1, 0, 3, 2}, {0, 2, 1, 3}, 0);
    CHECK(m.face_count() == 1);
    Quadrangulation q = check_quadrangulation(m);
    CHECK(q.map().vertex_count() == 3);
}

TEST_CASE("triangulation rejected with the offending face") {
    // Triangle: vertices a, b, c; darts 0=ab,1=ba,2=bc,3=cb,4=ca,5=ac.
    HalfEdgeMap m = build_map({1, 0, 3, 2, 5, 4}, {5, 2, 1, 4, 3, 0}, 0);
    CHECK(m.face_count() == 2);
    CHECK_THROWS_AS(check_quadrangulation(m), FaceDegreeNot4);
}

TEST_CASE("canonical code reflexivity and dart-relabeling invariance") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        PointedQuadrangulation pq = sample_quadrangulation(3 + static_cast<int>(rng.below(8)), rng);
        const HalfEdgeMap& m = pq.q.map();
        CHECK(canonical_code(m) == canonical_code(m));

        // random dart relabeling fixing nothing in particular
        int n = m.dart_count();
        std::vector<int> perm(n);
        for (int i = 0; i < n; ++i) perm[i] = i;
        rng.shuffle(perm);
        std::vector<int> alpha(n), sigma(n);
        for (int d = 0; d < n; ++d) {
            alpha[perm[d]] = perm[m.alpha(d)];
            sigma[perm[d]] = perm[m.sigma(d)];
        }
        HalfEdgeMap relabeled = build_map(alpha, sigma, perm[m.root()]);
        CHECK(canonical_code(m) == canonical_code(relabeled));
    }
}

TEST_CASE("enumerator produces canonical labelings exactly once") {
    std::set<CanonicalCode> seen;
    int count = 0;
    enumerate_rooted_maps(3, [&](const HalfEdgeMap& m) {
        ++count;
        CanonicalCode c = canonical_code(m);
        // the enumeration is already canonical: code equals identity labeling
        std::vector<int> expect;
        for (int d = 0; d < m.dart_count(); ++d) {
            expect.push_back(m.alpha(d));
            expect.push_back(m.sigma(d));
        }
        CHECK(c.code == expect);
        CHECK(seen.insert(c).second);
    });
    CHECK(count == static_cast<int>(seen.size()));
    CHECK(count > 0);
}

TEST_CASE("quadrangulation census matches the closed formula") {
    CHECK(enumerate_rooted_quadrangulations(1).size() == 2);
    CHECK(enumerate_rooted_quadrangulations(2).size() == 9);
    CHECK(enumerate_rooted_quadrangulations(3).size() == 54);
    CHECK_THROWS_AS(enumerate_rooted_quadrangulations(5), TooLarge);
    CHECK(count_quadrangulations(1) == 2);
    CHECK(count_quadrangulations(2) == 9);
    CHECK(count_quadrangulations(3) == 54);
    CHECK(count_quadrangulations(4) == 378);
}

TEST_CASE("the two rooted one-face quadrangulations have distinct codes") {
    auto all = enumerate_rooted_quadrangulations(1);
    REQUIRE(all.size() == 2);
    CHECK_FALSE(canonical_code(all[0].map()) == canonical_code(all[1].map()));
}

TEST_CASE("orbit counts satisfy Euler on generated maps") {
    enumerate_rooted_maps(3, [&](const HalfEdgeMap& m) {
        for (int d = 0; d < m.dart_count(); ++d) {
            CHECK(m.alpha(m.alpha(d)) == d);
            CHECK(m.alpha(d) != d);
        }
        CHECK(m.vertex_count() - m.edge_count() + m.face_count() == 2);
        int total_face_degree = 0;
        for (int f = 0; f < m.face_count(); ++f) total_face_degree += m.face_degree(f);
        CHECK(total_face_degree == m.dart_count());
    });
}

TEST_CASE("quadrangulations are bipartite with all faces of degree 4") {
    for (const Quadrangulation& q : enumerate_rooted_quadrangulations(2)) {
        const HalfEdgeMap& m = q.map();
        for (int f = 0; f < m.face_count(); ++f) CHECK(m.face_degree(f) == 4);
        const std::vector<int>& color = q.coloring();
        for (int d = 0; d < m.dart_count(); ++d)
            CHECK(color[m.vertex_of(d)] != color[m.head_vertex(d)]);
    }
}
