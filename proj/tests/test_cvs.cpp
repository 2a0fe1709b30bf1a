#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "quadlab/cvs.hpp"
#include "quadlab/metrics.hpp"

using namespace quadlab;

namespace {

LabeledTree path_tree(const std::vector<int>& labels) {
    LabeledTree t;
    int n = static_cast<int>(labels.size());
    t.parent.resize(n);
    t.children.assign(n, {});
    t.label = labels;
    t.root = 0;
    t.parent[0] = -1;
    for (int v = 1; v < n; ++v) {
        t.parent[v] = v - 1;
        t.children[v - 1].push_back(v);
    }
    return t;
}

// All plane trees with n edges (as Dyck words), each with every {-1,0,1}
// edge labeling.
std::vector<LabeledTree> all_labeled_trees(int n) {
    std::vector<LabeledTree> out;
    std::vector<int> word;
    std::function<void(int, int)> dyck = [&](int used, int open) {
        if (used == 2 * n) {
            if (open != 0) return;
            LabeledTree shape = tree_of_dyck(word);
            int edges = shape.edge_count();
            std::vector<int> inc(edges, -1);
            std::function<void(int)> labelings = [&](int i) {
                if (i == edges) {
                    LabeledTree t = shape;
                    // assign labels down the tree; edge order = vertex order
                    for (int v = 1; v < t.vertex_count(); ++v)
                        t.label[v] = t.label[t.parent[v]] + inc[v - 1];
                    out.push_back(t);
                    return;
                }
                for (int d : {-1, 0, 1}) {
                    inc[i] = d;
                    labelings(i + 1);
                }
            };
            labelings(0);
            return;
        }
        if (open < 2 * n - used) {
            word.push_back(1);
            dyck(used + 1, open + 1);
            word.pop_back();
        }
        if (open > 0) {
            word.push_back(-1);
            dyck(used + 1, open - 1);
            word.pop_back();
        }
    };
    dyck(0, 0);
    return out;
}

CanonicalCode pointed_code(const PointedQuadrangulation& pq) {
    const HalfEdgeMap& m = pq.q.map();
    std::vector<int> color(m.dart_count());
    for (int d = 0; d < m.dart_count(); ++d) color[d] = m.vertex_of(d) == pq.v_star ? 1 : 0;
    return canonical_code(m, color);
}

void check_distance_identity(const PointedQuadrangulation& pq) {
    DistanceField f = bfs(pq.q.map(), pq.v_star);
    int min_label = pq.vertex_labels[pq.v_star] + 1;
    for (int v = 0; v < pq.q.map().vertex_count(); ++v) {
        if (v == pq.v_star) continue;
        CHECK(f.dist[v] == pq.vertex_labels[v] - min_label + 1);
    }
}

}  // namespace

TEST_CASE("single edge tree gives the one-face quadrangulation") {
    for (int other_label : {1, -1}) {
        LabeledTree t = path_tree({0, other_label});
        PointedQuadrangulation pq = cvs_reverse(t, RootChoice::kForward);
        CHECK(pq.q.face_count() == 1);
        CHECK(pq.q.map().vertex_count() == 3);
        check_distance_identity(pq);
        DistanceField f = bfs(pq.q.map(), pq.v_star);
        // labels (0,1): the root vertex is at distance 1; labels (0,-1): 2
        int root_vertex_dist = other_label == 1 ? 1 : 2;
        bool found = false;
        for (int v = 0; v < 3; ++v)
            if (v != pq.v_star && pq.vertex_labels[v] == 0) {
                CHECK(f.dist[v] == root_vertex_dist);
                found = true;
            }
        CHECK(found);
    }
}

TEST_CASE("exhaustive pointed census at n = 1, 2, 3") {
    for (int n : {1, 2, 3}) {
        auto trees = all_labeled_trees(n);
        std::map<CanonicalCode, int> pointed;
        std::map<CanonicalCode, std::set<CanonicalCode>> by_quad;
        for (const LabeledTree& t : trees) {
            for (RootChoice choice : {RootChoice::kForward, RootChoice::kReversed}) {
                PointedQuadrangulation pq = cvs_reverse(t, choice);
                CHECK(pq.q.face_count() == n);
                check_distance_identity(pq);
                CanonicalCode code = pointed_code(pq);
                pointed[code]++;
                by_quad[canonical_code(pq.q.map())].insert(code);
            }
        }
        // each pointed rooted quadrangulation appears exactly once
        CHECK(static_cast<int>(pointed.size()) == static_cast<int>(2 * trees.size()));
        for (auto& [code, count] : pointed) CHECK(count == 1);
        // forgetting the point: every rooted quadrangulation, each carrying
        // n + 2 markings
        CHECK(BigInt(by_quad.size()) == count_quadrangulations(n));
        for (auto& [qcode, marks] : by_quad) CHECK(static_cast<int>(marks.size()) == n + 2);

        // cross-check the rooted census against the exhaustive oracle
        std::set<CanonicalCode> oracle;
        for (const Quadrangulation& q : enumerate_rooted_quadrangulations(n))
            oracle.insert(canonical_code(q.map()));
        std::set<CanonicalCode> produced;
        for (auto& [qcode, marks] : by_quad) produced.insert(qcode);
        CHECK(oracle == produced);
    }
}

TEST_CASE("sampler distance identity and face audit at larger n") {
    Rng rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 1 + static_cast<int>(rng.below(200));
        PointedQuadrangulation pq = sample_quadrangulation(n, rng);
        CHECK(pq.q.face_count() == n);
        CHECK(pq.q.map().vertex_count() == n + 2);
        check_distance_identity(pq);
    }
}

TEST_CASE("sampler uniformity at n = 2 by chi-square") {
    Rng rng(37);
    std::map<std::vector<int>, int> freq;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        PointedQuadrangulation pq = sample_quadrangulation(2, rng);
        freq[pointed_code(pq).code]++;
    }
    REQUIRE(freq.size() == 36);
    double expect = draws / 36.0;
    double chi2 = 0;
    for (auto& [code, count] : freq) chi2 += (count - expect) * (count - expect) / expect;
    CHECK(chi2 < 35 + 5 * std::sqrt(70.0));
}

TEST_CASE("rescaled label lower bound for contour distances") {
    Rng rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 5 + static_cast<int>(rng.below(20));
        LabeledTree t = sample_labeled_tree(n, rng);
        PhiResult pr = cvs_reverse_full(t, RootChoice::kForward);
        ContourEncoding c = contour_of_tree(t);
        // contour step -> q vertex, via the tree vertex visited
        LabeledTree rebuilt = tree_of_contour(c);
        CHECK(rebuilt == t);
        // d_q(u_i, u_j) >= |L(i) - L(j)|
        const HalfEdgeMap& qm = pr.dq.q.map();
        std::vector<int> step_vertex;
        {
            std::vector<std::size_t> next(t.vertex_count(), 0);
            int v = t.root;
            step_vertex.push_back(v);
            while (true) {
                if (next[v] < t.children[v].size()) {
                    v = t.children[v][next[v]++];
                } else if (v != t.root) {
                    v = t.parent[v];
                } else {
                    break;
                }
                step_vertex.push_back(v);
            }
        }
        for (std::size_t i = 0; i < step_vertex.size(); i += 3) {
            DistanceField f = bfs(qm, pr.vertex_in_q[step_vertex[i]]);
            for (std::size_t j = 0; j < step_vertex.size(); ++j) {
                int d = f.dist[pr.vertex_in_q[step_vertex[j]]];
                CHECK(d >= std::abs(c.L[i] - c.L[j]));
            }
        }
    }
}

TEST_CASE("sampling a 65536-face quadrangulation stays under a second") {
    auto start = std::chrono::steady_clock::now();
    PointedQuadrangulation pq = sample_quadrangulation(1 << 16, 99);
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    CHECK(pq.q.face_count() == (1 << 16));
    CHECK(ms < 1000);
}
