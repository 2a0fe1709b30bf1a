#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>

#include "quadlab/encodings.hpp"

using namespace quadlab;

namespace {

LabeledTree single_vertex_tree(int label) {
    LabeledTree t;
    t.parent = {-1};
    t.children = {{}};
    t.label = {label};
    t.root = 0;
    return t;
}

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

// Brute-force Motzkin walk counts by enumerating all 3^r step sequences.
long brute_motzkin(int a, int b, int r, bool positive_interior) {
    long count = 0;
    std::vector<int> steps(r, -1);
    std::function<void(int, int)> rec = [&](int i, int value) {
        if (positive_interior && i > 0 && i < r && value <= 0) return;
        if (i == r) {
            if (value == b) ++count;
            return;
        }
        for (int d : {-1, 0, 1}) rec(i + 1, value + d);
    };
    if (r == 0) return a == b ? 1 : 0;
    rec(0, a);
    return count;
}

}  // namespace

TEST_CASE("contour of the smallest trees") {
    ContourEncoding c = contour_of_tree(single_vertex_tree(0));
    CHECK(c.C == std::vector<int>{0, -1});
    CHECK(c.L == std::vector<int>{0});

    ContourEncoding p = contour_of_tree(path_tree({0, 1, 2}));
    CHECK(p.C == std::vector<int>{0, 1, 2, 1, 0, -1});
    CHECK(p.L == std::vector<int>{0, 1, 2, 1, 0});
}

TEST_CASE("tree/contour roundtrip on random trees") {
    Rng rng(11);
    for (int i = 0; i < 10000; ++i) {
        LabeledTree t = sample_labeled_tree(1 + static_cast<int>(rng.below(30)), rng);
        LabeledTree back = tree_of_contour(contour_of_tree(t));
        CHECK(back == t);
    }
}

TEST_CASE("malformed contours rejected") {
    ContourEncoding c;
    c.C = {0, 1, 1, -1};  // step of 0
    c.L = {0, 0, 0};
    CHECK_THROWS_AS(tree_of_contour(c), MalformedContour);
    c.C = {0, 1, 0, 0};  // missing -1 tail
    CHECK_THROWS_AS(tree_of_contour(c), MalformedContour);
}

TEST_CASE("snake of a forest of single-vertex trees") {
    int r = 4;
    LabeledForest f;
    f.floor.values = {0, 1, 0, -1, 0};
    for (int j = 0; j < r; ++j) f.trees.push_back(single_vertex_tree(f.floor.values[j]));
    DiscreteSnake s = snake_of_forest(f);
    REQUIRE(s.step_count() == r + 1);
    for (int i = 0; i <= r; ++i) {
        CHECK(s.zeta[i] == r - i);
        // the spine at the floor vertex of tree i+1 reads the floor labels
        // from the endpoint inward
        for (int j = 0; j <= r - i; ++j) CHECK(s.paths[i][j] == f.floor.values[r - j]);
    }
}

TEST_CASE("snake reconstruction identities on random forests") {
    Rng rng(13);
    for (int trial = 0; trial < 2000; ++trial) {
        int r = 1 + static_cast<int>(rng.below(5));
        MotzkinWalk floor;
        floor.values.push_back(rng.uniform_int(-2, 2));
        for (int j = 0; j < r; ++j)
            floor.values.push_back(floor.values.back() + rng.uniform_int(-1, 1));
        LabeledForest f = sample_labeled_forest(floor, static_cast<int>(rng.below(25)), rng);
        DiscreteSnake s = snake_of_forest(f);

        // zeta is the forest contour
        CHECK(s.zeta == forest_contour(f));
        // the top of the spine is the label process
        std::vector<int> labels = forest_labels(f);
        REQUIRE(static_cast<int>(labels.size()) == s.step_count());
        for (int i = 0; i < s.step_count(); ++i) CHECK(s.paths[i][s.zeta[i]] == labels[i]);
        // floor labels are read at the first hit of each level, and the tree
        // index visited at step i is r + 1 - (running minimum of zeta)
        std::vector<int> first_hit(r + 1, -1);
        int run_min = s.zeta[0];
        for (int i = 0; i < s.step_count(); ++i) {
            run_min = std::min(run_min, s.zeta[i]);
            if (s.zeta[i] <= r && first_hit[s.zeta[i]] < 0) first_hit[s.zeta[i]] = i;
            if (i < s.step_count() - 1) {
                int tree_index = r + 1 - run_min;  // 1-based
                CHECK(tree_index >= 1);
                CHECK(tree_index <= r);
            }
        }
        for (int j = 0; j <= r; ++j) {
            REQUIRE(first_hit[r - j] >= 0);
            CHECK(s.paths[first_hit[r - j]][r - j] == f.floor.values[j]);
        }
    }
}

TEST_CASE("forest/snake roundtrip") {
    Rng rng(17);
    for (int trial = 0; trial < 10000; ++trial) {
        int r = 1 + static_cast<int>(rng.below(4));
        MotzkinWalk floor;
        floor.values.push_back(rng.uniform_int(-1, 1));
        for (int j = 0; j < r; ++j)
            floor.values.push_back(floor.values.back() + rng.uniform_int(-1, 1));
        LabeledForest f = sample_labeled_forest(floor, static_cast<int>(rng.below(12)), rng);
        LabeledForest back = forest_of_snake(snake_of_forest(f));
        CHECK(back == f);
    }
}

TEST_CASE("hand-built forest with 4 trees and 22 oriented edges") {
    // 9 tree edges and 4 floor edges: 2*9 + 4 = 22 oriented edges.
    LabeledForest f;
    f.floor.values = {0, 1, 1, 0, 0};
    LabeledTree t0 = path_tree({0, 1, 2});          // 2 edges
    LabeledTree t1 = single_vertex_tree(1);         // 0 edges
    LabeledTree t2 = path_tree({1, 0, -1, 0});      // 3 edges
    LabeledTree t3 = path_tree({0, -1, -2, -1, 0}); // 4 edges
    f.trees = {t0, t1, t2, t3};
    f.validate();
    CHECK(f.oriented_edge_count() == 22);

    DiscreteSnake s = snake_of_forest(f);
    CHECK(s.step_count() == 2 * 9 + 4 + 1);
    // step 15 reaches height 2 of the fourth tree: spine = (extra floor
    // vertex, tree-4 root, then the tree path down to label -2)
    CHECK(s.zeta[15] == 3);
    CHECK(s.paths[15] == std::vector<int>{0, 0, -1, -2});
    CHECK(forest_of_snake(s) == f);
}

TEST_CASE("motzkin counts against brute force") {
    CHECK(motzkin_count(0, 0, 0) == 1);
    CHECK(motzkin_count(0, 0, 2) == 3);
    CHECK(motzkin_count(1, 0, 3) == 6);
    CHECK(motzkin_count_positive(0, 0, 1) == 1);
    CHECK(motzkin_count_positive(1, 0, 3) == 2);
    CHECK(motzkin_count_positive(1, 0, 3) * 3 == motzkin_count(1, 0, 3));

    for (int a = 0; a <= 4; ++a)
        for (int b = -2; b <= 4; ++b)
            for (int r = 0; r <= 6; ++r) {
                CHECK(motzkin_count(a, b, r) == brute_motzkin(a, b, r, false));
                CHECK(motzkin_count_positive(a, b, r) == brute_motzkin(a, b, r, true));
            }
}

TEST_CASE("motzkin reflection and cyclic lemma up to 8") {
    for (int a = 1; a <= 8; ++a)
        for (int b = 1; b <= 8; ++b)
            for (int r = 1; r <= 8; ++r)
                CHECK(motzkin_count_positive(a, b, r) ==
                      motzkin_count(a, b, r) - motzkin_count(a, -b, r));
    for (int a = 1; a <= 8; ++a)
        for (int r = 1; r <= 8; ++r)
            CHECK(BigInt(r) * motzkin_count_positive(a, 0, r) ==
                  BigInt(a) * motzkin_count(a, 0, r));
    // the zero-endpoint variant: the first step of such a walk is forced up
    CHECK(motzkin_count_positive(0, 0, 1) == 1);
    for (int r = 2; r <= 8; ++r)
        CHECK(BigInt(r - 1) * motzkin_count_positive(0, 0, r) == motzkin_count(1, 0, r - 1));
}

TEST_CASE("motzkin recurrence and symmetry") {
    for (int a = -3; a <= 3; ++a)
        for (int b = -3; b <= 3; ++b)
            for (int r = 1; r <= 6; ++r) {
                BigInt sum = motzkin_count(a - 1, b, r - 1) + motzkin_count(a, b, r - 1) +
                             motzkin_count(a + 1, b, r - 1);
                CHECK(motzkin_count(a, b, r) == sum);
                CHECK(motzkin_count(a, b, r) == motzkin_count(b, a, r));
            }
}

TEST_CASE("uniform labeled tree sampler at n = 1 and n = 2") {
    Rng rng(23);
    std::map<std::vector<int>, int> freq;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        LabeledTree t = sample_labeled_tree(1, rng);
        freq[t.label]++;
    }
    REQUIRE(freq.size() == 3);
    for (auto& [labels, count] : freq) {
        double expect = draws / 3.0;
        CHECK(std::abs(count - expect) < 5 * std::sqrt(expect));
    }

    // n = 2: 2 plane trees x 9 labelings = 18 classes, keyed by the contour
    std::map<std::pair<std::vector<int>, std::vector<int>>, int> freq2;
    for (int i = 0; i < draws; ++i) {
        LabeledTree t = sample_labeled_tree(2, rng);
        ContourEncoding c = contour_of_tree(t);
        freq2[{c.C, c.L}]++;
    }
    REQUIRE(freq2.size() == 18);
    double expect = draws / 18.0;
    double chi2 = 0;
    for (auto& [key, count] : freq2) chi2 += (count - expect) * (count - expect) / expect;
    // 17 degrees of freedom; bound df + 5 sqrt(2 df)
    CHECK(chi2 < 17 + 5 * std::sqrt(34.0));
}

TEST_CASE("forest sampler respects the plane forest count") {
    // r = 2 trees, 2 edges: (2/(2*2+2)) * binom(6, 2) = 5 shapes
    Rng rng(29);
    MotzkinWalk floor;
    floor.values = {0, 0, 0};
    std::map<std::vector<int>, int> freq;
    const int draws = 50000;
    for (int i = 0; i < draws; ++i) {
        LabeledForest f = sample_labeled_forest(floor, 2, rng);
        // strip labels: key by the contour shape
        for (auto& t : f.trees)
            for (auto& l : t.label) l = 0;
        freq[forest_contour(f)]++;
    }
    REQUIRE(freq.size() == 5);
    double expect = draws / 5.0;
    for (auto& [key, count] : freq) CHECK(std::abs(count - expect) < 6 * std::sqrt(expect));
}
