#include "quadlab/encodings.hpp"

#include <algorithm>
#include <cstdlib>

namespace quadlab {

namespace {

// Fills labels of all non-root vertices: parent label plus a uniform
// {-1,0,1} increment, in preorder.
void assign_labels_preorder(LabeledTree& t, Rng& rng) {
    std::vector<int> stack = {t.root};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (auto it = t.children[v].rbegin(); it != t.children[v].rend(); ++it) {
            t.label[*it] = t.label[v] + rng.uniform_int(-1, 1);
            stack.push_back(*it);
        }
    }
}

}  // namespace

void LabeledTree::validate() const {
    int n = vertex_count();
    if (n == 0) throw Error("empty tree");
    if (static_cast<int>(children.size()) != n || static_cast<int>(label.size()) != n)
        throw Error("tree arrays disagree");
    if (root < 0 || root >= n || parent[root] != -1) throw Error("bad tree root");
    int edges = 0;
    for (int v = 0; v < n; ++v) {
        for (int c : children[v]) {
            if (c < 0 || c >= n || parent[c] != v) throw Error("bad child link");
            if (std::abs(label[c] - label[v]) > 1) throw Error("label increment exceeds 1");
            ++edges;
        }
    }
    if (edges != n - 1) throw Error("tree edge count mismatch");
}

void MotzkinWalk::validate() const {
    if (values.empty()) throw Error("walk must have at least one value");
    for (std::size_t i = 1; i < values.size(); ++i)
        if (std::abs(values[i] - values[i - 1]) > 1) throw Error("walk increment exceeds 1");
}

int LabeledForest::tree_edge_count() const {
    int n = 0;
    for (const auto& t : trees) n += t.edge_count();
    return n;
}

int LabeledForest::oriented_edge_count() const {
    int floor_edges = terminal_floor_vertex ? tree_count() : tree_count() - 1;
    return 2 * tree_edge_count() + floor_edges;
}

void LabeledForest::validate() const {
    floor.validate();
    int expected = terminal_floor_vertex ? tree_count() + 1 : tree_count();
    if (static_cast<int>(floor.values.size()) != expected)
        throw Error("floor walk length does not match tree count");
    for (int i = 0; i < tree_count(); ++i) {
        trees[i].validate();
        if (trees[i].label[trees[i].root] != floor.values[i])
            throw Error("tree root label differs from floor label");
    }
}

ContourEncoding contour_of_tree(const LabeledTree& t) {
    t.validate();
    ContourEncoding out;
    int n = t.edge_count();
    out.C.reserve(2 * n + 2);
    out.L.reserve(2 * n + 1);
    // Iterative contour: at each vertex, remember the next child to explore.
    std::vector<std::size_t> next(t.vertex_count(), 0);
    int v = t.root;
    int h = 0;
    out.C.push_back(0);
    out.L.push_back(t.label[v]);
    while (true) {
        if (next[v] < t.children[v].size()) {
            v = t.children[v][next[v]++];
            ++h;
        } else if (v != t.root) {
            v = t.parent[v];
            --h;
        } else {
            break;
        }
        out.C.push_back(h);
        out.L.push_back(t.label[v]);
    }
    out.C.push_back(-1);
    return out;
}

LabeledTree tree_of_contour(const ContourEncoding& c) {
    std::size_t m = c.C.size();
    if (m < 2 || m % 2 != 0 || c.L.size() + 1 != m)
        throw MalformedContour("contour/label lengths must be 2n+2 and 2n+1");
    int steps = static_cast<int>(m) - 2;  // 2n
    if (c.C[0] != 0 || c.C[steps] != 0 || c.C[steps + 1] != -1)
        throw MalformedContour("contour must start at 0, end with 0, -1");
    for (int i = 0; i < steps; ++i) {
        if (std::abs(c.C[i + 1] - c.C[i]) != 1) throw MalformedContour("contour step not +-1");
        if (c.C[i] < 0) throw MalformedContour("contour dips below 0");
        if (std::abs(c.L[i + 1] - c.L[i]) > 1) throw MalformedContour("label step exceeds 1");
    }

    LabeledTree t;
    t.parent.push_back(-1);
    t.children.push_back({});
    t.label.push_back(c.L[0]);
    t.root = 0;
    std::vector<int> stack = {0};
    for (int i = 0; i < steps; ++i) {
        if (c.C[i + 1] > c.C[i]) {
            int v = t.vertex_count();
            t.parent.push_back(stack.back());
            t.children.push_back({});
            t.label.push_back(c.L[i + 1]);
            t.children[stack.back()].push_back(v);
            stack.push_back(v);
        } else {
            stack.pop_back();
            if (stack.empty()) throw MalformedContour("contour returns above the root");
            if (t.label[stack.back()] != c.L[i + 1])
                throw MalformedContour("labels disagree on revisit");
        }
    }
    return t;
}

std::vector<int> forest_contour(const LabeledForest& f) {
    int r = f.tree_count();
    std::vector<int> out;
    for (int j = 1; j <= r; ++j) {
        ContourEncoding c = contour_of_tree(f.trees[j - 1]);
        int shift = r + 1 - j;
        for (std::size_t i = 0; i + 1 < c.C.size(); ++i) out.push_back(c.C[i] + shift);
    }
    if (f.terminal_floor_vertex) out.push_back(0);
    return out;
}

std::vector<int> forest_labels(const LabeledForest& f) {
    std::vector<int> out;
    for (const auto& t : f.trees) {
        ContourEncoding c = contour_of_tree(t);
        for (int x : c.L) out.push_back(x);
    }
    if (f.terminal_floor_vertex) out.push_back(f.floor.values.back());
    return out;
}

void DiscreteSnake::validate() const {
    if (zeta.empty() || paths.size() != zeta.size()) throw MalformedSnake("empty or ragged snake");
    int r = zeta[0];
    if (r < 0 || zeta.back() != 0) throw MalformedSnake("snake must run from r to 0");
    for (std::size_t i = 0; i < zeta.size(); ++i) {
        if (static_cast<int>(paths[i].size()) != zeta[i] + 1)
            throw MalformedSnake("path length differs from zeta+1");
        if (i == 0) continue;
        int dz = zeta[i] - zeta[i - 1];
        if (dz != 1 && dz != -1) throw MalformedSnake("zeta step not +-1");
        int common = std::min(zeta[i], zeta[i - 1]) + 1;
        for (int j = 0; j < common; ++j)
            if (paths[i][j] != paths[i - 1][j]) throw MalformedSnake("spine prefix changed");
        if (dz == 1 && std::abs(paths[i][zeta[i]] - paths[i - 1][zeta[i - 1]]) > 1)
            throw MalformedSnake("label step exceeds 1");
    }
}

DiscreteSnake snake_of_forest(const LabeledForest& f) {
    f.validate();
    if (!f.terminal_floor_vertex)
        throw Error("snake encoding requires a forest with terminal floor vertex");
    int r = f.tree_count();
    DiscreteSnake s;
    // Spine for tree j starts as the floor labels M(r), M(r-1), ..., M(j-1).
    for (int j = 1; j <= r; ++j) {
        std::vector<int> spine;
        for (int m = r; m >= j - 1; --m) spine.push_back(f.floor.values[m]);
        const LabeledTree& t = f.trees[j - 1];
        std::vector<std::size_t> next(t.vertex_count(), 0);
        int v = t.root;
        s.zeta.push_back(static_cast<int>(spine.size()) - 1);
        s.paths.push_back(spine);
        while (true) {
            if (next[v] < t.children[v].size()) {
                v = t.children[v][next[v]++];
                spine.push_back(t.label[v]);
            } else if (v != t.root) {
                v = t.parent[v];
                spine.pop_back();
            } else {
                break;
            }
            s.zeta.push_back(static_cast<int>(spine.size()) - 1);
            s.paths.push_back(spine);
        }
    }
    s.zeta.push_back(0);
    s.paths.push_back({f.floor.values[r]});
    return s;
}

LabeledForest forest_of_snake(const DiscreteSnake& s) {
    s.validate();
    int r = s.zeta[0];
    LabeledForest f;
    f.terminal_floor_vertex = true;
    f.floor.values.assign(r + 1, 0);
    // M(j) is read at the first time zeta hits r - j.
    std::vector<int> first_hit(r + 1, -1);
    for (std::size_t i = 0; i < s.zeta.size(); ++i) {
        int z = s.zeta[i];
        if (z <= r && first_hit[z] < 0) first_hit[z] = static_cast<int>(i);
    }
    for (int j = 0; j <= r; ++j) {
        int i = first_hit[r - j];
        if (i < 0) throw MalformedSnake("zeta never reaches level r - j");
        f.floor.values[j] = s.paths[i][r - j];
    }

    // Tree j occupies steps [first_hit[r+1-j], first_hit[r-j]).
    for (int j = 1; j <= r; ++j) {
        int lo = first_hit[r + 1 - j];
        int hi = first_hit[r - j];
        int base = r + 1 - j;
        LabeledTree t;
        t.parent.push_back(-1);
        t.children.push_back({});
        t.label.push_back(s.paths[lo][base]);
        t.root = 0;
        std::vector<int> stack = {0};
        for (int i = lo + 1; i < hi; ++i) {
            if (s.zeta[i] > s.zeta[i - 1]) {
                int v = t.vertex_count();
                t.parent.push_back(stack.back());
                t.children.push_back({});
                t.label.push_back(s.paths[i][s.zeta[i]]);
                t.children[stack.back()].push_back(v);
                stack.push_back(v);
            } else {
                stack.pop_back();
                if (stack.empty()) throw MalformedSnake("tree contour underflow");
            }
        }
        if (stack.size() != 1) throw MalformedSnake("tree contour does not close");
        f.trees.push_back(std::move(t));
    }
    f.validate();
    return f;
}

BigInt motzkin_count(int a, int b, int r) {
    if (r < 0) throw Error("negative duration");
    int d = std::abs(b - a);
    if (d > r) return 0;
    // Trinomial DP on the displacement, T(t, x) for |x| <= t.
    std::vector<BigInt> row(2 * r + 1, 0);
    row[r] = 1;  // offset r = displacement 0
    for (int t = 1; t <= r; ++t) {
        std::vector<BigInt> next(2 * r + 1, 0);
        for (int x = r - t; x <= r + t; ++x) {
            BigInt v = row[x];
            if (x > 0) v += row[x - 1];
            if (x + 1 <= 2 * r) v += row[x + 1];
            next[x] = v;
        }
        row.swap(next);
    }
    return row[r + (b - a)];
}

BigInt motzkin_count_positive(int a, int b, int r) {
    if (r < 0) throw Error("negative duration");
    if (r == 0) return a == b ? 1 : 0;
    if (r == 1) return std::abs(b - a) <= 1 ? 1 : 0;
    // DP over interior positions, which must be >= 1. Values live in
    // [1, max(a,1) + r].
    int hi = std::max(a, 1) + r;
    std::vector<BigInt> cur(hi + 2, 0);
    for (int x = 1; x <= hi; ++x)
        if (std::abs(x - a) <= 1) cur[x] = 1;
    for (int i = 2; i <= r - 1; ++i) {
        std::vector<BigInt> next(hi + 2, 0);
        for (int x = 1; x <= hi; ++x) {
            BigInt v = cur[x];
            v += cur[x - 1];
            if (x + 1 <= hi) v += cur[x + 1];
            next[x] = v;
        }
        cur.swap(next);
    }
    BigInt total = 0;
    for (int x = 1; x <= hi; ++x)
        if (std::abs(b - x) <= 1) total += cur[x];
    return total;
}

LabeledTree tree_of_dyck(const std::vector<int>& steps) {
    LabeledTree t;
    t.parent.push_back(-1);
    t.children.push_back({});
    t.label.push_back(0);
    t.root = 0;
    std::vector<int> stack = {0};
    for (int s : steps) {
        if (s == 1) {
            int v = t.vertex_count();
            t.parent.push_back(stack.back());
            t.children.push_back({});
            t.label.push_back(0);
            t.children[stack.back()].push_back(v);
            stack.push_back(v);
        } else {
            stack.pop_back();
            if (stack.empty()) throw Error("dyck word underflow");
        }
    }
    if (stack.size() != 1) throw Error("dyck word does not close");
    return t;
}

LabeledTree sample_labeled_tree(int n, Rng& rng) {
    if (n < 1) throw Error("tree needs at least one edge");
    // Cycle lemma: a uniform arrangement of n up-steps and n+1 down-steps has
    // a unique rotation whose proper prefix sums stay >= 0; dropping its last
    // step gives a uniform Dyck word.
    std::vector<int> steps(2 * n + 1, -1);
    for (int i = 0; i < n; ++i) steps[i] = 1;
    rng.shuffle(steps);
    int sum = 0, min_sum = 1, min_pos = -1;
    for (int i = 0; i < 2 * n + 1; ++i) {
        sum += steps[i];
        if (sum < min_sum) {
            min_sum = sum;
            min_pos = i;
        }
    }
    std::vector<int> rotated;
    rotated.reserve(2 * n);
    for (int i = 1; i <= 2 * n; ++i) rotated.push_back(steps[(min_pos + i) % (2 * n + 1)]);

    LabeledTree t = tree_of_dyck(rotated);
    assign_labels_preorder(t, rng);
    return t;
}

LabeledForest sample_labeled_forest(const MotzkinWalk& floor, int edges, Rng& rng) {
    floor.validate();
    int r = static_cast<int>(floor.values.size()) - 1;
    if (r < 1) throw Error("forest needs at least one tree");
    // Cycle lemma for forests: in a uniform arrangement of `edges` ups and
    // edges+r downs (prefix sums S), the valid rotation starts are the first
    // hits of the values M, M+1, ..., M+r-1, where M is the minimum of S.
    // Picking one uniformly yields a uniform forest word with r trees.
    int m = 2 * edges + r;
    std::vector<int> steps(m, -1);
    for (int i = 0; i < edges; ++i) steps[i] = 1;
    rng.shuffle(steps);
    std::vector<int> first_hit(m + 1, -1);  // first_hit[-v] for v in [-m, -1]
    int sum = 0, min_sum = 0;
    for (int i = 0; i < m; ++i) {
        sum += steps[i];
        if (sum < min_sum) {
            min_sum = sum;
            first_hit[-sum] = i;
        }
    }
    int pick = -min_sum - static_cast<int>(rng.below(static_cast<std::uint64_t>(r)));
    int start = first_hit[pick];  // rotation begins right after this position

    LabeledForest f;
    f.floor = floor;
    f.terminal_floor_vertex = true;
    std::vector<int> cur;
    int level = 0;
    for (int i = 1; i <= m; ++i) {
        int s = steps[(start + i) % m];
        level += s;
        if (level < 0) {  // a floor step: close the current tree
            LabeledTree t = tree_of_dyck(cur);
            cur.clear();
            level = 0;
            f.trees.push_back(std::move(t));
        } else {
            cur.push_back(s);
        }
    }
    if (static_cast<int>(f.trees.size()) != r) throw Error("forest split failed");
    for (int j = 0; j < r; ++j) {
        f.trees[j].label[f.trees[j].root] = floor.values[j];
        assign_labels_preorder(f.trees[j], rng);
    }
    return f;
}

HalfEdgeMap tree_to_map(const LabeledTree& t) {
    t.validate();
    int n = t.edge_count();
    if (n < 1) throw Error("a map needs at least one edge");
    // Assign edge ids in contour discovery order; down-dart 2i, up-dart 2i+1.
    std::vector<int> down_dart(t.vertex_count(), -1);  // dart from parent into v
    int next_edge = 0;
    std::vector<int> alpha(2 * n), sigma(2 * n, -1);
    {
        std::vector<std::pair<int, std::size_t>> stack = {{t.root, 0}};
        while (!stack.empty()) {
            auto& [v, idx] = stack.back();
            if (idx < t.children[v].size()) {
                int c = t.children[v][idx++];
                int e = next_edge++;
                down_dart[c] = 2 * e;
                alpha[2 * e] = 2 * e + 1;
                alpha[2 * e + 1] = 2 * e;
                stack.push_back({c, 0});
            } else {
                stack.pop_back();
            }
        }
    }
    // Rotations: at v, (child_1, ..., child_m, up) with sigma closing the cycle.
    for (int v = 0; v < t.vertex_count(); ++v) {
        std::vector<int> rot;
        for (int c : t.children[v]) rot.push_back(down_dart[c]);
        if (v != t.root) rot.push_back(alpha[down_dart[v]]);
        if (rot.empty()) throw Error("isolated vertex in tree map");
        for (std::size_t i = 0; i < rot.size(); ++i) sigma[rot[i]] = rot[(i + 1) % rot.size()];
    }
    return build_map(alpha, sigma, down_dart[t.children[t.root][0]]);
}

std::vector<int> tree_map_labels(const LabeledTree& t, const HalfEdgeMap& m) {
    // Recompute the dart -> tree-vertex correspondence of tree_to_map.
    std::vector<int> dart_vertex(m.dart_count(), -1);
    int next_edge = 0;
    std::vector<std::pair<int, std::size_t>> stack = {{t.root, 0}};
    std::vector<int> down_dart(t.vertex_count(), -1);
    while (!stack.empty()) {
        auto& [v, idx] = stack.back();
        if (idx < t.children[v].size()) {
            int c = t.children[v][idx++];
            int e = next_edge++;
            down_dart[c] = 2 * e;
            dart_vertex[2 * e] = v;
            dart_vertex[2 * e + 1] = c;
            stack.push_back({c, 0});
        } else {
            stack.pop_back();
        }
    }
    std::vector<int> labels(m.vertex_count(), 0);
    for (int d = 0; d < m.dart_count(); ++d) labels[m.vertex_of(d)] = t.label[dart_vertex[d]];
    return labels;
}

}  // namespace quadlab
