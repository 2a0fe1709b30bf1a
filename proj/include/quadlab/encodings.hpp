#ifndef QUADLAB_ENCODINGS_HPP
#define QUADLAB_ENCODINGS_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include "quadlab/errors.hpp"
#include "quadlab/planar_map.hpp"
#include "quadlab/rng.hpp"

namespace quadlab {

using BigInt = boost::multiprecision::cpp_int;

/// Rooted plane tree with integer vertex labels; root label 0, labels differ
/// by at most 1 across each edge. Children are ordered.
struct LabeledTree {
    std::vector<int> parent;                 // parent[root] = -1
    std::vector<std::vector<int>> children;  // ordered
    std::vector<int> label;
    int root = 0;

    int vertex_count() const { return static_cast<int>(parent.size()); }
    int edge_count() const { return vertex_count() - 1; }

    void validate() const;
    bool operator==(const LabeledTree& o) const {
        return parent == o.parent && children == o.children && label == o.label && root == o.root;
    }
};

/// Contour and label functions of a labeled tree with n edges.
/// C has length 2n+2 with C[2n+1] = -1; L has length 2n+1.
struct ContourEncoding {
    std::vector<int> C;
    std::vector<int> L;

    int edge_count() const { return (static_cast<int>(C.size()) - 2) / 2; }
};

ContourEncoding contour_of_tree(const LabeledTree& t);
/// Inverse of contour_of_tree; throws MalformedContour.
LabeledTree tree_of_contour(const ContourEncoding& c);

/// Integer walk with increments in {-1, 0, 1}. values has size duration + 1.
struct MotzkinWalk {
    std::vector<int> values;

    int duration() const { return static_cast<int>(values.size()) - 1; }
    void validate() const;
};

/// Ordered sequence of labeled plane trees whose roots sit on a floor walk:
/// floor vertex i (0-based, i < tree count) carries tree i and label
/// floor.values[i]; the last floor vertex is an extra endpoint. Within-tree
/// label increments lie in {-1, 0, 1}; the root of tree i has the floor
/// label. When `terminal_floor_vertex` is false the forest has exactly as
/// many floor labels as trees and no extra endpoint (used by the planted
/// scheme decomposition).
struct LabeledForest {
    std::vector<LabeledTree> trees;
    MotzkinWalk floor;
    bool terminal_floor_vertex = true;

    int tree_count() const { return static_cast<int>(trees.size()); }
    /// Edges distinct from floor edges.
    int tree_edge_count() const;
    /// 2 * tree_edge_count + floor edge count: oriented edges, eq-(18) unit.
    int oriented_edge_count() const;
    void validate() const;
    bool operator==(const LabeledForest& o) const {
        return trees == o.trees && floor.values == o.floor.values &&
               terminal_floor_vertex == o.terminal_floor_vertex;
    }
};

/// Path-valued encoding of a labeled forest. At contour step i, zeta[i] is
/// the length of the ancestral spine from the final floor vertex up to the
/// current vertex, and paths[i][j] is the label of the spine vertex at
/// distance j from that endpoint (so paths[i] has zeta[i]+1 entries and
/// paths[i][zeta[i]] is the current label). zeta equals the forest contour:
/// it starts at r (tree count), first hits r-j when tree j+1 opens, and ends
/// at 0.
struct DiscreteSnake {
    std::vector<int> zeta;
    std::vector<std::vector<int>> paths;

    int step_count() const { return static_cast<int>(zeta.size()); }
    void validate() const;
};

DiscreteSnake snake_of_forest(const LabeledForest& f);
/// Inverse of snake_of_forest; throws MalformedSnake.
LabeledForest forest_of_snake(const DiscreteSnake& s);

/// Contour of a forest: concatenation of the tree contours shifted so the
/// walk starts at r and ends at 0 (the i-th tree floor sits at height r+1-i).
std::vector<int> forest_contour(const LabeledForest& f);
/// Labels along the forest contour.
std::vector<int> forest_labels(const LabeledForest& f);

/// Number of Motzkin walks from a to b with r steps. Exact.
BigInt motzkin_count(int a, int b, int r);
/// Walks that are strictly positive except perhaps at their endpoints.
BigInt motzkin_count_positive(int a, int b, int r);

/// Uniform labeled tree: uniform plane tree with n edges (cycle lemma on a
/// shuffled step multiset, O(n) worst case) with iid uniform {-1,0,1} edge
/// increments. Exactly uniform over the 3^n * Catalan(n) labeled trees.
LabeledTree sample_labeled_tree(int n, Rng& rng);

/// Uniform plane forest with `trees` trees and `edges` non-floor edges,
/// with prescribed floor labels and iid uniform {-1,0,1} tree increments.
LabeledForest sample_labeled_forest(const MotzkinWalk& floor, int edges, Rng& rng);

/// Plane tree from a Dyck word (+1/-1 steps, partial sums >= 0, total 0).
LabeledTree tree_of_dyck(const std::vector<int>& steps);

/// The tree as a one-face half-edge map. Darts are indexed so the phi-cycle
/// starting at the root dart is the contour order; dart 2i is the downward
/// (parent-to-child) dart of the i-th edge in contour discovery order.
HalfEdgeMap tree_to_map(const LabeledTree& t);
/// Vertex labels of tree_to_map(t), indexed by map vertex id.
std::vector<int> tree_map_labels(const LabeledTree& t, const HalfEdgeMap& m);

}  // namespace quadlab

#endif
