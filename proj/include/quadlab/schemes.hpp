#ifndef QUADLAB_SCHEMES_HPP
#define QUADLAB_SCHEMES_HPP

#include <vector>

#include "quadlab/encodings.hpp"
#include "quadlab/multipoint.hpp"
#include "quadlab/planar_map.hpp"

namespace quadlab {

enum class VertexClass { kNull = 0, kInner = 1, kOuter = 2 };  // V_N, V_I, V_O
enum class EdgeClass { kNull = 0, kInner = 1, kOuter = 2 };    // E_N, E_I, E_O

/// Map with k+1 named faces, minimum degree 3 (one exempt degree-1 vertex
/// when planted) and every inner face sharing a vertex with f0. Stored in
/// canonical dart labeling.
struct PreScheme {
    HalfEdgeMap m;
    std::vector<int> face_name;
    bool planted = false;

    bool dominant() const;
};

/// Scheme: pre-scheme with null-vertex splits and markings (see
/// enumerate_schemes). Degree-2 vertices arise only from edge splits and are
/// always null. Edges are indexed by their smaller dart.
struct Scheme {
    HalfEdgeMap m;
    std::vector<int> face_name;
    std::vector<char> null_vertex;  // per vertex
    bool planted = false;

    int k() const { return m.face_count() - 1; }
    int face_with_name(int name) const;
    int edge_count() const { return m.edge_count(); }
    /// Edge id of a dart (edges numbered by smaller dart, ascending).
    int edge_of(int dart) const { return edge_index_[dart]; }
    /// Smaller dart of edge id e.
    int edge_dart(int e) const { return edge_dart_[e]; }

    VertexClass vertex_class(int v) const { return vertex_class_[v]; }
    EdgeClass edge_class(int e) const { return edge_class_[e]; }
    bool thin(int e) const { return thin_[e]; }
    /// Canonical orientation: E_N edges point at their null vertex with
    /// degree-2 priority; the planted pendant edge points at v**; remaining
    /// choices take the smaller dart.
    int canonical_dart(int e) const { return canon_dart_[e]; }
    int v_star_star() const { return v_star_star_; }
    bool dominant() const;

    CanonicalCode code() const;

    // filled by make_scheme
    std::vector<int> edge_index_, edge_dart_, canon_dart_;
    std::vector<VertexClass> vertex_class_;
    std::vector<EdgeClass> edge_class_;
    std::vector<char> thin_;
    int v_star_star_ = -1;
};

/// Validates the scheme axioms, derives the vertex/edge classes, thin edges
/// and the orientation convention, and canonicalizes the dart labeling.
/// When `relabel_out` is given it receives the input-dart -> canonical-dart
/// permutation.
Scheme make_scheme(const HalfEdgeMap& m, const std::vector<int>& face_name,
                   const std::vector<char>& null_vertex, bool planted,
                   std::vector<int>* relabel_out = nullptr);

/// All pre-schemes with k+1 named faces, duplicate-free (unrooted equality).
std::vector<PreScheme> enumerate_preschemes(int k, bool dominant_only, bool planted = false);
/// Pre-scheme count after forgetting the names of the inner faces.
int count_preschemes_inner_forgotten(int k, bool dominant_only);

/// All schemes with k+1 named faces, duplicate-free (unrooted equality).
std::vector<Scheme> enumerate_schemes(int k, bool dominant_only, bool planted);

/// Labeling of the scheme vertices: 0 on V_N, positive on V_I.
struct AdmissibleLabeling {
    std::vector<int> ell;
};

/// Motzkin walks indexed by scheme edge, read along the canonical
/// orientation. walk[e].values.front() = ell(e-), back() = ell(e+).
struct WalkNetwork {
    std::vector<MotzkinWalk> walks;

    int duration(int e) const { return walks[e].duration(); }
};

/// Full decomposition of a labeled map: scheme, labeling, walk network and
/// one labeled forest per scheme dart (the forest grafted to the left of
/// that oriented edge; its floor labels follow the walk read in the dart's
/// direction). For plain decompositions the root is the marked oriented
/// forest edge; planted decompositions track the root through the pendant
/// edge instead.
struct SchemeDecomposition {
    Scheme scheme;
    AdmissibleLabeling labeling;
    WalkNetwork network;
    std::vector<LabeledForest> forests;  // per scheme dart
    int marked_dart = -1;                // plain only: scheme dart
    int marked_forest_edge = -1;         // plain only: index in forest edge order

    bool planted() const { return scheme.planted; }
};

/// Checks all component compatibility constraints; throws
/// IncompatibleComponents naming the failing one.
void validate_decomposition(const SchemeDecomposition& d);

/// Oriented edges of a forest in contour order: tree 0 darts (contour
/// order), floor dart 0, tree 1 darts, floor dart 1, ... Returns the count;
/// used to address the marked edge.
int forest_oriented_edges(const LabeledForest& f);

SchemeDecomposition decompose(const LabeledMap& m);
LabeledMap reconstruct(const SchemeDecomposition& d);

SchemeDecomposition decompose_planted(const LabeledMap& m);
LabeledMap reconstruct_planted(const SchemeDecomposition& d);

/// Exact number of rooted labeled maps in LM^(k+1) with n edges inducing
/// this (plain) scheme: 2 sum_l sum_r 3^(n-r) r binom(2n, n-r) prod_e W(e).
BigInt count_labeled_maps_exact(const Scheme& s, int n);

/// Random valid decomposition on the scheme: small random admissible
/// labeling, compatible walks (rejection-sampled under the class
/// constraints) and forests. For tests and the verify subcommand; makes no
/// uniformity promise.
SchemeDecomposition random_decomposition(const Scheme& s, Rng& rng, int max_duration = 4,
                                         int max_tree_edges = 3);

BigInt binomial(int n, int k);

}  // namespace quadlab

#endif
