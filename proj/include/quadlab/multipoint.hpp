#ifndef QUADLAB_MULTIPOINT_HPP
#define QUADLAB_MULTIPOINT_HPP

#include <vector>

#include "quadlab/planar_map.hpp"

namespace quadlab {

/// Rooted map with k+1 named faces and integer vertex labels differing by at
/// most 1 along edges. face_name[f] is the name (0..k) of face id f.
struct LabeledMap {
    HalfEdgeMap m;
    std::vector<int> labels;
    std::vector<int> face_name;

    int k() const { return m.face_count() - 1; }
    int face_with_name(int name) const;
    void validate() const;  // throws NotLabeledMap

    /// Vertices incident to both named faces a and b.
    std::vector<int> common_vertices(int name_a, int name_b) const;
    /// Membership in LM^(k+1): V(f0 ∩ fi) nonempty with minimum label 0,
    /// for every i >= 1.
    bool in_lm() const;
};

/// Canonical code capturing root, face names and labels.
CanonicalCode labeled_map_code(const LabeledMap& lm);

struct DelayVector {
    std::vector<int> tau;
};

struct DelayedQuadrangulation {
    Quadrangulation q;
    std::vector<int> v;  // k+1 distinct vertex ids
    DelayVector tau;
};

/// Both delay conditions: |tau_i - tau_j| < d(v_i, v_j) and
/// d(v_i, v_j) + tau_i - tau_j even, for all pairs. BFS distances.
bool check_delays(const Quadrangulation& q, const std::vector<int>& v,
                  const std::vector<int>& tau);

/// tau_0 = -r', tau_i = -d(v_0, v_i) + r'.
DelayVector delays_for_star(const Quadrangulation& q, const std::vector<int>& v, int r_prime);

/// Geodesic r-star test for (q, v): a vertex at distance >= r from v_0 lies
/// on geodesics toward at most one v_i, no three marked vertices are aligned
/// in any order, and min d(v_0, v_i) >= 3r.
bool is_geodesic_star(const Quadrangulation& q, const std::vector<int>& v, int r);

/// Canonical code of a rooted delayed quadrangulation (marks and delays
/// included).
CanonicalCode delayed_quad_code(const DelayedQuadrangulation& dq);

enum class RootChoice { kForward = 0, kReversed = 1 };

/// Output of the reverse construction, with enough metadata to answer
/// successor-chain and liquid queries. Arcs are indexed by the corner (dart)
/// of the input map they were drawn from; arc c owns q-darts 2c (outgoing)
/// and 2c+1 (incoming).
struct PhiResult {
    DelayedQuadrangulation dq;
    std::vector<int> successor;      // per corner: successor corner, or -1 for the sink
    std::vector<int> corner_face;    // per corner: face NAME of its face
    std::vector<int> vertex_in_q;    // input vertex id -> q vertex id
    std::vector<int> sink_vertex;    // face name -> q vertex id of v_i
    std::vector<int> q_labels;       // per q vertex: label (l(v_i) = tau_i)
    std::vector<int> q_dart_corner;  // per q dart: owning corner (= dart/2)
};

/// Reverse multi-pointed construction: adds a sink v_i inside each face,
/// draws an arc from every corner to its successor, and returns the arc map.
/// The root of q is the arc drawn from the root corner of m, oriented by
/// `choice`. Input must be a valid labeled map; LM membership is not
/// required. Throws NotLabeledMap / ArcPlanarityFailure.
PhiResult phi_reverse(const LabeledMap& lm, RootChoice choice);

/// First corner after `corner` in facial order with label one less, or -1
/// when the successor is the sink of the face.
int successor(const LabeledMap& lm, int corner);

/// Vertex chain of the successor (leftmost geodesic) chain from the given
/// corner down to its sink, in q vertex ids.
std::vector<int> leftmost_geodesic(const PhiResult& pr, int corner);

/// Assignment of every label-decreasing q dart to its source index.
struct LiquidPartition {
    std::vector<int> source;  // per q dart: face name, or -1 for increasing darts
};

LiquidPartition liquid_partition(const PhiResult& pr);

/// Every rooted labeled map in LM^(k+1) with n edges (all rootings, all face
/// namings, all admissible labelings).
std::vector<LabeledMap> enumerate_labeled_maps(int k, int n);

/// Preimage of (q, v, tau^(r')) under the reverse construction, located by
/// exhaustive matching. Throws NotGeodesicStar if (q, v) is not in G(r, k),
/// TooLarge beyond the oracle bound (n <= 5).
LabeledMap star_to_labeled_map(const Quadrangulation& q, const std::vector<int>& v, int r,
                               int r_prime);

}  // namespace quadlab

#endif
