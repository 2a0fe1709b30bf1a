#ifndef QUADLAB_METRICS_HPP
#define QUADLAB_METRICS_HPP

#include <vector>

#include "quadlab/encodings.hpp"
#include "quadlab/planar_map.hpp"

namespace quadlab {

struct DistanceField {
    int source = -1;
    std::vector<int> dist;
};

/// Exact graph distances from `source`, O(V + E).
DistanceField bfs(const HalfEdgeMap& m, int source);

/// d(x,y) + d(y,z) == d(x,z); order-sensitive in the middle term.
bool aligned(const Quadrangulation& q, int x, int y, int z);

/// True iff every geodesic chain from a to b meets B = {w : d(v0, w) < radius}.
/// Decided by one shortest-path run in the ball-deleted graph.
bool all_geodesics_hit_ball(const Quadrangulation& q, int a, int b, int center, double radius);

/// True iff some geodesic from a to b avoids every vertex in `forbidden`
/// (endpoints included in the check).
bool geodesic_avoiding_exists(const Quadrangulation& q, int a, int b,
                              const std::vector<char>& forbidden);

/// Discrete geodesic-star events. `n` is the face count used in the
/// (8n/9)^{1/4} rescaling; eps/beta are the continuum-scale parameters.
bool event_A1(const Quadrangulation& q, int v0, int v1, int v2, double eps, double beta, int n);
bool event_A2(const Quadrangulation& q, int v0, int v1, int v2, int v3, double eps, int n);

/// Star points along the chosen v1-v2 geodesic, with respect to v3: vertex y
/// on the geodesic is flagged iff no other vertex y' of the geodesic
/// satisfies d(v3,y') + d(y',y) = d(v3,y).
struct StarReport {
    std::vector<int> geodesic;       // vertex chain from v1 to v2
    std::vector<char> is_star_point; // per chain entry
    std::vector<int> star_points() const;
};

StarReport star_points_on_geodesic(const Quadrangulation& q, int v1, int v2, int v3);

/// Greedy cover of `points` by open balls of the given radius centered at
/// points; upper-bounds the optimal center-in-set cover.
int covering_number(const std::vector<int>& points, const Quadrangulation& q, double radius);

struct CoverBracket {
    int greedy = 0;
    int packing_lower = 0;  // maximal 2R-separated subset found greedily
    int exact = -1;         // minimum cover, computed for <= 20 points
};

CoverBracket covering_bracket(const std::vector<int>& points, const Quadrangulation& q,
                              double radius);

/// Greedy separation along a vertex chain: returns at least
/// floor(d(ends)/(2 eta)) + 1 chain vertices with pairwise distance >= 2 eta.
std::vector<int> separated_points(const std::vector<int>& path, const Quadrangulation& q,
                                  double eta);

/// Exact pseudo-metrics computed on a contour encoding. Positions run over
/// the 2n cyclic contour steps; classes are the {d_e = 0} equivalence
/// classes (the tree vertices).
struct DiscretePseudoMetrics {
    int positions = 0;                       // 2n
    std::vector<int> position_class;        // position -> class id
    std::vector<std::vector<int>> d_e;      // tree pseudo-distance, per position pair
    std::vector<std::vector<int>> d_circ;   // D°, per position pair
    std::vector<std::vector<int>> d_circ_class;  // D° minimized over class representatives
    std::vector<std::vector<int>> d_star;   // D*, per class pair
    int s_star = 0;                          // first position of the minimal label
    std::vector<int> labels;                 // L restricted to positions

    int class_count() const { return static_cast<int>(d_star.size()); }
};

/// Throws TooLarge beyond 2000 contour steps (the tables are quadratic).
DiscretePseudoMetrics discrete_pseudo_metrics(const ContourEncoding& c);

}  // namespace quadlab

#endif
