#ifndef QUADLAB_CVS_HPP
#define QUADLAB_CVS_HPP

#include <cstdint>

#include "quadlab/encodings.hpp"
#include "quadlab/multipoint.hpp"

namespace quadlab {

/// Quadrangulation with a marked vertex and the label (distance) profile:
/// d(v_star, v) = label(v) - min label + 1 on the other vertices.
struct PointedQuadrangulation {
    Quadrangulation q;
    int v_star = -1;
    std::vector<int> vertex_labels;  // per q vertex; label(v_star) = min - 1
};

/// k = 0 specialization of the reverse multi-pointed construction: labeled
/// tree -> pointed quadrangulation with n faces. The root of q is the arc
/// drawn from the tree's root corner, oriented by `choice`; either choice
/// preserves uniformity.
PointedQuadrangulation cvs_reverse(const LabeledTree& t, RootChoice choice);

/// The same construction with the full metadata (successors, sink, labels).
PhiResult cvs_reverse_full(const LabeledTree& t, RootChoice choice);

/// Uniform pointed rooted quadrangulation with n faces, O(n).
PointedQuadrangulation sample_quadrangulation(int n, std::uint64_t seed);
PointedQuadrangulation sample_quadrangulation(int n, Rng& rng);

/// #Q_n = 2 * 3^n * binom(2n, n) / ((n+1)(n+2)), exact.
BigInt count_quadrangulations(int n);

}  // namespace quadlab

#endif
