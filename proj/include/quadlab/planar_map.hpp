#ifndef QUADLAB_PLANAR_MAP_HPP
#define QUADLAB_PLANAR_MAP_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "quadlab/errors.hpp"

namespace quadlab {

/// Rooted combinatorial map on the sphere, stored as a pair of permutations
/// on darts (oriented edges).
///
/// Orientation convention, fixed once for the whole library:
///   - alpha pairs the two darts of each edge (fixed-point-free involution);
///   - sigma is the rotation around the origin vertex of each dart;
///   - face cycles are the orbits of phi = sigma∘alpha, and face(d) is the
///     face lying to the left of d;
///   - the corner of dart d is the angular sector at its origin between
///     sigma^{-1}(d) and d, so it belongs to face(d); the facial order of
///     the corners of a face is its phi-cycle.
///
/// Vertices are the orbits of sigma, numbered by smallest contained dart;
/// same for faces. Instances are immutable after construction.
class HalfEdgeMap {
public:
    HalfEdgeMap() = default;

    int dart_count() const { return static_cast<int>(alpha_.size()); }
    int edge_count() const { return dart_count() / 2; }
    int vertex_count() const { return vertex_orbit_count_; }
    int face_count() const { return face_orbit_count_; }
    int root() const { return root_; }

    int alpha(int d) const { return alpha_[d]; }
    int sigma(int d) const { return sigma_[d]; }
    int sigma_inv(int d) const { return sigma_inv_[d]; }
    int phi(int d) const { return sigma_[alpha_[d]]; }

    int vertex_of(int d) const { return vertex_of_[d]; }
    int face_of(int d) const { return face_of_[d]; }

    int degree(int v) const { return vertex_degree_[v]; }
    int face_degree(int f) const { return face_degree_[f]; }

    /// One representative dart per vertex / face (the smallest).
    int vertex_dart(int v) const { return vertex_dart_[v]; }
    int face_dart(int f) const { return face_dart_[f]; }

    const std::vector<int>& alpha_perm() const { return alpha_; }
    const std::vector<int>& sigma_perm() const { return sigma_; }

    /// Darts around vertex v in sigma order, starting at vertex_dart(v).
    std::vector<int> darts_of_vertex(int v) const;
    /// Face cycle of face f in facial (phi) order, starting at face_dart(f).
    std::vector<int> face_cycle(int f) const;
    /// All face cycles, indexed by face id.
    std::vector<std::vector<int>> face_cycles() const;

    /// Adjacency: vertex at the other end of dart d.
    int head_vertex(int d) const { return vertex_of_[alpha_[d]]; }

    HalfEdgeMap with_root(int new_root) const;

    bool operator==(const HalfEdgeMap& o) const {
        return alpha_ == o.alpha_ && sigma_ == o.sigma_ && root_ == o.root_;
    }

    friend HalfEdgeMap build_map(std::vector<int> alpha, std::vector<int> sigma, int root);

private:
    void index_orbits();

    std::vector<int> alpha_, sigma_, sigma_inv_;
    std::vector<int> vertex_of_, face_of_;
    std::vector<int> vertex_dart_, face_dart_;
    std::vector<int> vertex_degree_, face_degree_;
    int vertex_orbit_count_ = 0, face_orbit_count_ = 0;
    int root_ = 0;
};

/// Validates and indexes a map. Throws NotInvolution, Disconnected or
/// NonPlanar (Euler characteristic != 2).
HalfEdgeMap build_map(std::vector<int> alpha, std::vector<int> sigma, int root);

/// A map all of whose faces have degree 4. The vertex graph is bipartite;
/// the 2-coloring is computed and kept.
class Quadrangulation {
public:
    Quadrangulation() = default;
    explicit Quadrangulation(HalfEdgeMap m);

    const HalfEdgeMap& map() const { return map_; }
    int face_count() const { return map_.face_count(); }
    /// Bipartite class of each vertex (0/1, root vertex is 0).
    const std::vector<int>& coloring() const { return color_; }

private:
    HalfEdgeMap map_;
    std::vector<int> color_;
};

/// check_quadrangulation: throws FaceDegreeNot4 with the offending face.
Quadrangulation check_quadrangulation(const HalfEdgeMap& m);

/// Canonical code of a rooted map: a BFS relabeling from the root turns
/// (alpha, sigma) into an integer sequence; two rooted maps are equivalent
/// iff their codes are equal. Optional dart colors (e.g. face names, marked
/// vertices) refine the equivalence. O(darts).
struct CanonicalCode {
    std::vector<int> code;
    bool operator==(const CanonicalCode& o) const { return code == o.code; }
    bool operator<(const CanonicalCode& o) const { return code < o.code; }
};

CanonicalCode canonical_code(const HalfEdgeMap& m);
CanonicalCode canonical_code(const HalfEdgeMap& m, const std::vector<int>& dart_color);

/// Canonical relabeling permutation: new_id[d] = BFS label of dart d when
/// rooted at `root`. new_id[root] = 0.
std::vector<int> canonical_relabel(const HalfEdgeMap& m, int root);

/// Minimum of canonical_code over all 2E rootings: canonical form of the
/// underlying unrooted (colored) map.
CanonicalCode unrooted_code(const HalfEdgeMap& m, const std::vector<int>& dart_color);

/// Number of root-preserving-automorphism-free rootings, i.e. the orbit count
/// of the map's automorphism group on darts. Used to cross-check the
/// rooted/unrooted count relation.
int rooting_orbit_count(const HalfEdgeMap& m, const std::vector<int>& dart_color);

/// Enumerates every planar rooted map with exactly `edges` edges, each
/// exactly once in canonical dart labeling, and calls `visit` on it.
void enumerate_rooted_maps(int edges, const std::function<void(const HalfEdgeMap&)>& visit);

/// Brute-force oracle: all rooted quadrangulations with n faces, duplicate
/// free. Throws TooLarge for n > 4.
std::vector<Quadrangulation> enumerate_rooted_quadrangulations(int n);

}  // namespace quadlab

#endif
