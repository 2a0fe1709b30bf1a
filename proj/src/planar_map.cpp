#include "quadlab/planar_map.hpp"

#include <algorithm>
#include <numeric>

namespace quadlab {

namespace {

// Orbit labeling for a permutation: orbits numbered by smallest dart, in
// increasing order of that dart.
void label_orbits(const std::vector<int>& perm, std::vector<int>& orbit_of,
                  std::vector<int>& orbit_dart, std::vector<int>& orbit_size, int& count) {
    int m = static_cast<int>(perm.size());
    orbit_of.assign(m, -1);
    orbit_dart.clear();
    orbit_size.clear();
    count = 0;
    for (int d = 0; d < m; ++d) {
        if (orbit_of[d] >= 0) continue;
        int id = count++;
        orbit_dart.push_back(d);
        int size = 0;
        int x = d;
        do {
            orbit_of[x] = id;
            ++size;
            x = perm[x];
        } while (x != d);
        orbit_size.push_back(size);
    }
}

}  // namespace

void HalfEdgeMap::index_orbits() {
    sigma_inv_.assign(sigma_.size(), 0);
    for (int d = 0; d < dart_count(); ++d) sigma_inv_[sigma_[d]] = d;
    label_orbits(sigma_, vertex_of_, vertex_dart_, vertex_degree_, vertex_orbit_count_);
    std::vector<int> phi(sigma_.size());
    for (int d = 0; d < dart_count(); ++d) phi[d] = sigma_[alpha_[d]];
    label_orbits(phi, face_of_, face_dart_, face_degree_, face_orbit_count_);
}

std::vector<int> HalfEdgeMap::darts_of_vertex(int v) const {
    std::vector<int> out;
    int d0 = vertex_dart_[v];
    int d = d0;
    do {
        out.push_back(d);
        d = sigma_[d];
    } while (d != d0);
    return out;
}

std::vector<int> HalfEdgeMap::face_cycle(int f) const {
    std::vector<int> out;
    int d0 = face_dart_[f];
    int d = d0;
    do {
        out.push_back(d);
        d = phi(d);
    } while (d != d0);
    return out;
}

std::vector<std::vector<int>> HalfEdgeMap::face_cycles() const {
    std::vector<std::vector<int>> out(face_count());
    for (int f = 0; f < face_count(); ++f) out[f] = face_cycle(f);
    return out;
}

HalfEdgeMap HalfEdgeMap::with_root(int new_root) const {
    HalfEdgeMap m = *this;
    m.root_ = new_root;
    return m;
}

HalfEdgeMap build_map(std::vector<int> alpha, std::vector<int> sigma, int root) {
    int m = static_cast<int>(alpha.size());
    if (m == 0 || m % 2 != 0 || sigma.size() != alpha.size())
        throw NotInvolution("dart set must be non-empty and even-sized");
    if (root < 0 || root >= m) throw Error("root dart out of range");

    std::vector<char> seen(m, 0);
    for (int d = 0; d < m; ++d) {
        if (alpha[d] < 0 || alpha[d] >= m || alpha[d] == d || alpha[alpha[d]] != d)
            throw NotInvolution("alpha is not a fixed-point-free involution");
        if (sigma[d] < 0 || sigma[d] >= m) throw Error("sigma out of range");
        if (seen[sigma[d]]) throw Error("sigma is not a permutation");
        seen[sigma[d]] = 1;
    }

    // Connectivity: the group <alpha, sigma> must act transitively.
    std::vector<char> visited(m, 0);
    std::vector<int> stack = {0};
    visited[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        int d = stack.back();
        stack.pop_back();
        for (int e : {alpha[d], sigma[d]}) {
            if (!visited[e]) {
                visited[e] = 1;
                ++reached;
                stack.push_back(e);
            }
        }
    }
    if (reached != m) throw Disconnected("map is not connected");

    HalfEdgeMap out;
    out.alpha_ = std::move(alpha);
    out.sigma_ = std::move(sigma);
    out.root_ = root;
    out.index_orbits();

    int euler = out.vertex_count() - out.edge_count() + out.face_count();
    if (euler != 2) throw NonPlanar("Euler characteristic is " + std::to_string(euler));
    return out;
}

Quadrangulation::Quadrangulation(HalfEdgeMap m) : map_(std::move(m)) {
    // Bipartite 2-coloring by BFS over vertices; degree-4 faces guarantee it.
    color_.assign(map_.vertex_count(), -1);
    std::vector<int> queue;
    int r = map_.vertex_of(map_.root());
    color_[r] = 0;
    queue.push_back(r);
    for (std::size_t i = 0; i < queue.size(); ++i) {
        int v = queue[i];
        for (int d : map_.darts_of_vertex(v)) {
            int w = map_.head_vertex(d);
            if (color_[w] < 0) {
                color_[w] = 1 - color_[v];
                queue.push_back(w);
            } else if (color_[w] == color_[v]) {
                throw Error("quadrangulation is not bipartite");
            }
        }
    }
}

Quadrangulation check_quadrangulation(const HalfEdgeMap& m) {
    for (int f = 0; f < m.face_count(); ++f) {
        if (m.face_degree(f) != 4)
            throw FaceDegreeNot4(f, "face " + std::to_string(f) + " has degree " +
                                        std::to_string(m.face_degree(f)));
    }
    // Euler: V = F + 2 for quadrangulations (E = 2F).
    if (m.vertex_count() != m.face_count() + 2)
        throw NonPlanar("vertex count does not match face count + 2");
    return Quadrangulation(m);
}

std::vector<int> canonical_relabel(const HalfEdgeMap& m, int root) {
    int n = m.dart_count();
    std::vector<int> label(n, -1);
    std::vector<int> order;
    order.reserve(n);
    label[root] = 0;
    order.push_back(root);
    for (int i = 0; i < n; ++i) {
        int d = order[i];
        for (int e : {m.alpha(d), m.sigma(d)}) {
            if (label[e] < 0) {
                label[e] = static_cast<int>(order.size());
                order.push_back(e);
            }
        }
    }
    return label;
}

static CanonicalCode code_for_root(const HalfEdgeMap& m, int root,
                                   const std::vector<int>* color) {
    std::vector<int> label = canonical_relabel(m, root);
    int n = m.dart_count();
    std::vector<int> inv(n);
    for (int d = 0; d < n; ++d) inv[label[d]] = d;
    CanonicalCode c;
    c.code.reserve(color ? 3 * n : 2 * n);
    for (int i = 0; i < n; ++i) {
        int d = inv[i];
        c.code.push_back(label[m.alpha(d)]);
        c.code.push_back(label[m.sigma(d)]);
    }
    if (color) {
        for (int i = 0; i < n; ++i) c.code.push_back((*color)[inv[i]]);
    }
    return c;
}

CanonicalCode canonical_code(const HalfEdgeMap& m) {
    return code_for_root(m, m.root(), nullptr);
}

CanonicalCode canonical_code(const HalfEdgeMap& m, const std::vector<int>& dart_color) {
    return code_for_root(m, m.root(), &dart_color);
}

CanonicalCode unrooted_code(const HalfEdgeMap& m, const std::vector<int>& dart_color) {
    CanonicalCode best;
    for (int d = 0; d < m.dart_count(); ++d) {
        CanonicalCode c = code_for_root(m, d, &dart_color);
        if (best.code.empty() || c < best) best = c;
    }
    return best;
}

int rooting_orbit_count(const HalfEdgeMap& m, const std::vector<int>& dart_color) {
    // Two rootings give the same rooted map iff their codes agree.
    std::vector<CanonicalCode> codes;
    codes.reserve(m.dart_count());
    for (int d = 0; d < m.dart_count(); ++d) codes.push_back(code_for_root(m, d, &dart_color));
    std::sort(codes.begin(), codes.end());
    codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
    return static_cast<int>(codes.size());
}

namespace {

// Enumeration of rooted maps in canonical labeling. Darts are created in the
// exact order the canonical BFS of the finished map would label them, so each
// rooted map is produced once, already canonical. Slots are processed in
// order (alpha(0), sigma(0), alpha(1), sigma(1), ...); each unset slot
// branches over compatible existing darts and over one fresh dart.
class MapEnumerator {
public:
    MapEnumerator(int edges, const std::function<void(const HalfEdgeMap&)>& visit)
        : m_(2 * edges), visit_(visit) {
        alpha_.assign(m_, -1);
        sigma_.assign(m_, -1);
        sigma_used_.assign(m_, 0);
    }

    void run() {
        next_label_ = 1;
        step(0, /*alpha_slot=*/true);
    }

private:
    void step(int i, bool alpha_slot) {
        if (i == m_) {
            emit();
            return;
        }
        if (i >= next_label_) return;  // dart i never discovered: disconnected
        if (alpha_slot) {
            if (alpha_[i] >= 0) {
                step(i, false);
                return;
            }
            // Existing labeled-but-unpaired darts (they can only sit above i).
            for (int j = i + 1; j < next_label_; ++j) {
                if (alpha_[j] < 0) {
                    alpha_[i] = j;
                    alpha_[j] = i;
                    step(i, false);
                    alpha_[i] = alpha_[j] = -1;
                }
            }
            if (next_label_ < m_) {
                int j = next_label_++;
                alpha_[i] = j;
                alpha_[j] = i;
                step(i, false);
                alpha_[i] = alpha_[j] = -1;
                --next_label_;
            }
        } else {
            if (sigma_[i] >= 0) {
                step(i + 1, true);
                return;
            }
            for (int j = 0; j < next_label_; ++j) {
                if (!sigma_used_[j]) {
                    sigma_[i] = j;
                    sigma_used_[j] = 1;
                    step(i + 1, true);
                    sigma_[i] = -1;
                    sigma_used_[j] = 0;
                }
            }
            if (next_label_ < m_) {
                int j = next_label_++;
                sigma_[i] = j;
                sigma_used_[j] = 1;
                step(i + 1, true);
                sigma_[i] = -1;
                sigma_used_[j] = 0;
                --next_label_;
            }
        }
    }

    void emit() {
        // Euler check here keeps build_map from throwing on genus > 0.
        int v = orbit_count(sigma_);
        std::vector<int> phi(m_);
        for (int d = 0; d < m_; ++d) phi[d] = sigma_[alpha_[d]];
        int f = orbit_count(phi);
        if (v - m_ / 2 + f != 2) return;
        visit_(build_map(alpha_, sigma_, 0));
    }

    static int orbit_count(const std::vector<int>& perm) {
        std::vector<char> seen(perm.size(), 0);
        int count = 0;
        for (std::size_t d = 0; d < perm.size(); ++d) {
            if (seen[d]) continue;
            ++count;
            std::size_t x = d;
            while (!seen[x]) {
                seen[x] = 1;
                x = static_cast<std::size_t>(perm[x]);
            }
        }
        return count;
    }

    int m_;
    const std::function<void(const HalfEdgeMap&)>& visit_;
    std::vector<int> alpha_, sigma_;
    std::vector<char> sigma_used_;
    int next_label_ = 1;
};

}  // namespace

void enumerate_rooted_maps(int edges, const std::function<void(const HalfEdgeMap&)>& visit) {
    if (edges < 1) return;
    MapEnumerator e(edges, visit);
    e.run();
}

std::vector<Quadrangulation> enumerate_rooted_quadrangulations(int n) {
    if (n < 1) throw Error("need at least one face");
    if (n > 4) throw TooLarge("exhaustive quadrangulation oracle is limited to n <= 4");
    std::vector<Quadrangulation> out;
    enumerate_rooted_maps(2 * n, [&](const HalfEdgeMap& m) {
        for (int f = 0; f < m.face_count(); ++f)
            if (m.face_degree(f) != 4) return;
        out.push_back(Quadrangulation(m));
    });
    return out;
}

}  // namespace quadlab
