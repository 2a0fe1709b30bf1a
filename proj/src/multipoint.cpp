#include "quadlab/multipoint.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>

#include "quadlab/metrics.hpp"

namespace quadlab {

int LabeledMap::face_with_name(int name) const {
    for (int f = 0; f < m.face_count(); ++f)
        if (face_name[f] == name) return f;
    throw Error("face name not present");
}

void LabeledMap::validate() const {
    if (static_cast<int>(labels.size()) != m.vertex_count())
        throw NotLabeledMap("label array size mismatch");
    if (static_cast<int>(face_name.size()) != m.face_count())
        throw NotLabeledMap("face naming size mismatch");
    std::vector<char> seen(m.face_count(), 0);
    for (int name : face_name) {
        if (name < 0 || name >= m.face_count() || seen[name])
            throw NotLabeledMap("face naming is not a bijection");
        seen[name] = 1;
    }
    for (int d = 0; d < m.dart_count(); ++d) {
        if (std::abs(labels[m.vertex_of(d)] - labels[m.head_vertex(d)]) > 1)
            throw NotLabeledMap("labels differ by more than 1 along an edge");
    }
}

std::vector<int> LabeledMap::common_vertices(int name_a, int name_b) const {
    int fa = face_with_name(name_a), fb = face_with_name(name_b);
    std::vector<char> in_a(m.vertex_count(), 0), in_b(m.vertex_count(), 0);
    for (int d = 0; d < m.dart_count(); ++d) {
        if (m.face_of(d) == fa) in_a[m.vertex_of(d)] = in_a[m.head_vertex(d)] = 1;
        if (m.face_of(d) == fb) in_b[m.vertex_of(d)] = in_b[m.head_vertex(d)] = 1;
    }
    std::vector<int> out;
    for (int v = 0; v < m.vertex_count(); ++v)
        if (in_a[v] && in_b[v]) out.push_back(v);
    return out;
}

bool LabeledMap::in_lm() const {
    for (int i = 1; i <= k(); ++i) {
        std::vector<int> shared = common_vertices(0, i);
        if (shared.empty()) return false;
        int mn = labels[shared[0]];
        for (int v : shared) mn = std::min(mn, labels[v]);
        if (mn != 0) return false;
    }
    return true;
}

CanonicalCode labeled_map_code(const LabeledMap& lm) {
    std::vector<int> color(lm.m.dart_count());
    // Pack the face name and the origin label into one color per dart.
    int offset = 0;
    for (int v = 0; v < lm.m.vertex_count(); ++v) offset = std::max(offset, std::abs(lm.labels[v]));
    int span = 2 * offset + 1;
    for (int d = 0; d < lm.m.dart_count(); ++d) {
        int name = lm.face_name[lm.m.face_of(d)];
        int lab = lm.labels[lm.m.vertex_of(d)] + offset;
        color[d] = name * span + lab;
    }
    return canonical_code(lm.m, color);
}

bool check_delays(const Quadrangulation& q, const std::vector<int>& v,
                  const std::vector<int>& tau) {
    if (v.size() != tau.size() || v.size() < 2) throw Error("need k+1 >= 2 marked vertices");
    std::vector<DistanceField> fields;
    fields.reserve(v.size());
    for (int x : v) fields.push_back(bfs(q.map(), x));
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = i + 1; j < v.size(); ++j) {
            if (v[i] == v[j]) throw Error("marked vertices must be distinct");
            int d = fields[i].dist[v[j]];
            if (std::abs(tau[i] - tau[j]) >= d) return false;
            if ((d + tau[i] - tau[j]) % 2 != 0) return false;
        }
    }
    return true;
}

DelayVector delays_for_star(const Quadrangulation& q, const std::vector<int>& v, int r_prime) {
    DelayVector out;
    out.tau.resize(v.size());
    out.tau[0] = -r_prime;
    DistanceField f0 = bfs(q.map(), v[0]);
    for (std::size_t i = 1; i < v.size(); ++i) out.tau[i] = -f0.dist[v[i]] + r_prime;
    return out;
}

bool is_geodesic_star(const Quadrangulation& q, const std::vector<int>& v, int r) {
    int k = static_cast<int>(v.size()) - 1;
    if (k < 1) throw Error("need at least two marked vertices");
    std::vector<DistanceField> fields;
    fields.reserve(v.size());
    for (int x : v) fields.push_back(bfs(q.map(), x));

    // No three marked vertices aligned, in any order; min d(v_0, v_i) >= 3r.
    for (int i = 1; i <= k; ++i)
        if (fields[0].dist[v[i]] < 3 * r) return false;
    for (std::size_t a = 0; a < v.size(); ++a)
        for (std::size_t b = 0; b < v.size(); ++b)
            for (std::size_t c = 0; c < v.size(); ++c) {
                if (a == b || b == c || a == c) continue;
                if (fields[a].dist[v[b]] + fields[b].dist[v[c]] == fields[a].dist[v[c]])
                    return false;
            }

    // A vertex at distance >= r from v_0 may sit on geodesics toward at most
    // one of the v_i.
    int n_vertices = q.map().vertex_count();
    for (int w = 0; w < n_vertices; ++w) {
        if (fields[0].dist[w] < r) continue;
        int hits = 0;
        for (int i = 1; i <= k && hits < 2; ++i) {
            if (fields[0].dist[w] + fields[i].dist[w] == fields[0].dist[v[i]]) ++hits;
        }
        if (hits >= 2) return false;
    }
    return true;
}

CanonicalCode delayed_quad_code(const DelayedQuadrangulation& dq) {
    const HalfEdgeMap& m = dq.q.map();
    std::vector<int> mark(m.vertex_count(), 0);
    for (std::size_t i = 0; i < dq.v.size(); ++i) mark[dq.v[i]] = static_cast<int>(i) + 1;
    std::vector<int> color(m.dart_count());
    for (int d = 0; d < m.dart_count(); ++d) color[d] = mark[m.vertex_of(d)];
    CanonicalCode code = canonical_code(m, color);
    for (int t : dq.tau.tau) code.code.push_back(t);
    return code;
}

namespace {

// Successor of every corner within each face: first corner after it in
// facial order whose label is exactly one less; -1 when none exists (the
// face minimum), in which case the arc goes to the sink.
std::vector<int> face_successors(const HalfEdgeMap& m, const std::vector<int>& vertex_label) {
    std::vector<int> succ(m.dart_count(), -1);
    constexpr int kNone = -1;
    for (const auto& cycle : m.face_cycles()) {
        int len = static_cast<int>(cycle.size());
        std::vector<int> lab(len);
        int lo = vertex_label[m.vertex_of(cycle[0])], hi = lo;
        for (int i = 0; i < len; ++i) {
            lab[i] = vertex_label[m.vertex_of(cycle[i])];
            lo = std::min(lo, lab[i]);
            hi = std::max(hi, lab[i]);
        }
        // Scan the doubled cycle right to left, tracking the next position of
        // each label value.
        std::vector<int> next_at(hi - lo + 1, kNone);
        std::vector<int> next_pos(len, kNone);
        for (int i = 2 * len - 1; i >= 0; --i) {
            int p = i % len;
            int want = lab[p] - 1 - lo;
            if (i < len) next_pos[p] = want >= 0 ? next_at[want] : kNone;
            next_at[lab[p] - lo] = p;
        }
        for (int i = 0; i < len; ++i)
            if (next_pos[i] != kNone) succ[cycle[i]] = cycle[next_pos[i]];
    }
    return succ;
}

}  // namespace

int successor(const LabeledMap& lm, int corner) {
    return face_successors(lm.m, lm.labels)[corner];
}

PhiResult phi_reverse(const LabeledMap& lm, RootChoice choice) {
    lm.validate();
    const HalfEdgeMap& m = lm.m;
    int k = lm.k();
    int n_corners = m.dart_count();

    std::vector<int> succ = face_successors(m, lm.labels);
    auto cycles = m.face_cycles();
    std::vector<int> pos_in_face(n_corners, -1);
    for (const auto& cycle : cycles)
        for (std::size_t i = 0; i < cycle.size(); ++i) pos_in_face[cycle[i]] = static_cast<int>(i);

    // q darts: arc of corner c owns out-dart 2c and in-dart 2c+1.
    int q_darts = 2 * n_corners;
    std::vector<int> alpha(q_darts), sigma(q_darts, -1);
    for (int c = 0; c < n_corners; ++c) {
        alpha[2 * c] = 2 * c + 1;
        alpha[2 * c + 1] = 2 * c;
    }

    // Incoming arcs per corner, ordered by decreasing forward distance from
    // the target corner to the source corner along the face cycle; the
    // outgoing arc sits last, next to the corner's own dart.
    std::vector<std::vector<int>> incoming(n_corners);
    for (const auto& cycle : cycles) {
        int len = static_cast<int>(cycle.size());
        std::vector<std::vector<std::pair<int, int>>> by_target(len);
        for (int i = 0; i < len; ++i) {
            int s = succ[cycle[i]];
            if (s < 0) continue;
            int t = pos_in_face[s];
            int delta = (i - t + len) % len;
            by_target[t].push_back({delta, cycle[i]});
        }
        for (int t = 0; t < len; ++t) {
            auto& in = by_target[t];
            std::sort(in.begin(), in.end());
            auto& dst = incoming[cycle[t]];
            for (auto it = in.rbegin(); it != in.rend(); ++it) dst.push_back(it->second);
        }
    }

    // Rotation at the original vertices: walk the sigma cycle; the ends that
    // live in corner(e) (incoming first, outgoing last) replace the gap just
    // before e.
    for (int v = 0; v < m.vertex_count(); ++v) {
        std::vector<int> rot;
        for (int e : m.darts_of_vertex(v)) {
            for (int src : incoming[e]) rot.push_back(2 * src + 1);
            rot.push_back(2 * e);
        }
        for (std::size_t i = 0; i < rot.size(); ++i)
            sigma[rot[i]] = rot[(i + 1) % rot.size()];
    }

    // Rotation at the sinks: incoming arcs from the face-minimal corners, in
    // reverse facial order (the sink sees the boundary with the opposite
    // orientation).
    for (const auto& cycle : cycles) {
        std::vector<int> rot;
        for (int c : cycle)
            if (succ[c] < 0) rot.push_back(2 * c + 1);
        if (rot.empty()) throw ArcPlanarityFailure("face without minimum corner");
        std::reverse(rot.begin(), rot.end());
        for (std::size_t i = 0; i < rot.size(); ++i)
            sigma[rot[i]] = rot[(i + 1) % rot.size()];
    }

    int root_corner = m.root();
    int q_root = choice == RootChoice::kForward ? 2 * root_corner : 2 * root_corner + 1;

    HalfEdgeMap qm;
    try {
        qm = build_map(alpha, sigma, q_root);
    } catch (const Error& e) {
        throw ArcPlanarityFailure(std::string("arc map invalid: ") + e.what());
    }
    if (qm.face_count() != m.edge_count())
        throw ArcPlanarityFailure("arc map face count differs from input edge count");

    PhiResult pr;
    pr.successor = std::move(succ);
    pr.corner_face.resize(n_corners);
    for (int c = 0; c < n_corners; ++c) pr.corner_face[c] = lm.face_name[m.face_of(c)];
    pr.vertex_in_q.assign(m.vertex_count(), -1);
    for (int c = 0; c < n_corners; ++c) pr.vertex_in_q[m.vertex_of(c)] = qm.vertex_of(2 * c);
    pr.sink_vertex.assign(k + 1, -1);
    for (int c = 0; c < n_corners; ++c)
        if (pr.successor[c] < 0) pr.sink_vertex[pr.corner_face[c]] = qm.vertex_of(2 * c + 1);
    pr.q_dart_corner.resize(q_darts);
    for (int d = 0; d < q_darts; ++d) pr.q_dart_corner[d] = d / 2;

    // tau_i = min label over V(f_i) minus 1.
    std::vector<int> tau(k + 1);
    for (int f = 0; f < m.face_count(); ++f) {
        int mn = lm.labels[m.vertex_of(cycles[f][0])];
        for (int c : cycles[f]) mn = std::min(mn, lm.labels[m.vertex_of(c)]);
        tau[lm.face_name[f]] = mn - 1;
    }

    pr.q_labels.assign(qm.vertex_count(), 0);
    for (int v = 0; v < m.vertex_count(); ++v) pr.q_labels[pr.vertex_in_q[v]] = lm.labels[v];
    for (int i = 0; i <= k; ++i) pr.q_labels[pr.sink_vertex[i]] = tau[i];

    pr.dq.q = check_quadrangulation(qm);
    pr.dq.v.resize(k + 1);
    for (int i = 0; i <= k; ++i) pr.dq.v[i] = pr.sink_vertex[i];
    pr.dq.tau.tau = std::move(tau);
    return pr;
}

std::vector<int> leftmost_geodesic(const PhiResult& pr, int corner) {
    const HalfEdgeMap& qm = pr.dq.q.map();
    std::vector<int> chain;
    chain.push_back(qm.vertex_of(2 * corner));
    int c = corner;
    while (true) {
        chain.push_back(qm.vertex_of(2 * c + 1));
        c = pr.successor[c];
        if (c < 0) break;
        if (chain.size() > pr.successor.size() + 2)
            throw Error("successor chain does not terminate");
    }
    return chain;
}

LiquidPartition liquid_partition(const PhiResult& pr) {
    const HalfEdgeMap& qm = pr.dq.q.map();
    LiquidPartition lp;
    lp.source.assign(qm.dart_count(), -1);
    for (int d = 0; d < qm.dart_count(); ++d) {
        int tail = pr.q_labels[qm.vertex_of(d)];
        int head = pr.q_labels[qm.head_vertex(d)];
        if (head == tail - 1) lp.source[d] = pr.corner_face[pr.q_dart_corner[d]];
    }
    return lp;
}

std::vector<LabeledMap> enumerate_labeled_maps(int k, int n) {
    if (k < 1) throw Error("k must be at least 1");
    std::vector<LabeledMap> out;
    enumerate_rooted_maps(n, [&](const HalfEdgeMap& m) {
        if (m.face_count() != k + 1) return;
        // All face namings.
        std::vector<int> naming(k + 1);
        for (int f = 0; f <= k; ++f) naming[f] = f;
        std::sort(naming.begin(), naming.end());
        do {
            LabeledMap lm;
            lm.m = m;
            lm.face_name = naming;
            // Structural check first: every named inner face shares a vertex
            // with f0.
            bool ok = true;
            lm.labels.assign(m.vertex_count(), 0);
            for (int i = 1; i <= k && ok; ++i)
                if (lm.common_vertices(0, i).empty()) ok = false;
            if (!ok) continue;

            // Enumerate labelings: assign labels vertex by vertex; every
            // vertex after the first must match some labeled neighbor within
            // distance 1. Vertex 0 ranges over [-n, n]; the LM normalization
            // (min 0 on each V(f0 ∩ fi)) prunes at the leaves.
            int nv = m.vertex_count();
            std::vector<std::vector<int>> adj(nv);
            for (int d = 0; d < m.dart_count(); ++d)
                adj[m.vertex_of(d)].push_back(m.head_vertex(d));
            std::vector<std::vector<int>> shared(k + 1);
            for (int i = 1; i <= k; ++i) shared[i] = lm.common_vertices(0, i);

            std::vector<int> lab(nv, 0);
            std::function<void(int)> rec = [&](int v) {
                if (v == nv) {
                    for (int i = 1; i <= k; ++i) {
                        int mn = lab[shared[i][0]];
                        for (int w : shared[i]) mn = std::min(mn, lab[w]);
                        if (mn != 0) return;
                    }
                    lm.labels = lab;
                    out.push_back(lm);
                    return;
                }
                for (int x = -n; x <= n; ++x) {
                    bool feasible = true;
                    for (int w : adj[v]) {
                        if (w < v && std::abs(lab[w] - x) > 1) {
                            feasible = false;
                            break;
                        }
                    }
                    if (feasible) {
                        lab[v] = x;
                        rec(v + 1);
                    }
                }
            };
            rec(0);
        } while (std::next_permutation(naming.begin(), naming.end()));
    });
    return out;
}

LabeledMap star_to_labeled_map(const Quadrangulation& q, const std::vector<int>& v, int r,
                               int r_prime) {
    if (!is_geodesic_star(q, v, r)) throw NotGeodesicStar("(q, v) is not a geodesic r-star");
    if (r_prime < r + 1 || r_prime > 2 * r) throw Error("r' must lie in {r+1, ..., 2r}");
    int n = q.face_count();
    if (n > 5) throw TooLarge("preimage search is exhaustive and limited to n <= 5");
    int k = static_cast<int>(v.size()) - 1;

    DelayedQuadrangulation target;
    target.q = q;
    target.v = v;
    target.tau = delays_for_star(q, v, r_prime);
    CanonicalCode want = delayed_quad_code(target);

    for (const LabeledMap& lm : enumerate_labeled_maps(k, n)) {
        for (RootChoice choice : {RootChoice::kForward, RootChoice::kReversed}) {
            PhiResult pr = phi_reverse(lm, choice);
            if (delayed_quad_code(pr.dq) == want) return lm;
        }
    }
    throw Error("no preimage found; the reverse construction should be onto");
}

}  // namespace quadlab
