#include "quadlab/schemes.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace quadlab {

namespace {

// Faces incident to a vertex, as a name bitmask (k <= 30).
std::vector<unsigned> vertex_face_names(const HalfEdgeMap& m, const std::vector<int>& face_name) {
    std::vector<unsigned> mask(m.vertex_count(), 0);
    for (int d = 0; d < m.dart_count(); ++d) {
        unsigned bit = 1u << face_name[m.face_of(d)];
        mask[m.vertex_of(d)] |= bit;
        mask[m.head_vertex(d)] |= bit;
    }
    return mask;
}

bool on_f0_and_inner(unsigned mask) { return (mask & 1u) && (mask & ~1u); }

}  // namespace

bool PreScheme::dominant() const {
    for (int v = 0; v < m.vertex_count(); ++v) {
        int deg = m.degree(v);
        if (planted && deg == 1) continue;
        if (deg != 3) return false;
    }
    return true;
}

int Scheme::face_with_name(int name) const {
    for (int f = 0; f < m.face_count(); ++f)
        if (face_name[f] == name) return f;
    throw Error("face name not present");
}

bool Scheme::dominant() const {
    int nulls = 0;
    for (int v = 0; v < m.vertex_count(); ++v) {
        if (null_vertex[v]) {
            if (m.degree(v) != 2) return false;
            ++nulls;
        } else if (planted && m.degree(v) == 1) {
            continue;
        } else if (m.degree(v) != 3) {
            return false;
        }
    }
    return nulls == k();
}

CanonicalCode Scheme::code() const {
    std::vector<int> color(m.dart_count());
    for (int d = 0; d < m.dart_count(); ++d)
        color[d] = face_name[m.face_of(d)] * 2 + (null_vertex[m.vertex_of(d)] ? 1 : 0);
    return unrooted_code(m, color);
}

Scheme make_scheme(const HalfEdgeMap& m_in, const std::vector<int>& face_name_in,
                   const std::vector<char>& null_in, bool planted,
                   std::vector<int>* relabel_out) {
    int k = m_in.face_count() - 1;
    if (k < 1) throw Error("scheme needs at least two faces");
    int v_ss = -1;
    for (int v = 0; v < m_in.vertex_count(); ++v) {
        int deg = m_in.degree(v);
        if (deg == 1) {
            if (!planted || v_ss >= 0) throw Error("degree-1 vertex in scheme");
            v_ss = v;
        } else if (deg < 2) {
            throw Error("vertex degree below 2");
        }
    }
    if (planted && v_ss < 0) throw Error("planted scheme needs a degree-1 vertex");

    auto masks = vertex_face_names(m_in, face_name_in);
    for (int name = 1; name <= k; ++name) {
        bool shares = false;
        for (int v = 0; v < m_in.vertex_count() && !shares; ++v)
            if ((masks[v] & 1u) && (masks[v] & (1u << name))) shares = true;
        if (!shares) throw Error("inner face shares no vertex with f0");
    }
    for (int v = 0; v < m_in.vertex_count(); ++v) {
        if (m_in.degree(v) == 2 && !null_in[v]) throw Error("degree-2 vertex must be null");
        if (null_in[v] && !on_f0_and_inner(masks[v]))
            throw Error("null vertex not on f0 and an inner face");
    }
    for (int d = 0; d < m_in.dart_count(); ++d) {
        int u = m_in.vertex_of(d), w = m_in.head_vertex(d);
        if (m_in.degree(u) == 2 && null_in[w]) throw Error("degree-2 null adjacent to a null");
    }
    {
        std::vector<char> face_has_null(m_in.face_count(), 0);
        for (int d = 0; d < m_in.dart_count(); ++d)
            if (null_in[m_in.vertex_of(d)]) face_has_null[m_in.face_of(d)] = 1;
        for (int f = 0; f < m_in.face_count(); ++f)
            if (face_name_in[f] >= 1 && !face_has_null[f])
                throw Error("inner face without a null vertex");
    }

    // Canonical dart labeling: minimize the colored code over all rootings.
    std::vector<int> color(m_in.dart_count());
    for (int d = 0; d < m_in.dart_count(); ++d)
        color[d] = face_name_in[m_in.face_of(d)] * 2 + (null_in[m_in.vertex_of(d)] ? 1 : 0);
    int best_root = 0;
    CanonicalCode best;
    for (int d = 0; d < m_in.dart_count(); ++d) {
        CanonicalCode c = canonical_code(m_in.with_root(d), color);
        if (best.code.empty() || c < best) {
            best = c;
            best_root = d;
        }
    }
    std::vector<int> relabel = canonical_relabel(m_in, best_root);
    int n_darts = m_in.dart_count();
    std::vector<int> alpha(n_darts), sigma(n_darts);
    for (int d = 0; d < n_darts; ++d) {
        alpha[relabel[d]] = relabel[m_in.alpha(d)];
        sigma[relabel[d]] = relabel[m_in.sigma(d)];
    }

    Scheme s;
    s.m = build_map(alpha, sigma, 0);
    s.planted = planted;
    s.face_name.assign(s.m.face_count(), -1);
    s.null_vertex.assign(s.m.vertex_count(), 0);
    for (int d = 0; d < n_darts; ++d) {
        int nd = relabel[d];
        s.face_name[s.m.face_of(nd)] = face_name_in[m_in.face_of(d)];
        if (null_in[m_in.vertex_of(d)]) s.null_vertex[s.m.vertex_of(nd)] = 1;
    }
    s.v_star_star_ = -1;
    if (planted) {
        for (int v = 0; v < s.m.vertex_count(); ++v)
            if (s.m.degree(v) == 1) s.v_star_star_ = v;
    }

    s.edge_index_.assign(n_darts, -1);
    for (int d = 0; d < n_darts; ++d) {
        if (d < s.m.alpha(d)) {
            s.edge_index_[d] = static_cast<int>(s.edge_dart_.size());
            s.edge_dart_.push_back(d);
        }
    }
    for (int d = 0; d < n_darts; ++d)
        if (s.edge_index_[d] < 0) s.edge_index_[d] = s.edge_index_[s.m.alpha(d)];

    auto cmasks = vertex_face_names(s.m, s.face_name);
    s.vertex_class_.assign(s.m.vertex_count(), VertexClass::kOuter);
    for (int v = 0; v < s.m.vertex_count(); ++v) {
        if (s.null_vertex[v])
            s.vertex_class_[v] = VertexClass::kNull;
        else if (on_f0_and_inner(cmasks[v]))
            s.vertex_class_[v] = VertexClass::kInner;
    }

    int n_edges = s.m.edge_count();
    s.edge_class_.assign(n_edges, EdgeClass::kOuter);
    s.thin_.assign(n_edges, 0);
    s.canon_dart_.assign(n_edges, -1);
    for (int e = 0; e < n_edges; ++e) {
        int d = s.edge_dart_[e];
        int u = s.m.vertex_of(d), w = s.m.head_vertex(d);
        int name_left = s.face_name[s.m.face_of(d)];
        int name_right = s.face_name[s.m.face_of(s.m.alpha(d))];
        bool touches_f0_inner =
            (name_left == 0 && name_right >= 1) || (name_right == 0 && name_left >= 1);
        bool null_end = s.null_vertex[u] || s.null_vertex[w];
        if (touches_f0_inner)
            s.edge_class_[e] = null_end ? EdgeClass::kNull : EdgeClass::kInner;

        int canon = d;
        if (s.edge_class_[e] == EdgeClass::kNull) {
            auto endpoint_rank = [&](int vertex) {
                if (!s.null_vertex[vertex]) return 0;
                return s.m.degree(vertex) == 2 ? 2 : 1;
            };
            int ru = endpoint_rank(u), rw = endpoint_rank(w);
            if (ru > rw) canon = s.m.alpha(d);
            int target = s.m.head_vertex(canon);
            if (s.null_vertex[target] && s.m.degree(target) == 2 &&
                s.face_name[s.m.face_of(canon)] == 0)
                s.thin_[e] = 1;
            if ((s.null_vertex[u] && s.m.degree(u) >= 3) ||
                (s.null_vertex[w] && s.m.degree(w) >= 3))
                s.thin_[e] = 1;
        } else if (planted && (u == s.v_star_star_ || w == s.v_star_star_)) {
            canon = w == s.v_star_star_ ? d : s.m.alpha(d);
        }
        s.canon_dart_[e] = canon;
    }

    if (relabel_out) *relabel_out = relabel;
    return s;
}

std::vector<PreScheme> enumerate_preschemes(int k, bool dominant_only, bool planted) {
    if (k < 2 || k > 4) throw TooLarge("pre-scheme enumeration supports k in {2, 3, 4}");
    int max_edges = planted ? 3 * k - 1 : 3 * k - 3;
    std::map<CanonicalCode, PreScheme> found;
    for (int edges = 1; edges <= max_edges; ++edges) {
        enumerate_rooted_maps(edges, [&](const HalfEdgeMap& m) {
            if (m.face_count() != k + 1) return;
            int deg1 = 0;
            for (int v = 0; v < m.vertex_count(); ++v) {
                int deg = m.degree(v);
                if (deg == 1)
                    ++deg1;
                else if (deg < 3)
                    return;
            }
            if (deg1 != (planted ? 1 : 0)) return;

            std::vector<int> naming(k + 1);
            std::iota(naming.begin(), naming.end(), 0);
            std::vector<int> face_name(k + 1);
            do {
                for (int f = 0; f <= k; ++f) face_name[f] = naming[f];
                auto masks = vertex_face_names(m, face_name);
                bool ok = true;
                for (int name = 1; name <= k && ok; ++name) {
                    bool shares = false;
                    for (int v = 0; v < m.vertex_count() && !shares; ++v)
                        if ((masks[v] & 1u) && (masks[v] & (1u << name))) shares = true;
                    ok = shares;
                }
                if (!ok) continue;
                PreScheme ps;
                ps.m = m;
                ps.face_name = face_name;
                ps.planted = planted;
                if (dominant_only && !ps.dominant()) continue;
                std::vector<int> color(m.dart_count());
                for (int d = 0; d < m.dart_count(); ++d) color[d] = face_name[m.face_of(d)];
                found.emplace(unrooted_code(m, color), ps);
            } while (std::next_permutation(naming.begin(), naming.end()));
        });
    }
    std::vector<PreScheme> out;
    out.reserve(found.size());
    for (auto& [code, ps] : found) out.push_back(ps);
    return out;
}

int count_preschemes_inner_forgotten(int k, bool dominant_only) {
    std::map<CanonicalCode, char> seen;
    for (const PreScheme& ps : enumerate_preschemes(k, dominant_only)) {
        std::vector<int> color(ps.m.dart_count());
        for (int d = 0; d < ps.m.dart_count(); ++d)
            color[d] = ps.face_name[ps.m.face_of(d)] == 0 ? 0 : 1;
        seen.emplace(unrooted_code(ps.m, color), 1);
    }
    return static_cast<int>(seen.size());
}

namespace {

// Splits the edge of `dart` with a new degree-2 vertex; the two new darts go
// at the end of the dart array.
HalfEdgeMap split_edge(const HalfEdgeMap& m, int dart) {
    int n = m.dart_count();
    int d = dart, dp = m.alpha(dart);
    std::vector<int> alpha(n + 2), sigma(n + 2);
    for (int x = 0; x < n; ++x) {
        alpha[x] = m.alpha(x);
        sigma[x] = m.sigma(x);
    }
    int x = n, y = n + 1;
    alpha[d] = x;
    alpha[x] = d;
    alpha[y] = dp;
    alpha[dp] = y;
    sigma[x] = y;
    sigma[y] = x;
    return build_map(alpha, sigma, m.root());
}

}  // namespace

std::vector<Scheme> enumerate_schemes(int k, bool dominant_only, bool planted) {
    std::map<CanonicalCode, Scheme> found;
    for (const PreScheme& ps : enumerate_preschemes(k, /*dominant_only=*/false, planted)) {
        const HalfEdgeMap& m0 = ps.m;
        std::vector<int> splittable;
        for (int d = 0; d < m0.dart_count(); ++d) {
            if (d > m0.alpha(d)) continue;
            int a = ps.face_name[m0.face_of(d)], b = ps.face_name[m0.face_of(m0.alpha(d))];
            if ((a == 0 && b >= 1) || (b == 0 && a >= 1)) splittable.push_back(d);
        }
        auto masks = vertex_face_names(m0, ps.face_name);
        std::vector<int> markable;
        for (int v = 0; v < m0.vertex_count(); ++v)
            if (on_f0_and_inner(masks[v]) && m0.degree(v) >= 3) markable.push_back(v);

        int n_split = static_cast<int>(splittable.size());
        int n_mark = static_cast<int>(markable.size());
        for (int sm = 0; sm < (1 << n_split); ++sm) {
            for (int mm = 0; mm < (1 << n_mark); ++mm) {
                HalfEdgeMap m = m0;
                std::vector<char> is_null(m0.vertex_count(), 0);
                for (int i = 0; i < n_mark; ++i)
                    if (mm & (1 << i)) is_null[markable[i]] = 1;
                for (int i = 0; i < n_split; ++i) {
                    if (!(sm & (1 << i))) continue;
                    m = split_edge(m, splittable[i]);
                    is_null.push_back(1);
                }
                std::vector<int> face_name(m.face_count());
                for (int f = 0; f < m.face_count(); ++f) {
                    int d = m.face_dart(f);
                    while (d >= m0.dart_count()) d = m.phi(d);
                    face_name[f] = ps.face_name[m0.face_of(d)];
                }
                try {
                    Scheme s = make_scheme(m, face_name, is_null, planted);
                    if (dominant_only && !s.dominant()) continue;
                    found.emplace(s.code(), s);
                } catch (const Error&) {
                    continue;  // axiom violated by this split/mark choice
                }
            }
        }
    }
    std::vector<Scheme> out;
    out.reserve(found.size());
    for (auto& [code, s] : found) out.push_back(s);
    return out;
}

int forest_oriented_edges(const LabeledForest& f) { return f.oriented_edge_count(); }

// ---------------------------------------------------------------------------
// Decomposition.

namespace {

struct Stripped {
    std::vector<char> alive;  // per dart
    std::vector<int> deg;     // alive degree per vertex
    std::vector<int> next;    // sigma restricted to alive darts
    std::vector<int> prev;
};

Stripped strip_trees(const HalfEdgeMap& m, int exempt) {
    Stripped s;
    s.alive.assign(m.dart_count(), 1);
    s.deg.resize(m.vertex_count());
    for (int v = 0; v < m.vertex_count(); ++v) s.deg[v] = m.degree(v);
    std::vector<int> queue;
    for (int v = 0; v < m.vertex_count(); ++v)
        if (s.deg[v] == 1 && v != exempt) queue.push_back(v);
    while (!queue.empty()) {
        int v = queue.back();
        queue.pop_back();
        if (s.deg[v] != 1 || v == exempt) continue;
        int d = -1;
        for (int x : m.darts_of_vertex(v))
            if (s.alive[x]) d = x;
        if (d < 0) continue;
        int w = m.head_vertex(d);
        s.alive[d] = s.alive[m.alpha(d)] = 0;
        s.deg[v] = 0;
        if (--s.deg[w] == 1 && w != exempt) queue.push_back(w);
    }
    s.next.assign(m.dart_count(), -1);
    s.prev.assign(m.dart_count(), -1);
    for (int d = 0; d < m.dart_count(); ++d) {
        if (!s.alive[d]) continue;
        int x = m.sigma(d);
        while (!s.alive[x]) x = m.sigma(x);
        s.next[d] = x;
        s.prev[x] = d;
    }
    return s;
}

// The plane tree grafted in the gap before alive dart `b` (rooted at b's
// origin), plus the contour-ordered m-darts of its edges.
struct CornerTree {
    LabeledTree tree;
    std::vector<int> contour_darts;
};

CornerTree corner_tree(const HalfEdgeMap& m, const std::vector<int>& labels, const Stripped& st,
                       int b) {
    CornerTree out;
    LabeledTree& t = out.tree;
    t.parent.push_back(-1);
    t.children.push_back({});
    t.label.push_back(labels[m.vertex_of(b)]);
    t.root = 0;

    std::vector<int> gap;
    for (int x = m.sigma(st.prev[b]); x != b; x = m.sigma(x)) gap.push_back(x);

    std::function<void(int, int)> graft = [&](int parent_node, int d) {
        out.contour_darts.push_back(d);
        int node = t.vertex_count();
        t.parent.push_back(parent_node);
        t.children.push_back({});
        t.label.push_back(labels[m.head_vertex(d)]);
        t.children[parent_node].push_back(node);
        for (int x = m.sigma(m.alpha(d)); x != m.alpha(d); x = m.sigma(x)) graft(node, x);
        out.contour_darts.push_back(m.alpha(d));
    };
    for (int d : gap) graft(0, d);
    return out;
}

// Core of decompose / decompose_planted. `exempt` is the planted pendant
// vertex, or -1 for the plain decomposition.
SchemeDecomposition decompose_core(const LabeledMap& lm, int exempt) {
    const HalfEdgeMap& m = lm.m;
    Stripped st = strip_trees(m, exempt);
    bool planted = exempt >= 0;

    auto is_scheme_vertex = [&](int v) { return st.deg[v] >= 3 || v == exempt; };
    struct Chain {
        std::vector<int> darts;
        int face_fwd, face_bwd;
    };
    std::vector<Chain> chains;
    std::vector<char> dart_used(m.dart_count(), 0);
    for (int d = 0; d < m.dart_count(); ++d) {
        if (!st.alive[d] || dart_used[d]) continue;
        if (!is_scheme_vertex(m.vertex_of(d))) continue;
        Chain ch;
        int cur = d;
        while (true) {
            ch.darts.push_back(cur);
            dart_used[cur] = 1;
            dart_used[m.alpha(cur)] = 1;
            int w = m.head_vertex(cur);
            if (is_scheme_vertex(w)) break;
            int nxt = st.next[m.alpha(cur)];  // the other alive dart at w
            if (nxt == m.alpha(cur)) throw Error("chain walk stuck");
            cur = nxt;
        }
        ch.face_fwd = m.face_of(ch.darts[0]);
        ch.face_bwd = m.face_of(m.alpha(ch.darts[0]));
        chains.push_back(std::move(ch));
    }
    if (chains.empty()) throw NotLabeledMap("stripped map has no edges");

    // Chain splits: on f0/f_i chains with positive extremities and an
    // interior zero, the null vertex sits at the last zero along the
    // direction that keeps f0 on the left.
    std::vector<int> split_at(chains.size(), -1);
    for (std::size_t c = 0; c < chains.size(); ++c) {
        const Chain& ch = chains[c];
        int a = lm.face_name[ch.face_fwd], b = lm.face_name[ch.face_bwd];
        if (!((a == 0 && b >= 1) || (b == 0 && a >= 1))) continue;
        int r = static_cast<int>(ch.darts.size());
        std::vector<int> l(r + 1);
        l[0] = lm.labels[m.vertex_of(ch.darts[0])];
        for (int j = 0; j < r; ++j) l[j + 1] = lm.labels[m.head_vertex(ch.darts[j])];
        if (l[0] <= 0 || l[r] <= 0) continue;
        bool fwd_f0_left = a == 0;
        int T = -1;
        for (int j = 1; j <= r - 1; ++j)
            if (l[j] == 0 && (T < 0 || (fwd_f0_left ? j > T : j < T))) T = j;
        split_at[c] = T;
    }

    // Scheme vertices.
    std::vector<int> scheme_vertex(m.vertex_count(), -1);
    int n_sv = 0;
    for (int v = 0; v < m.vertex_count(); ++v)
        if (st.deg[v] > 0 && is_scheme_vertex(v)) scheme_vertex[v] = n_sv++;
    std::vector<int> split_vertex(chains.size(), -1);
    for (std::size_t c = 0; c < chains.size(); ++c)
        if (split_at[c] >= 0) split_vertex[c] = n_sv++;

    // Scheme darts with their m-dart segments.
    std::vector<std::vector<int>> seg;
    std::vector<int> s_alpha, s_origin;
    auto add_edge = [&](std::vector<int> fwd, int origin_fwd, int origin_bwd) {
        int s1 = static_cast<int>(seg.size());
        std::vector<int> bwd;
        for (auto it = fwd.rbegin(); it != fwd.rend(); ++it) bwd.push_back(m.alpha(*it));
        seg.push_back(std::move(fwd));
        seg.push_back(std::move(bwd));
        s_alpha.push_back(s1 + 1);
        s_alpha.push_back(s1);
        s_origin.push_back(origin_fwd);
        s_origin.push_back(origin_bwd);
        return s1;
    };
    std::vector<int> seg_head(m.dart_count(), -1);
    for (std::size_t c = 0; c < chains.size(); ++c) {
        const Chain& ch = chains[c];
        int r = static_cast<int>(ch.darts.size());
        int u = scheme_vertex[m.vertex_of(ch.darts[0])];
        int w = scheme_vertex[m.head_vertex(ch.darts[r - 1])];
        if (split_at[c] < 0) {
            int s1 = add_edge(ch.darts, u, w);
            seg_head[ch.darts[0]] = s1;
            seg_head[m.alpha(ch.darts[r - 1])] = s1 + 1;
        } else {
            int T = split_at[c];
            int nv = split_vertex[c];
            int s1 = add_edge({ch.darts.begin(), ch.darts.begin() + T}, u, nv);
            int s2 = add_edge({ch.darts.begin() + T, ch.darts.end()}, nv, w);
            seg_head[ch.darts[0]] = s1;
            seg_head[m.alpha(ch.darts[T - 1])] = s1 + 1;
            seg_head[ch.darts[T]] = s2;
            seg_head[m.alpha(ch.darts[r - 1])] = s2 + 1;
        }
    }

    int n_sd = static_cast<int>(seg.size());
    std::vector<int> s_sigma(n_sd, -1);
    for (int v = 0; v < m.vertex_count(); ++v) {
        if (scheme_vertex[v] < 0) continue;
        std::vector<int> heads;
        for (int d : m.darts_of_vertex(v))
            if (st.alive[d] && seg_head[d] >= 0) heads.push_back(seg_head[d]);
        if (heads.empty()) throw Error("scheme vertex without incident chains");
        for (std::size_t i = 0; i < heads.size(); ++i)
            s_sigma[heads[i]] = heads[(i + 1) % heads.size()];
    }
    for (std::size_t c = 0; c < chains.size(); ++c) {
        if (split_vertex[c] < 0) continue;
        int a = -1, b = -1;
        for (int s = 0; s < n_sd; ++s)
            if (s_origin[s] == split_vertex[c]) (a < 0 ? a : b) = s;
        s_sigma[a] = b;
        s_sigma[b] = a;
    }

    HalfEdgeMap sm = build_map(s_alpha, s_sigma, 0);

    std::vector<int> s_face_name(sm.face_count(), -1);
    for (int s = 0; s < n_sd; ++s) {
        int name = lm.face_name[m.face_of(seg[s][0])];
        int f = sm.face_of(s);
        if (s_face_name[f] >= 0 && s_face_name[f] != name)
            throw Error("inconsistent face inheritance");
        s_face_name[f] = name;
    }

    std::vector<char> s_null(sm.vertex_count(), 0);
    for (int v = 0; v < m.vertex_count(); ++v) {
        if (scheme_vertex[v] < 0 || st.deg[v] < 3 || lm.labels[v] != 0) continue;
        unsigned mask = 0;
        int sv_dart = -1;
        for (int d : m.darts_of_vertex(v)) {
            if (!st.alive[d] || seg_head[d] < 0) continue;
            sv_dart = seg_head[d];
            for (int side : {seg_head[d], s_alpha[seg_head[d]]})
                mask |= 1u << s_face_name[sm.face_of(side)];
        }
        if (on_f0_and_inner(mask)) s_null[sm.vertex_of(sv_dart)] = 1;
    }
    for (std::size_t c = 0; c < chains.size(); ++c) {
        if (split_vertex[c] < 0) continue;
        for (int s = 0; s < n_sd; ++s)
            if (s_origin[s] == split_vertex[c]) s_null[sm.vertex_of(s)] = 1;
    }

    SchemeDecomposition out;
    std::vector<int> relabel;
    out.scheme = make_scheme(sm, s_face_name, s_null, planted, &relabel);
    const Scheme& S = out.scheme;

    std::vector<std::vector<int>> seg_canon(n_sd);
    for (int s = 0; s < n_sd; ++s) seg_canon[relabel[s]] = seg[s];

    out.labeling.ell.assign(S.m.vertex_count(), 0);
    for (int s = 0; s < n_sd; ++s)
        out.labeling.ell[S.m.vertex_of(relabel[s])] = lm.labels[m.vertex_of(seg[s][0])];

    out.network.walks.resize(S.edge_count());
    for (int e = 0; e < S.edge_count(); ++e) {
        const std::vector<int>& sd = seg_canon[S.canonical_dart(e)];
        MotzkinWalk w;
        w.values.push_back(lm.labels[m.vertex_of(sd[0])]);
        for (int d : sd) w.values.push_back(lm.labels[m.head_vertex(d)]);
        out.network.walks[e] = std::move(w);
    }

    out.forests.resize(n_sd);
    int root_dart = m.root();
    for (int s = 0; s < n_sd; ++s) {
        const std::vector<int>& sd = seg_canon[s];
        LabeledForest f;
        f.terminal_floor_vertex = true;
        f.floor.values.push_back(lm.labels[m.vertex_of(sd[0])]);
        for (int d : sd) f.floor.values.push_back(lm.labels[m.head_vertex(d)]);
        int edge_index = 0;
        for (std::size_t j = 0; j < sd.size(); ++j) {
            CornerTree ct = corner_tree(m, lm.labels, st, sd[j]);
            for (int md : ct.contour_darts) {
                if (md == root_dart) {
                    out.marked_dart = s;
                    out.marked_forest_edge = edge_index;
                }
                ++edge_index;
            }
            if (sd[j] == root_dart) {
                out.marked_dart = s;
                out.marked_forest_edge = edge_index;
            }
            ++edge_index;  // the floor dart itself
            f.trees.push_back(std::move(ct.tree));
        }
        out.forests[s] = std::move(f);
    }
    return out;
}

}  // namespace

SchemeDecomposition decompose(const LabeledMap& lm) {
    lm.validate();
    if (lm.k() < 2) throw NotLabeledMap("decomposition needs k >= 2");
    if (!lm.in_lm()) throw NotLabeledMap("map is not in LM^(k+1)");
    SchemeDecomposition d = decompose_core(lm, -1);
    if (d.marked_dart < 0) throw Error("root mark not located");
    validate_decomposition(d);
    return d;
}

// ---------------------------------------------------------------------------
// Reconstruction.

namespace {

struct Builder {
    std::vector<int> alpha, sigma;
    std::vector<int> label;  // at the dart's origin

    int new_dart(int lab) {
        alpha.push_back(-1);
        sigma.push_back(-1);
        label.push_back(lab);
        return static_cast<int>(alpha.size()) - 1;
    }
    void pair(int a, int b) {
        alpha[a] = b;
        alpha[b] = a;
    }
    void close_cycle(const std::vector<int>& rot) {
        for (std::size_t i = 0; i < rot.size(); ++i) sigma[rot[i]] = rot[(i + 1) % rot.size()];
    }
};

// Grafts the subtrees of `node`; appends the root-child darts to `rot` and
// all created darts, contour-ordered, to `contour`.
void graft_children(Builder& b, const LabeledTree& t, int node, std::vector<int>& rot,
                    std::vector<int>& contour) {
    for (int c : t.children[node]) {
        int down = b.new_dart(t.label[node]);
        int up = b.new_dart(t.label[c]);
        b.pair(down, up);
        contour.push_back(down);
        std::vector<int> child_rot = {up};
        graft_children(b, t, c, child_rot, contour);
        b.close_cycle(child_rot);
        contour.push_back(up);
        rot.push_back(down);
    }
}

struct Rebuilt {
    HalfEdgeMap m;
    std::vector<int> labels;
    std::vector<int> face_name;
    std::vector<std::vector<int>> forest_edge_dart;  // per scheme dart
    std::vector<std::vector<int>> chain;             // per scheme dart
};

Rebuilt reconstruct_core(const SchemeDecomposition& dec) {
    const Scheme& S = dec.scheme;
    const HalfEdgeMap& sm = S.m;
    int n_sd = sm.dart_count();

    Builder b;
    std::vector<std::vector<int>> chain(n_sd);
    for (int e = 0; e < S.edge_count(); ++e) {
        int cd = S.canonical_dart(e);
        const std::vector<int>& values = dec.network.walks[e].values;
        int r = static_cast<int>(values.size()) - 1;
        for (int j = 0; j < r; ++j) {
            int d1 = b.new_dart(values[j]);
            int d2 = b.new_dart(values[j + 1]);
            b.pair(d1, d2);
            chain[cd].push_back(d1);
        }
        for (int j = r - 1; j >= 0; --j) chain[sm.alpha(cd)].push_back(b.alpha[chain[cd][j]]);
    }

    // Graft the forests, keeping the root-child dart list of each tree.
    std::vector<std::vector<std::vector<int>>> tree_rot(n_sd);
    Rebuilt out;
    out.forest_edge_dart.resize(n_sd);
    for (int s = 0; s < n_sd; ++s) {
        const LabeledForest& f = dec.forests[s];
        tree_rot[s].resize(f.tree_count());
        for (int j = 0; j < f.tree_count(); ++j) {
            std::vector<int> contour;
            graft_children(b, f.trees[j], f.trees[j].root, tree_rot[s][j], contour);
            for (int d : contour) out.forest_edge_dart[s].push_back(d);
            out.forest_edge_dart[s].push_back(chain[s][j]);
        }
    }

    // Rotations at inner chain vertices: (tree_j(F_cd), fwd_j, tree_{r-j}(F_rev),
    // bwd_{j-1}).
    for (int e = 0; e < S.edge_count(); ++e) {
        int cd = S.canonical_dart(e);
        int rev = sm.alpha(cd);
        int r = static_cast<int>(chain[cd].size());
        for (int j = 1; j < r; ++j) {
            std::vector<int> rot = tree_rot[cd][j];
            rot.push_back(chain[cd][j]);
            for (int d : tree_rot[rev][r - j]) rot.push_back(d);
            rot.push_back(b.alpha[chain[cd][j - 1]]);
            b.close_cycle(rot);
        }
    }
    // Rotations at scheme vertices: per incident scheme dart in sigma order,
    // tree 0 of its forest then its first chain dart.
    for (int v = 0; v < sm.vertex_count(); ++v) {
        std::vector<int> rot;
        for (int s : sm.darts_of_vertex(v)) {
            for (int d : tree_rot[s][0]) rot.push_back(d);
            rot.push_back(chain[s][0]);
        }
        b.close_cycle(rot);
    }

    out.m = build_map(b.alpha, b.sigma, 0);
    out.chain = std::move(chain);

    out.labels.assign(out.m.vertex_count(), 0);
    std::vector<char> seen(out.m.vertex_count(), 0);
    for (int d = 0; d < out.m.dart_count(); ++d) {
        int v = out.m.vertex_of(d);
        if (seen[v] && out.labels[v] != b.label[d])
            throw IncompatibleComponents("labels disagree at a rebuilt vertex");
        out.labels[v] = b.label[d];
        seen[v] = 1;
    }

    out.face_name.assign(out.m.face_count(), -1);
    for (int s = 0; s < n_sd; ++s) {
        int name = S.face_name[sm.face_of(s)];
        int f = out.m.face_of(out.chain[s][0]);
        if (out.face_name[f] >= 0 && out.face_name[f] != name)
            throw IncompatibleComponents("face names collide in reconstruction");
        out.face_name[f] = name;
    }
    for (int f = 0; f < out.m.face_count(); ++f)
        if (out.face_name[f] < 0) throw IncompatibleComponents("face missing a name");
    return out;
}

}  // namespace

LabeledMap reconstruct(const SchemeDecomposition& dec) {
    validate_decomposition(dec);
    if (dec.planted()) throw Error("use reconstruct_planted for planted decompositions");
    Rebuilt rb = reconstruct_core(dec);
    LabeledMap lm;
    int root = rb.forest_edge_dart[dec.marked_dart][dec.marked_forest_edge];
    lm.m = rb.m.with_root(root);
    lm.labels = std::move(rb.labels);
    lm.face_name = std::move(rb.face_name);
    lm.validate();
    if (!lm.in_lm()) throw IncompatibleComponents("reconstructed map is not in LM^(k+1)");
    return lm;
}

SchemeDecomposition decompose_planted(const LabeledMap& lm) {
    lm.validate();
    if (lm.k() < 2) throw NotLabeledMap("decomposition needs k >= 2");
    if (!lm.in_lm()) throw NotLabeledMap("map is not in LM^(k+1)");

    // Plant a pendant edge into the root corner; the pendant vertex survives
    // stripping and turns into v**.
    const HalfEdgeMap& m = lm.m;
    int e_star = m.root();
    int n = m.dart_count();
    std::vector<int> alpha(n + 2), sigma(n + 2);
    for (int d = 0; d < n; ++d) {
        alpha[d] = m.alpha(d);
        sigma[d] = m.sigma(d);
    }
    int p = n, q = n + 1;
    alpha[p] = q;
    alpha[q] = p;
    sigma[m.sigma_inv(e_star)] = p;
    sigma[p] = e_star;
    sigma[q] = q;

    LabeledMap plus;
    plus.m = build_map(alpha, sigma, e_star);
    plus.labels.assign(plus.m.vertex_count(), 0);
    for (int d = 0; d < n; ++d) plus.labels[plus.m.vertex_of(d)] = lm.labels[m.vertex_of(d)];
    plus.labels[plus.m.vertex_of(q)] = lm.labels[m.vertex_of(e_star)];
    plus.face_name.assign(plus.m.face_count(), -1);
    for (int d = 0; d < n; ++d) plus.face_name[plus.m.face_of(d)] = lm.face_name[m.face_of(d)];
    for (int f = 0; f < plus.m.face_count(); ++f)
        if (plus.face_name[f] < 0) throw Error("pendant created a face");

    SchemeDecomposition dec = decompose_core(plus, plus.m.vertex_of(q));
    dec.marked_dart = -1;
    dec.marked_forest_edge = -1;
    validate_decomposition(dec);
    return dec;
}

LabeledMap reconstruct_planted(const SchemeDecomposition& dec) {
    validate_decomposition(dec);
    if (!dec.planted()) throw Error("decomposition is not planted");
    Rebuilt rb = reconstruct_core(dec);
    const Scheme& S = dec.scheme;

    // The pendant dart runs from v* to v**; the root is its sigma successor.
    int vss_dart = S.m.vertex_dart(S.v_star_star());
    int cd = S.m.alpha(vss_dart);
    int pendant = rb.chain[cd].back();
    int root = rb.m.sigma(pendant);
    int pendant_rev = rb.m.alpha(pendant);
    if (root == pendant || root == pendant_rev)
        throw IncompatibleComponents("pendant is isolated at the root corner");

    // Remove the pendant edge.
    int n = rb.m.dart_count();
    std::vector<int> keep_id(n, -1);
    int next = 0;
    for (int d = 0; d < n; ++d)
        if (d != pendant && d != pendant_rev) keep_id[d] = next++;
    std::vector<int> alpha(next), sigma(next);
    for (int d = 0; d < n; ++d) {
        if (keep_id[d] < 0) continue;
        alpha[keep_id[d]] = keep_id[rb.m.alpha(d)];
        int s = rb.m.sigma(d);
        while (s == pendant || s == pendant_rev) s = rb.m.sigma(s);
        sigma[keep_id[d]] = keep_id[s];
    }

    LabeledMap lm;
    lm.m = build_map(alpha, sigma, keep_id[root]);
    lm.labels.assign(lm.m.vertex_count(), 0);
    for (int d = 0; d < n; ++d)
        if (keep_id[d] >= 0) lm.labels[lm.m.vertex_of(keep_id[d])] = rb.labels[rb.m.vertex_of(d)];
    lm.face_name.assign(lm.m.face_count(), -1);
    for (int d = 0; d < n; ++d)
        if (keep_id[d] >= 0) lm.face_name[lm.m.face_of(keep_id[d])] = rb.face_name[rb.m.face_of(d)];
    lm.validate();
    if (!lm.in_lm()) throw IncompatibleComponents("reconstructed map is not in LM^(k+1)");
    return lm;
}

void validate_decomposition(const SchemeDecomposition& dec) {
    const Scheme& S = dec.scheme;
    const HalfEdgeMap& sm = S.m;
    int n_sd = sm.dart_count();
    if (static_cast<int>(dec.labeling.ell.size()) != sm.vertex_count())
        throw IncompatibleComponents("labeling size mismatch");
    for (int v = 0; v < sm.vertex_count(); ++v) {
        if (S.vertex_class(v) == VertexClass::kNull && dec.labeling.ell[v] != 0)
            throw IncompatibleComponents("null vertex with nonzero label");
        if (S.vertex_class(v) == VertexClass::kInner && dec.labeling.ell[v] <= 0)
            throw IncompatibleComponents("V_I vertex without positive label");
    }
    if (static_cast<int>(dec.network.walks.size()) != S.edge_count())
        throw IncompatibleComponents("walk network size mismatch");

    int ess_edge = -1;
    if (S.planted) ess_edge = S.edge_of(sm.vertex_dart(S.v_star_star()));

    for (int e = 0; e < S.edge_count(); ++e) {
        const MotzkinWalk& w = dec.network.walks[e];
        w.validate();
        int r = w.duration();
        if (r < 1) throw IncompatibleComponents("walk with zero duration");
        int cd = S.canonical_dart(e);
        if (w.values.front() != dec.labeling.ell[sm.vertex_of(cd)])
            throw IncompatibleComponents("walk start differs from labeling");
        if (w.values.back() != dec.labeling.ell[sm.head_vertex(cd)])
            throw IncompatibleComponents("walk end differs from labeling");
        if (e == ess_edge) {
            // pendant chain: the final step repeats v*'s label at v**
            if (w.values[r] != w.values[r - 1])
                throw IncompatibleComponents("pendant walk must end with a flat step");
            continue;  // E_O, no positivity constraints
        }
        if (S.edge_class(e) == EdgeClass::kInner) {
            for (int v : w.values)
                if (v <= 0) throw IncompatibleComponents("E_I walk not positive");
        } else if (S.edge_class(e) == EdgeClass::kNull) {
            for (int v : w.values)
                if (v < 0) throw IncompatibleComponents("E_N walk negative");
            if (!S.thin(e)) {
                for (int i = 0; i < r; ++i)
                    if (w.values[i] <= 0)
                        throw IncompatibleComponents("non-thin E_N walk touches 0 early");
            }
        }
    }

    if (static_cast<int>(dec.forests.size()) != n_sd)
        throw IncompatibleComponents("forest family size mismatch");
    for (int s = 0; s < n_sd; ++s) {
        const LabeledForest& f = dec.forests[s];
        f.validate();
        if (!f.terminal_floor_vertex)
            throw IncompatibleComponents("decomposition forests carry a terminal floor vertex");
        int e = S.edge_of(s);
        const MotzkinWalk& w = dec.network.walks[e];
        if (f.tree_count() != w.duration())
            throw IncompatibleComponents("forest tree count differs from walk duration");
        bool canonical_dir = S.canonical_dart(e) == s;
        int r = w.duration();
        for (int i = 0; i <= r; ++i) {
            int expect = canonical_dir ? w.values[i] : w.values[r - i];
            if (f.floor.values[i] != expect)
                throw IncompatibleComponents("forest floor labels differ from the walk");
        }
    }

    if (S.planted) {
        if (dec.marked_dart != -1)
            throw IncompatibleComponents("planted decompositions carry no mark");
        // Nothing grafts at v**: the first tree on the v** side is trivial.
        int from_vss = sm.vertex_dart(S.v_star_star());
        if (dec.forests[from_vss].trees[0].vertex_count() != 1)
            throw IncompatibleComponents("v** carries a grafted tree");
    } else {
        if (dec.marked_dart < 0 || dec.marked_dart >= n_sd)
            throw IncompatibleComponents("marked dart out of range");
        int count = forest_oriented_edges(dec.forests[dec.marked_dart]);
        if (dec.marked_forest_edge < 0 || dec.marked_forest_edge >= count)
            throw IncompatibleComponents("marked forest edge out of range");
    }
}

// ---------------------------------------------------------------------------
// Exact counting (eq. over walk networks and forests).

BigInt binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    BigInt out = 1;
    for (int i = 1; i <= k; ++i) {
        out *= (n - k + i);
        out /= i;
    }
    return out;
}

SchemeDecomposition random_decomposition(const Scheme& S, Rng& rng, int max_duration,
                                         int max_tree_edges) {
    const HalfEdgeMap& sm = S.m;
    SchemeDecomposition dec;
    dec.scheme = S;

    dec.labeling.ell.assign(sm.vertex_count(), 0);
    for (int v = 0; v < sm.vertex_count(); ++v) {
        switch (S.vertex_class(v)) {
            case VertexClass::kNull: dec.labeling.ell[v] = 0; break;
            case VertexClass::kInner: dec.labeling.ell[v] = rng.uniform_int(1, 3); break;
            case VertexClass::kOuter: dec.labeling.ell[v] = rng.uniform_int(-2, 2); break;
        }
    }

    int ess_edge = -1;
    if (S.planted) ess_edge = S.edge_of(sm.vertex_dart(S.v_star_star()));

    dec.network.walks.resize(S.edge_count());
    for (int e = 0; e < S.edge_count(); ++e) {
        int cd = S.canonical_dart(e);
        int a = dec.labeling.ell[sm.vertex_of(cd)];
        int b = dec.labeling.ell[sm.head_vertex(cd)];
        if (e == ess_edge) {
            // paper duration r may be 0; the stored walk appends the flat
            // pendant step at v**
            int r = std::abs(a - b) + static_cast<int>(rng.below(max_duration));
            MotzkinWalk w;
            w.values.push_back(a);
            for (int i = 1; i < r; ++i) {
                int step = w.values.back() + rng.uniform_int(-1, 1);
                w.values.push_back(std::max(b - (r - i), std::min(b + (r - i), step)));
            }
            if (r >= 1) w.values.push_back(b);
            w.values.push_back(b);
            dec.network.walks[e] = std::move(w);
            continue;
        }
        // rejection sampling under the class constraints
        for (int attempt = 0;; ++attempt) {
            if (attempt > 4000) throw Error("walk sampling stalled");
            int lo_r = std::max(1, std::abs(a - b));
            if (S.edge_class(e) == EdgeClass::kNull) lo_r = std::max(lo_r, a);
            int r = lo_r + static_cast<int>(rng.below(max_duration));
            MotzkinWalk w;
            w.values.push_back(a);
            for (int i = 1; i < r; ++i) w.values.push_back(w.values.back() + rng.uniform_int(-1, 1));
            w.values.push_back(b);
            if (std::abs(w.values[r] - w.values[r - 1]) > 1) continue;
            bool ok = true;
            if (S.edge_class(e) == EdgeClass::kInner) {
                for (int v : w.values) ok &= v > 0;
            } else if (S.edge_class(e) == EdgeClass::kNull) {
                for (int v : w.values) ok &= v >= 0;
                if (!S.thin(e))
                    for (int i = 0; i < r; ++i) ok &= w.values[i] > 0;
            }
            if (!ok) continue;
            dec.network.walks[e] = std::move(w);
            break;
        }
    }

    int n_sd = sm.dart_count();
    dec.forests.resize(n_sd);
    for (int s = 0; s < n_sd; ++s) {
        int e = S.edge_of(s);
        const MotzkinWalk& w = dec.network.walks[e];
        int r = w.duration();
        MotzkinWalk floor;
        floor.values.resize(r + 1);
        bool canonical_dir = S.canonical_dart(e) == s;
        for (int i = 0; i <= r; ++i)
            floor.values[i] = canonical_dir ? w.values[i] : w.values[r - i];
        bool from_vss = S.planted && sm.vertex_of(s) == S.v_star_star();
        LabeledForest f;
        f.floor = floor;
        f.terminal_floor_vertex = true;
        for (int j = 0; j < r; ++j) {
            int edges = (from_vss && j == 0) ? 0 : static_cast<int>(rng.below(max_tree_edges + 1));
            LabeledTree t;
            if (edges == 0) {
                t.parent = {-1};
                t.children = {{}};
                t.label = {floor.values[j]};
                t.root = 0;
            } else {
                t = sample_labeled_tree(edges, rng);
                for (int v = 0; v < t.vertex_count(); ++v) t.label[v] += floor.values[j];
            }
            f.trees.push_back(std::move(t));
        }
        dec.forests[s] = std::move(f);
    }

    if (!S.planted) {
        dec.marked_dart = static_cast<int>(rng.below(n_sd));
        dec.marked_forest_edge =
            static_cast<int>(rng.below(forest_oriented_edges(dec.forests[dec.marked_dart])));
    }
    validate_decomposition(dec);
    return dec;
}

BigInt count_labeled_maps_exact(const Scheme& S, int n) {
    if (S.planted) throw Error("exact counting applies to plain schemes");
    int n_edges = S.edge_count();
    if (n_edges > n) return 0;
    const HalfEdgeMap& sm = S.m;

    // Free label ranges: V_N pinned to 0, V_I in [1, n], V_O in [-n, n]
    // (labels further than n are unreachable along walks of total length n).
    std::vector<int> lo(sm.vertex_count()), hi(sm.vertex_count());
    for (int v = 0; v < sm.vertex_count(); ++v) {
        switch (S.vertex_class(v)) {
            case VertexClass::kNull: lo[v] = hi[v] = 0; break;
            case VertexClass::kInner: lo[v] = 1; hi[v] = n; break;
            case VertexClass::kOuter: lo[v] = -n; hi[v] = n; break;
        }
    }

    std::map<std::tuple<int, int, int>, BigInt> cache_free, cache_pos;
    auto walk_count = [&](int e, int a, int b, int r) -> BigInt {
        switch (S.edge_class(e)) {
            case EdgeClass::kOuter: {
                auto key = std::make_tuple(a, b, r);
                auto it = cache_free.find(key);
                if (it != cache_free.end()) return it->second;
                BigInt v = motzkin_count(a, b, r);
                cache_free.emplace(key, v);
                return v;
            }
            case EdgeClass::kInner:
            case EdgeClass::kNull: {
                int aa = a, bb = b, rr = r;
                if (S.edge_class(e) == EdgeClass::kNull && S.thin(e)) {
                    aa = a + 1;
                    bb = 0;
                    rr = r + 1;
                }
                auto key = std::make_tuple(aa, bb, rr);
                auto it = cache_pos.find(key);
                if (it != cache_pos.end()) return it->second;
                BigInt v = motzkin_count_positive(aa, bb, rr);
                cache_pos.emplace(key, v);
                return v;
            }
        }
        return 0;
    };

    BigInt total = 0;
    std::vector<int> r_e(n_edges, 1);
    std::vector<int> ell(sm.vertex_count(), 0);

    std::function<void(int, int)> label_rec = [&](int v, int r_sum) {
        if (v == sm.vertex_count()) {
            BigInt prod = 1;
            for (int e = 0; e < n_edges && prod != 0; ++e) {
                int cd = S.canonical_dart(e);
                prod *= walk_count(e, ell[sm.vertex_of(cd)], ell[sm.head_vertex(cd)], r_e[e]);
            }
            if (prod == 0) return;
            BigInt p3 = 1;
            for (int i = 0; i < n - r_sum; ++i) p3 *= 3;
            total += p3 * r_sum * binomial(2 * n, n - r_sum) * prod;
            return;
        }
        for (int x = lo[v]; x <= hi[v]; ++x) {
            bool feasible = true;
            // prune: along every incident edge, |delta| must not exceed r_e
            for (int d : sm.darts_of_vertex(v)) {
                int w = sm.head_vertex(d);
                if (w < v && std::abs(ell[w] - x) > r_e[S.edge_of(d)]) {
                    feasible = false;
                    break;
                }
            }
            if (!feasible) continue;
            ell[v] = x;
            label_rec(v + 1, r_sum);
        }
    };

    std::function<void(int, int)> comp_rec = [&](int e, int used) {
        if (e == n_edges) {
            label_rec(0, used);
            return;
        }
        int remaining_min = n_edges - e - 1;
        for (int r = 1; used + r + remaining_min <= n; ++r) {
            r_e[e] = r;
            comp_rec(e + 1, used + r);
        }
    };
    comp_rec(0, 0);
    return 2 * total;
}

}  // namespace quadlab
