#include "quadlab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace quadlab {

DistanceField bfs(const HalfEdgeMap& m, int source) {
    DistanceField f;
    f.source = source;
    f.dist.assign(m.vertex_count(), -1);
    std::vector<int> queue;
    queue.reserve(m.vertex_count());
    f.dist[source] = 0;
    queue.push_back(source);
    for (std::size_t i = 0; i < queue.size(); ++i) {
        int v = queue[i];
        int d0 = m.vertex_dart(v);
        int d = d0;
        do {
            int w = m.head_vertex(d);
            if (f.dist[w] < 0) {
                f.dist[w] = f.dist[v] + 1;
                queue.push_back(w);
            }
            d = m.sigma(d);
        } while (d != d0);
    }
    return f;
}

bool aligned(const Quadrangulation& q, int x, int y, int z) {
    DistanceField fx = bfs(q.map(), x);
    DistanceField fy = bfs(q.map(), y);
    return fx.dist[y] + fy.dist[z] == fx.dist[z];
}

bool all_geodesics_hit_ball(const Quadrangulation& q, int a, int b, int center, double radius) {
    const HalfEdgeMap& m = q.map();
    DistanceField fc = bfs(m, center);
    auto in_ball = [&](int w) { return static_cast<double>(fc.dist[w]) < radius; };
    if (in_ball(a) || in_ball(b)) return true;
    DistanceField fa = bfs(m, a);
    // Shortest path in the ball-deleted graph; if it is longer (or gone),
    // every geodesic used a ball vertex.
    std::vector<int> dist(m.vertex_count(), -1);
    std::vector<int> queue;
    dist[a] = 0;
    queue.push_back(a);
    for (std::size_t i = 0; i < queue.size(); ++i) {
        int v = queue[i];
        if (v == b) break;
        int d0 = m.vertex_dart(v);
        int d = d0;
        do {
            int w = m.head_vertex(d);
            if (dist[w] < 0 && !in_ball(w)) {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
            d = m.sigma(d);
        } while (d != d0);
    }
    return dist[b] < 0 || dist[b] > fa.dist[b];
}

bool geodesic_avoiding_exists(const Quadrangulation& q, int a, int b,
                              const std::vector<char>& forbidden) {
    if (forbidden[a] || forbidden[b]) return false;
    const HalfEdgeMap& m = q.map();
    DistanceField fa = bfs(m, a);
    DistanceField fb = bfs(m, b);
    int d_ab = fa.dist[b];
    // Reachability through the geodesic DAG restricted to allowed vertices.
    std::vector<char> reach(m.vertex_count(), 0);
    std::vector<int> queue;
    reach[a] = 1;
    queue.push_back(a);
    for (std::size_t i = 0; i < queue.size(); ++i) {
        int v = queue[i];
        if (v == b) return true;
        int d0 = m.vertex_dart(v);
        int d = d0;
        do {
            int w = m.head_vertex(d);
            if (!reach[w] && !forbidden[w] && fa.dist[w] == fa.dist[v] + 1 &&
                fa.dist[w] + fb.dist[w] == d_ab) {
                reach[w] = 1;
                queue.push_back(w);
            }
            d = m.sigma(d);
        } while (d != d0);
    }
    return false;
}

namespace {

double rescale_unit(int n) { return std::pow(8.0 * n / 9.0, 0.25); }

bool no_three_aligned(const std::vector<DistanceField>& f, const std::vector<int>& v) {
    for (std::size_t a = 0; a < v.size(); ++a)
        for (std::size_t b = 0; b < v.size(); ++b)
            for (std::size_t c = 0; c < v.size(); ++c) {
                if (a == b || b == c || a == c) continue;
                if (f[a].dist[v[b]] + f[b].dist[v[c]] == f[a].dist[v[c]]) return false;
            }
    return true;
}

// Second bullet of A1 for one target: every v0->vt geodesic visits a vertex v
// with d(v, v0) > thresh such that (v1, v, v2) are not aligned.
bool every_geodesic_sees_witness(const Quadrangulation& q, int v0, int vt, int v1, int v2,
                                 double thresh) {
    const HalfEdgeMap& m = q.map();
    DistanceField f0 = bfs(m, v0);
    DistanceField f1 = bfs(m, v1);
    DistanceField f2 = bfs(m, v2);
    std::vector<char> witness(m.vertex_count(), 0);
    for (int w = 0; w < m.vertex_count(); ++w) {
        bool is_aligned = f1.dist[w] + f2.dist[w] == f1.dist[v2];
        if (static_cast<double>(f0.dist[w]) > thresh && !is_aligned) witness[w] = 1;
    }
    return !geodesic_avoiding_exists(q, v0, vt, witness);
}

}  // namespace

bool event_A1(const Quadrangulation& q, int v0, int v1, int v2, double eps, double beta, int n) {
    double unit = rescale_unit(n);
    const HalfEdgeMap& m = q.map();
    std::vector<int> v = {v0, v1, v2};
    std::vector<DistanceField> f;
    for (int x : v) f.push_back(bfs(m, x));

    double sep = 3.0 * std::pow(eps, 1.0 - beta) * unit;
    if (std::min(f[0].dist[v1], f[0].dist[v2]) < sep) return false;
    if (!no_three_aligned(f, v)) return false;
    if (!all_geodesics_hit_ball(q, v1, v2, v0, eps * unit)) return false;

    double thresh = std::pow(eps, 1.0 - beta) * unit;
    return every_geodesic_sees_witness(q, v0, v1, v1, v2, thresh) ||
           every_geodesic_sees_witness(q, v0, v2, v1, v2, thresh);
}

bool event_A2(const Quadrangulation& q, int v0, int v1, int v2, int v3, double eps, int n) {
    double unit = rescale_unit(n);
    const HalfEdgeMap& m = q.map();
    std::vector<int> v = {v0, v1, v2, v3};
    std::vector<DistanceField> f;
    for (int x : v) f.push_back(bfs(m, x));

    double sep = 3.0 * eps * unit;
    if (f[0].dist[v1] < sep || f[0].dist[v2] < sep || f[0].dist[v3] < sep) return false;
    if (!no_three_aligned(f, v)) return false;
    if (!all_geodesics_hit_ball(q, v1, v2, v0, eps * unit)) return false;

    // No two geodesic chains from v0 to v_i, v_j may share a vertex outside
    // the ball: a shared vertex w outside B lying on some v0->v_i and some
    // v0->v_j geodesic witnesses failure.
    double radius = eps * unit;
    for (int i = 1; i <= 3; ++i)
        for (int j = i + 1; j <= 3; ++j)
            for (int w = 0; w < m.vertex_count(); ++w) {
                if (static_cast<double>(f[0].dist[w]) < radius) continue;
                if (f[0].dist[w] + f[i].dist[w] == f[0].dist[v[i]] &&
                    f[0].dist[w] + f[j].dist[w] == f[0].dist[v[j]])
                    return false;
            }
    return true;
}

std::vector<int> StarReport::star_points() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < geodesic.size(); ++i)
        if (is_star_point[i]) out.push_back(geodesic[i]);
    return out;
}

StarReport star_points_on_geodesic(const Quadrangulation& q, int v1, int v2, int v3) {
    const HalfEdgeMap& m = q.map();
    DistanceField f1 = bfs(m, v1);
    DistanceField f2 = bfs(m, v2);
    DistanceField f3 = bfs(m, v3);

    // Deterministic geodesic: lexicographically smallest vertex sequence.
    StarReport rep;
    int cur = v1;
    rep.geodesic.push_back(cur);
    while (cur != v2) {
        int best = -1;
        int d0 = m.vertex_dart(cur);
        int d = d0;
        do {
            int w = m.head_vertex(d);
            if (f1.dist[w] == f1.dist[cur] + 1 && f2.dist[w] == f2.dist[cur] - 1)
                if (best < 0 || w < best) best = w;
            d = m.sigma(d);
        } while (d != d0);
        cur = best;
        rep.geodesic.push_back(cur);
    }

    int len = static_cast<int>(rep.geodesic.size());
    rep.is_star_point.assign(len, 1);
    for (int i = 0; i < len; ++i) {
        int y = rep.geodesic[i];
        for (int j = 0; j < len && rep.is_star_point[i]; ++j) {
            if (j == i) continue;
            int yp = rep.geodesic[j];
            // Both on a common geodesic, so d(y', y) = |i - j|.
            if (f3.dist[yp] + std::abs(i - j) == f3.dist[y]) rep.is_star_point[i] = 0;
        }
    }
    return rep;
}

namespace {

std::vector<std::vector<char>> ball_membership(const std::vector<int>& points,
                                               const Quadrangulation& q, double radius) {
    // covered[c][p]: point p lies in the open radius-ball around point c.
    std::size_t n = points.size();
    std::vector<std::vector<char>> covered(n, std::vector<char>(n, 0));
    for (std::size_t c = 0; c < n; ++c) {
        DistanceField f = bfs(q.map(), points[c]);
        for (std::size_t p = 0; p < n; ++p)
            covered[c][p] = static_cast<double>(f.dist[points[p]]) < radius;
    }
    return covered;
}

int exact_cover(const std::vector<std::vector<char>>& covered) {
    std::size_t n = covered.size();
    std::vector<char> done(n, 0);
    int best = static_cast<int>(n);
    std::function<void(int)> rec = [&](int used) {
        if (used >= best) return;
        int pick = -1;
        for (std::size_t p = 0; p < n; ++p)
            if (!done[p]) {
                pick = static_cast<int>(p);
                break;
            }
        if (pick < 0) {
            best = used;
            return;
        }
        for (std::size_t c = 0; c < n; ++c) {
            if (!covered[c][pick]) continue;
            std::vector<std::size_t> newly;
            for (std::size_t p = 0; p < n; ++p)
                if (!done[p] && covered[c][p]) {
                    done[p] = 1;
                    newly.push_back(p);
                }
            rec(used + 1);
            for (std::size_t p : newly) done[p] = 0;
        }
    };
    rec(0);
    return best;
}

}  // namespace

int covering_number(const std::vector<int>& points, const Quadrangulation& q, double radius) {
    return covering_bracket(points, q, radius).greedy;
}

CoverBracket covering_bracket(const std::vector<int>& points, const Quadrangulation& q,
                              double radius) {
    CoverBracket out;
    if (points.empty()) return out;
    auto covered = ball_membership(points, q, radius);
    std::size_t n = points.size();

    // Greedy max-coverage.
    std::vector<char> done(n, 0);
    std::size_t remaining = n;
    while (remaining > 0) {
        std::size_t best_c = 0;
        int best_gain = -1;
        for (std::size_t c = 0; c < n; ++c) {
            int gain = 0;
            for (std::size_t p = 0; p < n; ++p)
                if (!done[p] && covered[c][p]) ++gain;
            if (gain > best_gain) {
                best_gain = gain;
                best_c = c;
            }
        }
        if (best_gain <= 0) throw Error("greedy cover stalled");
        for (std::size_t p = 0; p < n; ++p)
            if (covered[best_c][p] && !done[p]) {
                done[p] = 1;
                --remaining;
            }
        ++out.greedy;
    }

    // Maximal 2R-separated subset (first-fit): a valid lower bound for any
    // cover by open R-balls.
    std::vector<std::size_t> packing;
    for (std::size_t p = 0; p < n; ++p) {
        bool far = true;
        DistanceField f = bfs(q.map(), points[p]);
        for (std::size_t c : packing)
            if (static_cast<double>(f.dist[points[c]]) < 2.0 * radius) {
                far = false;
                break;
            }
        if (far) packing.push_back(p);
    }
    out.packing_lower = static_cast<int>(packing.size());

    if (n <= 20) out.exact = exact_cover(covered);
    return out;
}

std::vector<int> separated_points(const std::vector<int>& path, const Quadrangulation& q,
                                  double eta) {
    if (path.empty()) throw Error("empty path");
    const HalfEdgeMap& m = q.map();
    for (std::size_t i = 1; i < path.size(); ++i) {
        bool adjacent = path[i] == path[i - 1];
        int d0 = m.vertex_dart(path[i - 1]);
        int d = d0;
        do {
            if (m.head_vertex(d) == path[i]) adjacent = true;
            d = m.sigma(d);
        } while (d != d0 && !adjacent);
        if (!adjacent) throw Error("path is not continuous in the map");
    }

    std::vector<int> picks;
    std::size_t s = 0;
    while (true) {
        picks.push_back(path[s]);
        DistanceField f = bfs(m, path[s]);
        std::size_t last_close = s;
        for (std::size_t t = s; t < path.size(); ++t)
            if (static_cast<double>(f.dist[path[t]]) < 2.0 * eta) last_close = t;
        if (last_close + 1 >= path.size()) break;
        s = last_close + 1;
    }
    return picks;
}

DiscretePseudoMetrics discrete_pseudo_metrics(const ContourEncoding& c) {
    int steps = static_cast<int>(c.C.size()) - 2;  // 2n
    if (steps > 2000) throw TooLarge("pseudo-metric tables are limited to 2000 contour steps");
    LabeledTree t = tree_of_contour(c);

    DiscretePseudoMetrics out;
    int M = std::max(steps, 1);
    out.positions = M;
    out.labels.assign(c.L.begin(), c.L.begin() + M);

    // Contour position -> tree vertex (class).
    out.position_class.assign(M, 0);
    {
        std::vector<std::size_t> next(t.vertex_count(), 0);
        int v = t.root;
        for (int i = 0; i < M; ++i) {
            out.position_class[i] = v;
            if (i + 1 < static_cast<int>(c.C.size()) - 1) {
                if (c.C[i + 1] > c.C[i])
                    v = t.children[v][next[v]++];
                else
                    v = t.parent[v];
            }
        }
    }
    int classes = t.vertex_count();

    // d_e(i,j) = C(i) + C(j) - 2 min C over the linear interval.
    out.d_e.assign(M, std::vector<int>(M, 0));
    for (int i = 0; i < M; ++i) {
        int run_min = c.C[i];
        for (int j = i; j < M; ++j) {
            run_min = std::min(run_min, c.C[j]);
            int v = c.C[i] + c.C[j] - 2 * run_min;
            out.d_e[i][j] = out.d_e[j][i] = v;
        }
    }

    // D°(i,j) via cyclic interval minima of the labels.
    std::vector<std::vector<int>> fwd_min(M, std::vector<int>(M, 0));
    for (int i = 0; i < M; ++i) {
        int run = c.L[i];
        for (int d = 0; d < M; ++d) {
            int j = (i + d) % M;
            run = std::min(run, c.L[j]);
            fwd_min[i][j] = run;
        }
    }
    out.d_circ.assign(M, std::vector<int>(M, 0));
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j)
            out.d_circ[i][j] = c.L[i] + c.L[j] - 2 * std::max(fwd_min[i][j], fwd_min[j][i]);

    out.d_circ_class.assign(classes, std::vector<int>(classes, std::numeric_limits<int>::max()));
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) {
            int a = out.position_class[i], b = out.position_class[j];
            out.d_circ_class[a][b] = std::min(out.d_circ_class[a][b], out.d_circ[i][j]);
        }

    // D* = shortest paths over classes with D° weights (Floyd-Warshall).
    out.d_star = out.d_circ_class;
    for (int a = 0; a < classes; ++a) out.d_star[a][a] = 0;
    for (int via = 0; via < classes; ++via)
        for (int a = 0; a < classes; ++a)
            for (int b = 0; b < classes; ++b) {
                long sum = static_cast<long>(out.d_star[a][via]) + out.d_star[via][b];
                if (sum < out.d_star[a][b]) out.d_star[a][b] = static_cast<int>(sum);
            }

    out.s_star = 0;
    for (int i = 1; i < M; ++i)
        if (c.L[i] < c.L[out.s_star]) out.s_star = i;
    return out;
}

}  // namespace quadlab
