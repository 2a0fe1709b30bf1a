#include "quadlab/experiments.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <functional>
#include <sstream>
#include <thread>

#include "quadlab/cvs.hpp"
#include "quadlab/io.hpp"
#include "quadlab/metrics.hpp"
#include "quadlab/schemes.hpp"

namespace quadlab {

void ExperimentConfig::validate() const {
    if (n_grid.empty() || eps_grid.empty() || r_grid.empty()) throw Error("empty grid");
    if (replicas < 1) throw Error("replica count must be at least 1");
    if (threads < 1) throw Error("thread count must be at least 1");
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    auto parse_ints = [](const std::string& s) {
        std::vector<int> out;
        std::istringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
        return out;
    };
    auto parse_doubles = [](const std::string& s) {
        std::vector<double> out;
        std::istringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
        return out;
    };
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw IOError("config line " + std::to_string(lineno) + " is not key = value");
            continue;
        }
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        if (key == "kind") cfg.kind = val;
        else if (key == "n") cfg.n_grid = parse_ints(val);
        else if (key == "replicas") cfg.replicas = std::stoi(val);
        else if (key == "eps") cfg.eps_grid = parse_doubles(val);
        else if (key == "beta") cfg.beta = std::stod(val);
        else if (key == "r") cfg.r_grid = parse_ints(val);
        else if (key == "seed") cfg.seed = std::stoull(val);
        else if (key == "threads") cfg.threads = std::stoi(val);
        else if (key == "oracle_bound") cfg.oracle_bound = std::stoi(val);
        else if (key == "out") cfg.out_path = val;
        else throw IOError("unknown config key: " + key);
    }
    return cfg;
}

void parallel_replicas(int replicas, int threads, const std::function<void(int)>& fn) {
    if (threads <= 1) {
        for (int i = 0; i < replicas; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    int workers = std::min(threads, replicas);
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= replicas) return;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

namespace {

double rescale_unit(int n) { return std::pow(8.0 * n / 9.0, 0.25); }

std::uint64_t grid_seed(std::uint64_t master, int grid_index) {
    std::uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(grid_index + 1));
    return splitmix64(s);
}

// Two distinct uniform vertices.
std::pair<int, int> uniform_pair(Rng& rng, int count) {
    int a = static_cast<int>(rng.below(count));
    int b = static_cast<int>(rng.below(count - 1));
    if (b >= a) ++b;
    return {a, b};
}

std::vector<int> uniform_distinct(Rng& rng, int count, int how_many) {
    std::vector<int> out;
    while (static_cast<int>(out.size()) < how_many) {
        int v = static_cast<int>(rng.below(count));
        bool dup = false;
        for (int x : out) dup |= (x == v);
        if (!dup) out.push_back(v);
    }
    return out;
}

}  // namespace

std::string run_scaling(const ExperimentConfig& cfg) {
    cfg.validate();
    CsvWriter csv({"n", "replica", "distance", "rescaled"});
    for (std::size_t gi = 0; gi < cfg.n_grid.size(); ++gi) {
        int n = cfg.n_grid[gi];
        std::uint64_t base = grid_seed(cfg.seed, static_cast<int>(gi));
        std::vector<std::pair<int, double>> rows(cfg.replicas);
        parallel_replicas(cfg.replicas, cfg.threads, [&](int rep) {
            Rng rng = Rng::for_replica(base, rep);
            PointedQuadrangulation pq = sample_quadrangulation(n, rng);
            auto [a, b] = uniform_pair(rng, pq.q.map().vertex_count());
            DistanceField f = bfs(pq.q.map(), a);
            rows[rep] = {f.dist[b], f.dist[b] / rescale_unit(n)};
        });
        for (int rep = 0; rep < cfg.replicas; ++rep)
            csv.add_row({std::to_string(n), std::to_string(rep), std::to_string(rows[rep].first),
                         format_double(rows[rep].second)});
    }
    return csv.text();
}

std::pair<double, double> wilson_interval(long hits, long n) {
    if (n <= 0) return {0.0, 1.0};
    double z = 1.96, p = static_cast<double>(hits) / n;
    double denom = 1.0 + z * z / n;
    double center = (p + z * z / (2 * n)) / denom;
    double half = z * std::sqrt(p * (1 - p) / n + z * z / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

std::string run_star_events(const ExperimentConfig& cfg) {
    cfg.validate();
    CsvWriter csv({"event", "n", "eps", "hits", "replicas", "p_hat", "wilson_low", "wilson_high"});
    int n_eps = static_cast<int>(cfg.eps_grid.size());
    for (std::size_t gi = 0; gi < cfg.n_grid.size(); ++gi) {
        int n = cfg.n_grid[gi];
        std::uint64_t base = grid_seed(cfg.seed, static_cast<int>(gi));
        // flags[rep] packs A1 bits then A2 bits over the eps grid.
        std::vector<std::vector<char>> flags(cfg.replicas);
        parallel_replicas(cfg.replicas, cfg.threads, [&](int rep) {
            Rng rng = Rng::for_replica(base, rep);
            PointedQuadrangulation pq = sample_quadrangulation(n, rng);
            const Quadrangulation& q = pq.q;
            std::vector<int> v = uniform_distinct(rng, q.map().vertex_count(), 4);
            std::vector<char> row(2 * n_eps, 0);
            for (int ei = 0; ei < n_eps; ++ei) {
                double eps = cfg.eps_grid[ei];
                row[ei] = event_A1(q, v[0], v[1], v[2], eps, cfg.beta, n);
                row[n_eps + ei] = event_A2(q, v[0], v[1], v[2], v[3], eps, n);
            }
            flags[rep] = std::move(row);
        });
        for (int which = 0; which < 2; ++which) {
            for (int ei = 0; ei < n_eps; ++ei) {
                long hits = 0;
                for (int rep = 0; rep < cfg.replicas; ++rep)
                    hits += flags[rep][which * n_eps + ei];
                auto [lo, hi] = wilson_interval(hits, cfg.replicas);
                double p = static_cast<double>(hits) / cfg.replicas;
                csv.add_row({which == 0 ? "A1" : "A2", std::to_string(n),
                             format_double(cfg.eps_grid[ei]), std::to_string(hits),
                             std::to_string(cfg.replicas), format_double(p), format_double(lo),
                             format_double(hi)});
            }
        }
    }
    return csv.text();
}

std::string run_covering(const ExperimentConfig& cfg) {
    cfg.validate();
    CsvWriter csv({"n", "eps", "replica", "star_points", "greedy", "packing"});
    int n_eps = static_cast<int>(cfg.eps_grid.size());
    for (std::size_t gi = 0; gi < cfg.n_grid.size(); ++gi) {
        int n = cfg.n_grid[gi];
        std::uint64_t base = grid_seed(cfg.seed, static_cast<int>(gi));
        std::vector<std::vector<std::array<int, 3>>> rows(cfg.replicas);
        parallel_replicas(cfg.replicas, cfg.threads, [&](int rep) {
            Rng rng = Rng::for_replica(base, rep);
            PointedQuadrangulation pq = sample_quadrangulation(n, rng);
            const Quadrangulation& q = pq.q;
            std::vector<int> v = uniform_distinct(rng, q.map().vertex_count(), 3);
            StarReport rep_out = star_points_on_geodesic(q, v[0], v[1], v[2]);
            std::vector<int> pts = rep_out.star_points();
            std::vector<std::array<int, 3>> here;
            for (int ei = 0; ei < n_eps; ++ei) {
                double radius = cfg.eps_grid[ei] * rescale_unit(n);
                if (pts.empty()) {
                    here.push_back({0, 0, 0});
                    continue;
                }
                CoverBracket br = covering_bracket(pts, q, radius);
                here.push_back({static_cast<int>(pts.size()), br.greedy, br.packing_lower});
            }
            rows[rep] = std::move(here);
        });
        for (int rep = 0; rep < cfg.replicas; ++rep)
            for (int ei = 0; ei < n_eps; ++ei) {
                const auto& r = rows[rep][ei];
                csv.add_row({std::to_string(n), format_double(cfg.eps_grid[ei]),
                             std::to_string(rep), std::to_string(r[0]), std::to_string(r[1]),
                             std::to_string(r[2])});
            }
    }
    return csv.text();
}

FitResult fit_exponent(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 3) throw DegenerateData("need at least 3 points");
    std::size_t n = x.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] <= 0 || y[i] <= 0) throw DegenerateData("log-log fit needs positive values");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0) throw DegenerateData("x values are all equal");
    FitResult out;
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double res = ly[i] - (out.intercept + out.slope * lx[i]);
        rss += res * res;
    }
    double se = n > 2 ? std::sqrt(rss / (n - 2) / sxx) : 0.0;
    out.ci_low = out.slope - 1.96 * se;
    out.ci_high = out.slope + 1.96 * se;
    return out;
}

// ---------------------------------------------------------------------------
// verify subcommand: exact cross-checks with counterexample reporting.

namespace {

void check(std::vector<CheckResult>& out, const std::string& name,
           const std::function<std::string()>& body) {
    CheckResult r;
    r.name = name;
    try {
        r.detail = body();  // empty detail = pass
        r.pass = r.detail.empty();
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = e.what();
    }
    out.push_back(r);
}

}  // namespace

std::vector<CheckResult> verify_census(const ExperimentConfig& cfg) {
    std::vector<CheckResult> out;
    int bound = std::min(cfg.oracle_bound, 3);

    check(out, "quadrangulation census matches the closed formula", [&]() -> std::string {
        for (int n = 1; n <= bound; ++n) {
            auto all = enumerate_rooted_quadrangulations(n);
            if (BigInt(all.size()) != count_quadrangulations(n))
                return "n=" + std::to_string(n) + ": oracle " + std::to_string(all.size());
        }
        return "";
    });

    check(out, "motzkin reflection and cyclic identities (arguments <= 8)", [&]() -> std::string {
        for (int a = 1; a <= 8; ++a)
            for (int b = 1; b <= 8; ++b)
                for (int r = 1; r <= 8; ++r) {
                    BigInt lhs = motzkin_count_positive(a, b, r);
                    BigInt rhs = motzkin_count(a, b, r) - motzkin_count(a, -b, r);
                    if (lhs != rhs)
                        return "reflection fails at a=" + std::to_string(a) +
                               " b=" + std::to_string(b) + " r=" + std::to_string(r);
                }
        for (int a = 1; a <= 8; ++a)
            for (int r = 1; r <= 8; ++r) {
                BigInt lhs = r * motzkin_count_positive(a, 0, r);
                BigInt rhs = a * motzkin_count(a, 0, r);
                if (lhs != rhs)
                    return "cyclic lemma fails at a=" + std::to_string(a) +
                           " r=" + std::to_string(r);
            }
        return "";
    });

    check(out, "tree/contour and forest/snake roundtrips", [&]() -> std::string {
        Rng rng(cfg.seed);
        for (int i = 0; i < std::max(100, cfg.replicas); ++i) {
            LabeledTree t = sample_labeled_tree(1 + static_cast<int>(rng.below(40)), rng);
            if (!(tree_of_contour(contour_of_tree(t)) == t)) return "tree roundtrip failed";
            MotzkinWalk floor;
            floor.values.push_back(rng.uniform_int(-3, 3));
            int r = 1 + static_cast<int>(rng.below(5));
            for (int j = 0; j < r; ++j)
                floor.values.push_back(floor.values.back() + rng.uniform_int(-1, 1));
            LabeledForest f = sample_labeled_forest(floor, static_cast<int>(rng.below(30)), rng);
            if (!(forest_of_snake(snake_of_forest(f)) == f)) return "forest roundtrip failed";
        }
        return "";
    });

    check(out, "distance identity on sampled quadrangulations", [&]() -> std::string {
        Rng rng(cfg.seed + 1);
        for (int i = 0; i < 20; ++i) {
            int n = 1 + static_cast<int>(rng.below(60));
            PointedQuadrangulation pq = sample_quadrangulation(n, rng);
            DistanceField f = bfs(pq.q.map(), pq.v_star);
            int mn = pq.vertex_labels[pq.v_star] + 1;
            for (int v = 0; v < pq.q.map().vertex_count(); ++v) {
                if (v == pq.v_star) continue;
                if (f.dist[v] != pq.vertex_labels[v] - mn + 1)
                    return "distance identity failed at n=" + std::to_string(n);
            }
        }
        return "";
    });

    check(out, "scheme and pre-scheme censuses", [&]() -> std::string {
        auto pre3 = enumerate_preschemes(3, /*dominant_only=*/true);
        if (pre3.size() != 16) return "dominant pre-schemes with 4 faces: " +
                                      std::to_string(pre3.size());
        if (count_preschemes_inner_forgotten(3, true) != 5)
            return "inner-forgotten dominant pre-schemes with 4 faces";
        for (int k : {2, 3}) {
            for (const Scheme& s : enumerate_schemes(k, /*dominant_only=*/true, false)) {
                if (s.m.edge_count() != 4 * k - 3 || s.m.vertex_count() != 3 * k - 2)
                    return "dominant scheme size off at k=" + std::to_string(k);
            }
        }
        return "";
    });

    check(out, "decompose/reconstruct roundtrip on random decompositions", [&]() -> std::string {
        Rng rng(cfg.seed + 2);
        auto schemes = enumerate_schemes(2, false, false);
        for (int i = 0; i < 50; ++i) {
            // random valid decomposition on a random scheme
            const Scheme& s = schemes[rng.below(schemes.size())];
            SchemeDecomposition dec = random_decomposition(s, rng);
            LabeledMap lm = reconstruct(dec);
            SchemeDecomposition back = decompose(lm);
            LabeledMap lm2 = reconstruct(back);
            if (!(labeled_map_code(lm) == labeled_map_code(lm2))) return "roundtrip failed";
        }
        return "";
    });

    return out;
}

}  // namespace quadlab
