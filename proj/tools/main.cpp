#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "quadlab/cvs.hpp"
#include "quadlab/experiments.hpp"
#include "quadlab/io.hpp"
#include "quadlab/metrics.hpp"
#include "quadlab/schemes.hpp"

namespace ql = quadlab;

namespace {

ql::ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ql::IOError("cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ql::parse_config_text(ss.str());
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-")
        std::cout << text;
    else
        ql::write_text_file(out_path, text);
}

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    return out;
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

ql::LabeledMap labeled_map_from_json(const ql::Json& j) {
    ql::LabeledMap lm;
    lm.m = ql::map_from_json(j);
    lm.labels = j.at("labels").get<std::vector<int>>();
    lm.face_name = j.at("face_names").get<std::vector<int>>();
    lm.validate();
    return lm;
}

int run_sample(std::uint64_t seed, int faces, bool with_tree, const std::string& out_path) {
    ql::Rng rng(seed);
    ql::LabeledTree t = ql::sample_labeled_tree(faces, rng);
    ql::RootChoice choice = rng.fair_bit() ? ql::RootChoice::kReversed : ql::RootChoice::kForward;
    ql::PointedQuadrangulation pq = ql::cvs_reverse(t, choice);
    ql::Json j = ql::map_to_json(pq.q.map());
    j["v_star"] = pq.v_star;
    j["labels"] = pq.vertex_labels;
    if (with_tree) j["tree"] = ql::tree_to_json(t);
    emit(out_path, ql::dump_json(j));
    return 0;
}

int run_phi_reverse(const std::string& in_path, const std::string& out_path) {
    ql::Json j = ql::load_json_file(in_path);
    ql::LabeledMap lm = labeled_map_from_json(j);
    ql::PhiResult pr = ql::phi_reverse(lm, ql::RootChoice::kForward);
    ql::Json out = ql::map_to_json(pr.dq.q.map());
    out["v"] = pr.dq.v;
    out["tau"] = pr.dq.tau.tau;
    out["labels"] = pr.q_labels;
    emit(out_path, ql::dump_json(out));
    return 0;
}

int run_scheme_census(int k, bool dominant, bool planted, const std::string& out_path) {
    ql::Json out;
    out["k"] = k;
    out["dominant"] = dominant;
    out["planted"] = planted;
    if (!planted) {
        auto pre = ql::enumerate_preschemes(k, dominant);
        out["preschemes"] = pre.size();
        out["preschemes_inner_forgotten"] = ql::count_preschemes_inner_forgotten(k, dominant);
    }
    auto schemes = ql::enumerate_schemes(k, dominant, planted);
    out["schemes"] = schemes.size();
    ql::Json list = ql::Json::array();
    for (const ql::Scheme& s : schemes) {
        ql::Json js;
        js["darts"] = s.m.dart_count();
        js["alpha"] = s.m.alpha_perm();
        js["sigma"] = s.m.sigma_perm();
        js["root"] = s.m.root();
        js["face_names"] = s.face_name;
        std::vector<int> nulls;
        for (int v = 0; v < s.m.vertex_count(); ++v)
            if (s.null_vertex[v]) nulls.push_back(v);
        js["null_vertices"] = nulls;
        js["edges"] = s.m.edge_count();
        js["vertices"] = s.m.vertex_count();
        list.push_back(js);
    }
    out["list"] = list;
    emit(out_path, ql::dump_json(out));
    return 0;
}

int run_metrics(const std::string& in_path, int pairs, std::uint64_t seed,
                const std::string& out_path) {
    ql::HalfEdgeMap m = ql::map_from_json(ql::load_json_file(in_path));
    ql::Quadrangulation q = ql::check_quadrangulation(m);
    ql::Rng rng(seed);
    ql::CsvWriter csv({"pair", "u", "v", "distance", "rescaled"});
    double unit = std::pow(8.0 * q.face_count() / 9.0, 0.25);
    for (int i = 0; i < pairs; ++i) {
        int a = static_cast<int>(rng.below(m.vertex_count()));
        int b = static_cast<int>(rng.below(m.vertex_count()));
        ql::DistanceField f = ql::bfs(m, a);
        csv.add_row({std::to_string(i), std::to_string(a), std::to_string(b),
                     std::to_string(f.dist[b]), ql::format_double(f.dist[b] / unit)});
    }
    emit(out_path, csv.text());
    return 0;
}

int run_dstar(const std::string& tree_path, const std::string& out_path) {
    ql::LabeledTree t = ql::tree_from_json(ql::load_json_file(tree_path));
    ql::ContourEncoding c = ql::contour_of_tree(t);
    ql::DiscretePseudoMetrics pm = ql::discrete_pseudo_metrics(c);
    ql::CsvWriter csv({"a", "b", "d_circ", "d_star"});
    for (int a = 0; a < pm.class_count(); ++a)
        for (int b = 0; b < pm.class_count(); ++b)
            csv.add_row({std::to_string(a), std::to_string(b),
                         std::to_string(pm.d_circ_class[a][b]), std::to_string(pm.d_star[a][b])});
    emit(out_path, csv.text());
    return 0;
}

int run_star_check(const std::string& in_path, const std::string& vertices, int radius,
                   const std::string& out_path) {
    ql::HalfEdgeMap m = ql::map_from_json(ql::load_json_file(in_path));
    ql::Quadrangulation q = ql::check_quadrangulation(m);
    std::vector<int> v = parse_ints(vertices);
    bool star = ql::is_geodesic_star(q, v, radius);
    ql::Json out;
    out["vertices"] = v;
    out["radius"] = radius;
    out["is_geodesic_star"] = star;
    if (star) {
        ql::DelayVector tau = ql::delays_for_star(q, v, radius + 1);
        out["tau_r_plus_1"] = tau.tau;
        out["delays_valid"] = ql::check_delays(q, v, tau.tau);
    }
    emit(out_path, ql::dump_json(out));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"uniform quadrangulation sampler, bijections and experiments"};
    app.require_subcommand(1);

    std::uint64_t seed = 1;
    int threads = 1;
    std::string config_path, out_path;
    app.add_option("--seed", seed, "master seed");
    app.add_option("--threads", threads, "worker threads");
    app.add_option("--config", config_path, "key = value config file");
    app.add_option("--out", out_path, "output path (default stdout)");

    auto* cmd_sample = app.add_subcommand("sample", "sample a uniform pointed quadrangulation");
    int sample_faces = 16;
    bool with_tree = false;
    cmd_sample->add_option("--faces", sample_faces, "face count")->required();
    cmd_sample->add_flag("--with-tree", with_tree, "also emit the labeled tree");

    auto* cmd_phi = app.add_subcommand("phi-reverse", "labeled map -> delayed quadrangulation");
    std::string phi_in;
    cmd_phi->add_option("--in", phi_in, "labeled map json")->required();

    auto* cmd_census = app.add_subcommand("scheme-census", "enumerate (pre-)schemes");
    int census_k = 2;
    bool census_dominant = false, census_planted = false;
    cmd_census->add_option("--k", census_k, "inner face count")->required();
    cmd_census->add_flag("--dominant", census_dominant, "dominant only");
    cmd_census->add_flag("--planted", census_planted, "planted schemes");

    auto* cmd_metrics = app.add_subcommand("metrics", "distances between random vertex pairs");
    std::string metrics_in;
    int metrics_pairs = 16;
    cmd_metrics->add_option("--in", metrics_in, "map json")->required();
    cmd_metrics->add_option("--pairs", metrics_pairs, "number of sampled pairs");

    auto* cmd_dstar = app.add_subcommand("dstar", "pseudo-metric tables of a labeled tree");
    std::string dstar_tree;
    cmd_dstar->add_option("--tree", dstar_tree, "labeled tree json")->required();

    auto* cmd_star = app.add_subcommand("star-check", "geodesic r-star membership");
    std::string star_in, star_vertices;
    int star_radius = 1;
    cmd_star->add_option("--in", star_in, "map json")->required();
    cmd_star->add_option("--vertices", star_vertices, "comma separated vertex ids")->required();
    cmd_star->add_option("--radius", star_radius, "star radius r");

    auto* cmd_scaling = app.add_subcommand("scaling", "distance scaling experiment");
    auto* cmd_stars = app.add_subcommand("stars", "star event frequencies");
    auto* cmd_covering = app.add_subcommand("covering", "covering numbers of star points");
    auto* cmd_verify = app.add_subcommand("verify", "exact census and identity checks");

    std::string grid_n, grid_eps;
    int replicas = 0;
    double beta = -1;
    for (auto* c : {cmd_scaling, cmd_stars, cmd_covering}) {
        c->add_option("--n", grid_n, "comma separated n grid");
        c->add_option("--replicas", replicas, "replica count");
        c->add_option("--eps", grid_eps, "comma separated eps grid");
    }
    cmd_stars->add_option("--beta", beta, "beta parameter of the A1 event");
    cmd_verify->add_option("--replicas", replicas, "random instances per check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        ql::ExperimentConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        if (app.count("--seed")) cfg.seed = seed;
        if (app.count("--threads")) cfg.threads = threads;
        if (!grid_n.empty()) cfg.n_grid = parse_ints(grid_n);
        if (replicas > 0) cfg.replicas = replicas;
        if (!grid_eps.empty()) cfg.eps_grid = parse_doubles(grid_eps);
        if (beta >= 0) cfg.beta = beta;
        if (!out_path.empty()) cfg.out_path = out_path;

        if (*cmd_sample) return run_sample(cfg.seed, sample_faces, with_tree, cfg.out_path);
        if (*cmd_phi) return run_phi_reverse(phi_in, cfg.out_path);
        if (*cmd_census)
            return run_scheme_census(census_k, census_dominant, census_planted, cfg.out_path);
        if (*cmd_metrics) return run_metrics(metrics_in, metrics_pairs, cfg.seed, cfg.out_path);
        if (*cmd_dstar) return run_dstar(dstar_tree, cfg.out_path);
        if (*cmd_star) return run_star_check(star_in, star_vertices, star_radius, cfg.out_path);
        if (*cmd_scaling) {
            emit(cfg.out_path, ql::run_scaling(cfg));
            return 0;
        }
        if (*cmd_stars) {
            emit(cfg.out_path, ql::run_star_events(cfg));
            return 0;
        }
        if (*cmd_covering) {
            emit(cfg.out_path, ql::run_covering(cfg));
            return 0;
        }
        if (*cmd_verify) {
            auto results = ql::verify_census(cfg);
            bool all = true;
            std::string text;
            for (const auto& r : results) {
                all &= r.pass;
                text += (r.pass ? "PASS  " : "FAIL  ") + r.name +
                        (r.detail.empty() ? "" : "  [" + r.detail + "]") + "\n";
            }
            emit(cfg.out_path, text);
            return all ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
