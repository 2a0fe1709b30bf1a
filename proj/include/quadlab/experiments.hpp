#ifndef QUADLAB_EXPERIMENTS_HPP
#define QUADLAB_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "quadlab/encodings.hpp"

namespace quadlab {

/// Inputs of a Monte Carlo run. Fixed (config, seed) gives byte-identical
/// CSV output for any thread count: replicas own seed-derived streams and
/// results merge in replica order.
struct ExperimentConfig {
    std::string kind;
    std::vector<int> n_grid = {1024};
    int replicas = 100;
    std::vector<double> eps_grid = {0.05, 0.1, 0.2, 0.4};
    double beta = 0.25;
    std::vector<int> r_grid = {1, 2, 3};
    std::uint64_t seed = 1;
    int threads = 1;
    int oracle_bound = 3;
    std::string out_path;

    void validate() const;
};

/// key = value lines; '#' comments. Unknown keys are rejected.
ExperimentConfig parse_config_text(const std::string& text);

/// Per-replica measurement row. Wall time is tracked for logs only and is
/// never written to the CSV, which must be byte-deterministic.
struct SampleRecord {
    int n = 0;
    int replica = 0;
    std::vector<double> values;
    double wall_ms = 0.0;
};

/// Distance of two uniform vertices per replica, rescaled by (8n/9)^{-1/4}.
/// CSV: n,replica,distance,rescaled.
std::string run_scaling(const ExperimentConfig& cfg);

/// Frequencies of the A1/A2 geodesic-star events over the (n, eps) grid,
/// with Wilson intervals. CSV: event,n,eps,hits,replicas,p_hat,wilson_low,
/// wilson_high.
std::string run_star_events(const ExperimentConfig& cfg);

/// Greedy cover sizes and packing lower bounds for the star-point set of a
/// random geodesic. CSV: n,eps,replica,star_points,greedy,packing.
std::string run_covering(const ExperimentConfig& cfg);

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Exact cross-checks: census counts, roundtrips, identities. Failures are
/// report entries, not exceptions.
std::vector<CheckResult> verify_census(const ExperimentConfig& cfg);

struct FitResult {
    double slope = 0, intercept = 0, ci_low = 0, ci_high = 0;
};

/// Least squares on (log x, log y) with a 95% interval for the slope.
/// Throws DegenerateData for fewer than 3 points or non-positive values.
FitResult fit_exponent(const std::vector<double>& x, const std::vector<double>& y);

/// Wilson score interval for `hits` successes out of `n` at z = 1.96.
std::pair<double, double> wilson_interval(long hits, long n);

/// Runs fn(replica_id) on a pool; results land in replica order.
void parallel_replicas(int replicas, int threads, const std::function<void(int)>& fn);

}  // namespace quadlab

#endif
