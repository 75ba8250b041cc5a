#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "icalab/metrics.hpp"
#include "icalab/train.hpp"

namespace icalab {

// One training run inside an experiment grid.
struct RunRecord {
    std::string experiment;
    std::string preset;
    std::size_t d = 0;
    std::size_t k = 0;
    double delta = 0.0;
    std::size_t n = 0;
    std::size_t t_budget = 0;  // 0 when not iteration-denominated
    std::uint64_t seed = 0;
    double eps_maxform = 1.0;
    double eps_permform = 1.0;
    double final_loss = 0.0;
    double wallclock_sec = 0.0;
    bool failed = false;
    std::string fail_reason;
};

struct ScalingRun {
    std::string axis;  // "n", "d", "delta", "T"
    std::vector<double> grid;
    std::vector<std::vector<double>> eps;  // [grid point][seed], max-form
    std::string preset;
    std::vector<std::uint64_t> seeds;
    std::vector<RunRecord> records;

    std::vector<double> seed_means() const;
};

struct FitSummary {
    std::string model;  // "power-law", "linear", "inverse"
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::vector<double> residuals;
};

struct CalibrationResult {
    double c_hat = 0.0;
    double c_practical = 0.0;  // exactly 2 * c_hat
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::size_t b = 0;
    std::size_t d = 0;
    double delta = 0.0;
    double delta_confidence = 0.0;  // the failure probability delta in the bound
};

// Shared harness knobs. The baseline pipeline is: modulated source model
// (k = 2d + 21), orthogonal mixing, supervised pilot-regression warm start on
// a fresh pilot set, Gaussian perturbation of the warm start, GCL training on
// the n-sample dataset, evaluation on a fresh held-out set.
struct HarnessConfig {
    std::string preset = "baseline";
    std::size_t d = 10;
    double delta = 1.0;
    std::size_t pilot_n = 4000;
    std::size_t pretrain_iters = 6000;
    double perturb_scale = 0.35;
    std::size_t eval_n = 4000;
    std::uint64_t master_seed = 1;
    std::size_t n_seeds = 5;
    std::size_t jobs = 1;
    bool desk_scale = true;
    std::size_t desk_iter_cap = 20000;
};

// Trains one (n, seed) point of the baseline pipeline and scores it.
RunRecord run_point(const HarnessConfig& hc, std::size_t n, std::size_t seed_index);

// Seed-mean epsilon evaluator abstraction used by min_n_for_target; real
// harness evaluators train models, test oracles plant closed forms.
using EpsEvaluator = std::function<double(std::size_t n, std::size_t seed_index)>;

// Smallest n on a geometric grid (resolution tol_n) whose seed-mean eps is at
// or below target. Running-minimum smoothing over evaluated points is applied
// before thresholding; the search is a binary search over grid indices.
// Returns nullopt when even n_hi misses the target.
std::optional<std::size_t> min_n_for_target(const EpsEvaluator& eval, double target,
                                            std::size_t n_lo, std::size_t n_hi, double tol_n,
                                            std::size_t n_seeds);

// Experiment 1: precision scaling. Power-law fit of seed-mean eps on n.
std::pair<ScalingRun, FitSummary> exp_precision(const HarnessConfig& hc,
                                                const std::vector<std::size_t>& n_grid);

// Experiment 2: dimension scaling. Linear fit of min-n on d.
std::pair<ScalingRun, FitSummary> exp_dimension(const HarnessConfig& hc,
                                                const std::vector<std::size_t>& d_grid,
                                                double target_eps, std::size_t n_lo,
                                                std::size_t n_hi, double tol_n);

// Experiment 3: diversity scaling. Linear fit of min-n on 1/delta.
std::pair<ScalingRun, FitSummary> exp_diversity(const HarnessConfig& hc,
                                                const std::vector<double>& delta_grid,
                                                double target_eps, std::size_t n_lo,
                                                std::size_t n_hi, double tol_n);

struct SgdResult {
    ScalingRun run;
    double cv = 0.0;  // coefficient of variation over points with T >= n
};

// Experiment 4: SGD iteration scaling at fixed n.
SgdResult exp_sgd(const HarnessConfig& hc, std::size_t n, const std::vector<std::size_t>& t_grid);

struct TrendReport {
    std::string name;
    double value_at_nmin = 0.0;
    double value_at_nmax = 0.0;
    bool decreasing = false;
};

// Experiment 5: linear mixing / oracle init / direct-loss diagnostics.
std::vector<TrendReport> exp_diagnostics(const HarnessConfig& hc,
                                         const std::vector<std::size_t>& n_grid);

// Fits log eps = log C - 0.5 log n - 0.5 log Delta + 0.5 log(d + log(1/delta))
// with the slopes fixed at theory values; bootstrap percentile CI over the
// grid points.
CalibrationResult calibrate_constant(std::size_t d, double delta, double delta_confidence,
                                     const std::vector<std::pair<std::size_t, double>>& grid,
                                     std::size_t b, std::uint64_t seed = 12345);

// ceil(500 d / Delta) at target eps 0.10, rescaled by (0.10/eps)^2 otherwise.
std::size_t plan_sample_size(std::size_t d, double delta, double target_eps);

// Power-law fit helper: log eps on log n.
FitSummary fit_power_law(const std::vector<double>& ns, const std::vector<double>& eps);
// Linear fit helper with residuals.
FitSummary fit_linear(const std::vector<double>& xs, const std::vector<double>& ys,
                      const std::string& tag);

}  // namespace icalab
