#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "guidelab/guidance.hpp"
#include "guidelab/metrics.hpp"
#include "guidelab/prior.hpp"
#include "guidelab/reward.hpp"
#include "guidelab/schedule.hpp"

namespace guidelab {

// A parsed experiment: fixed model pieces plus sweep axes that expand into a
// grid of cells. Rewards are kept as their JSON spec because sweep axes may
// rewrite reward parameters per cell.
struct ExperimentConfig {
  std::optional<GaussianMixturePrior> prior;
  std::optional<GaussianMixturePrior> conditional_prior;
  nlohmann::json reward_spec;
  int T = 500;
  double beta_start = 1e-4;
  double beta_end = 0.02;
  GuidanceConfig guidance;
  // Sweep axes in canonical (sorted-key) order; each value list is applied
  // on top of the base guidance/reward spec to form one cell per choice.
  std::vector<std::pair<std::string, std::vector<nlohmann::json>>> sweeps;
  std::vector<std::uint64_t> seeds{2024};
  int replicates = 1;
  std::optional<double> tilt_lambda;
  std::optional<Eigen::VectorXd> sdedit_reference;
  double sdedit_eta = 0.6;
  // Tradeoff series to emit after the grid: (x field, y field) pairs.
  std::vector<std::pair<std::string, std::string>> emit_series;
  std::string out_dir = "results";
};

// One CSV row: a (cell, seed) pair with its replicate runs pooled.
struct RunRow {
  std::string method;
  int N = 1;
  int B_s = 1;
  int B_g = 1;
  double tau = 0.1;
  double gamma = 0.0;
  std::string schedule_str = "-";  // particle schedule, '-' when unset
  int cluster_k = 0;
  std::uint64_t seed = 0;
  double reward_mean = 0.0;
  NormalizedValue reward_norm;
  double mmd2 = 0.0;
  std::optional<double> tilt_mean_error;
  std::int64_t nfe_denoiser = 0;
  std::int64_t nfe_reward = 0;
  std::int64_t nfe_grad = 0;
  double wall_ms = 0.0;
  std::string cell_key;  // canonical sort key, also used for grouping
};

struct ResultTable {
  std::vector<RunRow> rows;
  std::vector<std::string> failures;  // "<cell>: <what>" per failed cell
};

// Parse and validate a config file (JSON). Missing fields take the defaults
// above; violations raise invalid-argument naming the offending field.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const nlohmann::json& j);

// Build the reward model a spec describes. Recognized kinds: linear,
// target, quantized, weighted_sum.
RewardModel reward_from_spec(const nlohmann::json& spec);

// Execute the full grid: every cell x seed, `replicates` runs per pair with
// derived sub-seeds, each row's metrics computed against matched unguided
// baseline runs. Failed cells are recorded and skipped. Deterministic in
// the config.
ResultTable run_grid(const ExperimentConfig& cfg);

// Deterministic sub-seed for replicate r of a base seed.
std::uint64_t replicate_seed(std::uint64_t seed, int replicate);

// Write rows as CSV. include_timing=false zeroes the wall_ms column so the
// file is byte-reproducible; timings stay available programmatically.
void write_csv(const ResultTable& table, const std::string& path,
               bool include_timing = false);

// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double v);

// Per-method (x, y) series, aggregated over each cell's rows and sorted by
// x, written as two-column text to <path_prefix><method>.dat.
void emit_tradeoff_data(const ResultTable& table, const std::string& x_field,
                        const std::string& y_field, const std::string& path_prefix);

// The packaged demo scenarios (name -> config JSON); unknown name throws
// with the list of valid ones.
std::vector<std::string> demo_names();
nlohmann::json demo_config(const std::string& name);

}  // namespace guidelab
