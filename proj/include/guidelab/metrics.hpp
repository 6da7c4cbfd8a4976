#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "guidelab/nfe.hpp"
#include "guidelab/prior.hpp"
#include "guidelab/reward.hpp"

namespace guidelab {

// Everything a run reports: reward statistics over its output samples,
// divergence from a reference sample when one was supplied, the optional
// tilted-oracle diagnostic, and compute cost.
struct RunMetrics {
  double reward_mean = 0.0;
  double reward_std = 0.0;
  double mmd2 = 0.0;
  std::optional<double> tilt_mean_error;
  NfeCounters nfe;
  double wall_ms = 0.0;
};

// The KL-regularized optimum pi* proportional to p(x) exp(lambda a.x) for a
// single-Gaussian prior: still Gaussian, same variance, mean shifted by
// lambda sigma^2 a.
struct TiltedGaussian {
  Eigen::VectorXd mean;
  double variance = 1.0;
};

// Sample mean and population standard deviation of reward values.
std::pair<double, double> expected_reward(const std::vector<Eigen::VectorXd>& samples,
                                          const RewardModel& reward);

// Median pairwise distance over the pooled sample; the customary RBF
// bandwidth when none is specified. Falls back to 1 when all points
// coincide.
double median_heuristic_bandwidth(const std::vector<Eigen::VectorXd>& xs,
                                  const std::vector<Eigen::VectorXd>& ys);

// Biased V-statistic estimate of MMD^2 with kernel exp(-||a-b||^2 / (2 h^2)).
// Biased means nonnegative, which keeps downstream ratios sane.
double mmd2_rbf(const std::vector<Eigen::VectorXd>& xs,
                const std::vector<Eigen::VectorXd>& ys, double bandwidth);
double mmd2_rbf(const std::vector<Eigen::VectorXd>& xs,
                const std::vector<Eigen::VectorXd>& ys);

// Exact exponential tilt of a single-Gaussian prior by a linear reward a at
// strength lambda. Mixture priors are rejected: no closed form there.
TiltedGaussian tilted_oracle(const GaussianMixturePrior& prior, const Eigen::VectorXd& a,
                             double lambda);

// A scalar divided by its baseline counterpart. When the baseline entry is
// zero the ratio is undefined: 0/0 reports 1 (the runs agree), anything else
// keeps the raw value and is flagged so reports can mark it.
struct NormalizedValue {
  double value = 0.0;
  bool normalized = true;
};

struct NormalizedReport {
  NormalizedValue reward_mean;
  NormalizedValue mmd2;
  NormalizedValue nfe_denoiser;
  NormalizedValue nfe_reward;
  NormalizedValue nfe_grad;
  NormalizedValue wall_ms;
};

NormalizedReport normalize_report(const RunMetrics& metrics, const RunMetrics& baseline);

}  // namespace guidelab
