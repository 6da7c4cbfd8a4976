#include "guidelab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace guidelab {

std::pair<double, double> expected_reward(const std::vector<Eigen::VectorXd>& samples,
                                          const RewardModel& reward) {
  if (samples.empty()) throw std::invalid_argument("expected_reward: no samples");
  Eigen::VectorXd vals(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) vals[static_cast<Eigen::Index>(i)] = reward.evaluate(samples[i]);
  const double mean = vals.mean();
  const double var = (vals.array() - mean).square().mean();
  return {mean, std::sqrt(var)};
}

double median_heuristic_bandwidth(const std::vector<Eigen::VectorXd>& xs,
                                  const std::vector<Eigen::VectorXd>& ys) {
  std::vector<const Eigen::VectorXd*> pool;
  pool.reserve(xs.size() + ys.size());
  for (const auto& x : xs) pool.push_back(&x);
  for (const auto& y : ys) pool.push_back(&y);
  if (pool.size() < 2) return 1.0;
  std::vector<double> dists;
  dists.reserve(pool.size() * (pool.size() - 1) / 2);
  for (size_t i = 0; i < pool.size(); ++i) {
    for (size_t j = i + 1; j < pool.size(); ++j) {
      dists.push_back((*pool[i] - *pool[j]).norm());
    }
  }
  const size_t mid = dists.size() / 2;
  std::nth_element(dists.begin(), dists.begin() + mid, dists.end());
  const double med = dists[mid];
  return med > 0.0 ? med : 1.0;
}

double mmd2_rbf(const std::vector<Eigen::VectorXd>& xs,
                const std::vector<Eigen::VectorXd>& ys, double bandwidth) {
  if (xs.empty() || ys.empty()) throw std::invalid_argument("mmd2_rbf: empty sample");
  if (!(bandwidth > 0.0)) throw std::invalid_argument("mmd2_rbf: bandwidth must be > 0");
  const double inv = 1.0 / (2.0 * bandwidth * bandwidth);
  auto k = [inv](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return std::exp(-(a - b).squaredNorm() * inv);
  };
  const double nx = static_cast<double>(xs.size());
  const double ny = static_cast<double>(ys.size());
  double kxx = 0.0, kyy = 0.0, kxy = 0.0;
  for (const auto& a : xs) {
    for (const auto& b : xs) kxx += k(a, b);
  }
  for (const auto& a : ys) {
    for (const auto& b : ys) kyy += k(a, b);
  }
  for (const auto& a : xs) {
    for (const auto& b : ys) kxy += k(a, b);
  }
  // V-statistic: includes the diagonal, so the estimate is a squared RKHS
  // distance between the empirical mean embeddings and never negative.
  return kxx / (nx * nx) + kyy / (ny * ny) - 2.0 * kxy / (nx * ny);
}

double mmd2_rbf(const std::vector<Eigen::VectorXd>& xs,
                const std::vector<Eigen::VectorXd>& ys) {
  return mmd2_rbf(xs, ys, median_heuristic_bandwidth(xs, ys));
}

TiltedGaussian tilted_oracle(const GaussianMixturePrior& prior, const Eigen::VectorXd& a,
                             double lambda) {
  if (prior.components() != 1) {
    throw std::invalid_argument("tilted_oracle: defined only for single-Gaussian priors");
  }
  if (a.size() != prior.dim()) throw std::invalid_argument("tilted_oracle: dimension mismatch");
  if (!(lambda >= 0.0)) throw std::invalid_argument("tilted_oracle: lambda must be >= 0");
  // Completing the square in p(x) exp(lambda a.x): the Gaussian keeps its
  // variance and the mean shifts by lambda sigma^2 a.
  TiltedGaussian out;
  out.variance = prior.variance(0);
  out.mean = prior.mean(0) + lambda * out.variance * a;
  return out;
}

namespace {

NormalizedValue ratio_of(double value, double baseline) {
  // 0/0 means both runs agree on "none of this"; report parity. A nonzero
  // value over a zero baseline has no meaningful ratio, so keep it raw and
  // let the caller mark it.
  if (baseline == 0.0) {
    if (value == 0.0) return {1.0, true};
    return {value, false};
  }
  return {value / baseline, true};
}

}  // namespace

NormalizedReport normalize_report(const RunMetrics& metrics, const RunMetrics& baseline) {
  NormalizedReport rep;
  rep.reward_mean = ratio_of(metrics.reward_mean, baseline.reward_mean);
  rep.mmd2 = ratio_of(metrics.mmd2, baseline.mmd2);
  rep.nfe_denoiser = ratio_of(static_cast<double>(metrics.nfe.denoiser_calls),
                              static_cast<double>(baseline.nfe.denoiser_calls));
  rep.nfe_reward = ratio_of(static_cast<double>(metrics.nfe.reward_evals),
                            static_cast<double>(baseline.nfe.reward_evals));
  rep.nfe_grad = ratio_of(static_cast<double>(metrics.nfe.gradient_evals),
                          static_cast<double>(baseline.nfe.gradient_evals));
  rep.wall_ms = ratio_of(metrics.wall_ms, baseline.wall_ms);
  return rep;
}

}  // namespace guidelab
