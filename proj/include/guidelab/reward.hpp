#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "guidelab/diffusion.hpp"
#include "guidelab/nfe.hpp"
#include "guidelab/rng.hpp"
#include "guidelab/state.hpp"

namespace guidelab {

// A reward model r: R^d -> R. analytic_gradient is empty for rewards that
// are not differentiable; callers must check has_gradient() and fall back to
// zero-order estimation, never assume a silent zero.
struct RewardModel {
  std::string name;
  std::function<double(const Eigen::VectorXd&)> evaluate;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> analytic_gradient;

  bool has_gradient() const { return static_cast<bool>(analytic_gradient); }
};

// Zero-order estimation knobs: probe scale sigma and probe count n_probes.
struct ZooConfig {
  double sigma = 0.01;
  int n_probes = 8;
};

// r(x) = a . x. The workhorse reward: with a Gaussian prior it admits an
// exact tilted-posterior oracle.
RewardModel linear_reward(const Eigen::VectorXd& a);

// r(x) = -scale * ||x - target||^2, maximized at the target point.
RewardModel target_reward(const Eigen::VectorXd& target, double scale);

// r(x) = step * floor(base(x) / step). Deliberately non-differentiable
// (piecewise constant); stands in for compressibility-style rewards.
RewardModel quantized_reward(RewardModel base, double step);

// r = gamma1 * r1 + gamma2 * r2; gradient present only when both parts
// provide one.
RewardModel weighted_sum_reward(double gamma1, RewardModel r1, double gamma2,
                                RewardModel r2);

// reward.evaluate(tweedie_denoise(x_t)). The quantity every selection step
// ranks particles by. Adds 1 to nfe.reward_evals.
double reward_on_denoised(const RewardModel& reward, const StateVector& x_t,
                          const NoiseSchedule& schedule, const ScoreFn& score_fn,
                          NfeCounters& nfe);

// Antithetic zero-order gradient estimate of an arbitrary scalar function:
//   (1/N') sum_i [(f(x + sigma e_i) - f(x - sigma e_i)) / (2 sigma)] e_i
// with e_i standard normal. The probe-injected overload is the deterministic
// core; for linear f each probe's central difference recovers the exact
// directional slope a . e_i. Neither overload touches counters.
Eigen::VectorXd zero_order_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                    const Eigen::VectorXd& x, const ZooConfig& cfg,
                                    const std::vector<Eigen::VectorXd>& probes);
Eigen::VectorXd zero_order_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                    const Eigen::VectorXd& x, const ZooConfig& cfg,
                                    RngStream& rng);

// Reward-model front end: estimates grad r(x) and books the 2*N' probe
// evaluations against nfe.reward_evals.
Eigen::VectorXd zero_order_gradient(const RewardModel& reward, const Eigen::VectorXd& x,
                                    const ZooConfig& cfg, RngStream& rng,
                                    NfeCounters& nfe);

}  // namespace guidelab
