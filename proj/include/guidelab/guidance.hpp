#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "guidelab/diffusion.hpp"
#include "guidelab/kmeans.hpp"
#include "guidelab/metrics.hpp"
#include "guidelab/nfe.hpp"
#include "guidelab/prior.hpp"
#include "guidelab/reward.hpp"
#include "guidelab/rng.hpp"
#include "guidelab/schedule.hpp"
#include "guidelab/state.hpp"

namespace guidelab {

enum class Sampler { bon, code, grad_only, unicode };
enum class SelectionRule { greedy, multinomial };
enum class GradMode { analytic, zero_order };
enum class RescaleMode { fixed, cfg_rescaled };

const char* to_string(Sampler s);
const char* to_string(SelectionRule s);
const char* to_string(GradMode m);
const char* to_string(RescaleMode m);

// All knobs of the sampler family. The defaults are the reference operating
// point: 4 particles, selection every 5 steps, gradients every 5 steps at
// scale 0.2 inside the [0.6, 0] noise-ratio window.
struct GuidanceConfig {
  int n_particles = 4;
  int block_sample = 5;     // B_s, steps between selection events
  int block_grad = 5;       // B_g, steps between gradient events
  double temperature = 0.1; // tau for multinomial selection
  double guidance_scale = 0.2;  // gamma
  Sampler sampler = Sampler::unicode;
  SelectionRule selection = SelectionRule::greedy;
  std::vector<int> particle_schedule;  // empty = constant n_particles
  double grad_window_start = 0.6;  // gradients active while t/T <= start ...
  double grad_window_end = 0.0;    // ... and t/T >= end
  int cluster_k = 0;               // 0 = no clustering
  int grad_repeats = 1;
  GradMode grad_mode = GradMode::analytic;
  RescaleMode rescale_mode = RescaleMode::fixed;
  double cfg_scale = 5.0;          // strength of the conditional correction
  double rescale_eps = 1e-8;
  double rescale_max_factor = 10.0;  // clamp rescaled step to this times gamma
  ZooConfig zoo;

  void validate() const;  // throws invalid-argument on any bad bound
};

// Optional run features that need extra inputs: a conditional prior for the
// cfg_rescaled correction term, and an edit-style start from a reference.
struct RunOptions {
  const GaussianMixturePrior* conditional_prior = nullptr;
  const StateVector* sdedit_reference = nullptr;
  double sdedit_eta = 0.6;
};

// What a run hands back: the selected sample, every surviving particle at
// t = 0 with its reward, and the run-level metrics (reward stats over the
// survivors, NFE counters, wall time).
struct RunResult {
  StateVector final;
  double final_reward = 0.0;
  std::vector<StateVector> survivors;
  std::vector<double> survivor_rewards;
  RunMetrics metrics;
};

// ---- Per-step building blocks ----

// Gradient of reward(tweedie_denoise(.)) at the particle. Analytic mode
// chains the reward gradient through the Tweedie Jacobian and adds 1 to
// nfe.gradient_evals; zero-order mode probes the composite map, adding 2*N'
// to nfe.gradient_evals and 2*N' to nfe.reward_evals (each probe is a
// reward evaluation).
Eigen::VectorXd grad_step(const StateVector& particle, const RewardModel& reward,
                          const NoiseSchedule& schedule, const GaussianMixturePrior& prior,
                          const GuidanceConfig& cfg, RngStream& rng, NfeCounters& nfe);

// particle + scale * g, timestep unchanged.
StateVector apply_gradient(const StateVector& particle, const Eigen::VectorXd& g,
                           double scale);

// Norm-matched step size for the gradient update:
//   ||correction|| * scale_cfg * scale_grad / (||grad|| + eps)
// capped at max_scale (the formula blows up as the gradient vanishes).
double rescale_guidance(const Eigen::VectorXd& grad, const Eigen::VectorXd& correction,
                        double scale_cfg, double scale_grad, double eps,
                        double max_scale = std::numeric_limits<double>::infinity());

// Softmax of rewards / tau with max-subtraction; sums to 1.
Eigen::VectorXd softmax_weights(const Eigen::VectorXd& rewards, double tau);

// `count` i.i.d. draws from probs, with replacement. Outputs occupy slots
// 0..count-1, so each copy owns a fresh substream.
ParticleSet resample_multinomial(const ParticleSet& particles, const Eigen::VectorXd& probs,
                                 int count, RngStream& rng);

// `count` copies of the argmax-reward particle; ties break to the lowest
// index.
ParticleSet select_greedy(const ParticleSet& particles, const Eigen::VectorXd& rewards,
                          int count);

// Stretch or shrink a requested per-block count sequence onto num_blocks
// blocks: block i reads schedule[floor(i * len / num_blocks)].
std::vector<int> schedule_particles(const std::vector<int>& schedule, int num_blocks);

// Cluster particle values with k-means, evaluate grad_step once per
// centroid, and hand every member its centroid's gradient. Costs K gradient
// estimates instead of N.
std::vector<Eigen::VectorXd> clustered_gradients(const ParticleSet& particles, int K,
                                                 const RewardModel& reward,
                                                 const NoiseSchedule& schedule,
                                                 const GaussianMixturePrior& prior,
                                                 const GuidanceConfig& cfg, RngStream& rng,
                                                 NfeCounters& nfe);

// ---- End-to-end samplers ----
// All runners are deterministic in (cfg, seed): every draw comes from a
// substream keyed by (seed, phase, particle slot, timestep).

// Single unguided trajectory through the reverse chain. The reference the
// guided samplers are measured against, and the reduction target for the
// N=1 / gamma=0 degenerate cases.
RunResult run_unguided(const GaussianMixturePrior& prior, const NoiseSchedule& schedule,
                       const RewardModel& reward, std::uint64_t seed,
                       const RunOptions& opts = {});

// N independent trajectories, keep the reward-argmax at the end.
RunResult run_bon(const GuidanceConfig& cfg, const GaussianMixturePrior& prior,
                  const RewardModel& reward, const NoiseSchedule& schedule,
                  std::uint64_t seed, const RunOptions& opts = {});

// Blockwise selection every B_s steps, no gradients.
RunResult run_code(const GuidanceConfig& cfg, const GaussianMixturePrior& prior,
                   const RewardModel& reward, const NoiseSchedule& schedule,
                   std::uint64_t seed, const RunOptions& opts = {});

// Gradient updates after every reverse step inside the window, no selection.
RunResult run_gradient_only(const GuidanceConfig& cfg, const GaussianMixturePrior& prior,
                            const RewardModel& reward, const NoiseSchedule& schedule,
                            std::uint64_t seed, const RunOptions& opts = {});

// The combined sampler: gradients every B_g steps inside the window,
// selection every B_s steps, gradient first when both land on the same step.
RunResult run_unicode(const GuidanceConfig& cfg, const GaussianMixturePrior& prior,
                      const RewardModel& reward, const NoiseSchedule& schedule,
                      std::uint64_t seed, const RunOptions& opts = {});

}  // namespace guidelab
