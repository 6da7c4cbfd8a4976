#include "guidelab/guidance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace guidelab {

const char* to_string(Sampler s) {
  switch (s) {
    case Sampler::bon: return "bon";
    case Sampler::code: return "code";
    case Sampler::grad_only: return "grad_only";
    case Sampler::unicode: return "unicode";
  }
  return "?";
}

const char* to_string(SelectionRule s) {
  return s == SelectionRule::greedy ? "greedy" : "multinomial";
}

const char* to_string(GradMode m) {
  return m == GradMode::analytic ? "analytic" : "zero_order";
}

const char* to_string(RescaleMode m) {
  return m == RescaleMode::fixed ? "fixed" : "cfg_rescaled";
}

void GuidanceConfig::validate() const {
  if (n_particles < 1) throw std::invalid_argument("config: n_particles must be >= 1");
  if (block_sample < 1) throw std::invalid_argument("config: block_sample must be >= 1");
  if (block_grad < 1) throw std::invalid_argument("config: block_grad must be >= 1");
  if (!(temperature > 0.0)) throw std::invalid_argument("config: temperature must be > 0");
  if (!(guidance_scale >= 0.0)) throw std::invalid_argument("config: guidance_scale must be >= 0");
  for (int c : particle_schedule) {
    if (c < 1) throw std::invalid_argument("config: particle_schedule entries must be >= 1");
  }
  if (!(grad_window_start >= 0.0 && grad_window_start <= 1.0 &&
        grad_window_end >= 0.0 && grad_window_end <= 1.0)) {
    throw std::invalid_argument("config: grad_window bounds must lie in [0, 1]");
  }
  if (grad_window_start < grad_window_end) {
    throw std::invalid_argument("config: grad_window_start must be >= grad_window_end");
  }
  if (cluster_k < 0) throw std::invalid_argument("config: cluster_k must be >= 0");
  if (grad_repeats < 1) throw std::invalid_argument("config: grad_repeats must be >= 1");
  if (!(zoo.sigma > 0.0)) throw std::invalid_argument("config: zoo.sigma must be > 0");
  if (zoo.n_probes < 1) throw std::invalid_argument("config: zoo.n_probes must be >= 1");
  if (!(rescale_eps > 0.0)) throw std::invalid_argument("config: rescale_eps must be > 0");
  if (!(rescale_max_factor > 0.0)) {
    throw std::invalid_argument("config: rescale_max_factor must be > 0");
  }
}

Eigen::VectorXd grad_step(const StateVector& particle, const RewardModel& reward,
                          const NoiseSchedule& schedule, const GaussianMixturePrior& prior,
                          const GuidanceConfig& cfg, RngStream& rng, NfeCounters& nfe) {
  if (particle.t < 1) {
    throw std::invalid_argument("grad_step: particle must sit at a noisy timestep");
  }
  if (cfg.grad_mode == GradMode::analytic) {
    if (!reward.has_gradient()) {
      throw std::invalid_argument("grad_step: reward '" + reward.name +
                                  "' has no analytic gradient; use zero_order mode");
    }
    nfe.gradient_evals += 1;
    ScoreFn score_fn = make_score_fn(prior, schedule);
    const StateVector x0_hat = tweedie_denoise(particle, schedule, score_fn);
    const Eigen::MatrixXd jac = tweedie_jacobian(prior, schedule, particle.values, particle.t);
    // d/dx_t reward(x0_hat(x_t)) = J^T grad_reward; J is symmetric here but
    // keep the transpose for clarity of the chain rule.
    return jac.transpose() * reward.analytic_gradient(x0_hat.values);
  }
  // Zero-order: probe the full composite map t -> reward(tweedie(.)).
  // Each probe pair costs two reward evaluations and the whole estimate
  // counts as 2*N' gradient evaluations.
  nfe.gradient_evals += 2 * static_cast<std::int64_t>(cfg.zoo.n_probes);
  nfe.reward_evals += 2 * static_cast<std::int64_t>(cfg.zoo.n_probes);
  ScoreFn score_fn = make_score_fn(prior, schedule);
  const int t = particle.t;
  auto composite = [&](const Eigen::VectorXd& x) {
    StateVector s{x, t};
    return reward.evaluate(tweedie_denoise(s, schedule, score_fn).values);
  };
  return zero_order_gradient(composite, particle.values, cfg.zoo, rng);
}

StateVector apply_gradient(const StateVector& particle, const Eigen::VectorXd& g,
                           double scale) {
  if (g.size() != particle.values.size()) {
    throw std::invalid_argument("apply_gradient: gradient dimension mismatch");
  }
  StateVector out;
  out.values = particle.values + scale * g;
  out.t = particle.t;
  return out;
}

double rescale_guidance(const Eigen::VectorXd& grad, const Eigen::VectorXd& correction,
                        double scale_cfg, double scale_grad, double eps, double max_scale) {
  if (!(eps > 0.0)) throw std::invalid_argument("rescale_guidance: eps must be > 0");
  const double scale = correction.norm() * scale_cfg * scale_grad / (grad.norm() + eps);
  return std::min(scale, max_scale);
}

Eigen::VectorXd softmax_weights(const Eigen::VectorXd& rewards, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("softmax_weights: tau must be > 0");
  if (rewards.size() == 0) throw std::invalid_argument("softmax_weights: empty rewards");
  if (!rewards.allFinite()) throw std::invalid_argument("softmax_weights: rewards must be finite");
  Eigen::VectorXd scaled = rewards / tau;
  scaled.array() -= scaled.maxCoeff();
  Eigen::VectorXd w = scaled.array().exp();
  return w / w.sum();
}

ParticleSet resample_multinomial(const ParticleSet& particles, const Eigen::VectorXd& probs,
                                 int count, RngStream& rng) {
  if (probs.size() != particles.size()) {
    throw std::invalid_argument("resample_multinomial: probs/particles length mismatch");
  }
  if (count < 0) throw std::invalid_argument("resample_multinomial: negative count");
  ParticleSet out;
  out.particles.reserve(count);
  out.substream_ids.reserve(count);
  for (int i = 0; i < count; ++i) {
    out.particles.push_back(particles.particles[rng.categorical(probs)]);
    out.substream_ids.push_back(static_cast<std::uint64_t>(i));
  }
  return out;
}

ParticleSet select_greedy(const ParticleSet& particles, const Eigen::VectorXd& rewards,
                          int count) {
  if (particles.size() == 0) throw std::invalid_argument("select_greedy: empty particle set");
  if (rewards.size() != particles.size()) {
    throw std::invalid_argument("select_greedy: rewards/particles length mismatch");
  }
  if (count < 0) throw std::invalid_argument("select_greedy: negative count");
  int best = 0;
  for (int i = 1; i < rewards.size(); ++i) {
    if (rewards[i] > rewards[best]) best = i;  // strict: ties keep the lowest index
  }
  ParticleSet out;
  out.particles.assign(count, particles.particles[best]);
  out.substream_ids.resize(count);
  for (int i = 0; i < count; ++i) out.substream_ids[i] = static_cast<std::uint64_t>(i);
  return out;
}

std::vector<int> schedule_particles(const std::vector<int>& schedule, int num_blocks) {
  if (schedule.empty()) throw std::invalid_argument("schedule_particles: empty schedule");
  if (num_blocks < 1) throw std::invalid_argument("schedule_particles: num_blocks must be >= 1");
  for (int c : schedule) {
    if (c < 1) throw std::invalid_argument("schedule_particles: counts must be >= 1");
  }
  const auto len = static_cast<std::int64_t>(schedule.size());
  std::vector<int> counts(num_blocks);
  for (std::int64_t i = 0; i < num_blocks; ++i) {
    counts[i] = schedule[static_cast<size_t>(i * len / num_blocks)];
  }
  return counts;
}

std::vector<Eigen::VectorXd> clustered_gradients(const ParticleSet& particles, int K,
                                                 const RewardModel& reward,
                                                 const NoiseSchedule& schedule,
                                                 const GaussianMixturePrior& prior,
                                                 const GuidanceConfig& cfg, RngStream& rng,
                                                 NfeCounters& nfe) {
  if (K < 1) throw std::invalid_argument("clustered_gradients: K must be >= 1");
  if (particles.size() == 0) {
    throw std::invalid_argument("clustered_gradients: empty particle set");
  }
  const int t = particles.particles[0].t;
  std::vector<Eigen::VectorXd> points;
  points.reserve(particles.size());
  for (const auto& p : particles.particles) points.push_back(p.values);

  const KmeansResult km = kmeans_cluster(points, K, 25, rng);
  std::vector<Eigen::VectorXd> per_cluster(km.centroids.size());
  for (size_t c = 0; c < km.centroids.size(); ++c) {
    StateVector centroid{km.centroids[c], t};
    per_cluster[c] = grad_step(centroid, reward, schedule, prior, cfg, rng, nfe);
  }
  std::vector<Eigen::VectorXd> grads(particles.size());
  for (int i = 0; i < particles.size(); ++i) grads[i] = per_cluster[km.assignments[i]];
  return grads;
}

}  // namespace guidelab
