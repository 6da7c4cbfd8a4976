#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "guidelab/guidance.hpp"

namespace guidelab {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Pure-noise start: one N(0, I) draw per slot, keyed to the start timestep.
ParticleSet noise_init(int count, int dim, int start_t, std::uint64_t seed) {
  ParticleSet set;
  set.particles.reserve(count);
  set.substream_ids.reserve(count);
  for (int i = 0; i < count; ++i) {
    RngStream rng(seed, RngPhase::init, static_cast<std::uint64_t>(i),
                  static_cast<std::uint64_t>(start_t));
    set.particles.push_back({rng.normal_vector(dim), start_t});
    set.substream_ids.push_back(static_cast<std::uint64_t>(i));
  }
  return set;
}

// Window test on the noise ratio t/T, inclusive at both ends with a little
// slack so exact boundary ratios are not lost to rounding.
bool in_grad_window(int t, int T, const GuidanceConfig& cfg) {
  const double ratio = static_cast<double>(t) / static_cast<double>(T);
  return ratio <= cfg.grad_window_start + 1e-12 && ratio >= cfg.grad_window_end - 1e-12;
}

void score_all(const ParticleSet& set, const RewardModel& reward,
               const NoiseSchedule& schedule, const ScoreFn& score_fn, NfeCounters& nfe,
               Eigen::VectorXd& out) {
  out.resize(set.size());
  for (int i = 0; i < set.size(); ++i) {
    out[i] = reward_on_denoised(reward, set.particles[i], schedule, score_fn, nfe);
  }
}

int argmax_lowest(const Eigen::VectorXd& v) {
  int best = 0;
  for (int i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

RunResult run_engine(const GuidanceConfig& cfg, const GaussianMixturePrior& prior,
                     const RewardModel& reward, const NoiseSchedule& schedule,
                     std::uint64_t seed, const RunOptions& opts) {
  cfg.validate();
  const auto t0_wall = Clock::now();
  const int T = schedule.T;
  const ScoreFn score_fn = make_score_fn(prior, schedule);
  NfeCounters nfe;

  const bool selection_on = cfg.sampler == Sampler::code || cfg.sampler == Sampler::unicode;
  const bool gradient_on = (cfg.sampler == Sampler::grad_only ||
                            cfg.sampler == Sampler::unicode) &&
                           cfg.guidance_scale > 0.0;
  // grad_only means "every step", which is a block size of 1.
  const int block_grad = cfg.sampler == Sampler::grad_only ? 1 : cfg.block_grad;

  if (gradient_on && cfg.rescale_mode == RescaleMode::cfg_rescaled &&
      opts.conditional_prior == nullptr) {
    throw std::invalid_argument("cfg_rescaled mode needs a conditional prior");
  }

  // Starting point and per-block particle counts.
  int start_t = T;
  if (opts.sdedit_reference != nullptr) {
    if (!(opts.sdedit_eta > 0.0 && opts.sdedit_eta < 1.0)) {
      throw std::invalid_argument("sdedit_eta must lie in (0, 1)");
    }
    start_t = std::max(1, std::min(T, static_cast<int>(std::lround(opts.sdedit_eta * T))));
  }
  const int num_blocks = (start_t + cfg.block_sample - 1) / cfg.block_sample;
  std::vector<int> counts;
  if (selection_on && !cfg.particle_schedule.empty()) {
    counts = schedule_particles(cfg.particle_schedule, num_blocks);
  }
  const int initial_count = counts.empty() ? cfg.n_particles : counts[0];

  ParticleSet set;
  if (opts.sdedit_reference != nullptr) {
    set = sdedit_init(*opts.sdedit_reference, opts.sdedit_eta, schedule, initial_count, seed)
              .first;
  } else {
    set = noise_init(initial_count, prior.dim(), start_t, seed);
  }

  Eigen::VectorXd rewards;
  int s = 1;  // block step counter, as in the sampler's loop description
  for (int t = start_t; t >= 1; --t, ++s) {
    for (int i = 0; i < set.size(); ++i) {
      RngStream rng(seed, RngPhase::reverse, set.substream_ids[i],
                    static_cast<std::uint64_t>(t));
      set.particles[i] = reverse_step(set.particles[i], schedule, score_fn, rng);
    }
    nfe.denoiser_calls += set.size();
    const int u = t - 1;  // timestep the particles now sit at

    if (gradient_on && u >= 1 && s % block_grad == 0 && in_grad_window(u, T, cfg)) {
      // One stream per slot per event; repeats continue the same stream.
      std::vector<RngStream> zoo_streams;
      zoo_streams.reserve(set.size());
      for (int i = 0; i < set.size(); ++i) {
        zoo_streams.emplace_back(seed, RngPhase::zoo, set.substream_ids[i],
                                 static_cast<std::uint64_t>(u));
      }
      RngStream cluster_rng(seed, RngPhase::cluster, 0, static_cast<std::uint64_t>(u));
      for (int rep = 0; rep < cfg.grad_repeats; ++rep) {
        std::vector<Eigen::VectorXd> grads(set.size());
        if (cfg.cluster_k > 0) {
          grads = clustered_gradients(set, cfg.cluster_k, reward, schedule, prior, cfg,
                                      cluster_rng, nfe);
        } else {
          for (int i = 0; i < set.size(); ++i) {
            grads[i] = grad_step(set.particles[i], reward, schedule, prior, cfg,
                                 zoo_streams[i], nfe);
          }
        }
        for (int i = 0; i < set.size(); ++i) {
          double scale = cfg.guidance_scale;
          if (cfg.rescale_mode == RescaleMode::cfg_rescaled) {
            // Correction: how much a conditioned score field disagrees with
            // the base one at this particle. Two extra score evaluations.
            const double ab = schedule.alpha_bar(u);
            const Eigen::VectorXd correction =
                opts.conditional_prior->marginal_score(set.particles[i].values, ab) -
                prior.marginal_score(set.particles[i].values, ab);
            nfe.denoiser_calls += 2;
            scale = rescale_guidance(grads[i], correction, cfg.cfg_scale,
                                     cfg.guidance_scale, cfg.rescale_eps,
                                     cfg.rescale_max_factor * cfg.guidance_scale);
          }
          set.particles[i] = apply_gradient(set.particles[i], grads[i], scale);
        }
      }
    }

    if (selection_on && u >= 1 && s % cfg.block_sample == 0) {
      score_all(set, reward, schedule, score_fn, nfe, rewards);
      const int block_idx = std::min(s / cfg.block_sample, num_blocks - 1);
      const int next_count = counts.empty() ? cfg.n_particles : counts[block_idx];
      if (cfg.selection == SelectionRule::greedy) {
        set = select_greedy(set, rewards, next_count);
      } else {
        RngStream sel_rng(seed, RngPhase::select, 0, static_cast<std::uint64_t>(u));
        set = resample_multinomial(set, softmax_weights(rewards, cfg.temperature),
                                   next_count, sel_rng);
      }
    }
  }

  // Final pass: score the survivors at t = 0 and report the argmax.
  score_all(set, reward, schedule, score_fn, nfe, rewards);
  const int best = argmax_lowest(rewards);

  RunResult res;
  res.final = set.particles[best];
  res.final_reward = rewards[best];
  res.survivors = std::move(set.particles);
  res.survivor_rewards.assign(rewards.data(), rewards.data() + rewards.size());
  res.metrics.reward_mean = rewards.mean();
  res.metrics.reward_std = std::sqrt((rewards.array() - rewards.mean()).square().mean());
  res.metrics.nfe = nfe;
  res.metrics.wall_ms = ms_since(t0_wall);
  return res;
}

GuidanceConfig with_sampler(GuidanceConfig cfg, Sampler s) {
  cfg.sampler = s;
  return cfg;
}

}  // namespace

RunResult run_unguided(const GaussianMixturePrior& prior, const NoiseSchedule& schedule,
                       const RewardModel& reward, std::uint64_t seed,
                       const RunOptions& opts) {
  const auto t0_wall = Clock::now();
  const ScoreFn score_fn = make_score_fn(prior, schedule);
  NfeCounters nfe;

  int start_t = schedule.T;
  StateVector x;
  if (opts.sdedit_reference != nullptr) {
    auto [set, st] = sdedit_init(*opts.sdedit_reference, opts.sdedit_eta, schedule, 1, seed);
    x = set.particles[0];
    start_t = st;
  } else {
    RngStream rng(seed, RngPhase::init, 0, static_cast<std::uint64_t>(start_t));
    x = {rng.normal_vector(prior.dim()), start_t};
  }
  for (int t = start_t; t >= 1; --t) {
    RngStream rng(seed, RngPhase::reverse, 0, static_cast<std::uint64_t>(t));
    x = reverse_step(x, schedule, score_fn, rng);
    nfe.denoiser_calls += 1;
  }

  RunResult res;
  res.final = x;
  // Reported for comparison only; the unguided chain never consults the
  // reward, so this does not count toward its NFE.
  res.final_reward = reward.evaluate(x.values);
  res.survivors = {x};
  res.survivor_rewards = {res.final_reward};
  res.metrics.reward_mean = res.final_reward;
  res.metrics.reward_std = 0.0;
  res.metrics.nfe = nfe;
  res.metrics.wall_ms = ms_since(t0_wall);
  return res;
}

RunResult run_bon(const GuidanceConfig& cfg, const GaussianMixturePrior& prior,
                  const RewardModel& reward, const NoiseSchedule& schedule,
                  std::uint64_t seed, const RunOptions& opts) {
  return run_engine(with_sampler(cfg, Sampler::bon), prior, reward, schedule, seed, opts);
}

RunResult run_code(const GuidanceConfig& cfg, const GaussianMixturePrior& prior,
                   const RewardModel& reward, const NoiseSchedule& schedule,
                   std::uint64_t seed, const RunOptions& opts) {
  return run_engine(with_sampler(cfg, Sampler::code), prior, reward, schedule, seed, opts);
}

RunResult run_gradient_only(const GuidanceConfig& cfg, const GaussianMixturePrior& prior,
                            const RewardModel& reward, const NoiseSchedule& schedule,
                            std::uint64_t seed, const RunOptions& opts) {
  return run_engine(with_sampler(cfg, Sampler::grad_only), prior, reward, schedule, seed,
                    opts);
}

RunResult run_unicode(const GuidanceConfig& cfg, const GaussianMixturePrior& prior,
                      const RewardModel& reward, const NoiseSchedule& schedule,
                      std::uint64_t seed, const RunOptions& opts) {
  return run_engine(with_sampler(cfg, Sampler::unicode), prior, reward, schedule, seed,
                    opts);
}

}  // namespace guidelab
