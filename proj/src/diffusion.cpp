#include "guidelab/diffusion.hpp"

#include <cmath>
#include <stdexcept>

namespace guidelab {

namespace {

void require_t(int t, const NoiseSchedule& schedule, const char* op) {
  if (t < 1 || t > schedule.T) {
    throw std::invalid_argument(std::string(op) + ": timestep out of range");
  }
}

}  // namespace

ScoreFn make_score_fn(const GaussianMixturePrior& prior, const NoiseSchedule& schedule) {
  // Copy both by value: the returned closure may outlive its arguments.
  return [prior, schedule](const Eigen::VectorXd& x, int t) {
    if (t < 1 || t > schedule.T) {
      throw std::invalid_argument("score_fn: timestep out of range");
    }
    return prior.marginal_score(x, schedule.alpha_bar(t));
  };
}

StateVector forward_noise(const StateVector& x0, int t, const NoiseSchedule& schedule,
                          const Eigen::VectorXd& noise) {
  require_t(t, schedule, "forward_noise");
  if (noise.size() != x0.values.size()) {
    throw std::invalid_argument("forward_noise: noise dimension mismatch");
  }
  const double ab = schedule.alpha_bar(t);
  StateVector out;
  out.values = std::sqrt(ab) * x0.values + std::sqrt(1.0 - ab) * noise;
  out.t = t;
  return out;
}

StateVector forward_noise(const StateVector& x0, int t, const NoiseSchedule& schedule,
                          RngStream& rng) {
  return forward_noise(x0, t, schedule, rng.normal_vector(x0.values.size()));
}

Eigen::VectorXd epsilon_from_score(const Eigen::VectorXd& score,
                                   const NoiseSchedule& schedule, int t) {
  require_t(t, schedule, "epsilon_from_score");
  return -std::sqrt(1.0 - schedule.alpha_bar(t)) * score;
}

StateVector reverse_step(const StateVector& x_t, const NoiseSchedule& schedule,
                         const ScoreFn& score_fn, const Eigen::VectorXd& noise) {
  require_t(x_t.t, schedule, "reverse_step");
  const int t = x_t.t;
  const double alpha = schedule.alpha(t);
  const double ab = schedule.alpha_bar(t);
  const Eigen::VectorXd eps_hat = epsilon_from_score(score_fn(x_t.values, t), schedule, t);
  StateVector out;
  out.values = (x_t.values - (1.0 - alpha) / std::sqrt(1.0 - ab) * eps_hat) / std::sqrt(alpha);
  if (t > 1) {
    if (noise.size() != x_t.values.size()) {
      throw std::invalid_argument("reverse_step: noise dimension mismatch");
    }
    out.values += std::sqrt(schedule.beta(t)) * noise;
  }
  out.t = t - 1;
  return out;
}

StateVector reverse_step(const StateVector& x_t, const NoiseSchedule& schedule,
                         const ScoreFn& score_fn, RngStream& rng) {
  // The t = 1 step is deterministic but we still draw (and discard) the
  // noise so a particle's stream position depends only on how many steps it
  // has taken, not on where in the schedule it started.
  return reverse_step(x_t, schedule, score_fn, rng.normal_vector(x_t.values.size()));
}

StateVector tweedie_denoise(const StateVector& x_t, const NoiseSchedule& schedule,
                            const ScoreFn& score_fn) {
  if (x_t.t == 0) return x_t;
  require_t(x_t.t, schedule, "tweedie_denoise");
  const double ab = schedule.alpha_bar(x_t.t);
  StateVector out;
  out.values = (x_t.values + (1.0 - ab) * score_fn(x_t.values, x_t.t)) / std::sqrt(ab);
  out.t = 0;
  return out;
}

Eigen::MatrixXd tweedie_jacobian(const GaussianMixturePrior& prior,
                                 const NoiseSchedule& schedule,
                                 const Eigen::VectorXd& x, int t) {
  require_t(t, schedule, "tweedie_jacobian");
  const double ab = schedule.alpha_bar(t);
  const Eigen::Index d = x.size();
  Eigen::MatrixXd jac = (1.0 - ab) * prior.marginal_score_jacobian(x, ab);
  jac += Eigen::MatrixXd::Identity(d, d);
  jac /= std::sqrt(ab);
  return jac;
}

std::pair<ParticleSet, int> sdedit_init(const StateVector& reference, double eta,
                                        const NoiseSchedule& schedule, int count,
                                        std::uint64_t seed) {
  if (!(eta > 0.0 && eta < 1.0)) {
    throw std::invalid_argument("sdedit_init: eta must lie in (0, 1)");
  }
  if (count < 1) throw std::invalid_argument("sdedit_init: count must be >= 1");
  if (reference.t != 0) {
    throw std::invalid_argument("sdedit_init: reference must be a clean sample (t = 0)");
  }
  int start_t = static_cast<int>(std::lround(eta * schedule.T));
  start_t = std::max(1, std::min(schedule.T, start_t));
  ParticleSet set;
  set.particles.reserve(count);
  set.substream_ids.reserve(count);
  for (int i = 0; i < count; ++i) {
    RngStream rng(seed, RngPhase::init, static_cast<std::uint64_t>(i),
                  static_cast<std::uint64_t>(start_t));
    set.particles.push_back(forward_noise(reference, start_t, schedule, rng));
    set.substream_ids.push_back(static_cast<std::uint64_t>(i));
  }
  return {std::move(set), start_t};
}

}  // namespace guidelab
