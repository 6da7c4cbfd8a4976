#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <utility>

#include "guidelab/prior.hpp"
#include "guidelab/rng.hpp"
#include "guidelab/schedule.hpp"
#include "guidelab/state.hpp"

namespace guidelab {

// Score oracle: (x, t) -> grad_x log p_t(x) with 1 <= t <= T.
using ScoreFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&, int)>;

// The standard score oracle backed by an analytic mixture prior.
ScoreFn make_score_fn(const GaussianMixturePrior& prior, const NoiseSchedule& schedule);

// x_t = sqrt(abar_t) x0 + sqrt(1 - abar_t) noise. Noise is an explicit
// argument so tests can inject it; the overload below draws it.
StateVector forward_noise(const StateVector& x0, int t, const NoiseSchedule& schedule,
                          const Eigen::VectorXd& noise);
StateVector forward_noise(const StateVector& x0, int t, const NoiseSchedule& schedule,
                          RngStream& rng);

// Exact conversion from score to the noise-prediction parameterization:
// eps_hat = -sqrt(1 - abar_t) * score.
Eigen::VectorXd epsilon_from_score(const Eigen::VectorXd& score,
                                   const NoiseSchedule& schedule, int t);

// One ancestral step of the reverse chain, t -> t-1. The posterior mean is
//   mu = (x_t - (1 - alpha_t)/sqrt(1 - abar_t) * eps_hat) / sqrt(alpha_t)
// and the result is mu + sqrt(beta_t) * noise, except at t = 1 where the
// step is deterministic (noise forced to zero).
StateVector reverse_step(const StateVector& x_t, const NoiseSchedule& schedule,
                         const ScoreFn& score_fn, const Eigen::VectorXd& noise);
StateVector reverse_step(const StateVector& x_t, const NoiseSchedule& schedule,
                         const ScoreFn& score_fn, RngStream& rng);

// Tweedie estimate of the clean sample:
//   x0_hat = (x_t + (1 - abar_t) * score(x_t, t)) / sqrt(abar_t).
// At t = 0 the input is already clean and is returned unchanged.
StateVector tweedie_denoise(const StateVector& x_t, const NoiseSchedule& schedule,
                            const ScoreFn& score_fn);

// Jacobian d(x0_hat)/d(x_t) of the Tweedie map for an analytic prior:
//   (I + (1 - abar_t) * d(score)/dx) / sqrt(abar_t).
// Used for exact gradients of rewards evaluated on the denoised point.
Eigen::MatrixXd tweedie_jacobian(const GaussianMixturePrior& prior,
                                 const NoiseSchedule& schedule,
                                 const Eigen::VectorXd& x, int t);

// Edit-style initialization: forward-noise a clean reference to
// start_t = round(eta * T) (clamped to [1, T]) once per particle, each with
// its own substream, instead of starting from pure noise.
std::pair<ParticleSet, int> sdedit_init(const StateVector& reference, double eta,
                                        const NoiseSchedule& schedule, int count,
                                        std::uint64_t seed);

}  // namespace guidelab
