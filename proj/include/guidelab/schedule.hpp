#pragma once

#include <Eigen/Core>

namespace guidelab {

/// Discrete variance schedule for the forward/reverse chains.
///
/// Arrays are stored for t = 1..T; the accessors take the 1-based timestep.
/// t = 0 is the clean level and has no schedule entry.
struct NoiseSchedule {
  int T = 0;
  Eigen::VectorXd betas;
  Eigen::VectorXd alphas;      // 1 - beta_t
  Eigen::VectorXd alpha_bars;  // prod_{s<=t} alpha_s

  double beta(int t) const { check(t); return betas[t - 1]; }
  double alpha(int t) const { check(t); return alphas[t - 1]; }
  double alpha_bar(int t) const { check(t); return alpha_bars[t - 1]; }

 private:
  void check(int t) const;
};

/// Builds a schedule from explicit per-step variances.
NoiseSchedule schedule_from_betas(const Eigen::VectorXd& betas);

/// Linear beta ramp, endpoints inclusive. T = 1 degenerates to [beta_start].
NoiseSchedule make_linear_schedule(int T, double beta_start, double beta_end);

}  // namespace guidelab
