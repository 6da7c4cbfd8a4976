#include "guidelab/schedule.hpp"

#include <stdexcept>
#include <string>

namespace guidelab {

void NoiseSchedule::check(int t) const {
  if (t < 1 || t > T) {
    throw std::invalid_argument("timestep " + std::to_string(t) +
                                " outside schedule range [1, " + std::to_string(T) + "]");
  }
}

NoiseSchedule schedule_from_betas(const Eigen::VectorXd& betas) {
  if (betas.size() < 1) throw std::invalid_argument("schedule needs at least one step");
  for (Eigen::Index i = 0; i < betas.size(); ++i) {
    if (!(betas[i] > 0.0 && betas[i] < 1.0)) {
      throw std::invalid_argument("beta_" + std::to_string(i + 1) + " must lie in (0, 1)");
    }
  }
  NoiseSchedule s;
  s.T = static_cast<int>(betas.size());
  s.betas = betas;
  s.alphas = Eigen::VectorXd::Ones(s.T) - betas;
  s.alpha_bars.resize(s.T);
  double acc = 1.0;
  for (int t = 0; t < s.T; ++t) {
    acc *= s.alphas[t];
    s.alpha_bars[t] = acc;
  }
  return s;
}

NoiseSchedule make_linear_schedule(int T, double beta_start, double beta_end) {
  if (T < 1) throw std::invalid_argument("T must be >= 1");
  if (!(beta_start > 0.0 && beta_start <= beta_end && beta_end < 1.0)) {
    throw std::invalid_argument("betas must satisfy 0 < beta_start <= beta_end < 1");
  }
  Eigen::VectorXd betas(T);
  if (T == 1) {
    betas[0] = beta_start;
  } else {
    for (int t = 0; t < T; ++t) {
      betas[t] = beta_start + (beta_end - beta_start) * static_cast<double>(t) /
                                  static_cast<double>(T - 1);
    }
  }
  return schedule_from_betas(betas);
}

}  // namespace guidelab
