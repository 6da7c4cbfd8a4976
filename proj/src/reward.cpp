#include "guidelab/reward.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <utility>

namespace guidelab {

RewardModel linear_reward(const Eigen::VectorXd& a) {
  if (a.size() == 0 || a.isZero(0.0)) {
    throw std::invalid_argument("linear_reward: direction must be nonzero");
  }
  if (!a.allFinite()) throw std::invalid_argument("linear_reward: direction must be finite");
  RewardModel r;
  r.name = "linear";
  r.evaluate = [a](const Eigen::VectorXd& x) { return a.dot(x); };
  r.analytic_gradient = [a](const Eigen::VectorXd&) { return a; };
  return r;
}

RewardModel target_reward(const Eigen::VectorXd& target, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("target_reward: scale must be positive");
  RewardModel r;
  r.name = "target";
  r.evaluate = [target, scale](const Eigen::VectorXd& x) {
    return -scale * (x - target).squaredNorm();
  };
  r.analytic_gradient = [target, scale](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(-2.0 * scale * (x - target));
  };
  return r;
}

RewardModel quantized_reward(RewardModel base, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("quantized_reward: step must be positive");
  RewardModel r;
  r.name = base.name + "_quantized";
  auto base_eval = std::move(base.evaluate);
  r.evaluate = [base_eval, step](const Eigen::VectorXd& x) {
    return step * std::floor(base_eval(x) / step);
  };
  // No analytic_gradient on purpose: the floor makes the reward piecewise
  // constant, and a silent zero would defeat the zero-order fallback.
  return r;
}

RewardModel weighted_sum_reward(double gamma1, RewardModel r1, double gamma2,
                                RewardModel r2) {
  RewardModel r;
  r.name = r1.name + "+" + r2.name;
  auto e1 = r1.evaluate;
  auto e2 = r2.evaluate;
  r.evaluate = [gamma1, e1, gamma2, e2](const Eigen::VectorXd& x) {
    return gamma1 * e1(x) + gamma2 * e2(x);
  };
  if (r1.has_gradient() && r2.has_gradient()) {
    auto g1 = r1.analytic_gradient;
    auto g2 = r2.analytic_gradient;
    r.analytic_gradient = [gamma1, g1, gamma2, g2](const Eigen::VectorXd& x) {
      return Eigen::VectorXd(gamma1 * g1(x) + gamma2 * g2(x));
    };
  }
  return r;
}

double reward_on_denoised(const RewardModel& reward, const StateVector& x_t,
                          const NoiseSchedule& schedule, const ScoreFn& score_fn,
                          NfeCounters& nfe) {
  nfe.reward_evals += 1;
  return reward.evaluate(tweedie_denoise(x_t, schedule, score_fn).values);
}

Eigen::VectorXd zero_order_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                    const Eigen::VectorXd& x, const ZooConfig& cfg,
                                    const std::vector<Eigen::VectorXd>& probes) {
  if (!(cfg.sigma > 0.0)) throw std::invalid_argument("zero_order_gradient: sigma must be positive");
  if (probes.empty()) throw std::invalid_argument("zero_order_gradient: needs at least one probe");
  Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
  for (const Eigen::VectorXd& e : probes) {
    if (e.size() != x.size()) {
      throw std::invalid_argument("zero_order_gradient: probe dimension mismatch");
    }
    const double slope = (f(x + cfg.sigma * e) - f(x - cfg.sigma * e)) / (2.0 * cfg.sigma);
    g.noalias() += slope * e;
  }
  return g / static_cast<double>(probes.size());
}

Eigen::VectorXd zero_order_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                    const Eigen::VectorXd& x, const ZooConfig& cfg,
                                    RngStream& rng) {
  if (cfg.n_probes < 1) throw std::invalid_argument("zero_order_gradient: n_probes must be >= 1");
  std::vector<Eigen::VectorXd> probes;
  probes.reserve(cfg.n_probes);
  for (int i = 0; i < cfg.n_probes; ++i) probes.push_back(rng.normal_vector(x.size()));
  return zero_order_gradient(f, x, cfg, probes);
}

Eigen::VectorXd zero_order_gradient(const RewardModel& reward, const Eigen::VectorXd& x,
                                    const ZooConfig& cfg, RngStream& rng,
                                    NfeCounters& nfe) {
  if (cfg.n_probes < 1) throw std::invalid_argument("zero_order_gradient: n_probes must be >= 1");
  nfe.reward_evals += 2 * static_cast<std::int64_t>(cfg.n_probes);
  return zero_order_gradient(reward.evaluate, x, cfg, rng);
}

}  // namespace guidelab
