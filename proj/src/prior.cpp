#include "guidelab/prior.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace guidelab {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;  // log(2*pi)
}

GaussianMixturePrior::GaussianMixturePrior(std::vector<Eigen::VectorXd> means,
                                           std::vector<double> variances,
                                           std::vector<double> weights)
    : means_(std::move(means)),
      variances_(std::move(variances)),
      weights_(std::move(weights)) {
  if (means_.empty()) throw std::invalid_argument("mixture needs at least one component");
  if (means_.size() != variances_.size() || means_.size() != weights_.size()) {
    throw std::invalid_argument("means, variances and weights must have equal length");
  }
  dim_ = static_cast<int>(means_[0].size());
  if (dim_ < 1) throw std::invalid_argument("component means must be non-empty vectors");
  double wsum = 0.0;
  for (size_t k = 0; k < means_.size(); ++k) {
    if (means_[k].size() != dim_) {
      throw std::invalid_argument("component " + std::to_string(k) + " has mismatched dim");
    }
    if (!(variances_[k] > 0.0)) {
      throw std::invalid_argument("component variances must be positive");
    }
    if (!(weights_[k] > 0.0)) {
      throw std::invalid_argument("component weights must be positive");
    }
    wsum += weights_[k];
  }
  for (double& w : weights_) w /= wsum;
}

GaussianMixturePrior GaussianMixturePrior::single(Eigen::VectorXd mean, double variance) {
  std::vector<Eigen::VectorXd> means;
  means.push_back(std::move(mean));
  return GaussianMixturePrior(std::move(means), {variance}, {1.0});
}

Eigen::VectorXd GaussianMixturePrior::sample(RngStream& rng) const {
  size_t k = 0;
  if (components() > 1) {
    Eigen::VectorXd w(components());
    for (int j = 0; j < components(); ++j) w[j] = weights_[j];
    k = rng.categorical(w);
  }
  return means_[k] + std::sqrt(variances_[k]) * rng.normal_vector(dim_);
}

void GaussianMixturePrior::responsibilities(const Eigen::VectorXd& x, double alpha_bar,
                                            Eigen::VectorXd& resp,
                                            std::vector<Eigen::VectorXd>& diff_means,
                                            Eigen::VectorXd& diff_vars) const {
  const int K = components();
  const double sqrt_ab = std::sqrt(alpha_bar);
  resp.resize(K);
  diff_vars.resize(K);
  diff_means.assign(K, Eigen::VectorXd());
  // Work in log space: log w_k + log N(x; m_k, s_k I), then softmax.
  for (int k = 0; k < K; ++k) {
    diff_means[k] = sqrt_ab * means_[k];
    diff_vars[k] = alpha_bar * variances_[k] + (1.0 - alpha_bar);
    const double s = diff_vars[k];
    const double sq = (x - diff_means[k]).squaredNorm();
    resp[k] = std::log(weights_[k]) -
              0.5 * (dim_ * (kLog2Pi + std::log(s)) + sq / s);
  }
  const double m = resp.maxCoeff();
  resp = (resp.array() - m).exp();
  resp /= resp.sum();
}

double GaussianMixturePrior::log_marginal_density(const Eigen::VectorXd& x,
                                                  double alpha_bar) const {
  if (x.size() != dim_) throw std::invalid_argument("x has wrong dimension");
  if (!(alpha_bar > 0.0 && alpha_bar <= 1.0)) {
    throw std::invalid_argument("alpha_bar must lie in (0, 1]");
  }
  const int K = components();
  const double sqrt_ab = std::sqrt(alpha_bar);
  double best = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd logs(K);
  for (int k = 0; k < K; ++k) {
    const double s = alpha_bar * variances_[k] + (1.0 - alpha_bar);
    const double sq = (x - sqrt_ab * means_[k]).squaredNorm();
    logs[k] = std::log(weights_[k]) -
              0.5 * (dim_ * (kLog2Pi + std::log(s)) + sq / s);
    best = std::max(best, logs[k]);
  }
  return best + std::log((logs.array() - best).exp().sum());
}

Eigen::VectorXd GaussianMixturePrior::marginal_score(const Eigen::VectorXd& x,
                                                     double alpha_bar) const {
  if (x.size() != dim_) throw std::invalid_argument("x has wrong dimension");
  if (!(alpha_bar > 0.0 && alpha_bar <= 1.0)) {
    throw std::invalid_argument("alpha_bar must lie in (0, 1]");
  }
  Eigen::VectorXd resp;
  std::vector<Eigen::VectorXd> dmeans;
  Eigen::VectorXd dvars;
  responsibilities(x, alpha_bar, resp, dmeans, dvars);
  Eigen::VectorXd score = Eigen::VectorXd::Zero(dim_);
  // Each component contributes its own Gaussian score weighted by the
  // posterior responsibility r_k(x).
  for (int k = 0; k < components(); ++k) {
    score.noalias() += resp[k] * (dmeans[k] - x) / dvars[k];
  }
  return score;
}

Eigen::MatrixXd GaussianMixturePrior::marginal_score_jacobian(const Eigen::VectorXd& x,
                                                              double alpha_bar) const {
  if (x.size() != dim_) throw std::invalid_argument("x has wrong dimension");
  if (!(alpha_bar > 0.0 && alpha_bar <= 1.0)) {
    throw std::invalid_argument("alpha_bar must lie in (0, 1]");
  }
  Eigen::VectorXd resp;
  std::vector<Eigen::VectorXd> dmeans;
  Eigen::VectorXd dvars;
  responsibilities(x, alpha_bar, resp, dmeans, dvars);
  // With g_k = (m_k - x)/s_k the score is s(x) = sum_k r_k g_k and
  //   ds/dx = sum_k r_k (g_k g_k^T - I/s_k) - s s^T
  // (the r_k's own x-dependence contributes the outer-product terms).
  Eigen::VectorXd score = Eigen::VectorXd::Zero(dim_);
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(dim_, dim_);
  for (int k = 0; k < components(); ++k) {
    Eigen::VectorXd g = (dmeans[k] - x) / dvars[k];
    score.noalias() += resp[k] * g;
    jac.noalias() += resp[k] * (g * g.transpose());
    jac.diagonal().array() -= resp[k] / dvars[k];
  }
  jac.noalias() -= score * score.transpose();
  return jac;
}

Eigen::VectorXd GaussianMixturePrior::mixture_mean() const {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(dim_);
  for (int k = 0; k < components(); ++k) m.noalias() += weights_[k] * means_[k];
  return m;
}

Eigen::MatrixXd GaussianMixturePrior::mixture_covariance() const {
  const Eigen::VectorXd m = mixture_mean();
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim_, dim_);
  for (int k = 0; k < components(); ++k) {
    Eigen::VectorXd d = means_[k] - m;
    cov.noalias() += weights_[k] * (d * d.transpose());
    cov.diagonal().array() += weights_[k] * variances_[k];
  }
  return cov;
}

}  // namespace guidelab
