#pragma once

#include <Eigen/Dense>
#include <vector>

#include "guidelab/rng.hpp"
#include "guidelab/schedule.hpp"

namespace guidelab {

// Isotropic Gaussian mixture prior over clean data x0. Each component k has
// mean mu_k in R^d and scalar variance sigma2_k (covariance sigma2_k * I).
//
// Under the forward process x_t = sqrt(abar) x0 + sqrt(1-abar) eps the
// marginal at time t stays a mixture with component means sqrt(abar) mu_k and
// variances abar sigma2_k + (1 - abar), so density, score and score Jacobian
// are all available in closed form. That is what makes this prior family
// usable as a ground-truth denoiser.
class GaussianMixturePrior {
 public:
  GaussianMixturePrior(std::vector<Eigen::VectorXd> means,
                       std::vector<double> variances,
                       std::vector<double> weights);

  // Single-component convenience factory, N(mean, variance * I).
  static GaussianMixturePrior single(Eigen::VectorXd mean, double variance);

  int dim() const { return dim_; }
  int components() const { return static_cast<int>(means_.size()); }
  const Eigen::VectorXd& mean(int k) const { return means_[k]; }
  double variance(int k) const { return variances_[k]; }
  double weight(int k) const { return weights_[k]; }

  // Exact sample from the mixture (component choice + Gaussian draw,
  // both from the given stream).
  Eigen::VectorXd sample(RngStream& rng) const;

  // log p_t(x) of the diffused marginal; alpha_bar = 1 recovers the prior
  // itself. t is only used through alpha_bar so callers pass the value
  // appropriate for their timestep.
  double log_marginal_density(const Eigen::VectorXd& x, double alpha_bar) const;

  // grad_x log p_t(x) of the diffused marginal.
  Eigen::VectorXd marginal_score(const Eigen::VectorXd& x, double alpha_bar) const;

  // Jacobian of the marginal score, d(score)/dx. Symmetric d x d matrix.
  Eigen::MatrixXd marginal_score_jacobian(const Eigen::VectorXd& x,
                                          double alpha_bar) const;

  // Mixture mean/covariance of the clean prior (used by moment checks).
  Eigen::VectorXd mixture_mean() const;
  Eigen::MatrixXd mixture_covariance() const;

 private:
  // Per-component responsibilities of the diffused marginal at x, plus the
  // diffused means/variances they were computed with.
  void responsibilities(const Eigen::VectorXd& x, double alpha_bar,
                        Eigen::VectorXd& resp,
                        std::vector<Eigen::VectorXd>& diff_means,
                        Eigen::VectorXd& diff_vars) const;

  std::vector<Eigen::VectorXd> means_;
  std::vector<double> variances_;
  std::vector<double> weights_;  // normalized at construction
  int dim_ = 0;
};

}  // namespace guidelab
