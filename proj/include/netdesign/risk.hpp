#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "netdesign/models.hpp"
#include "netdesign/network.hpp"

namespace netdesign {

// Binary treatment assignment with both groups non-empty. The estimator's
// contrast weights are undefined otherwise, so degenerate vectors are
// rejected at construction.
class Assignment {
 public:
  explicit Assignment(std::vector<uint8_t> z);
  static Assignment from_ints(const std::vector<int>& z);

  int size() const { return static_cast<int>(z_.size()); }
  int n1() const { return n1_; }
  int n0() const { return static_cast<int>(z_.size()) - n1_; }
  bool treated(int i) const { return z_[i] != 0; }
  const std::vector<uint8_t>& z() const { return z_; }
  Assignment complement() const;

  bool operator==(const Assignment& other) const { return z_ == other.z_; }

 private:
  std::vector<uint8_t> z_;
  int n1_;
};

// w_i = z_i/N1 - (1-z_i)/N0. Treated weights sum to 1, control to -1.
Eigen::VectorXd contrast_weights(const Assignment& a);

// Precomputed per-network ingredients for the risk formulas: the Gram matrix
// of the self-loop-augmented adjacency and the closed-neighborhood sizes.
struct NetworkQuadratics {
  Eigen::MatrixXd gram;
  Eigen::VectorXd nsizes;
  explicit NetworkQuadratics(const Network& net);
};

// Difference in mean closed-neighborhood size between the groups.
double delta_neighborhood(const Assignment& a, const std::vector<int>& sizes);
double delta_neighborhood(const Assignment& a, const NetworkQuadratics& q);

// w' cov w.
double variance_of_contrast(const Eigen::VectorXd& w, const Eigen::MatrixXd& cov);

// mu2 * delta^2 + phi_x * w'Gw + sum_i diag_i w_i^2: the quadratic core every
// mean-squared-error routine reduces to.
double mse_quadratic(double mu2, double phi_x, const Eigen::VectorXd& diag,
                     const NetworkQuadratics& q, const Assignment& a);

double mse_general(const NefAbstract& abs, const Network& net,
                   const Assignment& a);
double mse_general(const NefAbstract& abs, const NetworkQuadratics& q,
                   const Assignment& a);
double mse_normal(const NormalModelParams& params, const Network& net,
                  const Assignment& a);
double mse_normal(const NormalModelParams& params, const NetworkQuadratics& q,
                  const Assignment& a);
double mse_poisson_gamma(const PoissonGammaParams& params, const Network& net,
                         const Assignment& a);
double mse_poisson_gamma(const PoissonGammaParams& params,
                         const NetworkQuadratics& q, const Assignment& a);

// Additive split of the normal-model mean squared error:
//   total = bias_sq + group_size_var + net_var_treated + net_var_control
//           - net_var_cross.
struct MseDecomposition {
  double bias_sq;
  double group_size_var;
  double net_var_treated;
  double net_var_control;
  double net_var_cross;
  double total;
};
MseDecomposition mse_decomposition_normal(const NormalModelParams& params,
                                          const Network& net,
                                          const Assignment& a);
MseDecomposition mse_decomposition_normal(const NormalModelParams& params,
                                          const NetworkQuadratics& q,
                                          const Assignment& a);

// First moments of (mu^2, sigma2, gamma2) under the prior; the integrated
// risk is linear in these three quantities.
struct PriorMoments {
  double mu2;
  double sigma2;
  double gamma2;
};
PriorMoments exact_prior_moments(const PriorSpec& prior);
// Monte-Carlo counterpart: draw k maps to the substream derive_seed(seed, k),
// so the result is independent of evaluation order.
PriorMoments mc_prior_moments(const PriorSpec& prior, int n_draws, uint64_t seed);

struct ImseEstimate {
  double value;
  int n_draws;
  double std_error;
};
// Average normal-model MSE over parameter draws from the prior. Deterministic
// given the seed; draw k uses the substream derive_seed(seed, k).
ImseEstimate imse_mc(const PriorSpec& prior, const NetworkQuadratics& q,
                     const Assignment& a, int n_draws, uint64_t seed);
ImseEstimate imse_mc(const PriorSpec& prior, const Network& net,
                     const Assignment& a, int n_draws, uint64_t seed);

// Exact integrated MSE for the normal model, by linearity in the moments.
double imse_closed_form_normal(const PriorSpec& prior, const NetworkQuadratics& q,
                               const Assignment& a);
double imse_closed_form_normal(const PriorSpec& prior, const Network& net,
                               const Assignment& a);

// Difference-in-means estimate on realized outcomes (treated read y0 + tau).
double difference_in_means(const OutcomeVector& outcome, const Assignment& a);

}  // namespace netdesign
