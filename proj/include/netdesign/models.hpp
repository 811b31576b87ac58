#pragma once

#include <Eigen/Dense>

#include "netdesign/network.hpp"
#include "netdesign/rng.hpp"

namespace netdesign {

// Normal instance: latent X_j ~ Normal(mu, sigma2) iid, outcome
// Y_i(0) | X ~ Normal(sum of X over the closed neighborhood of i, gamma2).
struct NormalModelParams {
  double mu;
  double sigma2;
  double gamma2;
  NormalModelParams(double mu, double sigma2, double gamma2);
};

// Poisson instance: X_j = lambda * Gamma(r), Y_i(0) | X ~ Poisson(sum of X
// over the closed neighborhood of i).
struct PoissonGammaParams {
  double r;
  double lambda;
  PoissonGammaParams(double r, double lambda);
};

// What the risk formulas actually consume from either model instance: the
// latent mean, the latent variance phi_x, and the expected conditional
// outcome variance per node.
struct NefAbstract {
  double mu = 0.0;
  double phi_x = 0.0;
  Eigen::VectorXd expected_lambda;
};

// Hyper-parameters of the parameter prior: mu ~ Normal(mu0, sd sigma0),
// sigma2 ~ Inv-Gamma(r_sigma, lambda_sigma), gamma2 ~ Inv-Gamma(r_gamma,
// lambda_gamma). Shapes must exceed 1 so the integrated risk exists.
struct PriorSpec {
  double mu0;
  double sigma0;
  double r_gamma;
  double lambda_gamma;
  double r_sigma;
  double lambda_sigma;
  PriorSpec(double mu0, double sigma0, double r_gamma, double lambda_gamma,
            double r_sigma, double lambda_sigma);
};

// Control outcomes plus the constant additive effect; treated outcomes are
// y0 + tau and are never stored separately.
struct OutcomeVector {
  Eigen::VectorXd y0;
  double tau = 0.0;
  double y1(int i) const { return y0(i) + tau; }
};

NefAbstract nef_abstract_normal(const NormalModelParams& params,
                                const Network& net);
NefAbstract nef_abstract_poisson_gamma(const PoissonGammaParams& params,
                                       const Network& net);

// Marginal covariance of Y(0): |closed neighborhood overlap| * phi_x off the
// diagonal, plus the expected conditional variance on it.
Eigen::MatrixXd marginal_covariance(const NefAbstract& abs, const Network& net);

OutcomeVector sample_outcomes_normal(const NormalModelParams& params,
                                     const Network& net, double tau, Rng& rng);
OutcomeVector sample_outcomes_poisson_gamma(const PoissonGammaParams& params,
                                            const Network& net, double tau,
                                            Rng& rng);

NormalModelParams draw_params_from_prior(const PriorSpec& prior, Rng& rng);

}  // namespace netdesign
