#include "netdesign/models.hpp"

#include <cmath>
#include <stdexcept>

namespace netdesign {

NormalModelParams::NormalModelParams(double mu, double sigma2, double gamma2)
    : mu(mu), sigma2(sigma2), gamma2(gamma2) {
  if (!(sigma2 > 0.0)) {
    throw std::invalid_argument("normal model: sigma2 must be > 0");
  }
  if (!(gamma2 > 0.0)) {
    throw std::invalid_argument("normal model: gamma2 must be > 0");
  }
  if (!std::isfinite(mu)) {
    throw std::invalid_argument("normal model: mu must be finite");
  }
}

PoissonGammaParams::PoissonGammaParams(double r, double lambda)
    : r(r), lambda(lambda) {
  if (!(r > 0.0)) throw std::invalid_argument("poisson-gamma model: r must be > 0");
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("poisson-gamma model: lambda must be > 0");
  }
}

PriorSpec::PriorSpec(double mu0, double sigma0, double r_gamma,
                     double lambda_gamma, double r_sigma, double lambda_sigma)
    : mu0(mu0),
      sigma0(sigma0),
      r_gamma(r_gamma),
      lambda_gamma(lambda_gamma),
      r_sigma(r_sigma),
      lambda_sigma(lambda_sigma) {
  if (!(sigma0 > 0.0)) throw std::invalid_argument("prior: sigma0 must be > 0");
  if (!(r_gamma > 1.0)) {
    throw std::invalid_argument(
        "prior: r_gamma must be > 1 (integrated risk does not exist otherwise)");
  }
  if (!(r_sigma > 1.0)) {
    throw std::invalid_argument(
        "prior: r_sigma must be > 1 (integrated risk does not exist otherwise)");
  }
  if (!(lambda_gamma > 0.0)) {
    throw std::invalid_argument("prior: lambda_gamma must be > 0");
  }
  if (!(lambda_sigma > 0.0)) {
    throw std::invalid_argument("prior: lambda_sigma must be > 0");
  }
  if (!std::isfinite(mu0)) throw std::invalid_argument("prior: mu0 must be finite");
}

NefAbstract nef_abstract_normal(const NormalModelParams& params,
                                const Network& net) {
  NefAbstract abs;
  abs.mu = params.mu;
  abs.phi_x = params.sigma2;
  abs.expected_lambda =
      Eigen::VectorXd::Constant(net.node_count(), params.gamma2);
  return abs;
}

NefAbstract nef_abstract_poisson_gamma(const PoissonGammaParams& params,
                                       const Network& net) {
  NefAbstract abs;
  abs.mu = params.r * params.lambda;
  abs.phi_x = params.r * params.lambda * params.lambda;
  const auto sizes = neighborhood_sizes(net);
  abs.expected_lambda.resize(net.node_count());
  for (int i = 0; i < net.node_count(); ++i) {
    abs.expected_lambda(i) = sizes[i] * params.r * params.lambda;
  }
  return abs;
}

Eigen::MatrixXd marginal_covariance(const NefAbstract& abs, const Network& net) {
  const int n = net.node_count();
  if (abs.expected_lambda.size() != n) {
    throw std::invalid_argument("marginal_covariance: dimension mismatch");
  }
  Eigen::MatrixXd cov = gram_matrix(augmented_adjacency(net)) * abs.phi_x;
  cov.diagonal() += abs.expected_lambda;
  return cov;
}

OutcomeVector sample_outcomes_normal(const NormalModelParams& params,
                                     const Network& net, double tau, Rng& rng) {
  const int n = net.node_count();
  const double sigma = std::sqrt(params.sigma2);
  const double gamma = std::sqrt(params.gamma2);
  Eigen::VectorXd x(n);
  for (int j = 0; j < n; ++j) x(j) = rng.normal(params.mu, sigma);
  OutcomeVector out;
  out.tau = tau;
  out.y0.resize(n);
  for (int i = 0; i < n; ++i) {
    double sum = x(i);
    for (int j : net.neighbors(i)) sum += x(j);
    out.y0(i) = rng.normal(sum, gamma);
  }
  return out;
}

OutcomeVector sample_outcomes_poisson_gamma(const PoissonGammaParams& params,
                                            const Network& net, double tau,
                                            Rng& rng) {
  const int n = net.node_count();
  Eigen::VectorXd x(n);
  for (int j = 0; j < n; ++j) x(j) = params.lambda * rng.gamma(params.r);
  OutcomeVector out;
  out.tau = tau;
  out.y0.resize(n);
  for (int i = 0; i < n; ++i) {
    double sum = x(i);
    for (int j : net.neighbors(i)) sum += x(j);
    out.y0(i) = static_cast<double>(rng.poisson(sum));
  }
  return out;
}

NormalModelParams draw_params_from_prior(const PriorSpec& prior, Rng& rng) {
  const double mu = rng.normal(prior.mu0, prior.sigma0);
  const double sigma2 = rng.inverse_gamma(prior.r_sigma, prior.lambda_sigma);
  const double gamma2 = rng.inverse_gamma(prior.r_gamma, prior.lambda_gamma);
  return NormalModelParams(mu, sigma2, gamma2);
}

}  // namespace netdesign
