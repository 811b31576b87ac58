#include "netdesign/risk.hpp"

#include <cmath>
#include <stdexcept>

#include "netdesign/rng.hpp"

namespace netdesign {

Assignment::Assignment(std::vector<uint8_t> z) : z_(std::move(z)) {
  const int n = static_cast<int>(z_.size());
  if (n < 2) throw std::invalid_argument("assignment: needs at least 2 units");
  n1_ = 0;
  for (uint8_t v : z_) {
    if (v > 1) throw std::invalid_argument("assignment: entries must be 0 or 1");
    n1_ += v;
  }
  if (n1_ == 0 || n1_ == n) {
    throw std::invalid_argument(
        "assignment: degenerate (one group is empty, the estimator is undefined)");
  }
}

Assignment Assignment::from_ints(const std::vector<int>& z) {
  std::vector<uint8_t> v(z.size());
  for (size_t i = 0; i < z.size(); ++i) {
    if (z[i] != 0 && z[i] != 1) {
      throw std::invalid_argument("assignment: entries must be 0 or 1");
    }
    v[i] = static_cast<uint8_t>(z[i]);
  }
  return Assignment(std::move(v));
}

Assignment Assignment::complement() const {
  std::vector<uint8_t> v(z_.size());
  for (size_t i = 0; i < z_.size(); ++i) v[i] = z_[i] ? 0 : 1;
  return Assignment(std::move(v));
}

Eigen::VectorXd contrast_weights(const Assignment& a) {
  const int n = a.size();
  const double wt = 1.0 / a.n1();
  const double wc = -1.0 / a.n0();
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w(i) = a.treated(i) ? wt : wc;
  return w;
}

NetworkQuadratics::NetworkQuadratics(const Network& net) {
  gram = gram_matrix(augmented_adjacency(net));
  const auto sizes = neighborhood_sizes(net);
  nsizes.resize(net.node_count());
  for (int i = 0; i < net.node_count(); ++i) nsizes(i) = sizes[i];
}

double delta_neighborhood(const Assignment& a, const std::vector<int>& sizes) {
  if (static_cast<int>(sizes.size()) != a.size()) {
    throw std::invalid_argument("delta_neighborhood: dimension mismatch");
  }
  double st = 0.0, sc = 0.0;
  for (int i = 0; i < a.size(); ++i) (a.treated(i) ? st : sc) += sizes[i];
  return st / a.n1() - sc / a.n0();
}

double delta_neighborhood(const Assignment& a, const NetworkQuadratics& q) {
  if (q.nsizes.size() != a.size()) {
    throw std::invalid_argument("delta_neighborhood: dimension mismatch");
  }
  double st = 0.0, sc = 0.0;
  for (int i = 0; i < a.size(); ++i) (a.treated(i) ? st : sc) += q.nsizes(i);
  return st / a.n1() - sc / a.n0();
}

double variance_of_contrast(const Eigen::VectorXd& w, const Eigen::MatrixXd& cov) {
  if (cov.rows() != cov.cols() || cov.rows() != w.size()) {
    throw std::invalid_argument("variance_of_contrast: dimension mismatch");
  }
  return w.dot(cov * w);
}

double mse_quadratic(double mu2, double phi_x, const Eigen::VectorXd& diag,
                     const NetworkQuadratics& q, const Assignment& a) {
  if (diag.size() != a.size() || q.gram.rows() != a.size()) {
    throw std::invalid_argument("mse: dimension mismatch");
  }
  const Eigen::VectorXd w = contrast_weights(a);
  const double delta = delta_neighborhood(a, q);
  const double quad_gram = w.dot(q.gram * w);
  const double quad_diag = (w.array().square() * diag.array()).sum();
  return mu2 * delta * delta + phi_x * quad_gram + quad_diag;
}

double mse_general(const NefAbstract& abs, const NetworkQuadratics& q,
                   const Assignment& a) {
  return mse_quadratic(abs.mu * abs.mu, abs.phi_x, abs.expected_lambda, q, a);
}

double mse_general(const NefAbstract& abs, const Network& net,
                   const Assignment& a) {
  return mse_general(abs, NetworkQuadratics(net), a);
}

double mse_normal(const NormalModelParams& params, const NetworkQuadratics& q,
                  const Assignment& a) {
  NefAbstract abs;
  abs.mu = params.mu;
  abs.phi_x = params.sigma2;
  abs.expected_lambda = Eigen::VectorXd::Constant(a.size(), params.gamma2);
  return mse_general(abs, q, a);
}

double mse_normal(const NormalModelParams& params, const Network& net,
                  const Assignment& a) {
  return mse_normal(params, NetworkQuadratics(net), a);
}

double mse_poisson_gamma(const PoissonGammaParams& params,
                         const NetworkQuadratics& q, const Assignment& a) {
  NefAbstract abs;
  abs.mu = params.r * params.lambda;
  abs.phi_x = params.r * params.lambda * params.lambda;
  abs.expected_lambda = q.nsizes * (params.r * params.lambda);
  return mse_general(abs, q, a);
}

double mse_poisson_gamma(const PoissonGammaParams& params, const Network& net,
                         const Assignment& a) {
  return mse_poisson_gamma(params, NetworkQuadratics(net), a);
}

MseDecomposition mse_decomposition_normal(const NormalModelParams& params,
                                          const NetworkQuadratics& q,
                                          const Assignment& a) {
  const int n = a.size();
  if (q.gram.rows() != n) {
    throw std::invalid_argument("mse_decomposition: dimension mismatch");
  }
  const double n1 = a.n1();
  const double n0 = a.n0();
  double gram_tt = 0.0, gram_cc = 0.0, gram_tc = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double g = q.gram(i, j);
      if (a.treated(i) && a.treated(j)) {
        gram_tt += g;
      } else if (!a.treated(i) && !a.treated(j)) {
        gram_cc += g;
      } else if (a.treated(i) && !a.treated(j)) {
        gram_tc += g;
      }
    }
  }
  MseDecomposition d;
  const double delta = delta_neighborhood(a, q);
  d.bias_sq = params.mu * params.mu * delta * delta;
  d.group_size_var = params.gamma2 * (1.0 / n1 + 1.0 / n0);
  d.net_var_treated = params.sigma2 / (n1 * n1) * gram_tt;
  d.net_var_control = params.sigma2 / (n0 * n0) * gram_cc;
  d.net_var_cross = 2.0 * params.sigma2 / (n1 * n0) * gram_tc;
  d.total = d.bias_sq + d.group_size_var + d.net_var_treated +
            d.net_var_control - d.net_var_cross;
  return d;
}

MseDecomposition mse_decomposition_normal(const NormalModelParams& params,
                                          const Network& net,
                                          const Assignment& a) {
  return mse_decomposition_normal(params, NetworkQuadratics(net), a);
}

PriorMoments exact_prior_moments(const PriorSpec& prior) {
  PriorMoments m;
  m.mu2 = prior.sigma0 * prior.sigma0 + prior.mu0 * prior.mu0;
  m.sigma2 = prior.lambda_sigma / (prior.r_sigma - 1.0);
  m.gamma2 = prior.lambda_gamma / (prior.r_gamma - 1.0);
  return m;
}

PriorMoments mc_prior_moments(const PriorSpec& prior, int n_draws, uint64_t seed) {
  if (n_draws < 1) throw std::invalid_argument("mc_prior_moments: n_draws must be >= 1");
  double mu2 = 0.0, s2 = 0.0, g2 = 0.0;
  for (int k = 0; k < n_draws; ++k) {
    Rng rng(derive_seed(seed, static_cast<uint64_t>(k)));
    const NormalModelParams p = draw_params_from_prior(prior, rng);
    mu2 += p.mu * p.mu;
    s2 += p.sigma2;
    g2 += p.gamma2;
  }
  return PriorMoments{mu2 / n_draws, s2 / n_draws, g2 / n_draws};
}

ImseEstimate imse_mc(const PriorSpec& prior, const NetworkQuadratics& q,
                     const Assignment& a, int n_draws, uint64_t seed) {
  if (n_draws < 1) throw std::invalid_argument("imse_mc: n_draws must be >= 1");
  const Eigen::VectorXd w = contrast_weights(a);
  const double delta = delta_neighborhood(a, q);
  const double delta2 = delta * delta;
  const double quad_gram = w.dot(q.gram * w);
  const double quad_unit = w.squaredNorm();
  // Welford running mean/variance of the per-draw MSE.
  double mean = 0.0, m2 = 0.0;
  for (int k = 0; k < n_draws; ++k) {
    Rng rng(derive_seed(seed, static_cast<uint64_t>(k)));
    const NormalModelParams p = draw_params_from_prior(prior, rng);
    const double mse =
        p.mu * p.mu * delta2 + p.sigma2 * quad_gram + p.gamma2 * quad_unit;
    const double d1 = mse - mean;
    mean += d1 / (k + 1);
    m2 += d1 * (mse - mean);
  }
  ImseEstimate est;
  est.value = mean;
  est.n_draws = n_draws;
  est.std_error =
      n_draws > 1 ? std::sqrt(m2 / (n_draws - 1) / n_draws) : 0.0;
  return est;
}

ImseEstimate imse_mc(const PriorSpec& prior, const Network& net,
                     const Assignment& a, int n_draws, uint64_t seed) {
  return imse_mc(prior, NetworkQuadratics(net), a, n_draws, seed);
}

double imse_closed_form_normal(const PriorSpec& prior, const NetworkQuadratics& q,
                               const Assignment& a) {
  const PriorMoments m = exact_prior_moments(prior);
  return mse_quadratic(m.mu2, m.sigma2,
                       Eigen::VectorXd::Constant(a.size(), m.gamma2), q, a);
}

double imse_closed_form_normal(const PriorSpec& prior, const Network& net,
                               const Assignment& a) {
  return imse_closed_form_normal(prior, NetworkQuadratics(net), a);
}

double difference_in_means(const OutcomeVector& outcome, const Assignment& a) {
  if (outcome.y0.size() != a.size()) {
    throw std::invalid_argument("difference_in_means: dimension mismatch");
  }
  double st = 0.0, sc = 0.0;
  for (int i = 0; i < a.size(); ++i) {
    if (a.treated(i)) {
      st += outcome.y1(i);
    } else {
      sc += outcome.y0(i);
    }
  }
  return st / a.n1() - sc / a.n0();
}

}  // namespace netdesign
