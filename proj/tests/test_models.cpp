#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "netdesign/models.hpp"
#include "netdesign/network.hpp"
#include "netdesign/rng.hpp"

using namespace netdesign;

namespace {

Network path3() { return from_edge_list(3, {{0, 1}, {1, 2}}); }

Network complete(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  return from_edge_list(n, edges);
}

struct Moments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

template <typename Sampler>
Moments sample_moments(int n, int draws, Sampler&& sampler) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd sum2 = Eigen::MatrixXd::Zero(n, n);
  for (int d = 0; d < draws; ++d) {
    const Eigen::VectorXd y = sampler(d);
    sum += y;
    sum2 += y * y.transpose();
  }
  Moments m;
  m.mean = sum / draws;
  m.cov = sum2 / draws - m.mean * m.mean.transpose();
  return m;
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(NormalModelParams(1.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(NormalModelParams(1.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(PoissonGammaParams(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(PoissonGammaParams(1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(PriorSpec(1, 0.5, 1.0, 1, 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(PriorSpec(1, 0.5, 3, 1, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(PriorSpec(1, 0.0, 3, 1, 3, 1), std::invalid_argument);
}

TEST_CASE("normal abstraction mapping") {
  const Network net = path3();
  const NefAbstract abs = nef_abstract_normal({1.0, 1.0, 2.0}, net);
  CHECK(abs.mu == 1.0);
  CHECK(abs.phi_x == 1.0);
  CHECK(abs.expected_lambda == Eigen::VectorXd::Constant(3, 2.0));

  const NefAbstract zero_mean = nef_abstract_normal({0.0, 1.0, 1.0}, net);
  CHECK(zero_mean.mu == 0.0);
}

TEST_CASE("poisson-gamma abstraction mapping") {
  const NefAbstract abs = nef_abstract_poisson_gamma({2.0, 3.0}, path3());
  CHECK(abs.mu == 6.0);
  CHECK(abs.phi_x == 18.0);
  Eigen::VectorXd expected(3);
  expected << 12, 18, 12;
  CHECK(abs.expected_lambda == expected);

  const NefAbstract unit =
      nef_abstract_poisson_gamma({1.0, 1.0}, from_edge_list(2, {}));
  CHECK(unit.mu == 1.0);
  CHECK(unit.phi_x == 1.0);
  CHECK(unit.expected_lambda == Eigen::VectorXd::Constant(2, 1.0));

  const NefAbstract half = nef_abstract_poisson_gamma({0.5, 2.0}, complete(3));
  CHECK(half.expected_lambda == Eigen::VectorXd::Constant(3, 3.0));
}

TEST_CASE("marginal covariance closed forms") {
  const Network pair = from_edge_list(2, {});
  Eigen::MatrixXd expected(2, 2);
  expected << 2, 0, 0, 2;
  CHECK(marginal_covariance(nef_abstract_normal({0.0, 1.0, 1.0}, pair), pair) ==
        expected);

  // Vanishing conditional variance leaves the gram matrix itself.
  const Network net = path3();
  NefAbstract abs;
  abs.mu = 0.0;
  abs.phi_x = 1.0;
  abs.expected_lambda = Eigen::VectorXd::Zero(3);
  CHECK(marginal_covariance(abs, net) ==
        gram_matrix(augmented_adjacency(net)));

  const Eigen::MatrixXd pg =
      marginal_covariance(nef_abstract_poisson_gamma({2.0, 3.0}, net), net);
  Eigen::MatrixXd want = gram_matrix(augmented_adjacency(net)) * 18.0;
  want.diagonal() += Eigen::Vector3d(12, 18, 12);
  CHECK(pg == want);
}

TEST_CASE("marginal covariance is symmetric on random networks") {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const Network net = gen_erdos_renyi(8, 0.4, seed);
    const auto cov =
        marginal_covariance(nef_abstract_poisson_gamma({1.5, 0.8}, net), net);
    CHECK((cov - cov.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("normal sampling matches first and second moments") {
  const Network net = path3();
  const NormalModelParams params(1.0, 0.7, 0.9);
  const Eigen::MatrixXd cov =
      marginal_covariance(nef_abstract_normal(params, net), net);
  const int draws = 100000;
  Rng rng(42);
  const Moments m = sample_moments(3, draws, [&](int) {
    return sample_outcomes_normal(params, net, 0.0, rng).y0;
  });
  // Mean: closed-neighborhood size times mu.
  const Eigen::Vector3d mean_want(2.0, 3.0, 2.0);
  for (int i = 0; i < 3; ++i) {
    const double se = std::sqrt(cov(i, i) / draws);
    CHECK(std::abs(m.mean(i) - mean_want(i)) < 3 * se);
  }
  // Variances and the far-pair covariance, within 3 rough standard errors.
  for (int i = 0; i < 3; ++i) {
    const double se = cov(i, i) * std::sqrt(2.0 / draws);
    CHECK(std::abs(m.cov(i, i) - cov(i, i)) < 3 * se);
  }
  const double se02 =
      std::sqrt((cov(0, 0) * cov(2, 2) + cov(0, 2) * cov(0, 2)) / draws);
  CHECK(std::abs(m.cov(0, 2) - cov(0, 2)) < 3 * se02);  // equals sigma2
}

TEST_CASE("edgeless normal variance is sigma2 plus gamma2") {
  const Network net = from_edge_list(4, {});
  const NormalModelParams params(0.5, 1.2, 0.6);
  const int draws = 100000;
  Rng rng(7);
  const Moments m = sample_moments(4, draws, [&](int) {
    return sample_outcomes_normal(params, net, 0.0, rng).y0;
  });
  const double want = params.sigma2 + params.gamma2;
  const double se = want * std::sqrt(2.0 / draws);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(m.cov(i, i) - want) < 3 * se);
}

TEST_CASE("poisson-gamma sampling matches the covariance model") {
  const Network net = path3();
  const PoissonGammaParams params(2.0, 1.5);
  const Eigen::MatrixXd cov =
      marginal_covariance(nef_abstract_poisson_gamma(params, net), net);
  const int draws = 200000;
  Rng rng(9);
  const Moments m = sample_moments(3, draws, [&](int) {
    return sample_outcomes_poisson_gamma(params, net, 0.0, rng).y0;
  });
  const Eigen::Vector3d mean_want = Eigen::Vector3d(2, 3, 2) * params.r * params.lambda;
  for (int i = 0; i < 3; ++i) {
    const double se = std::sqrt(cov(i, i) / draws);
    CHECK(std::abs(m.mean(i) - mean_want(i)) < 3 * se);
    const double se_var = cov(i, i) * std::sqrt(8.0 / draws);  // skewed; loose
    CHECK(std::abs(m.cov(i, i) - cov(i, i)) < 3 * se_var);
  }
}

TEST_CASE("treatment effect is exactly additive") {
  const Network net = gen_erdos_renyi(10, 0.3, 3);
  Rng rng(5);
  const OutcomeVector out = sample_outcomes_normal({1, 1, 1}, net, 0.75, rng);
  for (int i = 0; i < 10; ++i) CHECK(out.y1(i) - out.y0(i) == 0.75);
}

TEST_CASE("prior draws reproduce the closed-form moments") {
  const PriorSpec prior(1.0, 0.5, 3.0, 1.0, 3.0, 1.0);
  const int draws = 1000000;
  Rng rng(2024);
  double mu2 = 0, s2 = 0, g2 = 0;
  for (int d = 0; d < draws; ++d) {
    const NormalModelParams p = draw_params_from_prior(prior, rng);
    mu2 += p.mu * p.mu;
    s2 += p.sigma2;
    g2 += p.gamma2;
  }
  mu2 /= draws;
  s2 /= draws;
  g2 /= draws;
  CHECK(mu2 == doctest::Approx(1.25).epsilon(0.01));   // sigma0^2 + mu0^2
  CHECK(s2 == doctest::Approx(0.5).epsilon(0.02));     // lambda/(shape-1)
  CHECK(g2 == doctest::Approx(0.5).epsilon(0.02));
}
