#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "netdesign/risk.hpp"
#include "netdesign/rng.hpp"

namespace netdesign {

struct OptimizerConfig {
  long max_iters = 0;            // 0: resolved to 200 * n
  int n_restarts = 5;
  double init_temperature = 0.0;  // 0: objective value at the random start
  double cooling_rate = 0.995;
  double move_mix = 0.5;          // probability of a swap move vs a single flip
  uint64_t seed = 1;
};

struct DesignResult {
  Assignment assignment;
  double objective;
  // (iteration, best objective so far) of the winning restart; non-increasing.
  std::vector<std::pair<long, double>> trace;
  // Cross-evaluation matrix of the point-prior procedure; row i holds the
  // MSE of candidate i under every grid parameter set.
  std::optional<Eigen::MatrixXd> gamma;
};

// Incremental view of an objective bound to one evolving assignment.
// flip/swap queries report the objective of the modified assignment without
// committing it.
class ObjectiveState {
 public:
  virtual ~ObjectiveState() = default;
  virtual double value() const = 0;
  virtual double flip_value(int v) const = 0;
  virtual double swap_value(int treated_u, int control_v) const = 0;
  virtual void apply_flip(int v) = 0;
  virtual void apply_swap(int treated_u, int control_v) = 0;
};

class AssignmentObjective {
 public:
  virtual ~AssignmentObjective() = default;
  virtual double evaluate(const Assignment& a) const = 0;
  // Default binding re-evaluates from scratch on every query.
  virtual std::unique_ptr<ObjectiveState> bind(const Assignment& a) const;
};

// Adapter for arbitrary callables.
class FunctionObjective : public AssignmentObjective {
 public:
  explicit FunctionObjective(std::function<double(const Assignment&)> fn)
      : fn_(std::move(fn)) {}
  double evaluate(const Assignment& a) const override { return fn_(a); }

 private:
  std::function<double(const Assignment&)> fn_;
};

// c_bias * delta^2 + c_net * w'Gw + w' diag(d) w, with O(1) move evaluation
// and O(n) commits. Covers every mean-squared-error objective in this
// library: the per-draw MSE is linear in (mu^2, sigma2, gamma2), so a
// common-random-numbers Monte-Carlo average over parameter draws is itself
// a member of this family with averaged coefficients.
class QuadraticMseObjective : public AssignmentObjective {
 public:
  QuadraticMseObjective(std::shared_ptr<const NetworkQuadratics> q,
                        double c_bias, double c_net, Eigen::VectorXd diag);

  static QuadraticMseObjective for_normal(
      std::shared_ptr<const NetworkQuadratics> q, const NormalModelParams& p);
  static QuadraticMseObjective for_poisson_gamma(
      std::shared_ptr<const NetworkQuadratics> q, const PoissonGammaParams& p);
  static QuadraticMseObjective for_imse_closed_form(
      std::shared_ptr<const NetworkQuadratics> q, const PriorSpec& prior);
  // Realized Monte-Carlo objective: parameter draws are fixed by the seed and
  // shared across all assignments, matching imse_mc at the same seed.
  static QuadraticMseObjective for_imse_mc(
      std::shared_ptr<const NetworkQuadratics> q, const PriorSpec& prior,
      int n_draws, uint64_t seed);

  double evaluate(const Assignment& a) const override;
  std::unique_ptr<ObjectiveState> bind(const Assignment& a) const override;

 private:
  friend class QuadraticState;
  std::shared_ptr<const NetworkQuadratics> q_;
  double c_bias_;
  double c_net_;
  Eigen::VectorXd diag_;
  Eigen::VectorXd gram_rowsum_;
  double gram_total_;
  double nsizes_total_;
  double diag_total_;
};

// Uniformly random assignment with N1 = floor(n/2).
Assignment randomized_balanced(int n, Rng& rng);

// Normalized-Laplacian spectral embedding followed by k-means. Labels are in
// [0, k); every node gets exactly one label.
std::vector<int> spectral_clusters(const Network& net, int k_clusters, Rng& rng);

// Balanced randomization inside each stratum (floor(size/2) treated).
Assignment assignment_from_strata(const std::vector<int>& labels, Rng& rng);

Assignment stratified_spectral(const Network& net, int k_clusters, Rng& rng);

// Simulated annealing over assignments: single-flip and swap moves, geometric
// cooling, independent restarts. Deterministic given cfg.seed; the winner
// across restarts is the (objective, lexicographic z) minimum.
DesignResult optimize_assignment(const AssignmentObjective& objective, int n,
                                 const OptimizerConfig& cfg);
DesignResult optimize_assignment(
    const std::function<double(const Assignment&)>& objective, int n,
    const OptimizerConfig& cfg);

// Exact minimum over all 2^n - 2 assignments (n capped at 20). Ties resolve
// to the smallest binary encoding, z[0] being the most significant bit.
DesignResult brute_force(const AssignmentObjective& objective, int n);
DesignResult brute_force(const std::function<double(const Assignment&)>& objective,
                         int n);

struct PointPriorGrid {
  std::vector<NormalModelParams> params_list;
  std::vector<double> weights;  // non-negative, not necessarily normalized
};

// Three-step point-prior procedure: optimize each grid point separately,
// cross-evaluate every candidate under every point, return the candidate
// with the smallest weighted loss (the gamma matrix rides along).
DesignResult point_prior_design(const PointPriorGrid& grid, const Network& net,
                                const OptimizerConfig& cfg);

}  // namespace netdesign
