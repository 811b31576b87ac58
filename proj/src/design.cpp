#include "netdesign/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace netdesign {

namespace {

// Fallback state: re-evaluates the objective on a scratch copy.
class GenericState : public ObjectiveState {
 public:
  GenericState(const AssignmentObjective* obj, const Assignment& a)
      : obj_(obj), z_(a.z()), value_(obj->evaluate(a)) {}

  double value() const override { return value_; }

  double flip_value(int v) const override {
    auto z = z_;
    z[v] ^= 1;
    return obj_->evaluate(Assignment(std::move(z)));
  }

  double swap_value(int u, int v) const override {
    auto z = z_;
    z[u] = 0;
    z[v] = 1;
    return obj_->evaluate(Assignment(std::move(z)));
  }

  void apply_flip(int v) override {
    z_[v] ^= 1;
    value_ = obj_->evaluate(Assignment(z_));
  }

  void apply_swap(int u, int v) override {
    z_[u] = 0;
    z_[v] = 1;
    value_ = obj_->evaluate(Assignment(z_));
  }

 private:
  const AssignmentObjective* obj_;
  std::vector<uint8_t> z_;
  double value_;
};

}  // namespace

std::unique_ptr<ObjectiveState> AssignmentObjective::bind(const Assignment& a) const {
  return std::make_unique<GenericState>(this, a);
}

QuadraticMseObjective::QuadraticMseObjective(
    std::shared_ptr<const NetworkQuadratics> q, double c_bias, double c_net,
    Eigen::VectorXd diag)
    : q_(std::move(q)), c_bias_(c_bias), c_net_(c_net), diag_(std::move(diag)) {
  if (!q_) throw std::invalid_argument("quadratic objective: null network data");
  if (diag_.size() != q_->gram.rows()) {
    throw std::invalid_argument("quadratic objective: diag dimension mismatch");
  }
  gram_rowsum_ = q_->gram.rowwise().sum();
  gram_total_ = gram_rowsum_.sum();
  nsizes_total_ = q_->nsizes.sum();
  diag_total_ = diag_.sum();
}

QuadraticMseObjective QuadraticMseObjective::for_normal(
    std::shared_ptr<const NetworkQuadratics> q, const NormalModelParams& p) {
  const auto n = q->gram.rows();
  return QuadraticMseObjective(std::move(q), p.mu * p.mu, p.sigma2,
                               Eigen::VectorXd::Constant(n, p.gamma2));
}

QuadraticMseObjective QuadraticMseObjective::for_poisson_gamma(
    std::shared_ptr<const NetworkQuadratics> q, const PoissonGammaParams& p) {
  const double mu = p.r * p.lambda;
  Eigen::VectorXd diag = q->nsizes * mu;
  return QuadraticMseObjective(std::move(q), mu * mu, p.r * p.lambda * p.lambda,
                               std::move(diag));
}

QuadraticMseObjective QuadraticMseObjective::for_imse_closed_form(
    std::shared_ptr<const NetworkQuadratics> q, const PriorSpec& prior) {
  const PriorMoments m = exact_prior_moments(prior);
  const auto n = q->gram.rows();
  return QuadraticMseObjective(std::move(q), m.mu2, m.sigma2,
                               Eigen::VectorXd::Constant(n, m.gamma2));
}

QuadraticMseObjective QuadraticMseObjective::for_imse_mc(
    std::shared_ptr<const NetworkQuadratics> q, const PriorSpec& prior,
    int n_draws, uint64_t seed) {
  const PriorMoments m = mc_prior_moments(prior, n_draws, seed);
  const auto n = q->gram.rows();
  return QuadraticMseObjective(std::move(q), m.mu2, m.sigma2,
                               Eigen::VectorXd::Constant(n, m.gamma2));
}

double QuadraticMseObjective::evaluate(const Assignment& a) const {
  return mse_quadratic(c_bias_, c_net_, diag_, *q_, a);
}

// Group aggregates sufficient to evaluate the quadratic objective. Gram
// entries and neighborhood sizes are integers, so the incremental updates
// stay exact.
struct QuadAggregates {
  int n1;
  int n0;
  double ns_t;    // sum of neighborhood sizes over treated
  double d_t;     // sum of diag over treated
  double s_tt;    // sum of gram over treated x treated
  double s_cc;    // sum of gram over control x control
};

class QuadraticState : public ObjectiveState {
 public:
  QuadraticState(const QuadraticMseObjective* obj, const Assignment& a)
      : obj_(obj), z_(a.z()) {
    const int n = a.size();
    const auto& gram = obj_->q_->gram;
    Eigen::VectorXd zi(n);
    for (int i = 0; i < n; ++i) zi(i) = z_[i] ? 1.0 : 0.0;
    g_t_ = gram * zi;
    ag_.n1 = a.n1();
    ag_.n0 = a.n0();
    ag_.ns_t = 0.0;
    ag_.d_t = 0.0;
    ag_.s_tt = 0.0;
    ag_.s_cc = 0.0;
    for (int i = 0; i < n; ++i) {
      if (z_[i]) {
        ag_.ns_t += obj_->q_->nsizes(i);
        ag_.d_t += obj_->diag_(i);
        ag_.s_tt += g_t_(i);
      } else {
        ag_.s_cc += obj_->gram_rowsum_(i) - g_t_(i);
      }
    }
  }

  double value() const override { return objective_of(ag_); }

  double flip_value(int v) const override { return objective_of(flipped(v)); }

  double swap_value(int u, int v) const override {
    return objective_of(swapped(u, v));
  }

  void apply_flip(int v) override {
    ag_ = flipped(v);
    const auto& gram = obj_->q_->gram;
    const int n = static_cast<int>(z_.size());
    const double sign = z_[v] ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i) g_t_(i) += sign * gram(i, v);
    z_[v] ^= 1;
  }

  void apply_swap(int u, int v) override {
    ag_ = swapped(u, v);
    const auto& gram = obj_->q_->gram;
    const int n = static_cast<int>(z_.size());
    for (int i = 0; i < n; ++i) g_t_(i) += gram(i, v) - gram(i, u);
    z_[u] = 0;
    z_[v] = 1;
  }

 private:
  double objective_of(const QuadAggregates& ag) const {
    const double n1 = ag.n1;
    const double n0 = ag.n0;
    const double delta = ag.ns_t / n1 - (obj_->nsizes_total_ - ag.ns_t) / n0;
    const double s_tc = 0.5 * (obj_->gram_total_ - ag.s_tt - ag.s_cc);
    const double quad_gram =
        ag.s_tt / (n1 * n1) + ag.s_cc / (n0 * n0) - 2.0 * s_tc / (n1 * n0);
    const double quad_diag =
        ag.d_t / (n1 * n1) + (obj_->diag_total_ - ag.d_t) / (n0 * n0);
    return obj_->c_bias_ * delta * delta + obj_->c_net_ * quad_gram + quad_diag;
  }

  QuadAggregates flipped(int v) const {
    const auto& gram = obj_->q_->gram;
    QuadAggregates ag = ag_;
    const double gvv = gram(v, v);
    const double gt = g_t_(v);
    const double gc = obj_->gram_rowsum_(v) - gt;
    if (z_[v]) {
      ag.n1 -= 1;
      ag.n0 += 1;
      ag.ns_t -= obj_->q_->nsizes(v);
      ag.d_t -= obj_->diag_(v);
      ag.s_tt -= 2.0 * gt - gvv;   // g_t_(v) includes G(v,v) while v is treated
      ag.s_cc += 2.0 * gc + gvv;
    } else {
      ag.n1 += 1;
      ag.n0 -= 1;
      ag.ns_t += obj_->q_->nsizes(v);
      ag.d_t += obj_->diag_(v);
      ag.s_tt += 2.0 * gt + gvv;
      ag.s_cc -= 2.0 * gc - gvv;   // g_c(v) includes G(v,v) while v is control
    }
    return ag;
  }

  // u leaves the treated group, v joins it.
  QuadAggregates swapped(int u, int v) const {
    const auto& gram = obj_->q_->gram;
    QuadAggregates ag = ag_;
    const double guu = gram(u, u);
    const double gvv = gram(v, v);
    const double guv = gram(u, v);
    const double gt_u = g_t_(u);
    const double gt_v = g_t_(v);
    const double gc_u = obj_->gram_rowsum_(u) - gt_u;
    const double gc_v = obj_->gram_rowsum_(v) - gt_v;
    ag.ns_t += obj_->q_->nsizes(v) - obj_->q_->nsizes(u);
    ag.d_t += obj_->diag_(v) - obj_->diag_(u);
    ag.s_tt += -(2.0 * gt_u - guu) + 2.0 * (gt_v - guv) + gvv;
    ag.s_cc += -(2.0 * gc_v - gvv) + 2.0 * (gc_u - guv) + guu;
    return ag;
  }

  const QuadraticMseObjective* obj_;
  std::vector<uint8_t> z_;
  Eigen::VectorXd g_t_;  // g_t_(i) = sum over treated j of G(i, j)
  QuadAggregates ag_;
};

std::unique_ptr<ObjectiveState> QuadraticMseObjective::bind(
    const Assignment& a) const {
  if (a.size() != q_->gram.rows()) {
    throw std::invalid_argument("quadratic objective: assignment size mismatch");
  }
  return std::make_unique<QuadraticState>(this, a);
}

Assignment randomized_balanced(int n, Rng& rng) {
  if (n < 2) throw std::invalid_argument("randomized_balanced: n must be >= 2");
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  const int n1 = n / 2;
  for (int i = 0; i < n1; ++i) {
    const int j = i + static_cast<int>(rng.uniform_below(n - i));
    std::swap(idx[i], idx[j]);
  }
  std::vector<uint8_t> z(n, 0);
  for (int i = 0; i < n1; ++i) z[idx[i]] = 1;
  return Assignment(std::move(z));
}

Assignment assignment_from_strata(const std::vector<int>& labels, Rng& rng) {
  const int n = static_cast<int>(labels.size());
  if (n < 2) throw std::invalid_argument("assignment_from_strata: need >= 2 units");
  const int k = 1 + *std::max_element(labels.begin(), labels.end());
  std::vector<std::vector<int>> strata(k);
  for (int i = 0; i < n; ++i) {
    if (labels[i] < 0) throw std::invalid_argument("assignment_from_strata: bad label");
    strata[labels[i]].push_back(i);
  }
  std::vector<uint8_t> z(n, 0);
  for (auto& members : strata) {
    const int m = static_cast<int>(members.size());
    const int t = m / 2;
    for (int i = 0; i < t; ++i) {
      const int j = i + static_cast<int>(rng.uniform_below(m - i));
      std::swap(members[i], members[j]);
    }
    for (int i = 0; i < t; ++i) z[members[i]] = 1;
  }
  return Assignment(std::move(z));
}

Assignment stratified_spectral(const Network& net, int k_clusters, Rng& rng) {
  const auto labels = spectral_clusters(net, k_clusters, rng);
  return assignment_from_strata(labels, rng);
}

namespace {

void validate_optimizer_config(const OptimizerConfig& cfg) {
  if (cfg.max_iters < 0) {
    throw std::invalid_argument("optimizer: max_iters must be non-negative");
  }
  if (cfg.n_restarts < 1) {
    throw std::invalid_argument("optimizer: n_restarts must be >= 1");
  }
  if (!(cfg.cooling_rate > 0.0 && cfg.cooling_rate < 1.0)) {
    throw std::invalid_argument("optimizer: cooling_rate must lie in (0, 1)");
  }
  if (!(cfg.move_mix >= 0.0 && cfg.move_mix <= 1.0)) {
    throw std::invalid_argument("optimizer: move_mix must lie in [0, 1]");
  }
  if (cfg.init_temperature < 0.0) {
    throw std::invalid_argument("optimizer: init_temperature must be >= 0");
  }
}

bool lex_less(const std::vector<uint8_t>& a, const std::vector<uint8_t>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

DesignResult optimize_assignment(const AssignmentObjective& objective, int n,
                                 const OptimizerConfig& cfg) {
  if (n < 2) throw std::invalid_argument("optimize_assignment: n must be >= 2");
  validate_optimizer_config(cfg);
  const long max_iters = cfg.max_iters > 0 ? cfg.max_iters : 200L * n;

  std::vector<uint8_t> best_overall;
  double best_overall_value = std::numeric_limits<double>::infinity();
  std::vector<std::pair<long, double>> best_trace;

  for (int restart = 0; restart < cfg.n_restarts; ++restart) {
    Rng rng(derive_seed(cfg.seed, static_cast<uint64_t>(restart)));
    Assignment start = randomized_balanced(n, rng);
    auto state = objective.bind(start);

    std::vector<uint8_t> z = start.z();
    std::vector<int> treated, control;
    std::vector<int> pos(n);  // index of node i inside its group list
    for (int i = 0; i < n; ++i) {
      if (z[i]) {
        pos[i] = static_cast<int>(treated.size());
        treated.push_back(i);
      } else {
        pos[i] = static_cast<int>(control.size());
        control.push_back(i);
      }
    }
    auto move_between = [&](std::vector<int>& from, std::vector<int>& to, int v) {
      const int at = pos[v];
      const int last = from.back();
      from[at] = last;
      pos[last] = at;
      from.pop_back();
      pos[v] = static_cast<int>(to.size());
      to.push_back(v);
    };

    double current = state->value();
    double temperature =
        cfg.init_temperature > 0.0
            ? cfg.init_temperature
            : std::max(current, std::numeric_limits<double>::min());
    double best = current;
    std::vector<uint8_t> best_z = z;
    std::vector<std::pair<long, double>> trace{{0, best}};

    for (long it = 1; it <= max_iters; ++it) {
      temperature *= cfg.cooling_rate;
      double candidate;
      int mv = -1, mu = -1;
      bool is_swap = false;
      if (rng.uniform() < cfg.move_mix) {
        is_swap = true;
        mu = treated[rng.uniform_below(treated.size())];
        mv = control[rng.uniform_below(control.size())];
        candidate = state->swap_value(mu, mv);
      } else {
        mv = static_cast<int>(rng.uniform_below(n));
        const bool would_empty =
            z[mv] ? treated.size() == 1 : control.size() == 1;
        if (would_empty) continue;
        candidate = state->flip_value(mv);
      }
      const bool accept =
          candidate <= current ||
          rng.uniform() < std::exp(-(candidate - current) / temperature);
      if (!accept) continue;
      if (is_swap) {
        state->apply_swap(mu, mv);
        z[mu] = 0;
        z[mv] = 1;
        move_between(treated, control, mu);
        move_between(control, treated, mv);
      } else {
        state->apply_flip(mv);
        if (z[mv]) {
          z[mv] = 0;
          move_between(treated, control, mv);
        } else {
          z[mv] = 1;
          move_between(control, treated, mv);
        }
      }
      current = candidate;
      if (current < best) {
        best = current;
        best_z = z;
        trace.emplace_back(it, best);
      }
    }

    const bool wins = best < best_overall_value ||
                      (best == best_overall_value && !best_overall.empty() &&
                       lex_less(best_z, best_overall));
    if (wins || best_overall.empty()) {
      best_overall_value = best;
      best_overall = best_z;
      best_trace = std::move(trace);
    }
  }

  Assignment winner(best_overall);
  DesignResult result{winner, objective.evaluate(winner), std::move(best_trace),
                      std::nullopt};
  return result;
}

DesignResult optimize_assignment(
    const std::function<double(const Assignment&)>& objective, int n,
    const OptimizerConfig& cfg) {
  return optimize_assignment(FunctionObjective(objective), n, cfg);
}

DesignResult brute_force(const AssignmentObjective& objective, int n) {
  if (n < 2) throw std::invalid_argument("brute_force: n must be >= 2");
  if (n > 20) {
    throw std::invalid_argument("brute_force: n exceeds the enumeration cap of 20");
  }
  std::vector<uint8_t> best_z;
  double best = std::numeric_limits<double>::infinity();
  const uint32_t limit = (1u << n) - 1;
  std::vector<uint8_t> z(n);
  // Mask order equals the binary encoding of z with z[0] as the most
  // significant bit, so keeping the first strict minimum is the tie-break.
  for (uint32_t mask = 1; mask < limit; ++mask) {
    for (int i = 0; i < n; ++i) z[i] = (mask >> (n - 1 - i)) & 1u;
    const double value = objective.evaluate(Assignment(z));
    if (value < best) {
      best = value;
      best_z = z;
    }
  }
  Assignment winner(best_z);
  return DesignResult{winner, best, {}, std::nullopt};
}

DesignResult brute_force(const std::function<double(const Assignment&)>& objective,
                         int n) {
  return brute_force(FunctionObjective(objective), n);
}

DesignResult point_prior_design(const PointPriorGrid& grid, const Network& net,
                                const OptimizerConfig& cfg) {
  const int k = static_cast<int>(grid.params_list.size());
  if (k < 1) throw std::invalid_argument("point_prior_design: empty grid");
  if (static_cast<int>(grid.weights.size()) != k) {
    throw std::invalid_argument("point_prior_design: weights length mismatch");
  }
  bool any_positive = false;
  for (double w : grid.weights) {
    if (w < 0.0) {
      throw std::invalid_argument("point_prior_design: weights must be >= 0");
    }
    any_positive = any_positive || w > 0.0;
  }
  if (!any_positive) {
    throw std::invalid_argument("point_prior_design: all weights are zero");
  }

  auto quad = std::make_shared<const NetworkQuadratics>(net);
  const int n = net.node_count();

  // Step 1: one search per grid point, each on its own substream.
  std::vector<DesignResult> candidates;
  candidates.reserve(k);
  for (int i = 0; i < k; ++i) {
    OptimizerConfig point_cfg = cfg;
    point_cfg.seed = derive_seed(cfg.seed, static_cast<uint64_t>(i));
    candidates.push_back(optimize_assignment(
        QuadraticMseObjective::for_normal(quad, grid.params_list[i]), n,
        point_cfg));
  }

  // Step 2: cross-evaluate.
  Eigen::MatrixXd gamma(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      gamma(i, j) =
          mse_normal(grid.params_list[j], *quad, candidates[i].assignment);
    }
  }

  // Step 3: weighted loss, smallest wins.
  int winner = 0;
  double best_loss = std::numeric_limits<double>::infinity();
  for (int i = 0; i < k; ++i) {
    double loss = 0.0;
    for (int j = 0; j < k; ++j) loss += gamma(i, j) * grid.weights[j];
    if (loss < best_loss) {
      best_loss = loss;
      winner = i;
    }
  }

  DesignResult result = candidates[winner];
  result.objective = best_loss;
  result.gamma = std::move(gamma);
  return result;
}

}  // namespace netdesign
