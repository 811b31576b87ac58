#include "netdesign/study.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "netdesign/config.hpp"
#include "netdesign/errors.hpp"
#include "netdesign/report.hpp"
#include "netdesign/risk.hpp"

namespace netdesign {

namespace {

void parallel_for(int n_tasks, int workers, const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, n_tasks));
  if (workers == 1) {
    for (int i = 0; i < n_tasks; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr error;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n_tasks) return;
        {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (error) return;
        }
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// Stream layout. Every quantity a replication needs hangs off the pair
// (family, replication), so results do not depend on scheduling.
enum Salt : uint64_t {
  kSaltNetwork = 1,
  kSaltBaselineDraws = 2,
  kSaltClusters = 3,
  kSaltStratifiedDraws = 4,
  kSaltObjectiveDraws = 5,
  kSaltSearch = 6,
  kSaltRanking = 7,
};

uint64_t family_stream(uint64_t master, NetworkFamily family) {
  return derive_seed(master, 101 + static_cast<uint64_t>(family));
}

struct RepScope {
  Network net;
  std::shared_ptr<const NetworkQuadratics> quad;
  uint64_t stream;
  double baseline_ref = 0.0;
  double stratified_ref = 0.0;
};

RepScope make_rep_scope(const StudyConfig& cfg, const FamilyConfig& fam,
                        int replication, bool with_stratified) {
  const uint64_t stream =
      derive_seed(family_stream(cfg.master_seed, fam.family),
                  static_cast<uint64_t>(replication));
  RepScope scope{fam.generate(cfg.n_nodes, derive_seed(stream, kSaltNetwork)),
                 nullptr, stream};
  scope.quad = std::make_shared<const NetworkQuadratics>(scope.net);
  const int n = scope.net.node_count();

  Rng rb(derive_seed(stream, kSaltBaselineDraws));
  double sum = 0.0;
  for (int d = 0; d < cfg.n_baseline_draws; ++d) {
    sum += imse_closed_form_normal(cfg.true_prior, *scope.quad,
                                   randomized_balanced(n, rb));
  }
  scope.baseline_ref = sum / cfg.n_baseline_draws;

  if (with_stratified) {
    Rng rc(derive_seed(stream, kSaltClusters));
    const auto labels = spectral_clusters(scope.net, cfg.k_clusters, rc);
    Rng rs(derive_seed(stream, kSaltStratifiedDraws));
    double ssum = 0.0;
    for (int d = 0; d < cfg.n_baseline_draws; ++d) {
      ssum += imse_closed_form_normal(cfg.true_prior, *scope.quad,
                                      assignment_from_strata(labels, rs));
    }
    scope.stratified_ref = ssum / cfg.n_baseline_draws;
  }
  return scope;
}

// Optimal design under design prior j: a common-random-numbers Monte-Carlo
// risk objective, annealed; evaluated exactly under the true prior.
double optimal_imse_true(const StudyConfig& cfg, const RepScope& scope,
                         const PriorSpec& design_prior, int prior_index) {
  const auto objective = QuadraticMseObjective::for_imse_mc(
      scope.quad, design_prior, cfg.n_mc_draws,
      derive_seed(derive_seed(scope.stream, kSaltObjectiveDraws),
                  static_cast<uint64_t>(prior_index)));
  OptimizerConfig opt = cfg.optimizer;
  opt.seed = derive_seed(derive_seed(scope.stream, kSaltSearch),
                         static_cast<uint64_t>(prior_index));
  const DesignResult res =
      optimize_assignment(objective, scope.net.node_count(), opt);
  return imse_closed_form_normal(cfg.true_prior, *scope.quad, res.assignment);
}

void validate_study_config(const StudyConfig& cfg) {
  if (cfg.families.empty()) {
    throw std::invalid_argument("study: at least one network family is required");
  }
  if (cfg.n_replications < 1) {
    throw std::invalid_argument("study: n_replications must be >= 1");
  }
  if (cfg.n_nodes < 2) throw std::invalid_argument("study: n_nodes must be >= 2");
  if (cfg.n_mc_draws < 1) {
    throw std::invalid_argument("study: n_mc_draws must be >= 1");
  }
  if (cfg.n_baseline_draws < 1) {
    throw std::invalid_argument("study: n_baseline_draws must be >= 1");
  }
}

std::vector<PriorSpec> effective_design_priors(const StudyConfig& cfg) {
  if (!cfg.design_priors.empty()) return cfg.design_priors;
  if (cfg.kind == StudyKind::kComparative) return {cfg.true_prior};
  return misspecification_priors(cfg.true_prior);
}

double median(std::vector<double> values) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const size_t m = values.size() / 2;
  if (values.size() % 2 == 1) return values[m];
  return 0.5 * (values[m - 1] + values[m]);
}

}  // namespace

std::string family_name(NetworkFamily family) {
  switch (family) {
    case NetworkFamily::kErdosRenyi: return "erdos-renyi";
    case NetworkFamily::kSmallWorld: return "small-world";
    case NetworkFamily::kPowerLaw: return "power-law";
    case NetworkFamily::kSbm: return "sbm";
  }
  throw std::invalid_argument("unknown network family");
}

NetworkFamily family_from_name(const std::string& name) {
  if (name == "erdos-renyi" || name == "er") return NetworkFamily::kErdosRenyi;
  if (name == "small-world" || name == "sw") return NetworkFamily::kSmallWorld;
  if (name == "power-law" || name == "pl") return NetworkFamily::kPowerLaw;
  if (name == "sbm") return NetworkFamily::kSbm;
  throw std::invalid_argument("unknown network family \"" + name + "\"");
}

Network FamilyConfig::generate(int n_nodes, uint64_t seed) const {
  switch (family) {
    case NetworkFamily::kErdosRenyi:
      return gen_erdos_renyi(n_nodes, p, seed);
    case NetworkFamily::kSmallWorld:
      return gen_small_world(n_nodes, k, beta, seed);
    case NetworkFamily::kPowerLaw:
      return gen_power_law(n_nodes, m, seed);
    case NetworkFamily::kSbm: {
      std::vector<int> sizes = block_sizes;
      Eigen::MatrixXd probs = link_probs;
      if (sizes.empty()) {
        // Four blocks in 4:3:2:1 proportion.
        sizes = {(4 * n_nodes) / 10, (3 * n_nodes) / 10, (2 * n_nodes) / 10, 0};
        sizes[3] = n_nodes - sizes[0] - sizes[1] - sizes[2];
      }
      int total = 0;
      for (int s : sizes) total += s;
      if (total != n_nodes) {
        throw std::invalid_argument(
            "sbm: block sizes must sum to the configured node count");
      }
      if (probs.size() == 0) {
        const int k = static_cast<int>(sizes.size());
        probs = Eigen::MatrixXd::Constant(k, k, 0.02);
        const double within[] = {0.20, 0.16, 0.12, 0.10};
        for (int b = 0; b < k; ++b) probs(b, b) = within[b % 4];
      }
      return gen_sbm(sizes, probs, seed);
    }
  }
  throw std::invalid_argument("unknown network family");
}

FamilyConfig default_family_config(NetworkFamily family) {
  FamilyConfig cfg;
  cfg.family = family;
  return cfg;
}

std::vector<FamilyConfig> all_default_families() {
  return {default_family_config(NetworkFamily::kErdosRenyi),
          default_family_config(NetworkFamily::kSmallWorld),
          default_family_config(NetworkFamily::kPowerLaw),
          default_family_config(NetworkFamily::kSbm)};
}

PriorSpec default_prior() { return PriorSpec(1.0, 0.5, 3.0, 1.0, 2.0, 1.0); }

std::vector<std::pair<double, double>> misspecification_mu_grid() {
  return {{1, 0.5}, {2, 0.7}, {5, 1},    {7, 1.2},  {10, 1.5},
          {15, 2},  {20, 2.5}, {30, 3},  {40, 4},   {50, 5}};
}

std::vector<PriorSpec> misspecification_priors(const PriorSpec& base) {
  std::vector<PriorSpec> priors;
  for (const auto& [mu0, sigma0] : misspecification_mu_grid()) {
    priors.emplace_back(mu0, sigma0, base.r_gamma, base.lambda_gamma,
                        base.r_sigma, base.lambda_sigma);
  }
  return priors;
}

std::vector<StudyRecord> run_comparative_study(const StudyConfig& cfg) {
  validate_study_config(cfg);
  const std::vector<PriorSpec> priors = effective_design_priors(cfg);
  const PriorSpec design_prior = priors.front();
  const int reps = cfg.n_replications;
  const int n_tasks = static_cast<int>(cfg.families.size()) * reps;
  std::vector<StudyRecord> records(static_cast<size_t>(n_tasks) * 3);
  parallel_for(n_tasks, resolve_workers(cfg.workers), [&](int task) {
    const FamilyConfig& fam = cfg.families[task / reps];
    const int rep = task % reps;
    const RepScope scope = make_rep_scope(cfg, fam, rep, true);
    const double opt = optimal_imse_true(cfg, scope, design_prior, 0);
    const std::string fname = family_name(fam.family);
    StudyRecord* out = &records[static_cast<size_t>(task) * 3];
    out[0] = {rep, fname, kStrategyOptimal, 0, opt, opt / scope.baseline_ref};
    out[1] = {rep, fname, kStrategyBalanced, -1, scope.baseline_ref, 1.0};
    out[2] = {rep, fname, kStrategyStratified, -1, scope.stratified_ref,
              scope.stratified_ref / scope.baseline_ref};
  });
  return records;
}

std::vector<StudyRecord> run_misspecification_study(const StudyConfig& cfg) {
  validate_study_config(cfg);
  const std::vector<PriorSpec> priors = effective_design_priors(cfg);
  const int k = static_cast<int>(priors.size());
  const int reps = cfg.n_replications;
  const int n_tasks = static_cast<int>(cfg.families.size()) * reps;
  const int rows_per_task = k + 1;
  std::vector<StudyRecord> records(static_cast<size_t>(n_tasks) * rows_per_task);
  parallel_for(n_tasks, resolve_workers(cfg.workers), [&](int task) {
    const FamilyConfig& fam = cfg.families[task / reps];
    const int rep = task % reps;
    const RepScope scope = make_rep_scope(cfg, fam, rep, false);
    const std::string fname = family_name(fam.family);
    StudyRecord* out = &records[static_cast<size_t>(task) * rows_per_task];
    for (int j = 0; j < k; ++j) {
      const double opt = optimal_imse_true(cfg, scope, priors[j], j);
      out[j] = {rep, fname, kStrategyOptimal, j, opt, opt / scope.baseline_ref};
    }
    out[k] = {rep, fname, kStrategyBalanced, -1, scope.baseline_ref, 1.0};
  });
  return records;
}

std::vector<StudyRecord> run_factorial_study(const StudyConfig& cfg) {
  validate_study_config(cfg);
  const std::vector<PriorSpec> priors = effective_design_priors(cfg);
  const int k = static_cast<int>(priors.size());
  const int reps = cfg.n_replications;
  const int n_tasks = static_cast<int>(cfg.families.size()) * reps;
  const int rows_per_task = 3 * k;
  std::vector<StudyRecord> records(static_cast<size_t>(n_tasks) * rows_per_task);
  parallel_for(n_tasks, resolve_workers(cfg.workers), [&](int task) {
    const FamilyConfig& fam = cfg.families[task / reps];
    const int rep = task % reps;
    const RepScope scope = make_rep_scope(cfg, fam, rep, true);
    const std::string fname = family_name(fam.family);
    StudyRecord* out = &records[static_cast<size_t>(task) * rows_per_task];
    for (int j = 0; j < k; ++j) {
      const double opt = optimal_imse_true(cfg, scope, priors[j], j);
      out[3 * j + 0] = {rep, fname, kStrategyOptimal, j, opt,
                        opt / scope.baseline_ref};
      out[3 * j + 1] = {rep, fname, kStrategyBalanced, j, scope.baseline_ref, 1.0};
      out[3 * j + 2] = {rep, fname, kStrategyStratified, j, scope.stratified_ref,
                        scope.stratified_ref / scope.baseline_ref};
    }
  });
  return records;
}

AnovaTable anova_mss(const std::vector<StudyRecord>& records,
                     AnovaResponse response) {
  const int n = static_cast<int>(records.size());
  if (n < 2) throw std::invalid_argument("anova: need at least 2 records");
  const auto value = [response](const StudyRecord& r) {
    return response == AnovaResponse::kImseTrue ? r.imse_true : r.relative_imse;
  };
  double grand = 0.0;
  for (const auto& r : records) grand += value(r);
  grand /= n;
  double total_ss = 0.0;
  for (const auto& r : records) {
    const double d = value(r) - grand;
    total_ss += d * d;
  }

  auto factor_row = [&](const std::string& name,
                        const std::function<std::string(const StudyRecord&)>& key) {
    std::map<std::string, std::pair<long, double>> levels;  // count, sum
    for (const auto& r : records) {
      auto& [count, sum] = levels[key(r)];
      ++count;
      sum += value(r);
    }
    if (levels.size() < 2) {
      throw std::invalid_argument("anova: factor \"" + name +
                                  "\" needs at least 2 levels");
    }
    double ss = 0.0;
    for (const auto& [level, cs] : levels) {
      (void)level;
      const double d = cs.second / cs.first - grand;
      ss += cs.first * d * d;
    }
    const int df = static_cast<int>(levels.size()) - 1;
    return AnovaRow{name, df, ss, ss / df};
  };

  AnovaTable table;
  table.total_ss = total_ss;
  table.rows.push_back(
      factor_row("strategy", [](const StudyRecord& r) { return r.design_strategy; }));
  table.rows.push_back(factor_row("design_prior", [](const StudyRecord& r) {
    return std::to_string(r.design_prior_id);
  }));
  table.rows.push_back(factor_row(
      "network_family", [](const StudyRecord& r) { return r.network_family; }));

  double factor_ss = 0.0;
  int factor_df = 0;
  for (const auto& row : table.rows) {
    factor_ss += row.ss;
    factor_df += row.df;
  }
  const double residual_ss = total_ss - factor_ss;
  const int residual_df = (n - 1) - factor_df;
  table.rows.push_back(AnovaRow{
      "residual", residual_df, residual_ss,
      residual_df > 0 ? residual_ss / residual_df : 0.0});
  return table;
}

RankingStabilityReport ranking_stability(const Network& net,
                                         const PriorSpec& prior,
                                         const std::vector<Assignment>& designs,
                                         int n_draws, int n_pairs,
                                         uint64_t seed) {
  const int nd = static_cast<int>(designs.size());
  if (nd < 2) throw std::invalid_argument("ranking_stability: need >= 2 designs");
  if (n_draws < 1 || n_pairs < 1) {
    throw std::invalid_argument("ranking_stability: n_draws and n_pairs must be >= 1");
  }
  const NetworkQuadratics quad(net);
  std::vector<double> exact(nd);
  for (int d = 0; d < nd; ++d) {
    exact[d] = imse_closed_form_normal(prior, quad, designs[d]);
  }

  long comparisons = 0;
  long concordant = 0;
  std::vector<double> est1(nd), est2(nd);
  for (int t = 0; t < n_pairs; ++t) {
    for (int d = 0; d < nd; ++d) {
      const uint64_t base =
          derive_seed(seed, (static_cast<uint64_t>(t) * nd + d) * 2);
      est1[d] = imse_mc(prior, quad, designs[d], n_draws, base).value;
      est2[d] = imse_mc(prior, quad, designs[d], n_draws, base + 1).value;
    }
    for (int a = 0; a < nd; ++a) {
      for (int b = a + 1; b < nd; ++b) {
        const double scale = std::max(std::abs(exact[a]), std::abs(exact[b]));
        if (std::abs(exact[a] - exact[b]) <= 1e-12 * scale) continue;  // tie
        const bool a_better = exact[a] < exact[b];
        const bool ok1 = a_better ? est1[a] < est1[b] : est1[b] < est1[a];
        const bool ok2 = a_better ? est2[a] < est2[b] : est2[b] < est2[a];
        ++comparisons;
        if (ok1 && ok2) ++concordant;
      }
    }
  }
  RankingStabilityReport report;
  report.n_pairs = n_pairs;
  report.comparisons = comparisons;
  report.concordant = concordant;
  report.concordance =
      comparisons > 0 ? static_cast<double>(concordant) / comparisons : 1.0;
  return report;
}

std::vector<Assignment> ranking_design_roster(const Network& net,
                                              const StudyConfig& cfg) {
  const int nd = cfg.ranking.n_designs;
  if (nd < 2) throw std::invalid_argument("ranking: n_designs must be >= 2");
  auto quad = std::make_shared<const NetworkQuadratics>(net);
  const uint64_t stream = derive_seed(cfg.master_seed, kSaltRanking);
  std::vector<Assignment> designs;
  designs.reserve(nd);
  const int n_opt = std::max(1, nd / 5);
  const int n_strat = std::max(1, (nd - n_opt) / 2);
  for (int t = 0; t < n_opt; ++t) {
    const auto objective = QuadraticMseObjective::for_imse_mc(
        quad, cfg.true_prior, cfg.n_mc_draws, derive_seed(stream, 100 + t));
    OptimizerConfig opt = cfg.optimizer;
    opt.seed = derive_seed(stream, 200 + t);
    designs.push_back(
        optimize_assignment(objective, net.node_count(), opt).assignment);
  }
  {
    Rng rc(derive_seed(stream, 300));
    const auto labels = spectral_clusters(net, cfg.k_clusters, rc);
    Rng rs(derive_seed(stream, 301));
    for (int t = 0; t < n_strat; ++t) {
      designs.push_back(assignment_from_strata(labels, rs));
    }
  }
  Rng rb(derive_seed(stream, 400));
  while (static_cast<int>(designs.size()) < nd) {
    designs.push_back(randomized_balanced(net.node_count(), rb));
  }
  return designs;
}

namespace {

nlohmann::json summary_for_records(const StudyConfig& cfg,
                                   const std::vector<StudyRecord>& records) {
  nlohmann::json summary;
  std::map<std::string, std::vector<double>> by_strategy;
  std::map<std::string, std::map<std::string, std::vector<double>>> by_family;
  for (const auto& r : records) {
    by_strategy[r.design_strategy].push_back(r.relative_imse);
    by_family[r.network_family][r.design_strategy].push_back(r.relative_imse);
  }
  nlohmann::json med;
  for (auto& [strategy, values] : by_strategy) {
    med[strategy] = median(values);
  }
  summary["median_relative_imse"] = med;
  nlohmann::json fam;
  for (auto& [family, per_strategy] : by_family) {
    nlohmann::json m;
    for (auto& [strategy, values] : per_strategy) m[strategy] = median(values);
    fam[family] = m;
  }
  summary["median_relative_imse_by_family"] = fam;
  summary["n_records"] = records.size();
  summary["seed"] = cfg.master_seed;
  return summary;
}

}  // namespace

std::string run_study(const StudyConfig& cfg, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + out_dir + ": " + ec.message());
  }
  // Echo the effective configuration: defaults materialized.
  StudyConfig effective = cfg;
  if (cfg.kind != StudyKind::kRanking) {
    effective.design_priors = effective_design_priors(cfg);
  }
  const std::string echo = study_config_json(effective);
  const auto path = [&](const char* name) {
    return (fs::path(out_dir) / name).string();
  };
  write_text_file(echo, path("config.json"));

  nlohmann::json summary;
  if (cfg.kind == StudyKind::kRanking) {
    const FamilyConfig& fam = cfg.families.front();
    const Network net = fam.generate(
        cfg.n_nodes, derive_seed(family_stream(cfg.master_seed, fam.family),
                                 kSaltNetwork));
    const auto designs = ranking_design_roster(net, cfg);
    const auto report =
        ranking_stability(net, cfg.true_prior, designs, cfg.ranking.n_draws,
                          cfg.ranking.n_pairs,
                          derive_seed(cfg.master_seed, kSaltRanking + 1000));
    summary["study"] = "ranking";
    summary["n_designs"] = designs.size();
    summary["n_pairs"] = report.n_pairs;
    summary["comparisons"] = report.comparisons;
    summary["concordant"] = report.concordant;
    summary["concordance"] = report.concordance;
    summary["seed"] = cfg.master_seed;
    std::string csv = "n_designs,n_pairs,comparisons,concordant,concordance\n";
    csv += std::to_string(designs.size()) + "," + std::to_string(report.n_pairs) +
           "," + std::to_string(report.comparisons) + "," +
           std::to_string(report.concordant) + "," +
           format_double(report.concordance) + "\n";
    write_text_file(csv, path("ranking.csv"));
    write_text_file(summary.dump(), path("ranking.json"));
    return summary.dump();
  }

  std::vector<StudyRecord> records;
  switch (cfg.kind) {
    case StudyKind::kComparative:
      records = run_comparative_study(cfg);
      summary["study"] = "comparative";
      break;
    case StudyKind::kMisspecification:
      records = run_misspecification_study(cfg);
      summary["study"] = "misspec";
      break;
    case StudyKind::kFactorial:
      records = run_factorial_study(cfg);
      summary["study"] = "anova";
      break;
    default:
      throw std::logic_error("unhandled study kind");
  }
  write_records_csv(records, path("records.csv"));
  write_records_json(records, echo, path("records.json"));
  write_histogram_csv(relative_imse_histogram(records), path("histogram.csv"));
  summary.update(summary_for_records(cfg, records));

  if (cfg.kind == StudyKind::kFactorial) {
    const AnovaTable table = anova_mss(records, AnovaResponse::kRelativeImse);
    write_anova_csv(table, path("anova.csv"));
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
      rows.push_back({{"factor", row.factor}, {"df", row.df}, {"mss", row.mss}});
    }
    summary["anova"] = rows;
    summary["anova_response"] = "relative_imse";
  }
  return summary.dump();
}

}  // namespace netdesign
