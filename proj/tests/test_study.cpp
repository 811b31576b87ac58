#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "netdesign/config.hpp"
#include "netdesign/report.hpp"
#include "netdesign/study.hpp"

using namespace netdesign;

namespace {

StudyConfig tiny_config(StudyKind kind) {
  StudyConfig cfg;
  cfg.kind = kind;
  cfg.families = {default_family_config(NetworkFamily::kErdosRenyi)};
  cfg.n_nodes = 24;
  cfg.n_replications = 3;
  cfg.n_mc_draws = 200;
  cfg.n_baseline_draws = 10;
  cfg.optimizer.n_restarts = 2;
  cfg.optimizer.max_iters = 800;
  cfg.k_clusters = 3;
  cfg.master_seed = 9;
  cfg.workers = 2;
  return cfg;
}

}  // namespace

TEST_CASE("comparative study on edgeless networks is flat") {
  StudyConfig cfg = tiny_config(StudyKind::kComparative);
  cfg.families[0].p = 0.0;
  const auto records = run_comparative_study(cfg);
  REQUIRE(records.size() == 9);
  for (const auto& r : records) {
    CHECK(r.relative_imse == doctest::Approx(1.0).epsilon(0.02));
    if (r.design_strategy == kStrategyBalanced) CHECK(r.relative_imse == 1.0);
  }
}

TEST_CASE("comparative study is deterministic and strategy-complete") {
  const StudyConfig cfg = tiny_config(StudyKind::kComparative);
  const auto a = run_comparative_study(cfg);
  StudyConfig serial = cfg;
  serial.workers = 1;
  const auto b = run_comparative_study(serial);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].imse_true == b[i].imse_true);
    CHECK(a[i].relative_imse == b[i].relative_imse);
    CHECK(a[i].design_strategy == b[i].design_strategy);
  }
  int optimal = 0, balanced = 0, stratified = 0;
  for (const auto& r : a) {
    if (r.design_strategy == kStrategyOptimal) ++optimal;
    if (r.design_strategy == kStrategyBalanced) ++balanced;
    if (r.design_strategy == kStrategyStratified) ++stratified;
  }
  CHECK(optimal == 3);
  CHECK(balanced == 3);
  CHECK(stratified == 3);
  // The optimal design beats the balanced average in most replications.
  int wins = 0;
  for (const auto& r : a) {
    if (r.design_strategy == kStrategyOptimal && r.relative_imse < 1.0) ++wins;
  }
  CHECK(wins >= 2);
}

TEST_CASE("misspecification study layout matches the grid") {
  StudyConfig cfg = tiny_config(StudyKind::kMisspecification);
  cfg.n_replications = 2;
  const auto records = run_misspecification_study(cfg);
  // 10 grid priors + 1 baseline row per replication.
  REQUIRE(records.size() == 2 * 11);
  int baseline_rows = 0;
  for (const auto& r : records) {
    if (r.design_strategy == kStrategyBalanced) {
      ++baseline_rows;
      CHECK(r.design_prior_id == -1);
      CHECK(r.relative_imse == 1.0);
    } else {
      CHECK(r.design_prior_id >= 0);
      CHECK(r.design_prior_id < 10);
    }
  }
  CHECK(baseline_rows == 2);

  // The correct-prior rows coincide with the comparative study's optimal rows
  // under the same seeds.
  StudyConfig comp = cfg;
  comp.kind = StudyKind::kComparative;
  comp.design_priors = {cfg.true_prior};
  const auto comparative = run_comparative_study(comp);
  for (const auto& r : records) {
    if (r.design_strategy != kStrategyOptimal || r.design_prior_id != 0) continue;
    for (const auto& c : comparative) {
      if (c.design_strategy == kStrategyOptimal &&
          c.replication_id == r.replication_id) {
        CHECK(c.imse_true == r.imse_true);
      }
    }
  }
}

TEST_CASE("misspecification grid holds the documented pairs") {
  const auto grid = misspecification_mu_grid();
  REQUIRE(grid.size() == 10);
  CHECK(grid.front() == std::pair<double, double>{1, 0.5});
  CHECK(grid[4] == std::pair<double, double>{10, 1.5});
  CHECK(grid.back() == std::pair<double, double>{50, 5});
  const auto priors = misspecification_priors(default_prior());
  CHECK(priors.size() == 10);
  CHECK(priors[3].mu0 == 7.0);
  CHECK(priors[3].sigma0 == 1.2);
  CHECK(priors[3].r_sigma == default_prior().r_sigma);
}

TEST_CASE("anova decomposition basics") {
  // Constant response: everything is zero.
  std::vector<StudyRecord> flat;
  for (int rep = 0; rep < 3; ++rep) {
    for (const char* fam : {"erdos-renyi", "sbm"}) {
      for (int prior = 0; prior < 2; ++prior) {
        for (const char* strat : {"optimal", "randomized-balanced"}) {
          flat.push_back({rep, fam, strat, prior, 2.5, 1.0});
        }
      }
    }
  }
  const AnovaTable zero = anova_mss(flat);
  REQUIRE(zero.rows.size() == 4);
  for (const auto& row : zero.rows) CHECK(row.mss == 0.0);

  // Only the strategy moves the response.
  auto shifted = flat;
  for (auto& r : shifted) {
    r.imse_true = r.design_strategy == std::string("optimal") ? 1.0 : 3.0;
  }
  const AnovaTable strat_only = anova_mss(shifted);
  CHECK(strat_only.rows[0].factor == "strategy");
  CHECK(strat_only.rows[0].mss > 0.0);
  CHECK(strat_only.rows[1].mss == doctest::Approx(0.0));
  CHECK(strat_only.rows[2].mss == doctest::Approx(0.0));
  CHECK(strat_only.rows[3].mss == doctest::Approx(0.0));

  // Sum identity: factor SS plus residual SS reproduces the total.
  auto noisy = flat;
  uint64_t state = 1234;
  for (auto& r : noisy) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    r.imse_true = static_cast<double>(state >> 40) / (1 << 24) + 1.0;
  }
  const AnovaTable table = anova_mss(noisy);
  double ss = 0.0;
  for (const auto& row : table.rows) ss += row.ss;
  CHECK(ss == doctest::Approx(table.total_ss).epsilon(1e-8));

  // A factor with fewer than two levels is rejected.
  auto single = flat;
  for (auto& r : single) r.network_family = "sbm";
  CHECK_THROWS_AS(anova_mss(single), std::invalid_argument);
}

TEST_CASE("factorial study produces a full cross and a sane anova") {
  StudyConfig cfg = tiny_config(StudyKind::kFactorial);
  cfg.families = {default_family_config(NetworkFamily::kErdosRenyi),
                  default_family_config(NetworkFamily::kSmallWorld)};
  cfg.n_replications = 2;
  std::vector<PriorSpec> priors = misspecification_priors(cfg.true_prior);
  cfg.design_priors = {priors[0], priors[5]};
  const auto records = run_factorial_study(cfg);
  REQUIRE(records.size() == 2 * 2 * 2 * 3);  // families x reps x priors x strategies
  const AnovaTable table = anova_mss(records);
  REQUIRE(table.rows.size() == 4);
  CHECK(table.rows[0].factor == "strategy");
  CHECK(table.rows[0].df == 2);
  CHECK(table.rows[1].df == 1);
  CHECK(table.rows[2].df == 1);
  CHECK(table.rows[0].mss > 0.0);
}

TEST_CASE("ranking stability excludes ties and approaches one") {
  const Network net = gen_erdos_renyi(30, 0.2, 50);
  const PriorSpec prior(1.0, 0.5, 3.0, 1.0, 3.0, 1.0);
  Rng rng(4);
  const Assignment a = randomized_balanced(30, rng);
  const Assignment b = randomized_balanced(30, rng);
  // Identical designs twice: the duplicated pair contributes nothing.
  const auto tied = ranking_stability(net, prior, {a, a}, 100, 5, 9);
  CHECK(tied.comparisons == 0);
  CHECK(tied.concordance == 1.0);

  const auto report = ranking_stability(net, prior, {a, b}, 50000, 4, 9);
  CHECK(report.comparisons == 4);
  CHECK(report.concordance == 1.0);  // large draw counts settle the order
}

TEST_CASE("report writing round trips") {
  const std::vector<StudyRecord> records{
      {0, "erdos-renyi", "optimal", 0, 0.123456789012345678, 0.25},
      {0, "erdos-renyi", "randomized-balanced", -1, 0.5, 1.0},
  };
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "netdesign_test_report";
  fs::create_directories(dir);
  const auto json_path = (dir / "records.json").string();
  write_records_json(records, "null", json_path);
  const auto parsed = read_records_json(json_path);
  REQUIRE(parsed.size() == records.size());
  for (size_t i = 0; i < records.size(); ++i) {
    CHECK(parsed[i].imse_true == records[i].imse_true);  // bit-exact
    CHECK(parsed[i].relative_imse == records[i].relative_imse);
    CHECK(parsed[i].design_strategy == records[i].design_strategy);
  }

  CHECK(records_csv({}) ==
        "replication_id,network_family,design_strategy,design_prior_id,"
        "imse_true,relative_imse\n");
  CHECK(records_csv(records) == records_csv(records));

  const auto hist = relative_imse_histogram(records);
  long total = 0;
  for (const auto& row : hist) {
    CHECK(row.bin_hi > row.bin_lo);
    total += row.count;
  }
  CHECK(total == static_cast<long>(records.size()));
  fs::remove_all(dir);
}

TEST_CASE("study config parsing applies defaults and rejects unknown keys") {
  const StudyConfig cfg = parse_study_config(
      R"({"study": "misspec", "seed": 7, "n_nodes": 40,
          "family": {"name": "sw", "k": 4, "beta": 0.2},
          "optimizer": {"n_restarts": 3}})");
  CHECK(cfg.kind == StudyKind::kMisspecification);
  CHECK(cfg.master_seed == 7);
  CHECK(cfg.n_nodes == 40);
  REQUIRE(cfg.families.size() == 1);
  CHECK(cfg.families[0].family == NetworkFamily::kSmallWorld);
  CHECK(cfg.families[0].k == 4);
  CHECK(cfg.optimizer.n_restarts == 3);
  CHECK(cfg.optimizer.cooling_rate == 0.995);
  CHECK(cfg.true_prior.mu0 == 1.0);
  CHECK(cfg.true_prior.r_sigma == 2.0);

  CHECK_THROWS_AS(parse_study_config(R"({"studyy": "comparative"})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_study_config(R"({"optimizer": {"seed": 3}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_study_config(R"({"true_prior": {"mu": 1}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_study_config("[]"), std::invalid_argument);

  // The echo parses back to an identical configuration.
  const StudyConfig echoed = parse_study_config(study_config_json(cfg));
  CHECK(echoed.kind == cfg.kind);
  CHECK(echoed.master_seed == cfg.master_seed);
  CHECK(echoed.families[0].k == cfg.families[0].k);
  CHECK(study_config_json(echoed) == study_config_json(cfg));
}

TEST_CASE("a failing replication aborts the study") {
  StudyConfig cfg = tiny_config(StudyKind::kComparative);
  cfg.k_clusters = cfg.n_nodes;  // spectral clustering rejects k > n/2
  CHECK_THROWS_AS(run_comparative_study(cfg), std::invalid_argument);
}

TEST_CASE("run_study writes the report bundle deterministically") {
  namespace fs = std::filesystem;
  StudyConfig cfg = tiny_config(StudyKind::kComparative);
  const auto dir = fs::temp_directory_path() / "netdesign_test_study";
  fs::remove_all(dir);
  const auto read = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const std::string summary1 = run_study(cfg, (dir / "a").string());
  const std::string summary2 = run_study(cfg, (dir / "b").string());
  CHECK(summary1 == summary2);
  for (const char* name : {"records.csv", "records.json", "histogram.csv",
                           "config.json"}) {
    CHECK(read(dir / "a" / name) == read(dir / "b" / name));
  }
  CHECK(summary1.find("median_relative_imse") != std::string::npos);
  fs::remove_all(dir);
}
