#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "netdesign/design.hpp"
#include "netdesign/models.hpp"
#include "netdesign/network.hpp"

namespace netdesign {

enum class NetworkFamily { kErdosRenyi, kSmallWorld, kPowerLaw, kSbm };

std::string family_name(NetworkFamily family);
NetworkFamily family_from_name(const std::string& name);

// Generator parameters for one family. Unused fields are ignored. For the
// blockmodel, empty block_sizes means "four blocks of relative size
// 4:3:2:1 over n nodes" with the default probability matrix.
struct FamilyConfig {
  NetworkFamily family = NetworkFamily::kErdosRenyi;
  double p = 0.06;                   // erdos-renyi edge probability
  int k = 6;                         // small-world ring degree
  double beta = 0.15;                // small-world rewiring probability
  int m = 2;                         // power-law edges per arriving node
  std::vector<int> block_sizes;      // sbm
  Eigen::MatrixXd link_probs;        // sbm

  Network generate(int n_nodes, uint64_t seed) const;
};

FamilyConfig default_family_config(NetworkFamily family);
std::vector<FamilyConfig> all_default_families();

// Hyper-parameters used throughout the studies unless overridden.
PriorSpec default_prior();

// The (mu0, sigma0) mis-specification ladder; the first pair is the truth.
std::vector<std::pair<double, double>> misspecification_mu_grid();
// Full priors built from the ladder, other hyper-parameters from `base`.
std::vector<PriorSpec> misspecification_priors(const PriorSpec& base);

enum class StudyKind { kComparative, kMisspecification, kFactorial, kRanking };

struct RankingConfig {
  int n_designs = 10;
  int n_draws = 2000;
  int n_pairs = 100;
};

struct StudyConfig {
  StudyKind kind = StudyKind::kComparative;
  std::vector<FamilyConfig> families = all_default_families();
  int n_nodes = 100;
  int n_replications = 20;
  PriorSpec true_prior = default_prior();
  std::vector<PriorSpec> design_priors;  // empty: study-dependent default
  int n_mc_draws = 2000;
  int n_baseline_draws = 50;
  OptimizerConfig optimizer;
  int k_clusters = 4;
  uint64_t master_seed = 1;
  int workers = 0;  // 0: NETDESIGN_WORKERS env, else hardware concurrency
  RankingConfig ranking;
};

// One evaluated design. Rows for strategies that do not use a design prior
// carry design_prior_id = -1. The randomized-balanced and stratified rows
// report the strategy's expected risk, approximated by averaging
// n_baseline_draws independent draws, so the baseline row's relative value
// is exactly 1.
struct StudyRecord {
  int replication_id;
  std::string network_family;
  std::string design_strategy;
  int design_prior_id;
  double imse_true;
  double relative_imse;
};

inline const char* kStrategyOptimal = "optimal";
inline const char* kStrategyBalanced = "randomized-balanced";
inline const char* kStrategyStratified = "stratified-spectral";

// Three designs per replication (optimal under design_priors[0], balanced,
// stratified), evaluated exactly under the true prior. Deterministic in
// master_seed regardless of worker count.
std::vector<StudyRecord> run_comparative_study(const StudyConfig& cfg);

// Optimal designs under every design prior plus one balanced row per
// replication: 10R + R rows per family for the default grid.
std::vector<StudyRecord> run_misspecification_study(const StudyConfig& cfg);

// Complete strategy x design-prior x family x replication factorial; feeds
// the variance decomposition.
std::vector<StudyRecord> run_factorial_study(const StudyConfig& cfg);

// Per-factor mean sums of squares. Factor rows use the marginal
// between-level sum of squares; the residual row is the remainder of the
// total, so the rows always add back to the total sum of squares. Intended
// for (near-)balanced factorial record sets.
//
// The response is imse_true by default. The factorial study's reported table
// uses the relative response instead: absolute risks scale with the network
// family (degree variance drives the bias term), so the family factor would
// otherwise measure scale rather than design quality.
enum class AnovaResponse { kImseTrue, kRelativeImse };
struct AnovaRow {
  std::string factor;
  int df;
  double ss;
  double mss;
};
struct AnovaTable {
  std::vector<AnovaRow> rows;  // strategy, design_prior, network_family, residual
  double total_ss;
};
AnovaTable anova_mss(const std::vector<StudyRecord>& records,
                     AnovaResponse response = AnovaResponse::kImseTrue);

// Draws two independent Monte-Carlo risk estimates per design, n_pairs times,
// and reports how often both estimates order a design pair the same way as
// the exact integrated risk. Pairs whose exact values agree to 1e-12
// relative are excluded from the denominator.
struct RankingStabilityReport {
  int n_pairs;
  double concordance;
  long comparisons;
  long concordant;
};
RankingStabilityReport ranking_stability(const Network& net,
                                         const PriorSpec& prior,
                                         const std::vector<Assignment>& designs,
                                         int n_draws, int n_pairs,
                                         uint64_t seed);

// Builds the design roster for the ranking study: a mix of optimized,
// balanced, and stratified assignments on one network.
std::vector<Assignment> ranking_design_roster(const Network& net,
                                              const StudyConfig& cfg);

// Runs the configured study, writes reports into out_dir (records.csv,
// records.json, histogram.csv, config.json; anova.csv or ranking.* where
// applicable), and returns a small JSON summary.
std::string run_study(const StudyConfig& cfg, const std::string& out_dir);

}  // namespace netdesign
