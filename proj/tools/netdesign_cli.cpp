// netdesign command-line tool. Talks to the core exclusively through the C
// API in netdesign.h. Exit codes: 0 success, 2 validation error, 1 runtime
// failure.

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "netdesign.h"

namespace {

using nlohmann::json;

int exit_code_for(int status) {
  if (status == ND_OK) return 0;
  return status == ND_ERR_INVALID ? 2 : 1;
}

[[noreturn]] void fail(int status, const std::string& context) {
  std::cerr << "netdesign: " << context;
  const char* msg = nd_last_error();
  if (msg && *msg) std::cerr << ": " << msg;
  std::cerr << "\n";
  std::exit(exit_code_for(status == ND_OK ? ND_ERR_RUNTIME : status));
}

void check(int status, const std::string& context) {
  if (status != ND_OK) fail(status, context);
}

[[noreturn]] void fail_usage(const std::string& message) {
  std::cerr << "netdesign: " << message << "\n";
  std::exit(2);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_usage("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail_usage("cannot open output file " + path);
  out << text;
}

json parse_json_or_die(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail_usage(what + ": " + e.what());
  }
}

// Assignment input: a path to a JSON array of 0/1, or the array inline.
std::vector<int> load_assignment(const std::string& spec) {
  std::string text = spec;
  if (!spec.empty() && spec[0] != '[') text = read_file(spec);
  const json j = parse_json_or_die(text, "assignment");
  if (!j.is_array()) fail_usage("assignment must be a JSON array of 0/1");
  std::vector<int> z;
  for (const auto& v : j) z.push_back(v.get<int>());
  return z;
}

struct NetworkHandle {
  nd_network* net = nullptr;
  ~NetworkHandle() { nd_network_free(net); }
};

void load_network(const std::string& path, NetworkHandle& handle) {
  check(nd_network_read(path.c_str(), &handle.net), "reading network " + path);
}

std::string json_compact(const json& j) { return j.dump(); }

// Doubles are emitted through the shortest round-trip representation; stable
// across runs.
json double_json(double v) { return json(v); }

struct PriorFlags {
  double mu0 = 1.0, sigma0 = 0.5;
  double r_gamma = 3.0, lambda_gamma = 1.0;
  double r_sigma = 2.0, lambda_sigma = 1.0;
  std::array<CLI::Option*, 6> opts{};

  void attach(CLI::App* cmd) {
    opts[0] = cmd->add_option("--mu0", mu0, "Prior mean of the latent mean")
                  ->capture_default_str();
    opts[1] = cmd->add_option("--sigma0", sigma0, "Prior sd of the latent mean")
                  ->capture_default_str();
    opts[2] = cmd->add_option("--r-gamma", r_gamma,
                              "Inv-Gamma shape for gamma2 (> 1)")
                  ->capture_default_str();
    opts[3] = cmd->add_option("--lambda-gamma", lambda_gamma,
                              "Inv-Gamma scale for gamma2")
                  ->capture_default_str();
    opts[4] = cmd->add_option("--r-sigma", r_sigma,
                              "Inv-Gamma shape for sigma2 (> 1)")
                  ->capture_default_str();
    opts[5] = cmd->add_option("--lambda-sigma", lambda_sigma,
                              "Inv-Gamma scale for sigma2")
                  ->capture_default_str();
  }

  nd_prior to_c() const {
    return nd_prior{mu0, sigma0, r_gamma, lambda_gamma, r_sigma, lambda_sigma};
  }

  // Config fills whatever the command line left at its default.
  void apply_config(const json& cfg) {
    if (!cfg.contains("prior")) return;
    const auto& p = cfg.at("prior");
    const auto set = [&](int i, const char* key, double& field) {
      if (p.contains(key) && opts[i]->count() == 0) field = p.at(key).get<double>();
    };
    set(0, "mu0", mu0);
    set(1, "sigma0", sigma0);
    set(2, "r_gamma", r_gamma);
    set(3, "lambda_gamma", lambda_gamma);
    set(4, "r_sigma", r_sigma);
    set(5, "lambda_sigma", lambda_sigma);
  }
};

struct OptimizerFlags {
  int64_t max_iters = 0;
  int n_restarts = 5;
  double init_temperature = 0.0;
  double cooling_rate = 0.995;
  double move_mix = 0.5;
  std::array<CLI::Option*, 5> opts{};

  void attach(CLI::App* cmd) {
    opts[0] = cmd->add_option("--max-iters", max_iters,
                              "Annealing iterations per restart (0: 200*n)")
                  ->capture_default_str();
    opts[1] = cmd->add_option("--restarts", n_restarts,
                              "Independent annealing restarts")
                  ->capture_default_str();
    opts[2] = cmd->add_option("--init-temp", init_temperature,
                              "Initial temperature (0: objective at the random "
                              "start)")
                  ->capture_default_str();
    opts[3] = cmd->add_option("--cooling", cooling_rate,
                              "Geometric cooling rate in (0,1)")
                  ->capture_default_str();
    opts[4] = cmd->add_option("--move-mix", move_mix,
                              "Probability of a swap move (vs single flip)")
                  ->capture_default_str();
  }

  void apply_config(const json& cfg) {
    if (!cfg.contains("optimizer")) return;
    const auto& o = cfg.at("optimizer");
    if (o.contains("max_iters") && opts[0]->count() == 0) {
      max_iters = o.at("max_iters").get<int64_t>();
    }
    if (o.contains("n_restarts") && opts[1]->count() == 0) {
      n_restarts = o.at("n_restarts").get<int>();
    }
    if (o.contains("init_temperature") && opts[2]->count() == 0) {
      init_temperature = o.at("init_temperature").get<double>();
    }
    if (o.contains("cooling_rate") && opts[3]->count() == 0) {
      cooling_rate = o.at("cooling_rate").get<double>();
    }
    if (o.contains("move_mix") && opts[4]->count() == 0) {
      move_mix = o.at("move_mix").get<double>();
    }
  }

  nd_optimizer_config to_c(uint64_t seed) const {
    return nd_optimizer_config{max_iters, n_restarts, init_temperature,
                               cooling_rate, move_mix, seed};
  }
};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  const json cfg = parse_json_or_die(read_file(path), "config " + path);
  if (!cfg.is_object()) fail_usage("config must be a JSON object");
  return cfg;
}

// ---- gen-network ----

struct GenArgs {
  std::string family;
  int n = 100;
  double p = 0.06;
  int k = 6;
  double beta = 0.15;
  int m = 2;
  std::string blocks;
  std::string probs;
  uint64_t seed = 1;
  std::string output;
  bool as_json = false;
  std::string config;
  std::array<CLI::Option*, 7> opts{};  // family, n, p, k, beta, m, seed

  void apply_config(const json& cfg) {
    const auto take = [&](int i, auto& field, const json& obj, const char* key) {
      using T = std::remove_reference_t<decltype(field)>;
      if (obj.contains(key) && opts[i]->count() == 0) field = obj.at(key).get<T>();
    };
    take(6, seed, cfg, "seed");
    take(1, n, cfg, "n_nodes");
    if (!cfg.contains("family")) return;
    const auto& f = cfg.at("family");
    take(0, family, f, "name");
    take(2, p, f, "p");
    take(3, k, f, "k");
    take(4, beta, f, "beta");
    take(5, m, f, "m");
  }
};

int run_gen_network(const GenArgs& a) {
  if (a.family.empty()) fail_usage("gen-network requires --family (or a config)");
  NetworkHandle handle;
  int status;
  if (a.family == "er" || a.family == "erdos-renyi") {
    status = nd_network_gen_erdos_renyi(a.n, a.p, a.seed, &handle.net);
  } else if (a.family == "sw" || a.family == "small-world") {
    status = nd_network_gen_small_world(a.n, a.k, a.beta, a.seed, &handle.net);
  } else if (a.family == "pl" || a.family == "power-law") {
    status = nd_network_gen_power_law(a.n, a.m, a.seed, &handle.net);
  } else if (a.family == "sbm") {
    std::vector<int> sizes;
    {
      std::stringstream ss(a.blocks);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) sizes.push_back(std::atoi(tok.c_str()));
      }
    }
    if (sizes.empty()) fail_usage("sbm requires --blocks, e.g. --blocks 25,25,25,25");
    std::vector<double> probs;
    if (!a.probs.empty()) {
      const json pj = parse_json_or_die(
          a.probs[0] == '[' ? a.probs : read_file(a.probs), "--probs");
      for (const auto& row : pj) {
        for (const auto& v : row) probs.push_back(v.get<double>());
      }
    } else {
      const size_t kb = sizes.size();
      probs.assign(kb * kb, 0.02);
      for (size_t b = 0; b < kb; ++b) probs[b * kb + b] = 0.15;
    }
    if (probs.size() != sizes.size() * sizes.size()) {
      fail_usage("--probs must be a k x k matrix matching --blocks");
    }
    status = nd_network_gen_sbm(sizes.data(), static_cast<int>(sizes.size()),
                                probs.data(), a.seed, &handle.net);
  } else {
    fail_usage("unknown family \"" + a.family +
               "\" (expected er|sw|pl|sbm or long names)");
  }
  check(status, "generating network");
  if (a.output.empty()) fail_usage("gen-network requires -o/--output");
  check(nd_network_write(handle.net, a.output.c_str(), a.as_json ? 1 : 0),
        "writing " + a.output);
  std::printf("n=%d edges=%d mean_degree=%g\n",
              nd_network_node_count(handle.net),
              nd_network_edge_count(handle.net),
              nd_network_mean_degree(handle.net));
  return 0;
}

// ---- design ----

struct DesignArgs {
  std::string network;
  std::string strategy = "optimal";
  int k_clusters = 4;
  int n_mc_draws = 2000;
  uint64_t seed = 1;
  std::string output;
  std::string config;
};

int run_design(const DesignArgs& a, const PriorFlags& prior,
               const OptimizerFlags& opt) {
  NetworkHandle handle;
  load_network(a.network, handle);
  const int n = nd_network_node_count(handle.net);
  std::vector<int> z(n);
  double objective = 0.0;
  const nd_prior cprior = prior.to_c();

  if (a.strategy == "balanced") {
    check(nd_design_balanced(n, a.seed, z.data()), "balanced design");
    check(nd_imse_closed_form_normal(handle.net, z.data(), &cprior, &objective),
          "evaluating design");
  } else if (a.strategy == "stratified") {
    check(nd_design_stratified(handle.net, a.k_clusters, a.seed, z.data()),
          "stratified design");
    check(nd_imse_closed_form_normal(handle.net, z.data(), &cprior, &objective),
          "evaluating design");
  } else if (a.strategy == "optimal") {
    const nd_optimizer_config cfg = opt.to_c(a.seed);
    check(nd_design_optimal(handle.net, &cprior, a.n_mc_draws, &cfg, z.data(),
                            nullptr),
          "optimal design");
    check(nd_imse_closed_form_normal(handle.net, z.data(), &cprior, &objective),
          "evaluating design");
  } else if (a.strategy == "point-prior") {
    const json cfg = load_config(a.config);
    std::vector<nd_normal_params> grid;
    std::vector<double> weights;
    if (cfg.contains("point_prior_grid")) {
      const auto& g = cfg.at("point_prior_grid");
      for (const auto& p : g.at("params")) {
        grid.push_back(nd_normal_params{p.at("mu").get<double>(),
                                        p.at("sigma2").get<double>(),
                                        p.at("gamma2").get<double>()});
      }
      weights = g.at("weights").get<std::vector<double>>();
    } else {
      fail_usage(
          "point-prior strategy needs --config with a point_prior_grid section");
    }
    const nd_optimizer_config ocfg = opt.to_c(a.seed);
    check(nd_design_point_prior(handle.net, grid.data(), weights.data(),
                                static_cast<int>(grid.size()), &ocfg, z.data(),
                                &objective),
          "point-prior design");
  } else {
    fail_usage("unknown strategy \"" + a.strategy +
               "\" (optimal|balanced|stratified|point-prior)");
  }

  json out;
  out["z"] = z;
  out["objective"] = double_json(objective);
  out["strategy"] = a.strategy;
  out["seed"] = a.seed;
  write_output(json_compact(out), a.output);
  return 0;
}

// ---- evaluate ----

struct EvaluateArgs {
  std::string network;
  std::string assignment;
  std::string metric = "mse-normal";
  bool decompose = false;
  std::string explicit_cov;
  std::string weights;
  double mu = 1.0, sigma2 = 1.0, gamma2 = 1.0;
  double r = 1.0, lambda = 1.0;
  int n_draws = 10000;
  uint64_t seed = 1;
  std::string output;
  std::string config;
  std::array<CLI::Option*, 5> opts{};  // mu, sigma2, gamma2, r, lambda

  void apply_config(const json& cfg) {
    const auto take = [&](int i, double& field, const json& obj, const char* key) {
      if (obj.contains(key) && opts[i]->count() == 0) field = obj.at(key).get<double>();
    };
    if (cfg.contains("model")) {
      const auto& m = cfg.at("model");
      take(0, mu, m, "mu");
      take(1, sigma2, m, "sigma2");
      take(2, gamma2, m, "gamma2");
    }
    if (cfg.contains("pg_model")) {
      const auto& m = cfg.at("pg_model");
      take(3, r, m, "r");
      take(4, lambda, m, "lambda");
    }
  }
};

int run_evaluate(const EvaluateArgs& a, const PriorFlags& prior) {
  json out;

  if (!a.explicit_cov.empty()) {
    const json cj = parse_json_or_die(
        a.explicit_cov[0] == '[' ? a.explicit_cov : read_file(a.explicit_cov),
        "--explicit-cov");
    const int n = static_cast<int>(cj.size());
    std::vector<double> cov;
    for (const auto& row : cj) {
      if (static_cast<int>(row.size()) != n) {
        fail_usage("--explicit-cov must be a square matrix");
      }
      for (const auto& v : row) cov.push_back(v.get<double>());
    }
    std::vector<double> w;
    if (!a.weights.empty()) {
      std::stringstream ss(a.weights);
      std::string tok;
      while (std::getline(ss, tok, ',')) w.push_back(std::atof(tok.c_str()));
    } else if (!a.assignment.empty()) {
      const auto z = load_assignment(a.assignment);
      int n1 = 0;
      for (int v : z) n1 += v;
      const int n0 = static_cast<int>(z.size()) - n1;
      if (n1 == 0 || n0 == 0) fail_usage("degenerate assignment");
      for (int v : z) w.push_back(v ? 1.0 / n1 : -1.0 / n0);
    } else {
      fail_usage("--explicit-cov needs --weights or --assignment");
    }
    if (static_cast<int>(w.size()) != n) {
      fail_usage("weights length must match the covariance dimension");
    }
    double value = 0.0;
    check(nd_contrast_variance(n, cov.data(), w.data(), &value),
          "contrast variance");
    out["contrast_variance"] = double_json(value);
    write_output(json_compact(out), a.output);
    return 0;
  }

  NetworkHandle handle;
  load_network(a.network, handle);
  if (a.assignment.empty()) fail_usage("evaluate requires --assignment");
  const auto z = load_assignment(a.assignment);
  if (static_cast<int>(z.size()) != nd_network_node_count(handle.net)) {
    fail_usage("assignment length must equal the node count");
  }

  if (a.metric == "mse-normal") {
    const nd_normal_params params{a.mu, a.sigma2, a.gamma2};
    double value = 0.0;
    check(nd_mse_normal(handle.net, z.data(), &params, &value), "mse");
    out["mse_normal"] = double_json(value);
    if (a.decompose) {
      nd_mse_decomposition d;
      check(nd_mse_decompose_normal(handle.net, z.data(), &params, &d),
            "decomposition");
      out["decomposition"] = {
          {"bias_sq", double_json(d.bias_sq)},
          {"group_size_var", double_json(d.group_size_var)},
          {"net_var_treated", double_json(d.net_var_treated)},
          {"net_var_control", double_json(d.net_var_control)},
          {"net_var_cross", double_json(d.net_var_cross)},
          {"total", double_json(d.total)},
      };
    }
  } else if (a.metric == "mse-poisson-gamma") {
    const nd_pg_params params{a.r, a.lambda};
    double value = 0.0;
    check(nd_mse_poisson_gamma(handle.net, z.data(), &params, &value), "mse");
    out["mse_poisson_gamma"] = double_json(value);
  } else if (a.metric == "imse-closed-form") {
    const nd_prior cprior = prior.to_c();
    double value = 0.0;
    check(nd_imse_closed_form_normal(handle.net, z.data(), &cprior, &value),
          "integrated mse");
    out["imse_closed_form"] = double_json(value);
  } else if (a.metric == "imse-mc") {
    const nd_prior cprior = prior.to_c();
    double value = 0.0, std_error = 0.0;
    check(nd_imse_mc(handle.net, z.data(), &cprior, a.n_draws, a.seed, &value,
                     &std_error),
          "integrated mse");
    out["imse_mc"] = double_json(value);
    out["std_error"] = double_json(std_error);
    out["n_draws"] = a.n_draws;
  } else {
    fail_usage("unknown metric \"" + a.metric + "\"");
  }
  write_output(json_compact(out), a.output);
  return 0;
}

// ---- simulate ----

struct SimulateArgs {
  std::string study;
  std::string config;
  std::string out_dir = "study_out";
  std::optional<uint64_t> seed;
  std::optional<int> workers;
  std::optional<int> n_nodes;
  std::optional<int> n_replications;
  std::string family;
};

int run_simulate(const SimulateArgs& a) {
  json cfg = load_config(a.config);
  if (!a.study.empty()) cfg["study"] = a.study;
  if (a.seed) cfg["seed"] = *a.seed;
  if (a.workers) cfg["workers"] = *a.workers;
  if (a.n_nodes) cfg["n_nodes"] = *a.n_nodes;
  if (a.n_replications) cfg["n_replications"] = *a.n_replications;
  if (!a.family.empty()) {
    cfg.erase("families");
    cfg["family"] = {{"name", a.family}};
  }
  char* summary = nullptr;
  check(nd_run_study(cfg.dump().c_str(), a.out_dir.c_str(), &summary),
        "running study");
  const json s = parse_json_or_die(summary ? summary : "{}", "summary");
  nd_string_free(summary);
  if (s.contains("concordance")) {
    std::printf("ranking stability: concordance=%g over %lld comparisons\n",
                s.at("concordance").get<double>(),
                static_cast<long long>(s.at("comparisons").get<int64_t>()));
  } else if (s.contains("median_relative_imse")) {
    std::string line = "median relative iMSE:";
    for (const auto& [strategy, value] : s.at("median_relative_imse").items()) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), " %s=%.4f", strategy.c_str(),
                    value.get<double>());
      line += buf;
    }
    std::printf("%s\n", line.c_str());
  }
  std::printf("reports written to %s\n", a.out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "netdesign: treatment-assignment design for experiments with "
      "network-correlated outcomes"};
  app.require_subcommand(1);

  // gen-network
  GenArgs gen;
  auto* gen_cmd = app.add_subcommand(
      "gen-network", "Generate a random network and write it to a file");
  gen.opts[0] =
      gen_cmd->add_option("--family", gen.family,
                          "er|sw|pl|sbm (or erdos-renyi|small-world|power-law|sbm)");
  gen.opts[1] = gen_cmd->add_option("--n", gen.n, "Node count")->capture_default_str();
  gen.opts[2] =
      gen_cmd->add_option("--p", gen.p, "Edge probability (er)")->capture_default_str();
  gen.opts[3] =
      gen_cmd->add_option("--k", gen.k, "Even ring degree (sw)")->capture_default_str();
  gen.opts[4] = gen_cmd->add_option("--beta", gen.beta, "Rewiring probability (sw)")
                    ->capture_default_str();
  gen.opts[5] = gen_cmd->add_option("--m", gen.m, "Edges per arriving node (pl)")
                    ->capture_default_str();
  gen_cmd->add_option("--blocks", gen.blocks, "Comma-separated block sizes (sbm)");
  gen_cmd->add_option("--probs", gen.probs,
                      "JSON k x k link-probability matrix or a path to one (sbm)");
  gen.opts[6] =
      gen_cmd->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  gen_cmd->add_option("-o,--output", gen.output, "Output path")->required();
  gen_cmd->add_flag("--json", gen.as_json, "Write the JSON form instead of text");
  gen_cmd->add_option("--config", gen.config,
                      "JSON config with family/seed defaults (flags win)");

  // design
  DesignArgs design;
  PriorFlags design_prior;
  OptimizerFlags design_opt;
  auto* design_cmd =
      app.add_subcommand("design", "Produce a treatment assignment");
  design_cmd->add_option("--network", design.network, "Network file")->required();
  design_cmd
      ->add_option("--strategy", design.strategy,
                   "optimal|balanced|stratified|point-prior")
      ->capture_default_str();
  design_cmd->add_option("--k-clusters", design.k_clusters, "Strata (stratified)")
      ->capture_default_str();
  design_cmd
      ->add_option("--n-draws", design.n_mc_draws,
                   "Monte-Carlo draws for the optimal objective")
      ->capture_default_str();
  design_cmd->add_option("--seed", design.seed, "Seed")->capture_default_str();
  design_cmd->add_option("-o,--output", design.output, "Output path (default stdout)");
  design_cmd->add_option("--config", design.config,
                         "JSON config (point_prior_grid, prior overrides)");
  design_prior.attach(design_cmd);
  design_opt.attach(design_cmd);

  // evaluate
  EvaluateArgs eval;
  PriorFlags eval_prior;
  auto* eval_cmd =
      app.add_subcommand("evaluate", "Evaluate the risk of an assignment");
  eval_cmd->add_option("--network", eval.network, "Network file");
  eval_cmd->add_option("--assignment", eval.assignment,
                       "JSON array of 0/1, inline or a path");
  eval_cmd
      ->add_option("--metric", eval.metric,
                   "mse-normal|mse-poisson-gamma|imse-closed-form|imse-mc")
      ->capture_default_str();
  eval_cmd->add_flag("--decompose", eval.decompose,
                     "Include the additive decomposition (mse-normal)");
  eval_cmd->add_option("--explicit-cov", eval.explicit_cov,
                       "JSON covariance matrix (inline or path); computes w'Cw");
  eval_cmd->add_option("--weights", eval.weights,
                       "Comma-separated contrast weights for --explicit-cov");
  eval.opts[0] =
      eval_cmd->add_option("--mu", eval.mu, "Latent mean")->capture_default_str();
  eval.opts[1] = eval_cmd->add_option("--sigma2", eval.sigma2, "Latent variance")
                     ->capture_default_str();
  eval.opts[2] =
      eval_cmd->add_option("--gamma2", eval.gamma2, "Conditional outcome variance")
          ->capture_default_str();
  eval.opts[3] = eval_cmd->add_option("--r", eval.r, "Gamma shape (poisson-gamma)")
                     ->capture_default_str();
  eval.opts[4] =
      eval_cmd->add_option("--lambda", eval.lambda, "Scale multiplier (poisson-gamma)")
          ->capture_default_str();
  eval_cmd->add_option("--n-draws", eval.n_draws, "Draws for imse-mc")
      ->capture_default_str();
  eval_cmd->add_option("--seed", eval.seed, "Seed for imse-mc")
      ->capture_default_str();
  eval_cmd->add_option("-o,--output", eval.output, "Output path (default stdout)");
  eval_cmd->add_option("--config", eval.config,
                       "JSON config with model/prior defaults (flags win)");
  eval_prior.attach(eval_cmd);

  // simulate
  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand(
      "simulate", "Run a simulation study and write CSV/JSON reports");
  sim_cmd->add_option("--study", sim.study,
                      "comparative|misspec|anova|ranking (default from config)");
  sim_cmd->add_option("--config", sim.config, "Study configuration JSON");
  sim_cmd->add_option("-o,--out-dir", sim.out_dir, "Report directory")
      ->capture_default_str();
  uint64_t sim_seed = 0;
  auto* seed_opt = sim_cmd->add_option("--seed", sim_seed, "Master seed");
  int sim_workers = 0;
  auto* workers_opt =
      sim_cmd->add_option("--workers", sim_workers,
                          "Worker threads (0: NETDESIGN_WORKERS or hardware)");
  int sim_nodes = 0;
  auto* nodes_opt = sim_cmd->add_option("--n", sim_nodes, "Nodes per network");
  int sim_reps = 0;
  auto* reps_opt =
      sim_cmd->add_option("--reps", sim_reps, "Replications per family");
  sim_cmd->add_option("--family", sim.family,
                      "Restrict to one family (er|sw|pl|sbm)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad arguments are validation errors
  }

  try {
    if (gen_cmd->parsed()) {
      gen.apply_config(load_config(gen.config));
      return run_gen_network(gen);
    }
    if (design_cmd->parsed()) {
      const json cfg = load_config(design.config);
      design_prior.apply_config(cfg);
      design_opt.apply_config(cfg);
      return run_design(design, design_prior, design_opt);
    }
    if (eval_cmd->parsed()) {
      const json cfg = load_config(eval.config);
      eval.apply_config(cfg);
      eval_prior.apply_config(cfg);
      return run_evaluate(eval, eval_prior);
    }
    if (sim_cmd->parsed()) {
      if (*seed_opt) sim.seed = sim_seed;
      if (*workers_opt) sim.workers = sim_workers;
      if (*nodes_opt) sim.n_nodes = sim_nodes;
      if (*reps_opt) sim.n_replications = sim_reps;
      return run_simulate(sim);
    }
  } catch (const std::exception& e) {
    std::cerr << "netdesign: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
