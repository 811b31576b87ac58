#include "netdesign/config.hpp"

#include <cstdlib>
#include <set>
#include <thread>

#include "json.hpp"

namespace netdesign {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& context) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key)) {
      throw std::invalid_argument("config: unknown key \"" + context + key + "\"");
    }
  }
}

double get_num(const json& obj, const char* key, double fallback) {
  return obj.contains(key) ? obj.at(key).get<double>() : fallback;
}

PriorSpec parse_prior(const json& obj, const std::string& context,
                      const PriorSpec& base) {
  if (!obj.is_object()) {
    throw std::invalid_argument("config: " + context + " must be an object");
  }
  check_keys(obj,
             {"mu0", "sigma0", "r_gamma", "lambda_gamma", "r_sigma",
              "lambda_sigma"},
             context + ".");
  return PriorSpec(get_num(obj, "mu0", base.mu0),
                   get_num(obj, "sigma0", base.sigma0),
                   get_num(obj, "r_gamma", base.r_gamma),
                   get_num(obj, "lambda_gamma", base.lambda_gamma),
                   get_num(obj, "r_sigma", base.r_sigma),
                   get_num(obj, "lambda_sigma", base.lambda_sigma));
}

FamilyConfig parse_family(const json& obj, const std::string& context) {
  if (!obj.is_object() || !obj.contains("name")) {
    throw std::invalid_argument("config: " + context +
                                " must be an object with a \"name\"");
  }
  check_keys(obj, {"name", "p", "k", "beta", "m", "block_sizes", "link_probs"},
             context + ".");
  FamilyConfig fam = default_family_config(
      family_from_name(obj.at("name").get<std::string>()));
  if (obj.contains("p")) fam.p = obj.at("p").get<double>();
  if (obj.contains("k")) fam.k = obj.at("k").get<int>();
  if (obj.contains("beta")) fam.beta = obj.at("beta").get<double>();
  if (obj.contains("m")) fam.m = obj.at("m").get<int>();
  if (obj.contains("block_sizes")) {
    fam.block_sizes = obj.at("block_sizes").get<std::vector<int>>();
  }
  if (obj.contains("link_probs")) {
    const auto& rows = obj.at("link_probs");
    const int k = static_cast<int>(rows.size());
    fam.link_probs.resize(k, k);
    for (int i = 0; i < k; ++i) {
      const auto& row = rows.at(i);
      if (static_cast<int>(row.size()) != k) {
        throw std::invalid_argument("config: " + context +
                                    ".link_probs must be square");
      }
      for (int j = 0; j < k; ++j) fam.link_probs(i, j) = row.at(j).get<double>();
    }
  }
  return fam;
}

StudyKind parse_kind(const std::string& name) {
  if (name == "comparative") return StudyKind::kComparative;
  if (name == "misspec" || name == "misspecification") {
    return StudyKind::kMisspecification;
  }
  if (name == "anova" || name == "factorial") return StudyKind::kFactorial;
  if (name == "ranking") return StudyKind::kRanking;
  throw std::invalid_argument("config: unknown study \"" + name + "\"");
}

const char* kind_name(StudyKind kind) {
  switch (kind) {
    case StudyKind::kComparative: return "comparative";
    case StudyKind::kMisspecification: return "misspec";
    case StudyKind::kFactorial: return "anova";
    case StudyKind::kRanking: return "ranking";
  }
  return "comparative";
}

json prior_json(const PriorSpec& p) {
  return json{{"mu0", p.mu0},
              {"sigma0", p.sigma0},
              {"r_gamma", p.r_gamma},
              {"lambda_gamma", p.lambda_gamma},
              {"r_sigma", p.r_sigma},
              {"lambda_sigma", p.lambda_sigma}};
}

json family_json(const FamilyConfig& f) {
  json j{{"name", family_name(f.family)}};
  switch (f.family) {
    case NetworkFamily::kErdosRenyi:
      j["p"] = f.p;
      break;
    case NetworkFamily::kSmallWorld:
      j["k"] = f.k;
      j["beta"] = f.beta;
      break;
    case NetworkFamily::kPowerLaw:
      j["m"] = f.m;
      break;
    case NetworkFamily::kSbm: {
      j["block_sizes"] = f.block_sizes;
      json rows = json::array();
      for (int i = 0; i < f.link_probs.rows(); ++i) {
        json row = json::array();
        for (int c = 0; c < f.link_probs.cols(); ++c) row.push_back(f.link_probs(i, c));
        rows.push_back(row);
      }
      j["link_probs"] = rows;
      break;
    }
  }
  return j;
}

}  // namespace

StudyConfig parse_study_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: bad JSON: ") + e.what());
  }
  if (!root.is_object()) {
    throw std::invalid_argument("config: top level must be an object");
  }
  check_keys(root,
             {"study", "seed", "workers", "n_nodes", "n_replications",
              "n_mc_draws", "n_baseline_draws", "k_clusters", "family",
              "families", "true_prior", "design_priors", "optimizer", "ranking"},
             "");

  StudyConfig cfg;
  if (root.contains("study")) {
    cfg.kind = parse_kind(root.at("study").get<std::string>());
  }
  if (root.contains("seed")) cfg.master_seed = root.at("seed").get<uint64_t>();
  if (root.contains("workers")) cfg.workers = root.at("workers").get<int>();
  if (root.contains("n_nodes")) cfg.n_nodes = root.at("n_nodes").get<int>();
  if (root.contains("n_replications")) {
    cfg.n_replications = root.at("n_replications").get<int>();
  }
  if (root.contains("n_mc_draws")) cfg.n_mc_draws = root.at("n_mc_draws").get<int>();
  if (root.contains("n_baseline_draws")) {
    cfg.n_baseline_draws = root.at("n_baseline_draws").get<int>();
  }
  if (root.contains("k_clusters")) cfg.k_clusters = root.at("k_clusters").get<int>();
  if (root.contains("true_prior")) {
    cfg.true_prior = parse_prior(root.at("true_prior"), "true_prior", default_prior());
  }
  if (root.contains("family") && root.contains("families")) {
    throw std::invalid_argument("config: give either \"family\" or \"families\"");
  }
  if (root.contains("family")) {
    cfg.families = {parse_family(root.at("family"), "family")};
  } else if (root.contains("families")) {
    cfg.families.clear();
    int idx = 0;
    for (const auto& f : root.at("families")) {
      cfg.families.push_back(
          parse_family(f, "families[" + std::to_string(idx++) + "]"));
    }
    if (cfg.families.empty()) {
      throw std::invalid_argument("config: families must be non-empty");
    }
  }
  if (root.contains("design_priors")) {
    cfg.design_priors.clear();
    int idx = 0;
    for (const auto& p : root.at("design_priors")) {
      cfg.design_priors.push_back(parse_prior(
          p, "design_priors[" + std::to_string(idx++) + "]", cfg.true_prior));
    }
  }
  if (root.contains("optimizer")) {
    const auto& o = root.at("optimizer");
    check_keys(o,
               {"max_iters", "n_restarts", "init_temperature", "cooling_rate",
                "move_mix"},
               "optimizer.");
    if (o.contains("max_iters")) cfg.optimizer.max_iters = o.at("max_iters").get<long>();
    if (o.contains("n_restarts")) {
      cfg.optimizer.n_restarts = o.at("n_restarts").get<int>();
    }
    if (o.contains("init_temperature")) {
      cfg.optimizer.init_temperature = o.at("init_temperature").get<double>();
    }
    if (o.contains("cooling_rate")) {
      cfg.optimizer.cooling_rate = o.at("cooling_rate").get<double>();
    }
    if (o.contains("move_mix")) cfg.optimizer.move_mix = o.at("move_mix").get<double>();
  }
  if (root.contains("ranking")) {
    const auto& r = root.at("ranking");
    check_keys(r, {"n_designs", "n_draws", "n_pairs"}, "ranking.");
    if (r.contains("n_designs")) cfg.ranking.n_designs = r.at("n_designs").get<int>();
    if (r.contains("n_draws")) cfg.ranking.n_draws = r.at("n_draws").get<int>();
    if (r.contains("n_pairs")) cfg.ranking.n_pairs = r.at("n_pairs").get<int>();
  }
  return cfg;
}

std::string study_config_json(const StudyConfig& cfg) {
  json j;
  j["study"] = kind_name(cfg.kind);
  j["seed"] = cfg.master_seed;
  j["workers"] = cfg.workers;
  j["n_nodes"] = cfg.n_nodes;
  j["n_replications"] = cfg.n_replications;
  j["n_mc_draws"] = cfg.n_mc_draws;
  j["n_baseline_draws"] = cfg.n_baseline_draws;
  j["k_clusters"] = cfg.k_clusters;
  j["true_prior"] = prior_json(cfg.true_prior);
  j["design_priors"] = json::array();
  for (const auto& p : cfg.design_priors) j["design_priors"].push_back(prior_json(p));
  j["families"] = json::array();
  for (const auto& f : cfg.families) j["families"].push_back(family_json(f));
  j["optimizer"] = json{{"max_iters", cfg.optimizer.max_iters},
                        {"n_restarts", cfg.optimizer.n_restarts},
                        {"init_temperature", cfg.optimizer.init_temperature},
                        {"cooling_rate", cfg.optimizer.cooling_rate},
                        {"move_mix", cfg.optimizer.move_mix}};
  j["ranking"] = json{{"n_designs", cfg.ranking.n_designs},
                      {"n_draws", cfg.ranking.n_draws},
                      {"n_pairs", cfg.ranking.n_pairs}};
  return j.dump();
}

int resolve_workers(int configured) {
  if (configured > 0) return configured;
  if (const char* env = std::getenv("NETDESIGN_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace netdesign
