#include "netdesign.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "netdesign/config.hpp"
#include "netdesign/design.hpp"
#include "netdesign/errors.hpp"
#include "netdesign/models.hpp"
#include "netdesign/network.hpp"
#include "netdesign/risk.hpp"
#include "netdesign/study.hpp"

using namespace netdesign;

struct nd_network {
  explicit nd_network(Network n) : net(std::move(n)) {}
  Network net;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return ND_OK;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return ND_ERR_INVALID;
  } catch (const IoError& e) {
    g_last_error = e.what();
    return ND_ERR_IO;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ND_ERR_RUNTIME;
  }
}

Assignment assignment_from(const nd_network* net, const int* z) {
  if (!net || !z) throw std::invalid_argument("null network or assignment");
  std::vector<int> v(z, z + net->net.node_count());
  return Assignment::from_ints(v);
}

NormalModelParams normal_params_from(const nd_normal_params* p) {
  if (!p) throw std::invalid_argument("null model parameters");
  return NormalModelParams(p->mu, p->sigma2, p->gamma2);
}

PriorSpec prior_from(const nd_prior* p) {
  if (!p) throw std::invalid_argument("null prior");
  return PriorSpec(p->mu0, p->sigma0, p->r_gamma, p->lambda_gamma, p->r_sigma,
                   p->lambda_sigma);
}

OptimizerConfig optimizer_from(const nd_optimizer_config* cfg) {
  OptimizerConfig out;
  if (!cfg) return out;
  out.max_iters = cfg->max_iters;
  out.n_restarts = cfg->n_restarts;
  out.init_temperature = cfg->init_temperature;
  out.cooling_rate = cfg->cooling_rate;
  out.move_mix = cfg->move_mix;
  out.seed = cfg->seed;
  return out;
}

void copy_assignment(const Assignment& a, int* z_out) {
  for (int i = 0; i < a.size(); ++i) z_out[i] = a.treated(i) ? 1 : 0;
}

}  // namespace

extern "C" {

const char* nd_last_error(void) { return g_last_error.c_str(); }

int nd_network_from_edges(int n, const int* endpoints, int n_edges,
                          nd_network** out) {
  return guarded([&] {
    if (!out || (n_edges > 0 && !endpoints)) {
      throw std::invalid_argument("null output or edge buffer");
    }
    std::vector<std::pair<int, int>> pairs(n_edges);
    for (int e = 0; e < n_edges; ++e) {
      pairs[e] = {endpoints[2 * e], endpoints[2 * e + 1]};
    }
    *out = new nd_network(from_edge_list(n, pairs));
  });
}

int nd_network_gen_erdos_renyi(int n, double p, uint64_t seed, nd_network** out) {
  return guarded([&] {
    if (!out) throw std::invalid_argument("null output");
    *out = new nd_network(gen_erdos_renyi(n, p, seed));
  });
}

int nd_network_gen_small_world(int n, int k, double beta, uint64_t seed,
                               nd_network** out) {
  return guarded([&] {
    if (!out) throw std::invalid_argument("null output");
    *out = new nd_network(gen_small_world(n, k, beta, seed));
  });
}

int nd_network_gen_power_law(int n, int m, uint64_t seed, nd_network** out) {
  return guarded([&] {
    if (!out) throw std::invalid_argument("null output");
    *out = new nd_network(gen_power_law(n, m, seed));
  });
}

int nd_network_gen_sbm(const int* block_sizes, int n_blocks,
                       const double* link_probs, uint64_t seed,
                       nd_network** out) {
  return guarded([&] {
    if (!out || !block_sizes || !link_probs || n_blocks < 1) {
      throw std::invalid_argument("bad blockmodel arguments");
    }
    std::vector<int> sizes(block_sizes, block_sizes + n_blocks);
    Eigen::MatrixXd probs(n_blocks, n_blocks);
    for (int i = 0; i < n_blocks; ++i) {
      for (int j = 0; j < n_blocks; ++j) {
        probs(i, j) = link_probs[i * n_blocks + j];
      }
    }
    *out = new nd_network(gen_sbm(sizes, probs, seed));
  });
}

int nd_network_read(const char* path, nd_network** out) {
  return guarded([&] {
    if (!out || !path) throw std::invalid_argument("null path or output");
    *out = new nd_network(read_network(path));
  });
}

int nd_network_write(const nd_network* net, const char* path, int format) {
  return guarded([&] {
    if (!net || !path) throw std::invalid_argument("null network or path");
    write_network(net->net, path,
                  format == 1 ? NetworkFormat::kJson : NetworkFormat::kEdgeList);
  });
}

int nd_network_node_count(const nd_network* net) {
  return net ? net->net.node_count() : 0;
}

int nd_network_edge_count(const nd_network* net) {
  return net ? net->net.edge_count() : 0;
}

double nd_network_mean_degree(const nd_network* net) {
  return net ? net->net.mean_degree() : 0.0;
}

void nd_network_free(nd_network* net) { delete net; }

int nd_mse_normal(const nd_network* net, const int* z,
                  const nd_normal_params* params, double* out) {
  return guarded([&] {
    if (!out) throw std::invalid_argument("null output");
    *out = mse_normal(normal_params_from(params), net->net,
                      assignment_from(net, z));
  });
}

int nd_mse_poisson_gamma(const nd_network* net, const int* z,
                         const nd_pg_params* params, double* out) {
  return guarded([&] {
    if (!out || !params) throw std::invalid_argument("null parameters or output");
    *out = mse_poisson_gamma(PoissonGammaParams(params->r, params->lambda),
                             net->net, assignment_from(net, z));
  });
}

int nd_mse_decompose_normal(const nd_network* net, const int* z,
                            const nd_normal_params* params,
                            nd_mse_decomposition* out) {
  return guarded([&] {
    if (!out) throw std::invalid_argument("null output");
    const MseDecomposition d = mse_decomposition_normal(
        normal_params_from(params), net->net, assignment_from(net, z));
    out->bias_sq = d.bias_sq;
    out->group_size_var = d.group_size_var;
    out->net_var_treated = d.net_var_treated;
    out->net_var_control = d.net_var_control;
    out->net_var_cross = d.net_var_cross;
    out->total = d.total;
  });
}

int nd_imse_closed_form_normal(const nd_network* net, const int* z,
                               const nd_prior* prior, double* out) {
  return guarded([&] {
    if (!out) throw std::invalid_argument("null output");
    *out = imse_closed_form_normal(prior_from(prior), net->net,
                                   assignment_from(net, z));
  });
}

int nd_imse_mc(const nd_network* net, const int* z, const nd_prior* prior,
               int n_draws, uint64_t seed, double* value, double* std_error) {
  return guarded([&] {
    if (!value) throw std::invalid_argument("null output");
    const ImseEstimate est =
        imse_mc(prior_from(prior), net->net, assignment_from(net, z), n_draws, seed);
    *value = est.value;
    if (std_error) *std_error = est.std_error;
  });
}

int nd_contrast_variance(int n, const double* cov, const double* w, double* out) {
  return guarded([&] {
    if (!cov || !w || !out || n < 1) {
      throw std::invalid_argument("bad contrast-variance arguments");
    }
    Eigen::MatrixXd c(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) c(i, j) = cov[i * n + j];
    }
    Eigen::VectorXd wv(n);
    for (int i = 0; i < n; ++i) wv(i) = w[i];
    *out = variance_of_contrast(wv, c);
  });
}

void nd_optimizer_config_default(nd_optimizer_config* cfg) {
  if (!cfg) return;
  const OptimizerConfig d;
  cfg->max_iters = d.max_iters;
  cfg->n_restarts = d.n_restarts;
  cfg->init_temperature = d.init_temperature;
  cfg->cooling_rate = d.cooling_rate;
  cfg->move_mix = d.move_mix;
  cfg->seed = d.seed;
}

int nd_design_balanced(int n, uint64_t seed, int* z_out) {
  return guarded([&] {
    if (!z_out) throw std::invalid_argument("null output");
    Rng rng(seed);
    copy_assignment(randomized_balanced(n, rng), z_out);
  });
}

int nd_design_stratified(const nd_network* net, int k_clusters, uint64_t seed,
                         int* z_out) {
  return guarded([&] {
    if (!net || !z_out) throw std::invalid_argument("null network or output");
    Rng rng(seed);
    copy_assignment(stratified_spectral(net->net, k_clusters, rng), z_out);
  });
}

int nd_design_optimal(const nd_network* net, const nd_prior* prior,
                      int n_mc_draws, const nd_optimizer_config* cfg,
                      int* z_out, double* objective) {
  return guarded([&] {
    if (!net || !z_out) throw std::invalid_argument("null network or output");
    const OptimizerConfig opt = optimizer_from(cfg);
    auto quad = std::make_shared<const NetworkQuadratics>(net->net);
    const auto obj = QuadraticMseObjective::for_imse_mc(
        quad, prior_from(prior), n_mc_draws, derive_seed(opt.seed, 0x6f626a));
    const DesignResult res =
        optimize_assignment(obj, net->net.node_count(), opt);
    copy_assignment(res.assignment, z_out);
    if (objective) *objective = res.objective;
  });
}

int nd_design_point_prior(const nd_network* net, const nd_normal_params* grid,
                          const double* weights, int k,
                          const nd_optimizer_config* cfg, int* z_out,
                          double* objective) {
  return guarded([&] {
    if (!net || !grid || !weights || !z_out || k < 1) {
      throw std::invalid_argument("bad point-prior arguments");
    }
    PointPriorGrid g;
    for (int i = 0; i < k; ++i) {
      g.params_list.push_back(normal_params_from(&grid[i]));
      g.weights.push_back(weights[i]);
    }
    const DesignResult res =
        point_prior_design(g, net->net, optimizer_from(cfg));
    copy_assignment(res.assignment, z_out);
    if (objective) *objective = res.objective;
  });
}

int nd_run_study(const char* config_json, const char* out_dir,
                 char** summary_json) {
  return guarded([&] {
    if (!config_json || !out_dir) {
      throw std::invalid_argument("null study configuration or output directory");
    }
    const StudyConfig cfg = parse_study_config(config_json);
    const std::string summary = run_study(cfg, out_dir);
    if (summary_json) {
      *summary_json = static_cast<char*>(std::malloc(summary.size() + 1));
      if (!*summary_json) throw std::runtime_error("out of memory");
      std::memcpy(*summary_json, summary.c_str(), summary.size() + 1);
    }
  });
}

void nd_string_free(char* s) { std::free(s); }

}  // extern "C"
