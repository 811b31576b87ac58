/* netdesign: treatment-assignment design for experiments whose outcomes are
 * correlated through a known network.
 *
 * C interface to the shared library. All functions return ND_OK on success
 * or an error code; nd_last_error() describes the most recent failure on the
 * calling thread. Objects are opaque handles released with their _free
 * function. Output buffers are caller-allocated unless noted.
 */
#ifndef NETDESIGN_H
#define NETDESIGN_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define ND_OK 0
#define ND_ERR_INVALID 1 /* validation/precondition failure */
#define ND_ERR_IO 2      /* filesystem failure */
#define ND_ERR_RUNTIME 3 /* anything else */

/* Message for the last error on this thread; empty string if none. The
 * pointer stays valid until the next netdesign call on the same thread. */
const char* nd_last_error(void);

/* ---- networks ---- */

typedef struct nd_network nd_network;

int nd_network_from_edges(int n, const int* endpoints, int n_edges,
                          nd_network** out);
int nd_network_gen_erdos_renyi(int n, double p, uint64_t seed, nd_network** out);
int nd_network_gen_small_world(int n, int k, double beta, uint64_t seed,
                               nd_network** out);
int nd_network_gen_power_law(int n, int m, uint64_t seed, nd_network** out);
/* link_probs is a row-major n_blocks x n_blocks symmetric matrix. */
int nd_network_gen_sbm(const int* block_sizes, int n_blocks,
                       const double* link_probs, uint64_t seed,
                       nd_network** out);

/* Reads edge-list text ("n" line, then "i j" lines) or the JSON form
 * {"n": ..., "edges": [[i,j], ...]}, auto-detected. */
int nd_network_read(const char* path, nd_network** out);
/* format: 0 = edge-list text, 1 = JSON. */
int nd_network_write(const nd_network* net, const char* path, int format);

int nd_network_node_count(const nd_network* net);
int nd_network_edge_count(const nd_network* net);
double nd_network_mean_degree(const nd_network* net);
void nd_network_free(nd_network* net);

/* ---- model and prior parameters ---- */

typedef struct {
  double mu;     /* latent mean */
  double sigma2; /* latent variance, > 0 */
  double gamma2; /* conditional outcome variance, > 0 */
} nd_normal_params;

typedef struct {
  double r;      /* gamma shape, > 0 */
  double lambda; /* scale multiplier, > 0 */
} nd_pg_params;

typedef struct {
  double mu0;
  double sigma0;       /* standard deviation of mu's prior, > 0 */
  double r_gamma;      /* > 1 */
  double lambda_gamma; /* > 0 */
  double r_sigma;      /* > 1 */
  double lambda_sigma; /* > 0 */
} nd_prior;

/* ---- risk evaluation (z is a length-n 0/1 vector) ---- */

int nd_mse_normal(const nd_network* net, const int* z,
                  const nd_normal_params* params, double* out);
int nd_mse_poisson_gamma(const nd_network* net, const int* z,
                         const nd_pg_params* params, double* out);

typedef struct {
  double bias_sq;
  double group_size_var;
  double net_var_treated;
  double net_var_control;
  double net_var_cross; /* enters the total with a minus sign */
  double total;
} nd_mse_decomposition;

int nd_mse_decompose_normal(const nd_network* net, const int* z,
                            const nd_normal_params* params,
                            nd_mse_decomposition* out);

int nd_imse_closed_form_normal(const nd_network* net, const int* z,
                               const nd_prior* prior, double* out);
int nd_imse_mc(const nd_network* net, const int* z, const nd_prior* prior,
               int n_draws, uint64_t seed, double* value, double* std_error);

/* w' cov w for an explicit row-major n x n covariance and weight vector. */
int nd_contrast_variance(int n, const double* cov, const double* w, double* out);

/* ---- design ---- */

typedef struct {
  int64_t max_iters;       /* 0: 200 * n */
  int n_restarts;          /* >= 1 */
  double init_temperature; /* 0: objective at the random start */
  double cooling_rate;     /* in (0, 1) */
  double move_mix;         /* probability of a swap move, in [0, 1] */
  uint64_t seed;
} nd_optimizer_config;

/* Sensible defaults (the documented ones) for the struct above. */
void nd_optimizer_config_default(nd_optimizer_config* cfg);

/* z_out must hold n ints; entries are 0/1. */
int nd_design_balanced(int n, uint64_t seed, int* z_out);
int nd_design_stratified(const nd_network* net, int k_clusters, uint64_t seed,
                         int* z_out);
/* Minimizes a common-random-numbers Monte-Carlo estimate of the integrated
 * risk under `prior` (n_draws parameter draws fixed by cfg->seed). Returns
 * the achieved objective value through `objective` when non-NULL. */
int nd_design_optimal(const nd_network* net, const nd_prior* prior,
                      int n_mc_draws, const nd_optimizer_config* cfg,
                      int* z_out, double* objective);
/* Point-prior procedure over k parameter sets with the given non-negative
 * weights; `objective` receives the winning weighted loss. */
int nd_design_point_prior(const nd_network* net, const nd_normal_params* grid,
                          const double* weights, int k,
                          const nd_optimizer_config* cfg, int* z_out,
                          double* objective);

/* ---- simulation studies ---- */

/* Runs the study described by config_json (see README for the schema),
 * writes reports into out_dir, and returns a JSON summary through
 * *summary_json (release with nd_string_free). */
int nd_run_study(const char* config_json, const char* out_dir,
                 char** summary_json);
void nd_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* NETDESIGN_H */
