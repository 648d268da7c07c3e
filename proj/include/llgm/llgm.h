/* C API for the llgm shared library: sparse Poisson graphical model
 * estimation from count data via penalized log-linear neighborhood
 * regressions with stability selection, plus a matched simulator and
 * recovery-evaluation helpers.
 *
 * All functions return LLGM_OK on success; on failure llgm_last_error()
 * holds a thread-local message describing what went wrong. Strings returned
 * through char** out-parameters must be released with llgm_string_free().
 * Option strings are JSON documents; unknown keys are rejected.
 */
#ifndef LLGM_LLGM_H
#define LLGM_LLGM_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum llgm_status {
  LLGM_OK = 0,
  LLGM_ERR_INVALID_ARGUMENT = 1,
  LLGM_ERR_IO = 2,
  LLGM_ERR_PARSE = 3,
  LLGM_ERR_DEGENERATE = 4,
  LLGM_ERR_INTERNAL = 5
} llgm_status;

typedef struct llgm_matrix llgm_matrix; /* count matrix with labels */
typedef struct llgm_graph llgm_graph;   /* adjacency with node labels */
typedef struct llgm_fit llgm_fit;       /* full fit: paths, stability, graph */

const char* llgm_version(void);
const char* llgm_last_error(void);
void llgm_string_free(char* s);

/* --- count matrices -------------------------------------------------- */

/* TSV/CSV with a header row and a leading label column. Set
 * variables_by_samples nonzero when rows are variables. */
llgm_status llgm_matrix_read(const char* path, int variables_by_samples,
                             llgm_matrix** out);
llgm_status llgm_matrix_from_data(const double* values, int n, int p,
                                  llgm_matrix** out);
llgm_status llgm_matrix_write(const llgm_matrix* m, const char* path);
int llgm_matrix_rows(const llgm_matrix* m);
int llgm_matrix_cols(const llgm_matrix* m);
void llgm_matrix_free(llgm_matrix* m);

/* Options (all optional): depth_method ("median-of-ratios"|"total-count"|
 * "upper-quartile"|"none"), filter_fraction, filter [bool], alpha (fixed),
 * auto_alpha [bool], integer_output [bool]. Report JSON has keys
 * depth_method, scale_factors, kept_variables, filter_fraction, alpha,
 * dispersion_before, dispersion_after, warnings. */
llgm_status llgm_normalize(const llgm_matrix* m, const char* options_json,
                           llgm_matrix** out, char** report_json);

/* --- simulation ------------------------------------------------------ */

/* Options: p, n, graph ("hub"|"scale-free"|"random"), n_hubs, edge_prob,
 * lambda_true, lambda_noise, seed. */
llgm_status llgm_simulate(const char* options_json, llgm_matrix** counts,
                          llgm_graph** truth);

/* --- graphs ---------------------------------------------------------- */

llgm_status llgm_graph_write_edges(const llgm_graph* g, const char* path);
/* Reads an edge-list TSV whose node names come from `labels_from`. */
llgm_status llgm_graph_read_edges(const char* path, const llgm_matrix* labels_from,
                                  llgm_graph** out);
int llgm_graph_nodes(const llgm_graph* g);
int llgm_graph_edge_count(const llgm_graph* g);
/* True/false positive rates of `estimated` against `truth` over unordered
 * pairs; JSON {"tpr": ..., "fpr": ...} with null for undefined rates. */
llgm_status llgm_graph_compare(const llgm_graph* estimated, const llgm_graph* truth,
                               char** json);
llgm_status llgm_graph_degree_json(const llgm_graph* g, char** json);
llgm_status llgm_graph_degree_csv(const llgm_graph* g, const char* path);
void llgm_graph_free(llgm_graph* g);

/* --- fitting --------------------------------------------------------- */

/* Options: rho_min, path_length, edge_rule ("union"|"intersection"),
 * stability [bool], subsamples, beta, subsample_size, seed, threads,
 * tol, max_iter, use_intercept [bool], standardize [bool], fixed_rho,
 * paper_rho_max [bool]. */
llgm_status llgm_fit_run(const llgm_matrix* m, const char* options_json,
                         llgm_fit** out);
llgm_status llgm_fit_report_json(const llgm_fit* f, char** json);
double llgm_fit_rho_opt(const llgm_fit* f);
llgm_status llgm_fit_write_edges(const llgm_fit* f, const char* path);
llgm_status llgm_fit_write_stability_csv(const llgm_fit* f, const char* path);
llgm_status llgm_fit_write_frequency_csv(const llgm_fit* f, const char* path);
llgm_status llgm_fit_graph(const llgm_fit* f, llgm_graph** out);
/* ROC over the fit's penalty path against a ground-truth graph; writes a
 * rho,fpr,tpr CSV and returns {"auc": ...} in summary_json (nullable). */
llgm_status llgm_fit_roc_csv(const llgm_fit* f, const llgm_graph* truth,
                             const char* path, char** summary_json);
void llgm_fit_free(llgm_fit* f);

#ifdef __cplusplus
}
#endif

#endif /* LLGM_LLGM_H */
