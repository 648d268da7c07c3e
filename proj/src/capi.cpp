#include "llgm/llgm.h"

#include <cstring>
#include <nlohmann/json.hpp>
#include <set>
#include <string>

#include "evaluate.hpp"
#include "io.hpp"
#include "network.hpp"
#include "normalize.hpp"
#include "simulate.hpp"
#include "types.hpp"

using nlohmann::json;

struct llgm_matrix {
  llgm::CountMatrix data;
};

struct llgm_graph {
  llgm::AdjacencyMatrix adjacency;
  std::vector<std::string> labels;
};

struct llgm_fit {
  llgm::LlgmFit fit;
};

namespace {

thread_local std::string g_last_error;

llgm_status status_of(llgm::ErrorCode code) {
  switch (code) {
    case llgm::ErrorCode::InvalidArgument: return LLGM_ERR_INVALID_ARGUMENT;
    case llgm::ErrorCode::Io: return LLGM_ERR_IO;
    case llgm::ErrorCode::Parse: return LLGM_ERR_PARSE;
    case llgm::ErrorCode::Degenerate: return LLGM_ERR_DEGENERATE;
    case llgm::ErrorCode::Internal: return LLGM_ERR_INTERNAL;
  }
  return LLGM_ERR_INTERNAL;
}

template <typename Fn>
llgm_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return LLGM_OK;
  } catch (const llgm::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const json::exception& e) {
    g_last_error = std::string("options: ") + e.what();
    return LLGM_ERR_PARSE;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LLGM_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json parse_options(const char* options_json, const std::set<std::string>& allowed) {
  json opts = json::object();
  if (options_json != nullptr && options_json[0] != '\0') opts = json::parse(options_json);
  if (!opts.is_object())
    throw llgm::Error(llgm::ErrorCode::InvalidArgument, "options must be a JSON object");
  for (const auto& [key, value] : opts.items()) {
    (void)value;
    if (!allowed.count(key))
      throw llgm::Error(llgm::ErrorCode::InvalidArgument, "unknown option '" + key + "'");
  }
  return opts;
}

void require_nonnull(const void* ptr, const char* what) {
  if (ptr == nullptr)
    throw llgm::Error(llgm::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

llgm::FitOptions fit_options_from_json(const json& opts) {
  llgm::FitOptions options;
  options.rho_min = opts.value("rho_min", options.rho_min);
  options.path_length = opts.value("path_length", options.path_length);
  if (opts.contains("edge_rule"))
    options.edge_rule = llgm::edge_rule_from_string(opts["edge_rule"].get<std::string>());
  options.run_stability = opts.value("stability", true);
  options.stability.B = opts.value("subsamples", options.stability.B);
  options.stability.beta = opts.value("beta", options.stability.beta);
  options.stability.m = opts.value("subsample_size", options.stability.m);
  options.stability.seed = opts.value("seed", options.stability.seed);
  options.threads = opts.value("threads", options.threads);
  options.solver.tol = opts.value("tol", options.solver.tol);
  options.solver.max_iter = opts.value("max_iter", options.solver.max_iter);
  options.solver.use_intercept = opts.value("use_intercept", options.solver.use_intercept);
  options.solver.standardize = opts.value("standardize", options.solver.standardize);
  options.paper_rho_max = opts.value("paper_rho_max", options.paper_rho_max);
  if (opts.contains("fixed_rho")) options.fixed_rho = opts["fixed_rho"].get<double>();
  return options;
}

}  // namespace

extern "C" {

const char* llgm_version(void) { return "1.0.0"; }

const char* llgm_last_error(void) { return g_last_error.c_str(); }

void llgm_string_free(char* s) { std::free(s); }

llgm_status llgm_matrix_read(const char* path, int variables_by_samples, llgm_matrix** out) {
  return guarded([&] {
    require_nonnull(path, "path");
    require_nonnull(out, "out");
    auto orientation = variables_by_samples ? llgm::Orientation::VariablesBySamples
                                            : llgm::Orientation::SamplesByVariables;
    *out = new llgm_matrix{llgm::read_counts(path, orientation)};
  });
}

llgm_status llgm_matrix_from_data(const double* values, int n, int p, llgm_matrix** out) {
  return guarded([&] {
    require_nonnull(values, "values");
    require_nonnull(out, "out");
    Eigen::MatrixXd m(n, p);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < p; ++j) m(i, j) = values[static_cast<std::size_t>(i) * p + j];
    auto matrix = llgm::CountMatrix::with_default_labels(std::move(m));
    matrix.validate();
    *out = new llgm_matrix{std::move(matrix)};
  });
}

llgm_status llgm_matrix_write(const llgm_matrix* m, const char* path) {
  return guarded([&] {
    require_nonnull(m, "matrix");
    require_nonnull(path, "path");
    llgm::write_counts(m->data, path);
  });
}

int llgm_matrix_rows(const llgm_matrix* m) { return m ? m->data.n() : 0; }
int llgm_matrix_cols(const llgm_matrix* m) { return m ? m->data.p() : 0; }
void llgm_matrix_free(llgm_matrix* m) { delete m; }

llgm_status llgm_normalize(const llgm_matrix* m, const char* options_json, llgm_matrix** out,
                           char** report_json) {
  return guarded([&] {
    require_nonnull(m, "matrix");
    require_nonnull(out, "out");
    json opts = parse_options(options_json, {"depth_method", "filter_fraction", "filter",
                                             "alpha", "auto_alpha", "integer_output"});
    llgm::NormalizeConfig config;
    if (opts.contains("depth_method"))
      config.depth_method =
          llgm::depth_method_from_string(opts["depth_method"].get<std::string>());
    config.filter_fraction = opts.value("filter_fraction", config.filter_fraction);
    config.filter_enabled = opts.value("filter", config.filter_enabled);
    config.alpha_enabled = opts.value("auto_alpha", config.alpha_enabled);
    if (opts.contains("alpha")) {
      config.alpha = opts["alpha"].get<double>();
      config.alpha_enabled = true;
    }
    config.integer_output = opts.value("integer_output", config.integer_output);

    auto [normalized, report] = llgm::normalize_pipeline(m->data, config);
    *out = new llgm_matrix{std::move(normalized)};
    if (report_json) *report_json = dup_string(llgm::normalization_report_json(report).dump(2));
  });
}

llgm_status llgm_simulate(const char* options_json, llgm_matrix** counts, llgm_graph** truth) {
  return guarded([&] {
    require_nonnull(counts, "counts");
    json opts = parse_options(options_json, {"p", "n", "graph", "n_hubs", "edge_prob",
                                             "lambda_true", "lambda_noise", "seed"});
    llgm::SimulationConfig config;
    config.p = opts.value("p", config.p);
    config.n = opts.value("n", config.n);
    if (opts.contains("graph"))
      config.graph_kind = llgm::graph_kind_from_string(opts["graph"].get<std::string>());
    config.n_hubs = opts.value("n_hubs", config.n_hubs);
    config.edge_prob = opts.value("edge_prob", config.edge_prob);
    config.lambda_true = opts.value("lambda_true", config.lambda_true);
    config.lambda_noise = opts.value("lambda_noise", config.lambda_noise);
    config.seed = opts.value("seed", config.seed);

    llgm::AdjacencyMatrix A = llgm::gen_graph(config);
    llgm::CountMatrix X = llgm::simulate_counts(A, config);
    if (truth) *truth = new llgm_graph{A, X.variable_ids};
    *counts = new llgm_matrix{std::move(X)};
  });
}

llgm_status llgm_graph_write_edges(const llgm_graph* g, const char* path) {
  return guarded([&] {
    require_nonnull(g, "graph");
    require_nonnull(path, "path");
    llgm::write_graph_edges(g->adjacency, g->labels, path);
  });
}

llgm_status llgm_graph_read_edges(const char* path, const llgm_matrix* labels_from,
                                  llgm_graph** out) {
  return guarded([&] {
    require_nonnull(path, "path");
    require_nonnull(labels_from, "labels_from");
    require_nonnull(out, "out");
    const auto& labels = labels_from->data.variable_ids;
    *out = new llgm_graph{llgm::read_graph_edges(path, labels), labels};
  });
}

int llgm_graph_nodes(const llgm_graph* g) { return g ? g->adjacency.p : 0; }
int llgm_graph_edge_count(const llgm_graph* g) { return g ? g->adjacency.edge_count() : 0; }

llgm_status llgm_graph_compare(const llgm_graph* estimated, const llgm_graph* truth,
                               char** json_out) {
  return guarded([&] {
    require_nonnull(estimated, "estimated");
    require_nonnull(truth, "truth");
    require_nonnull(json_out, "json");
    const llgm::RatePair rates = llgm::tpr_fpr(estimated->adjacency, truth->adjacency);
    json out;
    out["tpr"] = rates.tpr_defined ? json(rates.tpr) : json(nullptr);
    out["fpr"] = rates.fpr_defined ? json(rates.fpr) : json(nullptr);
    *json_out = dup_string(out.dump(2));
  });
}

llgm_status llgm_graph_degree_json(const llgm_graph* g, char** json_out) {
  return guarded([&] {
    require_nonnull(g, "graph");
    require_nonnull(json_out, "json");
    *json_out = dup_string(llgm::degree_report_json(llgm::degree_stats(g->adjacency)).dump(2));
  });
}

llgm_status llgm_graph_degree_csv(const llgm_graph* g, const char* path) {
  return guarded([&] {
    require_nonnull(g, "graph");
    require_nonnull(path, "path");
    llgm::write_degree_csv(llgm::degree_stats(g->adjacency), path);
  });
}

void llgm_graph_free(llgm_graph* g) { delete g; }

llgm_status llgm_fit_run(const llgm_matrix* m, const char* options_json, llgm_fit** out) {
  return guarded([&] {
    require_nonnull(m, "matrix");
    require_nonnull(out, "out");
    json opts = parse_options(
        options_json, {"rho_min", "path_length", "edge_rule", "stability", "subsamples",
                       "beta", "subsample_size", "seed", "threads", "tol", "max_iter",
                       "use_intercept", "standardize", "fixed_rho", "paper_rho_max"});
    *out = new llgm_fit{llgm::fit_llgm(m->data, fit_options_from_json(opts))};
  });
}

llgm_status llgm_fit_report_json(const llgm_fit* f, char** json_out) {
  return guarded([&] {
    require_nonnull(f, "fit");
    require_nonnull(json_out, "json");
    *json_out = dup_string(llgm::fit_report_json(f->fit).dump(2));
  });
}

double llgm_fit_rho_opt(const llgm_fit* f) { return f ? f->fit.rho_opt : 0.0; }

llgm_status llgm_fit_write_edges(const llgm_fit* f, const char* path) {
  return guarded([&] {
    require_nonnull(f, "fit");
    require_nonnull(path, "path");
    llgm::write_fit_edges(f->fit, path);
  });
}

llgm_status llgm_fit_write_stability_csv(const llgm_fit* f, const char* path) {
  return guarded([&] {
    require_nonnull(f, "fit");
    require_nonnull(path, "path");
    llgm::write_stability_csv(f->fit, path);
  });
}

llgm_status llgm_fit_write_frequency_csv(const llgm_fit* f, const char* path) {
  return guarded([&] {
    require_nonnull(f, "fit");
    require_nonnull(path, "path");
    llgm::write_frequency_csv(f->fit, path);
  });
}

llgm_status llgm_fit_graph(const llgm_fit* f, llgm_graph** out) {
  return guarded([&] {
    require_nonnull(f, "fit");
    require_nonnull(out, "out");
    *out = new llgm_graph{f->fit.adjacency, f->fit.variable_ids};
  });
}

llgm_status llgm_fit_roc_csv(const llgm_fit* f, const llgm_graph* truth, const char* path,
                             char** summary_json) {
  return guarded([&] {
    require_nonnull(f, "fit");
    require_nonnull(truth, "truth");
    require_nonnull(path, "path");
    llgm::RocCurve curve = llgm::roc_from_path(f->fit.theta_path, truth->adjacency,
                                               llgm::EdgeRule::Union, f->fit.path);
    llgm::write_roc_csv(curve, path);
    if (summary_json) *summary_json = dup_string(llgm::roc_summary_json(curve).dump(2));
  });
}

void llgm_fit_free(llgm_fit* f) { delete f; }

}  // extern "C"
