// llgm command-line driver. Talks to the library exclusively through the
// C API in llgm/llgm.h; every run leaves a manifest (full configuration,
// seed, artifact checksums) next to its outputs.

#include <CLI11.hpp>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "llgm/llgm.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOpts {
  std::string input;
  std::string output_dir = ".";
  std::string orientation = "samples-by-variables";
  std::uint64_t seed = 0;
  int threads = 0;
};

struct NormalizeOpts {
  std::string depth_method = "median-of-ratios";
  double filter_fraction = 0.5;
  double alpha = 0.0;  // 0 = choose from the dispersion criterion
};

struct FitOpts {
  double rho_min = 1e-4;
  int path_length = 100;
  std::string edge_rule = "union";
  int subsamples = 100;
  double beta = 0.05;
  int subsample_size = 0;
  bool no_stability = false;
  double fixed_rho = 0.0;
  bool paper_rho_max = false;
  bool use_intercept = false;
  bool dump_frequency = false;
};

struct SimulateOpts {
  int p = 50;
  int n = 200;
  std::string graph = "hub";
  int n_hubs = 3;
  double edge_prob = 0.0;
  double lambda_true = 1.0;
  double lambda_noise = 0.5;
};

[[noreturn]] void fail(const std::string& module, const std::string& message) {
  std::cerr << "llgm: " << module << ": " << message << "\n";
  std::exit(1);
}

void check(llgm_status status, const std::string& module) {
  if (status != LLGM_OK) fail(module, llgm_last_error());
}

std::string take_string(char* s) {
  std::string out = s ? s : "";
  llgm_string_free(s);
  return out;
}

std::uint64_t fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  char buffer[4096];
  while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      hash ^= static_cast<unsigned char>(buffer[i]);
      hash *= 0x100000001b3ULL;
    }
    if (!in) break;
  }
  return hash;
}

std::string checksum_hex(const std::string& path) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << fnv1a_file(path);
  return out.str();
}

struct Manifest {
  json doc;
  std::string output_dir;

  Manifest(const std::string& command, const std::string& dir) : output_dir(dir) {
    doc["command"] = command;
    doc["options"] = json::object();
    doc["inputs"] = json::object();
    doc["artifacts"] = json::object();
    fs::create_directories(dir);
  }
  std::string path_for(const std::string& name) const {
    return (fs::path(output_dir) / name).string();
  }
  void record_input(const std::string& path) { doc["inputs"][path] = checksum_hex(path); }
  void record_artifact(const std::string& name) {
    doc["artifacts"][name] = checksum_hex(path_for(name));
  }
  void write() {
    std::ofstream out(path_for("run_manifest.json"));
    out << doc.dump(2) << "\n";
  }
};

llgm_matrix* read_input(const CommonOpts& common, const std::string& module) {
  const int transposed = common.orientation == "variables-by-samples" ? 1 : 0;
  llgm_matrix* m = nullptr;
  check(llgm_matrix_read(common.input.c_str(), transposed, &m), module);
  return m;
}

json normalize_options_json(const NormalizeOpts& norm) {
  json opts{{"depth_method", norm.depth_method}, {"filter_fraction", norm.filter_fraction}};
  if (norm.alpha > 0.0) opts["alpha"] = norm.alpha;
  return opts;
}

json fit_options_json(const FitOpts& fit, const CommonOpts& common) {
  json opts{{"rho_min", fit.rho_min},       {"path_length", fit.path_length},
            {"edge_rule", fit.edge_rule},   {"subsamples", fit.subsamples},
            {"beta", fit.beta},             {"seed", common.seed},
            {"threads", common.threads},    {"paper_rho_max", fit.paper_rho_max},
            {"use_intercept", fit.use_intercept}};
  if (fit.subsample_size > 0) opts["subsample_size"] = fit.subsample_size;
  if (fit.no_stability) opts["stability"] = false;
  if (fit.fixed_rho > 0.0) {
    opts["stability"] = false;
    opts["fixed_rho"] = fit.fixed_rho;
  }
  return opts;
}

llgm_matrix* run_normalize_step(llgm_matrix* raw, const NormalizeOpts& norm,
                                Manifest& manifest) {
  llgm_matrix* normalized = nullptr;
  char* report = nullptr;
  check(llgm_normalize(raw, normalize_options_json(norm).dump().c_str(), &normalized, &report),
        "normalize");
  std::ofstream(manifest.path_for("normalization_report.json")) << take_string(report) << "\n";
  check(llgm_matrix_write(normalized, manifest.path_for("normalized_counts.tsv").c_str()),
        "normalize");
  manifest.record_artifact("normalization_report.json");
  manifest.record_artifact("normalized_counts.tsv");
  return normalized;
}

void run_fit_step(llgm_matrix* counts, const FitOpts& fit_opts, const CommonOpts& common,
                  Manifest& manifest) {
  llgm_fit* fit = nullptr;
  check(llgm_fit_run(counts, fit_options_json(fit_opts, common).dump().c_str(), &fit), "fit");

  check(llgm_fit_write_edges(fit, manifest.path_for("edges.tsv").c_str()), "fit");
  check(llgm_fit_write_stability_csv(fit, manifest.path_for("stability.csv").c_str()), "fit");
  char* report = nullptr;
  check(llgm_fit_report_json(fit, &report), "fit");
  std::ofstream(manifest.path_for("fit_report.json")) << take_string(report) << "\n";
  manifest.record_artifact("edges.tsv");
  manifest.record_artifact("stability.csv");
  manifest.record_artifact("fit_report.json");

  llgm_graph* graph = nullptr;
  check(llgm_fit_graph(fit, &graph), "fit");
  check(llgm_graph_degree_csv(graph, manifest.path_for("degree.csv").c_str()), "evaluate");
  manifest.record_artifact("degree.csv");
  llgm_graph_free(graph);

  if (fit_opts.dump_frequency) {
    check(llgm_fit_write_frequency_csv(fit, manifest.path_for("edge_frequency.csv").c_str()),
          "fit");
    manifest.record_artifact("edge_frequency.csv");
  }
  llgm_fit_free(fit);
}

void add_common(CLI::App* cmd, CommonOpts& common, bool needs_input) {
  if (needs_input)
    cmd->add_option("--input", common.input, "input counts file (TSV or CSV)")->required();
  cmd->add_option("--output-dir", common.output_dir, "directory for run artifacts");
  cmd->add_option("--orientation", common.orientation)
      ->check(CLI::IsMember({"samples-by-variables", "variables-by-samples"}));
  cmd->add_option("--seed", common.seed, "top-level RNG seed");
  cmd->add_option("--threads", common.threads, "worker threads (0 = all cores)");
}

void add_normalize(CLI::App* cmd, NormalizeOpts& norm) {
  cmd->add_option("--depth-method", norm.depth_method)
      ->check(CLI::IsMember({"total-count", "median-of-ratios", "upper-quartile", "none"}));
  cmd->add_option("--filter-fraction", norm.filter_fraction);
  cmd->add_option("--alpha", norm.alpha, "fixed power-transform alpha (0 = automatic)");
}

void add_fit(CLI::App* cmd, FitOpts& fit) {
  cmd->add_option("--rho-min", fit.rho_min);
  cmd->add_option("--path-length", fit.path_length);
  cmd->add_option("--edge-rule", fit.edge_rule)
      ->check(CLI::IsMember({"union", "intersection"}));
  cmd->add_option("--subsamples", fit.subsamples, "stability selection subsample count B");
  cmd->add_option("--beta", fit.beta, "instability budget");
  cmd->add_option("--subsample-size", fit.subsample_size, "override m (0 = StARS default)");
  cmd->add_flag("--no-stability", fit.no_stability, "skip stability selection");
  cmd->add_option("--fixed-rho", fit.fixed_rho, "fit at a fixed rho instead of selecting");
  cmd->add_flag("--paper-rho-max", fit.paper_rho_max,
                "use the literal max |X_k^T X_j| as rho_max");
  cmd->add_flag("--use-intercept", fit.use_intercept);
  cmd->add_flag("--dump-frequency", fit.dump_frequency, "write the full edge-frequency dump");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poisson graphical model estimation from count data"};
  app.require_subcommand(1);

  CommonOpts common;
  NormalizeOpts norm;
  FitOpts fit;
  SimulateOpts sim;
  std::string truth_path;
  std::string edges_path;

  CLI::App* cmd_normalize = app.add_subcommand("normalize", "run the normalization pipeline");
  add_common(cmd_normalize, common, true);
  add_normalize(cmd_normalize, norm);

  CLI::App* cmd_fit = app.add_subcommand("fit", "fit the graphical model to counts");
  add_common(cmd_fit, common, true);
  add_fit(cmd_fit, fit);

  CLI::App* cmd_simulate = app.add_subcommand("simulate", "generate a ground-truth network and counts");
  add_common(cmd_simulate, common, false);
  cmd_simulate->add_option("--p", sim.p, "node count");
  cmd_simulate->add_option("--n", sim.n, "sample count");
  cmd_simulate->add_option("--graph", sim.graph)
      ->check(CLI::IsMember({"hub", "scale-free", "random"}));
  cmd_simulate->add_option("--n-hubs", sim.n_hubs);
  cmd_simulate->add_option("--edge-prob", sim.edge_prob, "random graph edge probability (0 = 2/(p-1))");
  cmd_simulate->add_option("--lambda-true", sim.lambda_true);
  cmd_simulate->add_option("--lambda-noise", sim.lambda_noise);

  CLI::App* cmd_evaluate = app.add_subcommand("evaluate", "score recovery against a known network");
  add_common(cmd_evaluate, common, true);
  add_fit(cmd_evaluate, fit);
  cmd_evaluate->add_option("--truth", truth_path, "ground-truth edge list TSV")->required();
  cmd_evaluate->add_option("--edges", edges_path, "estimated edge list to score directly");

  CLI::App* cmd_pipeline = app.add_subcommand("pipeline", "normalize, fit, and report in one run");
  add_common(cmd_pipeline, common, true);
  add_normalize(cmd_pipeline, norm);
  add_fit(cmd_pipeline, fit);

  CLI11_PARSE(app, argc, argv);

  if (cmd_normalize->parsed()) {
    Manifest manifest("normalize", common.output_dir);
    manifest.doc["options"] = normalize_options_json(norm);
    manifest.doc["options"]["orientation"] = common.orientation;
    manifest.record_input(common.input);
    llgm_matrix* raw = read_input(common, "normalize");
    llgm_matrix* normalized = run_normalize_step(raw, norm, manifest);
    llgm_matrix_free(normalized);
    llgm_matrix_free(raw);
    manifest.write();
  } else if (cmd_fit->parsed()) {
    Manifest manifest("fit", common.output_dir);
    manifest.doc["options"] = fit_options_json(fit, common);
    manifest.doc["seed"] = common.seed;
    manifest.record_input(common.input);
    llgm_matrix* counts = read_input(common, "fit");
    run_fit_step(counts, fit, common, manifest);
    llgm_matrix_free(counts);
    manifest.write();
  } else if (cmd_simulate->parsed()) {
    Manifest manifest("simulate", common.output_dir);
    json opts{{"p", sim.p},
              {"n", sim.n},
              {"graph", sim.graph},
              {"n_hubs", sim.n_hubs},
              {"lambda_true", sim.lambda_true},
              {"lambda_noise", sim.lambda_noise},
              {"seed", common.seed}};
    if (sim.edge_prob > 0.0) opts["edge_prob"] = sim.edge_prob;
    manifest.doc["options"] = opts;
    manifest.doc["seed"] = common.seed;

    llgm_matrix* counts = nullptr;
    llgm_graph* truth = nullptr;
    check(llgm_simulate(opts.dump().c_str(), &counts, &truth), "simulate");
    check(llgm_matrix_write(counts, manifest.path_for("counts.tsv").c_str()), "simulate");
    check(llgm_graph_write_edges(truth, manifest.path_for("truth_edges.tsv").c_str()),
          "simulate");
    std::ofstream(manifest.path_for("simulation_config.json")) << opts.dump(2) << "\n";
    manifest.record_artifact("counts.tsv");
    manifest.record_artifact("truth_edges.tsv");
    manifest.record_artifact("simulation_config.json");
    llgm_graph_free(truth);
    llgm_matrix_free(counts);
    manifest.write();
  } else if (cmd_evaluate->parsed()) {
    Manifest manifest("evaluate", common.output_dir);
    manifest.doc["options"] = fit_options_json(fit, common);
    manifest.doc["options"]["truth"] = truth_path;
    manifest.doc["seed"] = common.seed;
    manifest.record_input(common.input);
    manifest.record_input(truth_path);

    llgm_matrix* counts = read_input(common, "evaluate");
    llgm_graph* truth = nullptr;
    check(llgm_graph_read_edges(truth_path.c_str(), counts, &truth), "evaluate");

    json summary;
    if (!edges_path.empty()) {
      manifest.record_input(edges_path);
      llgm_graph* estimated = nullptr;
      check(llgm_graph_read_edges(edges_path.c_str(), counts, &estimated), "evaluate");
      char* rates = nullptr;
      check(llgm_graph_compare(estimated, truth, &rates), "evaluate");
      summary["fixed_graph"] = json::parse(take_string(rates));
      llgm_graph_free(estimated);
    }

    // ROC over the penalty path; stability selection is not needed here.
    json fit_opts = fit_options_json(fit, common);
    fit_opts["stability"] = false;
    llgm_fit* fitted = nullptr;
    check(llgm_fit_run(counts, fit_opts.dump().c_str(), &fitted), "evaluate");
    char* roc_summary = nullptr;
    check(llgm_fit_roc_csv(fitted, truth, manifest.path_for("roc.csv").c_str(), &roc_summary),
          "evaluate");
    summary["roc"] = json::parse(take_string(roc_summary));
    manifest.record_artifact("roc.csv");

    char* degree = nullptr;
    check(llgm_graph_degree_json(truth, &degree), "evaluate");
    summary["truth_degree"] = json::parse(take_string(degree));
    std::ofstream(manifest.path_for("evaluation.json")) << summary.dump(2) << "\n";
    manifest.record_artifact("evaluation.json");

    llgm_fit_free(fitted);
    llgm_graph_free(truth);
    llgm_matrix_free(counts);
    manifest.write();
  } else if (cmd_pipeline->parsed()) {
    Manifest manifest("pipeline", common.output_dir);
    manifest.doc["options"] = fit_options_json(fit, common);
    manifest.doc["options"]["normalize"] = normalize_options_json(norm);
    manifest.doc["seed"] = common.seed;
    manifest.record_input(common.input);

    llgm_matrix* raw = read_input(common, "normalize");
    llgm_matrix* normalized = run_normalize_step(raw, norm, manifest);
    run_fit_step(normalized, fit, common, manifest);
    llgm_matrix_free(normalized);
    llgm_matrix_free(raw);
    manifest.write();
  }
  return 0;
}
