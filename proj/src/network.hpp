#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "normalize.hpp"
#include "rng.hpp"
#include "solver.hpp"
#include "types.hpp"

namespace llgm {

enum class EdgeRule { Union, Intersection };

std::string to_string(EdgeRule r);
EdgeRule edge_rule_from_string(const std::string& s);

struct StabilityConfig {
  int B = 100;            // subsample count
  double beta = 0.05;     // instability budget
  int m = 0;              // subsample size; 0 = min(floor(10*sqrt(n)), floor(0.8*n))
  std::uint64_t seed = 0;

  void validate(int n) const;
};

int default_subsample_size(int n);

struct StabilityResult {
  std::vector<Eigen::MatrixXd> edge_frequency;  // per path point, p x p symmetric
  std::vector<double> instability;              // D-bar per path point
  std::vector<double> instability_mono;         // monotonized toward the sparse end
  double rho_opt = 0.0;
  int selected_index = 0;
  bool budget_violated = false;
  std::vector<std::string> warnings;
};

// Union: edge present when either direction's coefficient is nonzero;
// intersection: both directions required.
AdjacencyMatrix assemble_adjacency(const ParameterMatrix& theta, EdgeRule rule);

// m distinct row indices drawn without replacement, ascending, deterministic
// under (seed, stream_id).
std::vector<int> subsample_rows(int n, int m, const RngSpec& rng);

// Average edge-indicator variance 2*A(1-A) over unordered pairs.
double instability(const Eigen::MatrixXd& edge_frequency);

StabilityResult stars_select(const CountMatrix& X, const RegularizationPath& path,
                             const SolverConfig& solver_cfg, const StabilityConfig& stab_cfg,
                             EdgeRule rule, int threads);

struct FitOptions {
  double rho_min = 1e-4;
  int path_length = 100;
  EdgeRule edge_rule = EdgeRule::Union;
  SolverConfig solver;
  StabilityConfig stability;
  bool run_stability = true;
  std::optional<double> fixed_rho;  // bypasses stability selection
  bool paper_rho_max = false;       // literal max |X_k^T X_j| instead of the KKT value
  int threads = 0;                  // 0 = hardware concurrency
};

struct LlgmFit {
  std::vector<std::string> variable_ids;
  RegularizationPath path;
  std::vector<PathSolution> theta_path;  // full-data pathwise fits, one per node
  StabilityResult stability;
  bool stability_run = false;
  int selected_index = 0;
  double rho_opt = 0.0;
  ParameterMatrix theta_opt;
  AdjacencyMatrix adjacency;
  std::vector<std::string> warnings;
};

// Parameter matrix assembled from the per-node path solutions at one path index.
ParameterMatrix theta_at(const std::vector<PathSolution>& paths, int path_index, int p);

LlgmFit fit_llgm(const CountMatrix& X, const FitOptions& options);

}  // namespace llgm
