#include "network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "parallel.hpp"

namespace llgm {

namespace {

bool column_constant(const Eigen::MatrixXd& X, int j) {
  return (X.col(j).array() == X(0, j)).all();
}

// Nonzero pattern of one node's path fit, packed as slot-major bytes.
struct NodePattern {
  std::vector<std::uint8_t> nonzero;  // q * K entries, slot c at [c*K + t]
  bool skipped = false;
};

NodePattern node_pattern(const Eigen::MatrixXd& X, int j, const RegularizationPath& path,
                         const SolverConfig& cfg) {
  NodePattern pattern;
  const int q = static_cast<int>(X.cols()) - 1;
  const int K = path.size();
  pattern.nonzero.assign(static_cast<std::size_t>(q) * K, 0);
  PathSolution sol = fit_node_path(X, j, path, cfg);
  for (int c = 0; c < q; ++c)
    for (int t = 0; t < K; ++t)
      if (sol.coefficients(c, t) != 0.0) pattern.nonzero[static_cast<std::size_t>(c) * K + t] = 1;
  return pattern;
}

}  // namespace

std::string to_string(EdgeRule r) {
  return r == EdgeRule::Union ? "union" : "intersection";
}

EdgeRule edge_rule_from_string(const std::string& s) {
  if (s == "union") return EdgeRule::Union;
  if (s == "intersection") return EdgeRule::Intersection;
  throw Error(ErrorCode::InvalidArgument, "unknown edge rule '" + s + "'");
}

void StabilityConfig::validate(int n) const {
  if (B < 2) throw Error(ErrorCode::InvalidArgument, "stability needs B >= 2 subsamples");
  if (!(beta > 0.0) || !(beta < 0.5))
    throw Error(ErrorCode::InvalidArgument, "stability budget beta must lie in (0, 0.5)");
  const int size = m > 0 ? m : default_subsample_size(n);
  if (size < 1 || size >= n)
    throw Error(ErrorCode::InvalidArgument, "subsample size must satisfy 1 <= m < n");
}

int default_subsample_size(int n) {
  const int stars = static_cast<int>(std::floor(10.0 * std::sqrt(static_cast<double>(n))));
  const int clamp = static_cast<int>(std::floor(0.8 * n));
  return std::max(1, std::min(stars, clamp));
}

AdjacencyMatrix assemble_adjacency(const ParameterMatrix& theta, EdgeRule rule) {
  theta.validate();
  const int p = theta.p();
  AdjacencyMatrix A(p);
  for (int j = 0; j < p; ++j) {
    for (int k = j + 1; k < p; ++k) {
      const bool jk = theta.theta(j, k) != 0.0;
      const bool kj = theta.theta(k, j) != 0.0;
      const bool edge = rule == EdgeRule::Union ? (jk || kj) : (jk && kj);
      A.set_edge(j, k, edge ? 1 : 0);
    }
  }
  return A;
}

std::vector<int> subsample_rows(int n, int m, const RngSpec& spec) {
  if (m < 1 || m >= n)
    throw Error(ErrorCode::InvalidArgument, "subsample size must satisfy 1 <= m < n");
  Rng rng = spec.make();
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < m; ++i) {
    const int pick = i + static_cast<int>(rng.uniform_int(0, n - 1 - i));
    std::swap(idx[i], idx[pick]);
  }
  idx.resize(m);
  std::sort(idx.begin(), idx.end());
  return idx;
}

double instability(const Eigen::MatrixXd& A_bar) {
  const int p = static_cast<int>(A_bar.rows());
  if (p < 2 || A_bar.cols() != p)
    throw Error(ErrorCode::InvalidArgument, "edge-frequency grid must be p x p with p >= 2");
  double sum = 0.0;
  for (int j = 0; j < p; ++j) {
    for (int k = j + 1; k < p; ++k) {
      const double a = A_bar(j, k);
      if (a < 0.0 || a > 1.0)
        throw Error(ErrorCode::InvalidArgument, "edge frequencies must lie in [0, 1]");
      sum += 2.0 * a * (1.0 - a);
    }
  }
  return sum / (0.5 * p * (p - 1));
}

StabilityResult stars_select(const CountMatrix& X, const RegularizationPath& path,
                             const SolverConfig& solver_cfg, const StabilityConfig& stab_cfg,
                             EdgeRule rule, int threads) {
  X.validate();
  path.validate();
  solver_cfg.validate();
  const int n = X.n();
  const int p = X.p();
  const int K = path.size();
  stab_cfg.validate(n);
  const int m = stab_cfg.m > 0 ? stab_cfg.m : default_subsample_size(n);

  StabilityResult result;
  result.edge_frequency.assign(K, Eigen::MatrixXd::Zero(p, p));

  for (int b = 0; b < stab_cfg.B; ++b) {
    const RngSpec spec{stab_cfg.seed, static_cast<std::uint64_t>(b) + 1};
    const std::vector<int> rows = subsample_rows(n, m, spec);
    Eigen::MatrixXd sub(m, p);
    for (int r = 0; r < m; ++r) sub.row(r) = X.values.row(rows[r]);

    std::vector<char> degenerate(p, 0);
    for (int j = 0; j < p; ++j) {
      if (column_constant(sub, j)) {
        degenerate[j] = 1;
        result.warnings.push_back("subsample " + std::to_string(b + 1) + ": variable '" +
                                  X.variable_ids[j] +
                                  "' is constant; its regression contributes no edges");
      }
    }

    std::vector<NodePattern> patterns(p);
    parallel_for(p, threads, [&](int j) {
      if (degenerate[j]) {
        patterns[j].skipped = true;
        return;
      }
      patterns[j] = node_pattern(sub, j, path, solver_cfg);
    });

    // Sequential reduction: union adjacency for this subsample, added into the
    // frequency grids. Integer-count order independence keeps results
    // identical for any worker count.
    std::vector<std::uint8_t> present(static_cast<std::size_t>(p) * p);
    for (int t = 0; t < K; ++t) {
      std::fill(present.begin(), present.end(), 0);
      for (int j = 0; j < p; ++j) {
        if (patterns[j].skipped) continue;
        for (int c = 0; c < p - 1; ++c) {
          if (!patterns[j].nonzero[static_cast<std::size_t>(c) * K + t]) continue;
          const int v = predictor_to_variable(j, c);
          present[static_cast<std::size_t>(j) * p + v] = 1;
        }
      }
      Eigen::MatrixXd& freq = result.edge_frequency[t];
      for (int j = 0; j < p; ++j) {
        for (int k = j + 1; k < p; ++k) {
          const bool jk = present[static_cast<std::size_t>(k) * p + j] != 0;
          const bool kj = present[static_cast<std::size_t>(j) * p + k] != 0;
          const bool edge = rule == EdgeRule::Union ? (jk || kj) : (jk && kj);
          if (edge) {
            freq(j, k) += 1.0;
            freq(k, j) += 1.0;
          }
        }
      }
    }
  }

  result.instability.resize(K);
  result.instability_mono.resize(K);
  double running_max = 0.0;
  for (int t = 0; t < K; ++t) {
    result.edge_frequency[t] /= static_cast<double>(stab_cfg.B);
    result.instability[t] = instability(result.edge_frequency[t]);
    running_max = std::max(running_max, result.instability[t]);
    result.instability_mono[t] = running_max;
  }

  int selected = -1;
  for (int t = K - 1; t >= 0; --t) {
    if (result.instability_mono[t] <= stab_cfg.beta) {
      selected = t;
      break;
    }
  }
  if (selected < 0) {
    selected = 0;
    result.budget_violated = true;
    result.warnings.push_back(
        "no path point satisfies the instability budget; falling back to rho_max");
  }
  result.selected_index = selected;
  result.rho_opt = path.values[selected];
  return result;
}

ParameterMatrix theta_at(const std::vector<PathSolution>& paths, int path_index, int p) {
  ParameterMatrix theta;
  theta.theta = Eigen::MatrixXd::Zero(p, p);
  theta.intercepts = Eigen::VectorXd::Zero(p);
  for (const PathSolution& sol : paths) {
    if (sol.node < 0) continue;  // skipped degenerate node
    if (path_index < 0 || path_index >= static_cast<int>(sol.objective.size()))
      throw Error(ErrorCode::InvalidArgument, "path index out of range");
    for (int c = 0; c < sol.coefficients.rows(); ++c) {
      const int v = predictor_to_variable(sol.node, c);
      theta.theta(v, sol.node) = sol.coefficients(c, path_index);
    }
    theta.intercepts(sol.node) = sol.intercepts[path_index];
  }
  return theta;
}

LlgmFit fit_llgm(const CountMatrix& X, const FitOptions& options) {
  X.validate();
  options.solver.validate();
  const int p = X.p();

  LlgmFit fit;
  fit.variable_ids = X.variable_ids;

  const double rho_max = compute_rho_max(X.values, options.paper_rho_max);
  if (!(rho_max > options.rho_min))
    throw Error(ErrorCode::Degenerate,
                "rho_max (" + std::to_string(rho_max) +
                    ") does not exceed rho_min; no meaningful penalty path exists");
  fit.path = make_path(rho_max, options.rho_min, options.path_length);

  std::vector<char> degenerate(p, 0);
  for (int j = 0; j < p; ++j) {
    if (column_constant(X.values, j)) {
      degenerate[j] = 1;
      fit.warnings.push_back("variable '" + X.variable_ids[j] +
                             "' is constant; its regression contributes no edges");
    }
  }

  fit.theta_path.resize(p);
  parallel_for(p, options.threads, [&](int j) {
    if (degenerate[j]) {
      fit.theta_path[j].node = -1;
      return;
    }
    fit.theta_path[j] = fit_node_path(X.values, j, fit.path, options.solver);
  });

  if (options.run_stability && !options.fixed_rho) {
    fit.stability = stars_select(X, fit.path, options.solver, options.stability,
                                 options.edge_rule, options.threads);
    fit.stability_run = true;
    fit.selected_index = fit.stability.selected_index;
  } else {
    const double target = options.fixed_rho.value_or(options.rho_min);
    int best = 0;
    double best_gap = std::numeric_limits<double>::infinity();
    for (int t = 0; t < fit.path.size(); ++t) {
      const double gap = std::abs(std::log(fit.path.values[t]) - std::log(target));
      if (gap < best_gap) {
        best_gap = gap;
        best = t;
      }
    }
    fit.selected_index = best;
  }
  fit.rho_opt = fit.path.values[fit.selected_index];

  fit.theta_opt = theta_at(fit.theta_path, fit.selected_index, p);
  fit.adjacency = assemble_adjacency(fit.theta_opt, options.edge_rule);

  for (int j = 0; j < p; ++j) {
    if (degenerate[j]) continue;
    if (!fit.theta_path[j].converged[fit.selected_index])
      fit.warnings.push_back("variable '" + X.variable_ids[j] +
                             "': regression did not converge at rho_opt");
  }
  return fit;
}

}  // namespace llgm
