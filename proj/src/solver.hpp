#pragma once

#include <vector>

#include "types.hpp"

namespace llgm {

struct SolverConfig {
  double tol = 1e-6;        // relative change of the penalized objective
  int max_iter = 1000;      // outer proximal-Newton iterations
  double eta_cap = 30.0;    // clamp on the linear predictor before exp
  bool use_intercept = false;
  bool active_set = true;
  bool standardize = false;  // predictors used on the raw count scale by default

  void validate() const {
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
    if (max_iter < 1) throw Error(ErrorCode::InvalidArgument, "max_iter must be >= 1");
    if (!(eta_cap > 0.0)) throw Error(ErrorCode::InvalidArgument, "eta_cap must be positive");
  }
};

struct NodeDiagnostics {
  bool converged = false;
  int iterations = 0;
  double objective = 0.0;  // penalized log-linear objective at the solution
  bool eta_capped = false;
};

struct NodeFit {
  Eigen::VectorXd beta;  // p-1 coefficients, predictor order = columns != j
  double intercept = 0.0;
  NodeDiagnostics diag;
};

// Pathwise solution for one node: one coefficient column per penalty value,
// in the path's descending order.
struct PathSolution {
  int node = -1;
  Eigen::MatrixXd coefficients;  // (p-1) x K
  std::vector<double> intercepts;
  std::vector<char> converged;
  std::vector<int> iterations;
  std::vector<double> objective;
};

// Penalized log-linear objective being maximized:
//   (1/n) sum_i [x_ij eta_i - exp(eta_i)] - rho * ||beta||_1
// with eta clamped to [-eta_cap, eta_cap] before exponentiation.
double objective(const Eigen::MatrixXd& X, int j, const Eigen::VectorXd& beta,
                 double intercept, double rho, double eta_cap = 30.0);

// Unpenalized gradient (1/n) X_{.,!=j}^T (X_j - exp(eta)) at the given point.
Eigen::VectorXd unpenalized_gradient(const Eigen::MatrixXd& X, int j,
                                     const Eigen::VectorXd& beta, double intercept,
                                     double eta_cap = 30.0);

// KKT threshold at the all-zero solution: max_{j, k != j} (1/n) |X_k^T (X_j - 1)|.
// With paper_formula the literal max_{j, k != j} |X_k^T X_j| is used instead.
double compute_rho_max(const Eigen::MatrixXd& X, bool paper_formula = false);

NodeFit fit_node(const Eigen::MatrixXd& X, int j, double rho,
                 const Eigen::VectorXd& warm_start, double warm_intercept,
                 const SolverConfig& config);

PathSolution fit_node_path(const Eigen::MatrixXd& X, int j, const RegularizationPath& path,
                           const SolverConfig& config);

// Maps a predictor slot (0..p-2) in node j's regression to a variable index.
inline int predictor_to_variable(int j, int slot) { return slot < j ? slot : slot + 1; }

}  // namespace llgm
