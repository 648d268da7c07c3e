#include "solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace llgm {

namespace {

inline double soft_threshold(double u, double rho) {
  if (u > rho) return u - rho;
  if (u < -rho) return u + rho;
  return 0.0;
}

inline Eigen::ArrayXd clamped(const Eigen::ArrayXd& eta, double cap) {
  return eta.min(cap).max(-cap);
}

// One node's pathwise solver state: response x, predictor block U (columns of
// X other than j), and the proximal-Newton / coordinate-descent loop.
class NodeSolver {
 public:
  NodeSolver(Eigen::MatrixXd predictors, Eigen::VectorXd response, const SolverConfig& config)
      : U_(std::move(predictors)),
        x_(std::move(response)),
        cfg_(config),
        n_(static_cast<int>(x_.size())),
        q_(static_cast<int>(U_.cols())),
        scales_(Eigen::VectorXd::Ones(q_)),
        U_sq_() {
    if (cfg_.standardize) {
      // Root-mean-square scaling (no centering, so counts stay non-negative
      // and zeros stay zeros). The penalty applies to the scaled coefficients.
      for (int k = 0; k < q_; ++k) {
        const double s = std::sqrt(U_.col(k).array().square().mean());
        if (s > 0.0) {
          scales_(k) = s;
          U_.col(k) /= s;
        }
      }
    }
    U_sq_ = U_.array().square().matrix();
  }

  double penalized_objective(const Eigen::VectorXd& beta, double intercept, double rho) const {
    Eigen::ArrayXd eta = clamped(((U_ * beta).array() + intercept), cfg_.eta_cap);
    const double loglik = (x_.array() * eta - eta.exp()).mean();
    return loglik - rho * beta.lpNorm<1>();
  }

  NodeFit fit(double rho, Eigen::VectorXd beta, double intercept) {
    NodeFit fit;
    if (!cfg_.use_intercept) intercept = 0.0;
    if (cfg_.standardize) beta = beta.cwiseProduct(scales_);  // to the scaled basis
    Eigen::ArrayXd eta = (U_ * beta).array() + intercept;
    double obj = objective_at(eta, beta, rho);

    bool converged = false;
    int iter = 0;
    while (iter < cfg_.max_iter) {
      ++iter;
      Eigen::VectorXd beta_new = beta;
      double intercept_new = intercept;
      quadratic_solve(eta, rho, beta_new, intercept_new,
                      cfg_.tol * std::max(1.0, std::abs(obj)));

      Eigen::ArrayXd eta_new = (U_ * beta_new).array() + intercept_new;
      double obj_new = objective_at(eta_new, beta_new, rho);

      // Step-halving keeps the penalized objective non-decreasing.
      int halvings = 0;
      while (obj_new < obj - 1e-12 * std::max(1.0, std::abs(obj)) && halvings < 40) {
        beta_new = 0.5 * (beta_new + beta);
        intercept_new = 0.5 * (intercept_new + intercept);
        eta_new = (U_ * beta_new).array() + intercept_new;
        obj_new = objective_at(eta_new, beta_new, rho);
        ++halvings;
      }
      if (obj_new < obj) {
        // No ascent direction left at this accuracy.
        converged = kkt_satisfied(eta, beta, rho, obj);
        break;
      }

      const double delta = obj_new - obj;
      beta.swap(beta_new);
      intercept = intercept_new;
      eta.swap(eta_new);
      obj = obj_new;
      // Objective stagnation alone can stop short of stationarity; require the
      // KKT certificate before declaring convergence.
      if (delta <= cfg_.tol * std::max(1.0, std::abs(obj)) &&
          kkt_satisfied(eta, beta, rho, obj)) {
        converged = true;
        break;
      }
    }

    fit.beta = cfg_.standardize ? Eigen::VectorXd(beta.cwiseQuotient(scales_)) : std::move(beta);
    fit.intercept = intercept;
    fit.diag.converged = converged;
    fit.diag.iterations = iter;
    fit.diag.objective = obj;
    fit.diag.eta_capped = (eta.abs() >= cfg_.eta_cap).any();
    return fit;
  }

 private:
  // Stationarity certificate with kappa = 10 * tol * max(1, |objective|):
  // |g_k| <= rho + kappa at zero coordinates, |g_k - rho sign(beta_k)| <= kappa
  // at nonzero ones.
  bool kkt_satisfied(const Eigen::ArrayXd& eta, const Eigen::VectorXd& beta, double rho,
                     double obj) const {
    const double kappa = 10.0 * cfg_.tol * std::max(1.0, std::abs(obj));
    const Eigen::ArrayXd resid = x_.array() - clamped(eta, cfg_.eta_cap).exp();
    if (cfg_.use_intercept && std::abs(resid.mean()) > kappa) return false;
    const Eigen::VectorXd grad = U_.transpose() * resid.matrix() / n_;
    for (int k = 0; k < q_; ++k) {
      const double g = grad(k);
      if (beta(k) == 0.0) {
        if (std::abs(g) > rho + kappa) return false;
      } else if (std::abs(g - rho * (beta(k) > 0.0 ? 1.0 : -1.0)) > kappa) {
        return false;
      }
    }
    return true;
  }

  double objective_at(const Eigen::ArrayXd& eta, const Eigen::VectorXd& beta, double rho) const {
    Eigen::ArrayXd e = clamped(eta, cfg_.eta_cap);
    return (x_.array() * e - e.exp()).mean() - rho * beta.lpNorm<1>();
  }

  // Minimizes the local weighted least-squares surrogate plus the l1 penalty
  // by cyclic coordinate descent with soft-thresholding. The surrogate
  // residual r = x - w - W U (beta - beta_lin) is maintained exactly, so each
  // coordinate visit costs O(n) and never touches the q x q Gram matrix.
  // Sweeps continue until the largest move, measured on the gradient scale
  // denom * |delta|, drops below grad_tol; this bounds the surrogate's KKT
  // residual so the outer loop's stationarity certificate can be met.
  void quadratic_solve(const Eigen::ArrayXd& eta, double rho, Eigen::VectorXd& beta,
                       double& intercept, double grad_tol) const {
    const Eigen::ArrayXd eta_c = clamped(eta, cfg_.eta_cap);
    const Eigen::ArrayXd w = eta_c.exp();
    Eigen::ArrayXd r = x_.array() - w;

    const Eigen::VectorXd denom = U_sq_.transpose() * w.matrix() / n_;
    // (1/n) U^T w, intercept cross terms.
    const Eigen::VectorXd cross0 = U_.transpose() * w.matrix() / n_;
    const double denom0 = w.mean();

    const double inner_tol = 0.1 * grad_tol;
    const int max_sweeps = 1000;

    // Weighted Gram entries over coordinates that have entered the active
    // set, built once per surrogate (w is fixed here) and shared by every
    // active-set solve and sign-flip retry below.
    std::vector<int> cache_pos(q_, -1);
    int cached = 0;
    Eigen::MatrixXd Uc(n_, q_), Vc(n_, q_), G(q_, q_);
    auto ensure_cached = [&](const std::vector<int>& coords) {
      const int old = cached;
      for (int c : coords) {
        if (cache_pos[c] >= 0) continue;
        cache_pos[c] = cached;
        Uc.col(cached) = U_.col(c);
        Vc.col(cached) = (U_.col(c).array() * w).matrix();
        ++cached;
      }
      const int fresh = cached - old;
      if (fresh == 0) return;
      G.block(0, old, cached, fresh) =
          Uc.leftCols(cached).transpose() * Vc.middleCols(old, fresh) / n_;
      G.block(old, 0, fresh, old) = G.block(0, old, old, fresh).transpose();
    };

    auto update_coordinate = [&](int k) -> double {
      if (denom(k) <= 1e-12) return 0.0;
      const double gk = U_.col(k).dot(r.matrix()) / n_;
      const double c = gk + denom(k) * beta(k);
      const double updated = soft_threshold(c, rho) / denom(k);
      const double delta = updated - beta(k);
      if (delta != 0.0) {
        beta(k) = updated;
        if (cache_pos[k] >= 0)
          r -= delta * Vc.col(cache_pos[k]).array();
        else
          r -= delta * (U_.col(k).array() * w);
      }
      return denom(k) * std::abs(delta);
    };
    auto update_intercept = [&]() -> double {
      if (!cfg_.use_intercept || denom0 <= 1e-12) return 0.0;
      const double delta = r.mean() / denom0;
      if (delta != 0.0) {
        intercept += delta;
        r -= delta * w;
      }
      return denom0 * std::abs(delta);
    };
    auto sweep = [&](bool full) {
      double max_change = 0.0;
      for (int k = 0; k < q_; ++k) {
        if (!full && beta(k) == 0.0) continue;
        max_change = std::max(max_change, update_coordinate(k));
      }
      max_change = std::max(max_change, update_intercept());
      return max_change;
    };

    // Plain cyclic descent crawls on strongly correlated count predictors, so
    // once the support is known the restricted problem is solved exactly: with
    // the signs fixed, stationarity on the active set is the linear system
    // H delta = g_A - rho * s_A, with H built only over the active columns.
    // Coordinates whose sign would flip are constrained to zero and the solve
    // repeats on the reduced set; the following full sweep verifies the result
    // and reactivates anything the solve missed.
    auto exact_active_solve = [&]() {
      std::vector<int> act;
      for (int k = 0; k < q_; ++k)
        if (beta(k) != 0.0 && denom(k) > 1e-12) act.push_back(k);
      const int a = static_cast<int>(act.size());
      if (a == 0) return;
      const bool use_int = cfg_.use_intercept;
      ensure_cached(act);

      const int dim = a + (use_int ? 1 : 0);
      Eigen::MatrixXd H(dim, dim);
      Eigen::VectorXd grad(dim);
      for (int i = 0; i < a; ++i) {
        for (int l = 0; l < a; ++l) H(l, i) = G(cache_pos[act[l]], cache_pos[act[i]]);
        grad(i) = Uc.col(cache_pos[act[i]]).dot(r.matrix()) / n_;
      }
      if (use_int) {
        for (int i = 0; i < a; ++i) H(a, i) = H(i, a) = cross0(act[i]);
        H(a, a) = denom0;
        grad(a) = r.mean();
      }

      std::vector<char> dropped(a, 0);
      Eigen::VectorXd target = Eigen::VectorXd::Zero(a);
      double new_intercept = intercept;
      bool solved = false;
      for (int attempt = 0; attempt < 10 && !solved; ++attempt) {
        std::vector<int> keep;
        for (int i = 0; i < a; ++i)
          if (!dropped[i]) keep.push_back(i);
        const int m = static_cast<int>(keep.size());
        const int sub_dim = m + (use_int ? 1 : 0);
        if (sub_dim == 0) return;
        // A coordinate dropped to zero moves by -beta; fold that known move
        // into the right-hand side of the reduced system.
        auto row_rhs = [&](int full_i) {
          double v = grad(full_i);
          if (full_i < a) v -= rho * (beta(act[full_i]) > 0.0 ? 1.0 : -1.0);
          for (int d = 0; d < a; ++d)
            if (dropped[d]) v += H(full_i, d) * beta(act[d]);
          return v;
        };
        Eigen::MatrixXd Hs(sub_dim, sub_dim);
        Eigen::VectorXd rhs(sub_dim);
        for (int ii = 0; ii < m; ++ii) {
          for (int ll = 0; ll < m; ++ll) Hs(ll, ii) = H(keep[ll], keep[ii]);
          if (use_int) Hs(m, ii) = Hs(ii, m) = H(a, keep[ii]);
          rhs(ii) = row_rhs(keep[ii]);
        }
        if (use_int) {
          Hs(m, m) = denom0;
          rhs(m) = row_rhs(a);
        }
        const Eigen::VectorXd delta = Hs.ldlt().solve(rhs);
        if (!delta.allFinite()) return;

        solved = true;
        for (int ii = 0; ii < m; ++ii) {
          const int i = keep[ii];
          const double updated = beta(act[i]) + delta(ii);
          if (updated != 0.0 && (updated > 0.0) != (beta(act[i]) > 0.0)) {
            // Sign flip: constrain the coordinate to zero and re-solve.
            dropped[i] = 1;
            target(i) = 0.0;
            solved = false;
          } else {
            target(i) = updated;
          }
        }
        if (use_int) new_intercept = intercept + delta(m);
      }
      if (!solved) return;

      for (int i = 0; i < a; ++i) {
        const double move = target(i) - beta(act[i]);
        if (move != 0.0) r -= move * Vc.col(cache_pos[act[i]]).array();
        beta(act[i]) = target(i);
      }
      if (use_int) {
        r -= (new_intercept - intercept) * w;
        intercept = new_intercept;
      }
    };

    if (!cfg_.active_set) {
      for (int s = 0; s < max_sweeps; ++s)
        if (sweep(true) < inner_tol) break;
      return;
    }

    // Full sweep to seed the active set, a few stabilizing active cycles, a
    // Newton solve on the support, then a full verification sweep; repeat
    // while the verification sweep finds meaningful moves. Near-saturated
    // supports (active count at or beyond the sample count) make the Newton
    // system singular and the rounds cease to contract; stop once progress
    // stalls and let the outer loop report non-convergence honestly.
    sweep(true);
    double prev_move = std::numeric_limits<double>::infinity();
    for (int round = 0; round < 50; ++round) {
      for (int s = 0; s < 5; ++s)
        if (sweep(false) < inner_tol) break;
      exact_active_solve();
      const double moved = sweep(true);
      if (moved < inner_tol) break;
      int nnz = 0;
      for (int k = 0; k < q_; ++k)
        if (beta(k) != 0.0) ++nnz;
      if (2 * nnz >= n_ && moved > 0.5 * prev_move) break;
      prev_move = moved;
    }
  }

  Eigen::MatrixXd U_;
  Eigen::VectorXd x_;
  SolverConfig cfg_;
  int n_;
  int q_;
  Eigen::VectorXd scales_;
  Eigen::MatrixXd U_sq_;  // entrywise squares of U, for the curvature matvec
};

Eigen::MatrixXd drop_column(const Eigen::MatrixXd& X, int j) {
  Eigen::MatrixXd U(X.rows(), X.cols() - 1);
  if (j > 0) U.leftCols(j) = X.leftCols(j);
  if (j + 1 < X.cols()) U.rightCols(X.cols() - j - 1) = X.rightCols(X.cols() - j - 1);
  return U;
}

void check_node_args(const Eigen::MatrixXd& X, int j, double rho) {
  if (!X.allFinite()) throw Error(ErrorCode::InvalidArgument, "non-finite data matrix");
  if (j < 0 || j >= X.cols()) throw Error(ErrorCode::InvalidArgument, "node index out of range");
  if (!(rho >= 0.0) || !std::isfinite(rho))
    throw Error(ErrorCode::InvalidArgument, "rho must be finite and non-negative");
}

}  // namespace

double objective(const Eigen::MatrixXd& X, int j, const Eigen::VectorXd& beta,
                 double intercept, double rho, double eta_cap) {
  check_node_args(X, j, rho);
  if (beta.size() != X.cols() - 1)
    throw Error(ErrorCode::InvalidArgument, "coefficient length must be p-1");
  if (!beta.allFinite() || !std::isfinite(intercept))
    throw Error(ErrorCode::InvalidArgument, "non-finite coefficients");
  Eigen::ArrayXd eta = Eigen::ArrayXd::Constant(X.rows(), intercept);
  for (int k = 0; k < beta.size(); ++k)
    eta += beta(k) * X.col(predictor_to_variable(j, k)).array();
  eta = clamped(eta, eta_cap);
  return (X.col(j).array() * eta - eta.exp()).mean() - rho * beta.lpNorm<1>();
}

Eigen::VectorXd unpenalized_gradient(const Eigen::MatrixXd& X, int j,
                                     const Eigen::VectorXd& beta, double intercept,
                                     double eta_cap) {
  check_node_args(X, j, 0.0);
  Eigen::ArrayXd eta = Eigen::ArrayXd::Constant(X.rows(), intercept);
  for (int k = 0; k < beta.size(); ++k)
    eta += beta(k) * X.col(predictor_to_variable(j, k)).array();
  eta = clamped(eta, eta_cap);
  const Eigen::ArrayXd resid = X.col(j).array() - eta.exp();
  Eigen::VectorXd grad(beta.size());
  for (int k = 0; k < beta.size(); ++k)
    grad(k) = (X.col(predictor_to_variable(j, k)).array() * resid).mean();
  return grad;
}

double compute_rho_max(const Eigen::MatrixXd& X, bool paper_formula) {
  if (X.rows() < 1 || X.cols() < 2)
    throw Error(ErrorCode::InvalidArgument, "rho_max needs a nonempty matrix with p >= 2");
  const int n = static_cast<int>(X.rows());
  const int p = static_cast<int>(X.cols());
  double best = 0.0;
  for (int j = 0; j < p; ++j) {
    Eigen::VectorXd target =
        paper_formula ? Eigen::VectorXd(X.col(j))
                      : Eigen::VectorXd(X.col(j) - Eigen::VectorXd::Ones(n));
    Eigen::VectorXd scores = X.transpose() * target;
    if (!paper_formula) scores /= static_cast<double>(n);
    for (int k = 0; k < p; ++k)
      if (k != j) best = std::max(best, std::abs(scores(k)));
  }
  return best;
}

NodeFit fit_node(const Eigen::MatrixXd& X, int j, double rho,
                 const Eigen::VectorXd& warm_start, double warm_intercept,
                 const SolverConfig& config) {
  check_node_args(X, j, rho);
  config.validate();
  Eigen::VectorXd beta = warm_start;
  if (beta.size() == 0) beta = Eigen::VectorXd::Zero(X.cols() - 1);
  if (beta.size() != X.cols() - 1)
    throw Error(ErrorCode::InvalidArgument, "warm start length must be p-1");
  NodeSolver solver(drop_column(X, j), X.col(j), config);
  return solver.fit(rho, std::move(beta), warm_intercept);
}

PathSolution fit_node_path(const Eigen::MatrixXd& X, int j, const RegularizationPath& path,
                           const SolverConfig& config) {
  check_node_args(X, j, 0.0);
  path.validate();
  config.validate();
  const int K = path.size();
  const int q = static_cast<int>(X.cols()) - 1;

  PathSolution sol;
  sol.node = j;
  sol.coefficients.setZero(q, K);
  sol.intercepts.assign(K, 0.0);
  sol.converged.assign(K, 0);
  sol.iterations.assign(K, 0);
  sol.objective.assign(K, 0.0);

  NodeSolver solver(drop_column(X, j), X.col(j), config);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(q);
  double intercept = 0.0;

  // The path starts at the empty model by construction: the first value is a
  // rho_max computed on the full data, and on subsampled rows the local KKT
  // threshold can drift slightly above it. Raising the first fit's penalty to
  // the local threshold keeps the rho_max column exactly zero either way.
  const int n = static_cast<int>(X.rows());
  const double baseline = config.use_intercept ? X.col(j).mean() : 1.0;
  double local_threshold = 0.0;
  for (int k = 0; k < static_cast<int>(X.cols()); ++k) {
    if (k == j) continue;
    local_threshold = std::max(
        local_threshold,
        std::abs(X.col(k).dot((X.col(j).array() - baseline).matrix())) / n);
  }

  for (int t = 0; t < K; ++t) {
    const double rho = t == 0 ? std::max(path.values[0], local_threshold) : path.values[t];
    NodeFit fit = solver.fit(rho, beta, intercept);
    beta = fit.beta;
    intercept = fit.intercept;
    sol.coefficients.col(t) = fit.beta;
    sol.intercepts[t] = fit.intercept;
    sol.converged[t] = fit.diag.converged ? 1 : 0;
    sol.iterations[t] = fit.diag.iterations;
    sol.objective[t] = fit.diag.objective;
  }
  return sol;
}

}  // namespace llgm
