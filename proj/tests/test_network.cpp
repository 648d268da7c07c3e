#include <doctest.h>

#include <set>

#include "network.hpp"
#include "rng.hpp"
#include "simulate.hpp"

using namespace llgm;

namespace {

ParameterMatrix theta_3x3(double t01, double t10) {
  ParameterMatrix theta;
  theta.theta = Eigen::MatrixXd::Zero(3, 3);
  theta.intercepts = Eigen::VectorXd::Zero(3);
  theta.theta(0, 1) = t01;
  theta.theta(1, 0) = t10;
  return theta;
}

CountMatrix simulated(int p, int n, GraphKind kind, std::uint64_t seed,
                      double lambda_noise = 0.5) {
  SimulationConfig config;
  config.p = p;
  config.n = n;
  config.graph_kind = kind;
  config.seed = seed;
  config.lambda_noise = lambda_noise;
  return simulate_counts(gen_graph(config), config);
}

}  // namespace

TEST_CASE("assemble_adjacency union and intersection rules") {
  ParameterMatrix theta = theta_3x3(0.5, 0.0);
  CHECK(assemble_adjacency(theta, EdgeRule::Union).at(0, 1) == 1);
  CHECK(assemble_adjacency(theta, EdgeRule::Intersection).at(0, 1) == 0);

  ParameterMatrix zero = theta_3x3(0.0, 0.0);
  CHECK(assemble_adjacency(zero, EdgeRule::Union).edge_count() == 0);
}

TEST_CASE("union dominates intersection entrywise") {
  Rng rng(9, 0);
  for (int trial = 0; trial < 20; ++trial) {
    ParameterMatrix theta;
    theta.theta = Eigen::MatrixXd::Zero(5, 5);
    theta.intercepts = Eigen::VectorXd::Zero(5);
    for (int j = 0; j < 5; ++j)
      for (int k = 0; k < 5; ++k)
        if (j != k && rng.uniform() < 0.4) theta.theta(j, k) = rng.uniform() - 0.5;
    AdjacencyMatrix u = assemble_adjacency(theta, EdgeRule::Union);
    AdjacencyMatrix i = assemble_adjacency(theta, EdgeRule::Intersection);
    for (int j = 0; j < 5; ++j)
      for (int k = 0; k < 5; ++k) CHECK(u.at(j, k) >= i.at(j, k));
  }
}

TEST_CASE("default subsample size follows the clamped StARS rule") {
  CHECK(default_subsample_size(544) == 233);  // min(233, 435)
  CHECK(default_subsample_size(64) == 51);    // min(80, 51), clamp active
  CHECK(default_subsample_size(200) == 141);
}

TEST_CASE("subsample_rows: deterministic, distinct, in range") {
  const auto rows1 = subsample_rows(100, 30, RngSpec{7, 3});
  const auto rows2 = subsample_rows(100, 30, RngSpec{7, 3});
  const auto rows3 = subsample_rows(100, 30, RngSpec{7, 4});
  CHECK(rows1 == rows2);
  CHECK(rows1 != rows3);
  std::set<int> unique(rows1.begin(), rows1.end());
  CHECK(unique.size() == 30);
  CHECK(*unique.begin() >= 0);
  CHECK(*unique.rbegin() < 100);
  CHECK_THROWS_AS(subsample_rows(10, 10, RngSpec{0, 0}), Error);
}

TEST_CASE("instability on hand-computed grids") {
  Eigen::MatrixXd stable = Eigen::MatrixXd::Zero(4, 4);
  stable(0, 1) = stable(1, 0) = 1.0;
  CHECK(instability(stable) == doctest::Approx(0.0));

  Eigen::MatrixXd half = Eigen::MatrixXd::Constant(4, 4, 0.5);
  half.diagonal().setZero();
  CHECK(instability(half) == doctest::Approx(0.5));

  Eigen::MatrixXd mixed = Eigen::MatrixXd::Zero(3, 3);
  mixed(0, 1) = mixed(1, 0) = 0.2;
  mixed(0, 2) = mixed(2, 0) = 1.0;
  mixed(1, 2) = mixed(2, 1) = 0.5;
  CHECK(instability(mixed) == doctest::Approx((2 * 0.16 + 0.0 + 0.5) / 3.0));
}

TEST_CASE("stars_select: invariants and determinism across thread counts") {
  CountMatrix X = simulated(8, 120, GraphKind::Hub, 42);
  RegularizationPath path = make_path(compute_rho_max(X.values), 1e-3, 15);
  SolverConfig solver_cfg;
  StabilityConfig stab_cfg;
  stab_cfg.B = 12;
  stab_cfg.seed = 5;

  StabilityResult r1 = stars_select(X, path, solver_cfg, stab_cfg, EdgeRule::Union, 1);
  StabilityResult r3 = stars_select(X, path, solver_cfg, stab_cfg, EdgeRule::Union, 3);

  CHECK(r1.rho_opt == r3.rho_opt);
  CHECK(r1.selected_index == r3.selected_index);
  for (int t = 0; t < path.size(); ++t) {
    CHECK(r1.instability[t] == r3.instability[t]);
    CHECK((r1.edge_frequency[t] - r3.edge_frequency[t]).cwiseAbs().maxCoeff() == 0.0);
  }

  // Empty graphs at rho_max, monotone envelope, budget satisfied.
  CHECK(r1.edge_frequency[0].cwiseAbs().maxCoeff() == 0.0);
  CHECK(r1.instability[0] == 0.0);
  for (int t = 1; t < path.size(); ++t)
    CHECK(r1.instability_mono[t] >= r1.instability_mono[t - 1]);
  if (!r1.budget_violated)
    CHECK(r1.instability_mono[r1.selected_index] <= stab_cfg.beta);
  for (int t = 0; t < path.size(); ++t) {
    CHECK(r1.instability[t] >= 0.0);
    CHECK(r1.instability[t] <= 0.5);
    for (int j = 0; j < X.p(); ++j) {
      CHECK(r1.edge_frequency[t](j, j) == 0.0);
      for (int k = 0; k < X.p(); ++k)
        CHECK(r1.edge_frequency[t](j, k) == r1.edge_frequency[t](k, j));
    }
  }
}

TEST_CASE("stars_select: a generous budget selects rho_min") {
  CountMatrix X = simulated(6, 80, GraphKind::Random, 11);
  RegularizationPath path = make_path(compute_rho_max(X.values), 1e-3, 10);
  StabilityConfig stab_cfg;
  stab_cfg.B = 8;
  stab_cfg.beta = 0.499;
  stab_cfg.seed = 2;
  StabilityResult result =
      stars_select(X, path, SolverConfig{}, stab_cfg, EdgeRule::Union, 1);
  CHECK(result.selected_index == path.size() - 1);
  CHECK(result.rho_opt == path.rho_min());
}

TEST_CASE("fit_llgm: independent columns give a near-empty stable graph") {
  Rng rng(123, 0);
  Eigen::MatrixXd values(500, 10);
  for (int i = 0; i < 500; ++i)
    for (int j = 0; j < 10; ++j) values(i, j) = static_cast<double>(rng.poisson(2.0));
  CountMatrix X = CountMatrix::with_default_labels(std::move(values));

  FitOptions options;
  options.path_length = 25;
  options.rho_min = 1e-3;
  options.stability.B = 20;
  options.stability.seed = 3;
  options.threads = 1;
  LlgmFit fit = fit_llgm(X, options);
  const double density = static_cast<double>(fit.adjacency.edge_count()) / 45.0;
  CHECK(density <= 0.1);
}

TEST_CASE("fit_llgm: a duplicated column pair is always recovered") {
  Rng rng(321, 0);
  Eigen::MatrixXd values(200, 6);
  for (int i = 0; i < 200; ++i) {
    for (int j = 0; j < 5; ++j) values(i, j) = static_cast<double>(rng.poisson(2.0));
    values(i, 5) = values(i, 0);  // duplicate of column 0
  }
  CountMatrix X = CountMatrix::with_default_labels(std::move(values));
  FitOptions options;
  options.path_length = 25;
  options.rho_min = 1e-3;
  options.stability.B = 20;
  options.stability.seed = 9;
  options.threads = 1;
  LlgmFit fit = fit_llgm(X, options);
  CHECK(fit.adjacency.at(0, 5) == 1);
}

TEST_CASE("fit_llgm: fixing rho at rho_max gives the empty graph") {
  CountMatrix X = simulated(6, 80, GraphKind::Hub, 77);
  FitOptions options;
  options.path_length = 10;
  options.rho_min = 1e-3;
  options.fixed_rho = compute_rho_max(X.values);
  options.threads = 1;
  LlgmFit fit = fit_llgm(X, options);
  CHECK(fit.selected_index == 0);
  CHECK(fit.adjacency.edge_count() == 0);
}

TEST_CASE("fit_llgm: permutation equivariance over the whole path") {
  CountMatrix X = simulated(6, 100, GraphKind::Hub, 5);
  const std::vector<int> perm = {3, 0, 5, 1, 4, 2};
  CountMatrix Y;
  Y.values.resize(X.n(), X.p());
  for (int j = 0; j < X.p(); ++j) {
    Y.values.col(perm[j]) = X.values.col(j);
  }
  Y.sample_ids = X.sample_ids;
  Y.variable_ids.resize(X.p());
  for (int j = 0; j < X.p(); ++j) Y.variable_ids[perm[j]] = X.variable_ids[j];

  FitOptions options;
  options.path_length = 12;
  options.rho_min = 1e-3;
  options.run_stability = false;
  options.fixed_rho = 1e-3;
  options.threads = 1;
  LlgmFit fx = fit_llgm(X, options);
  LlgmFit fy = fit_llgm(Y, options);

  for (int t = 0; t < fx.path.size(); ++t) {
    AdjacencyMatrix ax = assemble_adjacency(theta_at(fx.theta_path, t, 6), EdgeRule::Union);
    AdjacencyMatrix ay = assemble_adjacency(theta_at(fy.theta_path, t, 6), EdgeRule::Union);
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < 6; ++k) CHECK(ax.at(j, k) == ay.at(perm[j], perm[k]));
  }
}

TEST_CASE("fit_llgm: constant columns are skipped with a warning") {
  CountMatrix X = simulated(5, 60, GraphKind::Random, 8);
  X.values.col(2).setConstant(4.0);
  FitOptions options;
  options.path_length = 8;
  options.rho_min = 1e-2;
  options.run_stability = false;
  options.threads = 1;
  LlgmFit fit = fit_llgm(X, options);
  CHECK_FALSE(fit.warnings.empty());
}
