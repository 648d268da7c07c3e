#include <doctest.h>

#include <cmath>

#include "evaluate.hpp"
#include "rng.hpp"
#include "simulate.hpp"

using namespace llgm;

namespace {

// Nested path family from per-pair scores: the coefficient for pair (j,k)
// turns on once rho drops below its score.
std::vector<PathSolution> nested_paths(const Eigen::MatrixXd& scores,
                                       const RegularizationPath& path) {
  const int p = static_cast<int>(scores.rows());
  std::vector<PathSolution> sols(p);
  for (int j = 0; j < p; ++j) {
    sols[j].node = j;
    sols[j].coefficients.setZero(p - 1, path.size());
    sols[j].intercepts.assign(path.size(), 0.0);
    sols[j].converged.assign(path.size(), 1);
    sols[j].iterations.assign(path.size(), 1);
    sols[j].objective.assign(path.size(), 0.0);
    for (int c = 0; c < p - 1; ++c) {
      const int v = predictor_to_variable(j, c);
      for (int t = 0; t < path.size(); ++t)
        if (scores(j, v) > path.values[t]) sols[j].coefficients(c, t) = scores(j, v);
    }
  }
  return sols;
}

}  // namespace

TEST_CASE("tpr_fpr: exact recovery and the empty estimate") {
  AdjacencyMatrix truth(4);
  truth.set_edge(0, 1, 1);
  truth.set_edge(2, 3, 1);

  RatePair perfect = tpr_fpr(truth, truth);
  CHECK(perfect.tpr == doctest::Approx(1.0));
  CHECK(perfect.fpr == doctest::Approx(0.0));

  RatePair empty = tpr_fpr(AdjacencyMatrix(4), truth);
  CHECK(empty.tpr == doctest::Approx(0.0));
  CHECK(empty.fpr == doctest::Approx(0.0));
}

TEST_CASE("tpr_fpr: hand-counted 4-node instance") {
  AdjacencyMatrix truth(4);
  truth.set_edge(0, 1, 1);
  truth.set_edge(2, 3, 1);
  AdjacencyMatrix estimate(4);
  estimate.set_edge(0, 1, 1);
  estimate.set_edge(0, 2, 1);
  RatePair rates = tpr_fpr(estimate, truth);
  CHECK(rates.tpr == doctest::Approx(0.5));
  CHECK(rates.fpr == doctest::Approx(0.25));
}

TEST_CASE("tpr_fpr: degenerate truths are flagged") {
  AdjacencyMatrix empty_truth(3);
  RatePair no_edges = tpr_fpr(AdjacencyMatrix(3), empty_truth);
  CHECK_FALSE(no_edges.tpr_defined);
  CHECK(no_edges.fpr_defined);

  AdjacencyMatrix complete(3);
  for (int j = 0; j < 3; ++j)
    for (int k = j + 1; k < 3; ++k) complete.set_edge(j, k, 1);
  RatePair full = tpr_fpr(complete, complete);
  CHECK_FALSE(full.fpr_defined);
  CHECK(full.tpr == doctest::Approx(1.0));
}

TEST_CASE("tpr_fpr: monotone under edge addition") {
  Rng rng(41, 0);
  AdjacencyMatrix truth = gen_random_graph(8, 0.3, rng);
  if (truth.edge_count() == 0) truth.set_edge(0, 1, 1);
  AdjacencyMatrix estimate(8);
  double last_tpr = 0.0, last_fpr = 0.0;
  for (int j = 0; j < 8; ++j) {
    for (int k = j + 1; k < 8; ++k) {
      estimate.set_edge(j, k, 1);
      const RatePair rates = tpr_fpr(estimate, truth);
      if (rates.tpr_defined) {
        CHECK(rates.tpr >= last_tpr);
        last_tpr = rates.tpr;
      }
      if (rates.fpr_defined) {
        CHECK(rates.fpr >= last_fpr);
        last_fpr = rates.fpr;
      }
    }
  }
}

TEST_CASE("tpr_fpr(A, A) = (1, 0) for random non-degenerate graphs") {
  for (int rep = 0; rep < 20; ++rep) {
    Rng rng(300 + rep, 0);
    AdjacencyMatrix A = gen_random_graph(7, 0.3, rng);
    const RatePair rates = tpr_fpr(A, A);
    if (rates.tpr_defined) CHECK(rates.tpr == doctest::Approx(1.0));
    if (rates.fpr_defined) CHECK(rates.fpr == doctest::Approx(0.0));
  }
}

TEST_CASE("roc_from_path: truth-nested family reaches AUC 1") {
  Rng rng(51, 0);
  AdjacencyMatrix truth = gen_random_graph(8, 0.3, rng);
  if (truth.edge_count() == 0) truth.set_edge(0, 1, 1);
  // Scores: true edges strictly above every false edge.
  Eigen::MatrixXd scores = Eigen::MatrixXd::Zero(8, 8);
  for (int j = 0; j < 8; ++j)
    for (int k = 0; k < 8; ++k)
      if (j != k) scores(j, k) = truth.at(j, k) ? 2.0 + rng.uniform() : 0.2 * rng.uniform();
  RegularizationPath path = make_path(5.0, 1e-3, 30);
  RocCurve curve = roc_from_path(nested_paths(scores, path), truth, EdgeRule::Union, path);
  CHECK(curve.auc == doctest::Approx(1.0));
}

TEST_CASE("roc_from_path: random scores hover near AUC 0.5") {
  double auc_sum = 0.0;
  const int reps = 20;
  for (int rep = 0; rep < reps; ++rep) {
    Rng rng(400 + rep, 0);
    AdjacencyMatrix truth = gen_random_graph(10, 0.25, rng);
    if (truth.edge_count() == 0 || truth.edge_count() == 45) continue;
    Eigen::MatrixXd scores = Eigen::MatrixXd::Zero(10, 10);
    for (int j = 0; j < 10; ++j)
      for (int k = 0; k < 10; ++k)
        if (j != k) scores(j, k) = rng.uniform();
    RegularizationPath path = make_path(2.0, 1e-3, 40);
    auc_sum += roc_from_path(nested_paths(scores, path), truth, EdgeRule::Union, path).auc;
  }
  const double mean_auc = auc_sum / reps;
  CHECK(mean_auc >= 0.4);
  CHECK(mean_auc <= 0.6);
}

TEST_CASE("roc_from_path: single-point path at rho_max") {
  AdjacencyMatrix truth(4);
  truth.set_edge(0, 1, 1);
  Eigen::MatrixXd scores = Eigen::MatrixXd::Zero(4, 4);
  RegularizationPath path;
  path.values = {1.0};
  RocCurve curve = roc_from_path(nested_paths(scores, path), truth, EdgeRule::Union, path);
  REQUIRE(curve.fpr.size() == 1);
  CHECK(curve.fpr[0] == doctest::Approx(0.0));
  CHECK(curve.tpr[0] == doctest::Approx(0.0));
  CHECK(curve.auc == doctest::Approx(0.5));
}

TEST_CASE("degree_stats: star and regular graphs") {
  AdjacencyMatrix star(5);
  for (int j = 1; j < 5; ++j) star.set_edge(0, j, 1);
  DegreeReport report = degree_stats(star);
  CHECK(report.degree_histogram.at(1) == 4);
  CHECK(report.degree_histogram.at(4) == 1);
  CHECK(report.slope_defined);

  AdjacencyMatrix ring(5);
  for (int j = 0; j < 5; ++j) ring.set_edge(j, (j + 1) % 5, 1);
  DegreeReport regular = degree_stats(ring);
  CHECK_FALSE(regular.slope_defined);
  CHECK(std::isnan(regular.loglog_slope));
}

TEST_CASE("degree_stats: scale-free output has a good power-law fit") {
  double r2_sum = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    Rng rng(500 + rep, 0);
    DegreeReport report = degree_stats(gen_scale_free(500, rng));
    REQUIRE(report.slope_defined);
    CHECK(report.loglog_slope < 0.0);
    r2_sum += report.loglog_r2;
  }
  CHECK(r2_sum / 20.0 >= 0.6);
}
