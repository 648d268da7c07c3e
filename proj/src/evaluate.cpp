#include "evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace llgm {

RatePair tpr_fpr(const AdjacencyMatrix& estimated, const AdjacencyMatrix& truth) {
  estimated.validate();
  truth.validate();
  if (estimated.p != truth.p)
    throw Error(ErrorCode::InvalidArgument, "adjacency dimensions differ");
  const int p = truth.p;
  int true_edges = 0, non_edges = 0, tp = 0, fp = 0;
  for (int j = 0; j < p; ++j) {
    for (int k = j + 1; k < p; ++k) {
      if (truth.at(j, k)) {
        ++true_edges;
        tp += estimated.at(j, k);
      } else {
        ++non_edges;
        fp += estimated.at(j, k);
      }
    }
  }
  RatePair rates;
  if (true_edges == 0) {
    rates.tpr_defined = false;
    rates.tpr = std::numeric_limits<double>::quiet_NaN();
  } else {
    rates.tpr = static_cast<double>(tp) / true_edges;
  }
  if (non_edges == 0) {
    rates.fpr_defined = false;
    rates.fpr = std::numeric_limits<double>::quiet_NaN();
  } else {
    rates.fpr = static_cast<double>(fp) / non_edges;
  }
  return rates;
}

RocCurve roc_from_path(const std::vector<PathSolution>& theta_path,
                       const AdjacencyMatrix& truth, EdgeRule rule,
                       const RegularizationPath& path) {
  path.validate();
  const int p = truth.p;
  const int K = path.size();

  RocCurve curve;
  std::vector<std::pair<double, double>> points;  // (fpr, tpr)
  for (int t = 0; t < K; ++t) {
    const AdjacencyMatrix estimate = assemble_adjacency(theta_at(theta_path, t, p), rule);
    const RatePair rates = tpr_fpr(estimate, truth);
    curve.rho.push_back(path.values[t]);
    curve.fpr.push_back(rates.fpr);
    curve.tpr.push_back(rates.tpr);
    if (rates.tpr_defined && rates.fpr_defined) points.emplace_back(rates.fpr, rates.tpr);
  }

  points.emplace_back(0.0, 0.0);
  points.emplace_back(1.0, 1.0);
  std::sort(points.begin(), points.end());
  double auc = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i)
    auc += 0.5 * (points[i].first - points[i - 1].first) *
           (points[i].second + points[i - 1].second);
  curve.auc = auc;
  return curve;
}

DegreeReport degree_stats(const AdjacencyMatrix& A) {
  A.validate();
  DegreeReport report;
  for (int j = 0; j < A.p; ++j) report.degree_histogram[A.degree(j)] += 1;

  std::vector<double> lx, ly;
  for (const auto& [degree, count] : report.degree_histogram) {
    if (degree < 1) continue;  // log undefined at degree 0
    lx.push_back(std::log(static_cast<double>(degree)));
    ly.push_back(std::log(static_cast<double>(count)));
  }
  if (lx.size() < 2) {
    report.loglog_slope = std::numeric_limits<double>::quiet_NaN();
    report.loglog_r2 = std::numeric_limits<double>::quiet_NaN();
    return report;
  }
  const std::size_t n = lx.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  report.loglog_slope = sxy / sxx;
  report.loglog_r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  report.slope_defined = true;
  return report;
}

}  // namespace llgm
