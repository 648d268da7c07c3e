#pragma once

#include <map>
#include <vector>

#include "network.hpp"
#include "types.hpp"

namespace llgm {

struct RatePair {
  double tpr = 0.0;
  double fpr = 0.0;
  bool tpr_defined = true;  // false when the true edge set is empty
  bool fpr_defined = true;  // false when the true graph is complete
};

// Rates over unordered pairs, diagonal excluded.
RatePair tpr_fpr(const AdjacencyMatrix& estimated, const AdjacencyMatrix& truth);

struct RocCurve {
  std::vector<double> rho;  // descending, one entry per path point
  std::vector<double> fpr;
  std::vector<double> tpr;
  double auc = 0.5;
};

// One operating point per path value; AUC by trapezoid over points sorted by
// FPR with (0,0) and (1,1) anchors appended.
RocCurve roc_from_path(const std::vector<PathSolution>& theta_path,
                       const AdjacencyMatrix& truth, EdgeRule rule,
                       const RegularizationPath& path);

struct DegreeReport {
  std::map<int, int> degree_histogram;  // degree -> node count, degree 0 included
  double loglog_slope = 0.0;            // log(count) on log(degree), degree >= 1 only
  double loglog_r2 = 0.0;
  bool slope_defined = false;
};

DegreeReport degree_stats(const AdjacencyMatrix& A);

}  // namespace llgm
