#include "types.hpp"

#include <cmath>
#include <set>

namespace llgm {

namespace {

void check_labels(const std::vector<std::string>& labels, std::size_t expected,
                  const char* what) {
  if (labels.size() != expected)
    throw Error(ErrorCode::InvalidArgument,
                std::string(what) + " label count does not match dimension");
  std::set<std::string> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size())
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " labels contain duplicates");
}

}  // namespace

void CountMatrix::validate() const {
  if (n() < 2 || p() < 2)
    throw Error(ErrorCode::InvalidArgument, "count matrix needs n >= 2 and p >= 2");
  if (!values.allFinite())
    throw Error(ErrorCode::InvalidArgument, "count matrix has non-finite entries");
  if ((values.array() < 0.0).any())
    throw Error(ErrorCode::InvalidArgument, "count matrix has negative entries");
  check_labels(sample_ids, static_cast<std::size_t>(n()), "sample");
  check_labels(variable_ids, static_cast<std::size_t>(p()), "variable");
}

CountMatrix CountMatrix::with_default_labels(Eigen::MatrixXd values) {
  CountMatrix m;
  m.values = std::move(values);
  for (int i = 0; i < m.n(); ++i) m.sample_ids.push_back("s" + std::to_string(i + 1));
  for (int j = 0; j < m.p(); ++j) m.variable_ids.push_back("v" + std::to_string(j + 1));
  return m;
}

void ParameterMatrix::validate() const {
  if (theta.rows() != theta.cols())
    throw Error(ErrorCode::InvalidArgument, "parameter matrix must be square");
  if (!theta.allFinite())
    throw Error(ErrorCode::InvalidArgument, "parameter matrix has non-finite entries");
  for (int j = 0; j < p(); ++j)
    if (theta(j, j) != 0.0)
      throw Error(ErrorCode::InvalidArgument, "parameter matrix diagonal must be zero");
}

void RegularizationPath::validate() const {
  if (values.empty())
    throw Error(ErrorCode::InvalidArgument, "path needs at least one value");
  if (values.back() <= 0.0)
    throw Error(ErrorCode::InvalidArgument, "rho_min must be positive");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] >= values[i - 1])
      throw Error(ErrorCode::InvalidArgument, "path must be strictly decreasing");
}

RegularizationPath make_path(double rho_max, double rho_min, int K) {
  if (!(rho_max > rho_min) || !(rho_min > 0.0))
    throw Error(ErrorCode::InvalidArgument, "make_path requires rho_max > rho_min > 0");
  if (K < 2) throw Error(ErrorCode::InvalidArgument, "make_path requires K >= 2");
  RegularizationPath path;
  path.values.resize(K);
  const double lmax = std::log(rho_max);
  const double lmin = std::log(rho_min);
  for (int i = 0; i < K; ++i)
    path.values[i] = std::exp(lmax + (lmin - lmax) * i / (K - 1));
  path.values.front() = rho_max;  // endpoints exact
  path.values.back() = rho_min;
  path.validate();
  return path;
}

int AdjacencyMatrix::edge_count() const {
  int count = 0;
  for (int j = 0; j < p; ++j)
    for (int k = j + 1; k < p; ++k) count += at(j, k);
  return count;
}

int AdjacencyMatrix::degree(int j) const {
  int d = 0;
  for (int k = 0; k < p; ++k) d += at(j, k);
  return d;
}

void AdjacencyMatrix::validate() const {
  if (p < 0 || edges.size() != static_cast<std::size_t>(p) * p)
    throw Error(ErrorCode::InvalidArgument, "adjacency storage does not match dimension");
  for (int j = 0; j < p; ++j) {
    if (at(j, j) != 0)
      throw Error(ErrorCode::InvalidArgument, "adjacency diagonal must be zero");
    for (int k = 0; k < p; ++k) {
      if (at(j, k) > 1)
        throw Error(ErrorCode::InvalidArgument, "adjacency entries must be 0 or 1");
      if (at(j, k) != at(k, j))
        throw Error(ErrorCode::InvalidArgument, "adjacency must be symmetric");
    }
  }
}

}  // namespace llgm
