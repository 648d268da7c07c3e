#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace llgm {

enum class ErrorCode {
  InvalidArgument,
  Io,
  Parse,
  Degenerate,
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// n samples by p variables of non-negative counts. Values are stored as reals
// so mid-pipeline fractional data (depth scaling, power transform) is
// representable; normalization ends by rounding back to integers.
struct CountMatrix {
  Eigen::MatrixXd values;  // n x p
  std::vector<std::string> sample_ids;
  std::vector<std::string> variable_ids;

  int n() const { return static_cast<int>(values.rows()); }
  int p() const { return static_cast<int>(values.cols()); }

  // Throws Error on any invariant violation.
  void validate() const;

  static CountMatrix with_default_labels(Eigen::MatrixXd values);
};

// Asymmetric p x p coefficient estimates; column j holds the coefficients of
// the regression of variable j on the others, diagonal fixed at zero.
struct ParameterMatrix {
  Eigen::MatrixXd theta;            // p x p, zero diagonal
  Eigen::VectorXd intercepts;       // p, all zero unless intercepts were fit

  int p() const { return static_cast<int>(theta.rows()); }
  void validate() const;
};

// Descending log-spaced penalty grid from rho_max to rho_min.
struct RegularizationPath {
  std::vector<double> values;

  int size() const { return static_cast<int>(values.size()); }
  double rho_max() const { return values.front(); }
  double rho_min() const { return values.back(); }
  void validate() const;
};

RegularizationPath make_path(double rho_max, double rho_min, int K);

// Symmetric binary graph with zero diagonal.
struct AdjacencyMatrix {
  int p = 0;
  std::vector<std::uint8_t> edges;  // p*p row-major

  AdjacencyMatrix() = default;
  explicit AdjacencyMatrix(int p_) : p(p_), edges(static_cast<std::size_t>(p_) * p_, 0) {}

  std::uint8_t at(int j, int k) const { return edges[static_cast<std::size_t>(j) * p + k]; }
  void set_edge(int j, int k, std::uint8_t v) {
    edges[static_cast<std::size_t>(j) * p + k] = v;
    edges[static_cast<std::size_t>(k) * p + j] = v;
  }
  int edge_count() const;
  int degree(int j) const;
  void validate() const;
};

}  // namespace llgm
