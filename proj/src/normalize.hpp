#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "types.hpp"

namespace llgm {

enum class DepthMethod { TotalCount, MedianOfRatios, UpperQuartile, None };

std::string to_string(DepthMethod m);
DepthMethod depth_method_from_string(const std::string& s);

struct NormalizationReport {
  DepthMethod depth_method = DepthMethod::None;
  std::vector<double> scale_factors;   // one per sample, geometric mean 1
  std::vector<int> kept_variables;     // strictly increasing original indices
  double filter_fraction = 0.0;
  double alpha = 1.0;
  double dispersion_before = 0.0;      // median dispersion index pre power transform
  double dispersion_after = 0.0;
  std::vector<std::string> warnings;
};

struct NormalizeConfig {
  DepthMethod depth_method = DepthMethod::MedianOfRatios;
  double filter_fraction = 0.5;
  bool filter_enabled = true;
  std::optional<double> alpha;         // fixed alpha; unset means grid search
  bool alpha_enabled = true;
  double dispersion_tolerance = 0.10;  // tau in the median-dispersion criterion
  bool integer_output = true;          // round counts at the end of the pipeline
};

// Divides each sample row by a positive scale factor; factors are normalized
// to geometric mean 1 so the overall count scale is preserved. Output values
// are fractional; the pipeline rounds at the end.
std::pair<CountMatrix, std::vector<double>> adjust_depth(
    const CountMatrix& X, DepthMethod method, std::vector<std::string>* warnings = nullptr);

// Drops the `fraction` of variables with smallest sample variance plus every
// zero-variance variable; ties broken by index (lower index kept).
std::pair<CountMatrix, std::vector<int>> filter_low_variance(const CountMatrix& X,
                                                             double fraction);

// Per-variable dispersion index s^2/mean on round(X^alpha); median over
// variables with positive transformed mean.
double median_dispersion(const CountMatrix& X, double alpha,
                         std::vector<std::string>* warnings = nullptr);

std::vector<double> default_alpha_grid();

// Largest grid alpha whose median dispersion is <= 1 + tau; if none
// qualifies, the grid alpha minimizing |median dispersion - 1|.
double estimate_alpha(const CountMatrix& X, const std::vector<double>& grid,
                      double tau = 0.10, std::vector<std::string>* warnings = nullptr);

// Entrywise round(x^alpha), half away from zero.
CountMatrix power_transform(const CountMatrix& X, double alpha);

std::pair<CountMatrix, NormalizationReport> normalize_pipeline(const CountMatrix& X,
                                                               const NormalizeConfig& config);

}  // namespace llgm
