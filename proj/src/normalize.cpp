#include "normalize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace llgm {

namespace {

double median(std::vector<double> v) {
  if (v.empty()) throw Error(ErrorCode::Degenerate, "median of empty set");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  if (v.size() % 2 == 1) return v[m];
  return 0.5 * (v[m - 1] + v[m]);
}

// Linear-interpolation quantile on the sorted values.
double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  if (v.size() == 1) return v[0];
  const double pos = q * (v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - lo;
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

std::vector<double> raw_factors(const CountMatrix& X, DepthMethod method,
                                std::vector<std::string>* warnings);

std::vector<double> upper_quartile_factors(const CountMatrix& X) {
  std::vector<double> factors(X.n());
  for (int i = 0; i < X.n(); ++i) {
    std::vector<double> nonzero;
    for (int j = 0; j < X.p(); ++j)
      if (X.values(i, j) > 0.0) nonzero.push_back(X.values(i, j));
    if (nonzero.empty())
      throw Error(ErrorCode::Degenerate,
                  "sample '" + X.sample_ids[i] + "' has no positive counts");
    factors[i] = quantile(std::move(nonzero), 0.75);
  }
  return factors;
}

std::vector<double> raw_factors(const CountMatrix& X, DepthMethod method,
                                std::vector<std::string>* warnings) {
  switch (method) {
    case DepthMethod::None:
      return std::vector<double>(X.n(), 1.0);
    case DepthMethod::TotalCount: {
      std::vector<double> factors(X.n());
      for (int i = 0; i < X.n(); ++i) {
        factors[i] = X.values.row(i).sum();
        if (factors[i] <= 0.0)
          throw Error(ErrorCode::Degenerate,
                      "sample '" + X.sample_ids[i] + "' has zero total count");
      }
      return factors;
    }
    case DepthMethod::UpperQuartile:
      return upper_quartile_factors(X);
    case DepthMethod::MedianOfRatios: {
      // Reference profile: per-variable geometric mean over samples, using
      // only variables positive in every sample.
      std::vector<int> usable;
      for (int j = 0; j < X.p(); ++j)
        if ((X.values.col(j).array() > 0.0).all()) usable.push_back(j);
      if (usable.empty()) {
        if (warnings)
          warnings->push_back(
              "median-of-ratios: no variable is positive in every sample; "
              "falling back to upper-quartile");
        return upper_quartile_factors(X);
      }
      std::vector<double> reference(usable.size());
      for (std::size_t u = 0; u < usable.size(); ++u)
        reference[u] = std::exp(X.values.col(usable[u]).array().log().mean());
      std::vector<double> factors(X.n());
      for (int i = 0; i < X.n(); ++i) {
        std::vector<double> ratios(usable.size());
        for (std::size_t u = 0; u < usable.size(); ++u)
          ratios[u] = X.values(i, usable[u]) / reference[u];
        factors[i] = median(std::move(ratios));
      }
      return factors;
    }
  }
  throw Error(ErrorCode::Internal, "unknown depth method");
}

}  // namespace

std::string to_string(DepthMethod m) {
  switch (m) {
    case DepthMethod::TotalCount: return "total-count";
    case DepthMethod::MedianOfRatios: return "median-of-ratios";
    case DepthMethod::UpperQuartile: return "upper-quartile";
    case DepthMethod::None: return "none";
  }
  return "none";
}

DepthMethod depth_method_from_string(const std::string& s) {
  if (s == "total-count") return DepthMethod::TotalCount;
  if (s == "median-of-ratios") return DepthMethod::MedianOfRatios;
  if (s == "upper-quartile") return DepthMethod::UpperQuartile;
  if (s == "none") return DepthMethod::None;
  throw Error(ErrorCode::InvalidArgument, "unknown depth method '" + s + "'");
}

std::pair<CountMatrix, std::vector<double>> adjust_depth(
    const CountMatrix& X, DepthMethod method, std::vector<std::string>* warnings) {
  X.validate();
  std::vector<double> factors = raw_factors(X, method, warnings);
  double log_sum = 0.0;
  for (double f : factors) log_sum += std::log(f);
  const double geomean = std::exp(log_sum / factors.size());
  for (double& f : factors) f /= geomean;

  CountMatrix out = X;
  for (int i = 0; i < X.n(); ++i) out.values.row(i) /= factors[i];
  return {std::move(out), std::move(factors)};
}

std::pair<CountMatrix, std::vector<int>> filter_low_variance(const CountMatrix& X,
                                                             double fraction) {
  X.validate();
  if (fraction < 0.0 || fraction >= 1.0)
    throw Error(ErrorCode::InvalidArgument, "filter fraction must be in [0, 1)");
  const int p = X.p();
  std::vector<double> variance(p);
  for (int j = 0; j < p; ++j) {
    const double mean = X.values.col(j).mean();
    variance[j] = (X.values.col(j).array() - mean).square().sum() / (X.n() - 1);
  }
  std::vector<int> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (variance[a] != variance[b]) return variance[a] < variance[b];
    return a > b;  // lower index kept when tied
  });
  const int drop_count = static_cast<int>(std::floor(fraction * p));
  std::vector<char> drop(p, 0);
  for (int r = 0; r < drop_count; ++r) drop[order[r]] = 1;
  for (int j = 0; j < p; ++j)
    if (variance[j] == 0.0) drop[j] = 1;

  std::vector<int> kept;
  for (int j = 0; j < p; ++j)
    if (!drop[j]) kept.push_back(j);
  if (kept.empty())
    throw Error(ErrorCode::Degenerate, "low-variance filter removed every variable");

  CountMatrix out;
  out.values.resize(X.n(), static_cast<int>(kept.size()));
  out.sample_ids = X.sample_ids;
  for (std::size_t c = 0; c < kept.size(); ++c) {
    out.values.col(static_cast<int>(c)) = X.values.col(kept[c]);
    out.variable_ids.push_back(X.variable_ids[kept[c]]);
  }
  return {std::move(out), std::move(kept)};
}

double median_dispersion(const CountMatrix& X, double alpha,
                         std::vector<std::string>* warnings) {
  std::vector<double> phi;
  for (int j = 0; j < X.p(); ++j) {
    Eigen::ArrayXd col = X.values.col(j).array().pow(alpha).round();
    const double mean = col.mean();
    if (mean <= 0.0) {
      if (warnings)
        warnings->push_back("variable '" + X.variable_ids[j] +
                            "' has zero mean after transform; excluded from dispersion");
      continue;
    }
    const double var = (col - mean).square().sum() / (X.n() - 1);
    phi.push_back(var / mean);
  }
  if (phi.empty())
    throw Error(ErrorCode::Degenerate, "no variable has positive mean after transform");
  return median(std::move(phi));
}

std::vector<double> default_alpha_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 20; ++i) grid.push_back(0.05 * i);
  grid.back() = 1.0;
  return grid;
}

double estimate_alpha(const CountMatrix& X, const std::vector<double>& grid, double tau,
                      std::vector<std::string>* warnings) {
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "alpha grid is empty");
  for (double a : grid)
    if (!(a > 0.0) || a > 1.0)
      throw Error(ErrorCode::InvalidArgument, "alpha grid values must lie in (0, 1]");
  std::vector<double> sorted = grid;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());

  double best_alpha = sorted.front();
  double best_gap = std::numeric_limits<double>::infinity();
  for (double a : sorted) {
    const double disp = median_dispersion(X, a, warnings);
    if (disp <= 1.0 + tau) return a;  // largest qualifying alpha wins
    const double gap = std::abs(disp - 1.0);
    if (gap < best_gap) {
      best_gap = gap;
      best_alpha = a;
    }
  }
  return best_alpha;
}

CountMatrix power_transform(const CountMatrix& X, double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1]");
  CountMatrix out = X;
  out.values = X.values.array().pow(alpha).round().matrix();
  return out;
}

std::pair<CountMatrix, NormalizationReport> normalize_pipeline(const CountMatrix& X,
                                                               const NormalizeConfig& config) {
  NormalizationReport report;
  report.depth_method = config.depth_method;
  report.filter_fraction = config.filter_enabled ? config.filter_fraction : 0.0;

  auto [depth_adjusted, factors] = adjust_depth(X, config.depth_method, &report.warnings);
  report.scale_factors = std::move(factors);

  CountMatrix current = std::move(depth_adjusted);
  if (config.filter_enabled) {
    auto [filtered, kept] = filter_low_variance(current, config.filter_fraction);
    current = std::move(filtered);
    report.kept_variables = std::move(kept);
  } else {
    report.kept_variables.resize(current.p());
    std::iota(report.kept_variables.begin(), report.kept_variables.end(), 0);
  }

  report.dispersion_before = median_dispersion(current, 1.0, &report.warnings);

  if (config.alpha_enabled) {
    report.alpha = config.alpha ? *config.alpha
                                : estimate_alpha(current, default_alpha_grid(),
                                                 config.dispersion_tolerance, &report.warnings);
    current = power_transform(current, report.alpha);
  } else {
    report.alpha = 1.0;
    if (config.integer_output) current.values = current.values.array().round().matrix();
  }

  report.dispersion_after = median_dispersion(current, 1.0, &report.warnings);
  return {std::move(current), std::move(report)};
}

}  // namespace llgm
