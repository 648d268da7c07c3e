#include "simulate.hpp"

#include <algorithm>
#include <vector>

namespace llgm {

namespace {

// Stream ids under the simulation seed.
constexpr std::uint64_t kGraphStream = 1;
constexpr std::uint64_t kCountStream = 2;

}  // namespace

std::string to_string(GraphKind k) {
  switch (k) {
    case GraphKind::Hub: return "hub";
    case GraphKind::ScaleFree: return "scale-free";
    case GraphKind::Random: return "random";
  }
  return "hub";
}

GraphKind graph_kind_from_string(const std::string& s) {
  if (s == "hub") return GraphKind::Hub;
  if (s == "scale-free" || s == "scale_free") return GraphKind::ScaleFree;
  if (s == "random") return GraphKind::Random;
  throw Error(ErrorCode::InvalidArgument, "unknown graph kind '" + s + "'");
}

void SimulationConfig::validate() const {
  if (p < 2) throw Error(ErrorCode::InvalidArgument, "simulation needs p >= 2");
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "simulation needs n >= 1");
  if (!(lambda_true > 0.0))
    throw Error(ErrorCode::InvalidArgument, "lambda_true must be positive");
  if (lambda_noise < 0.0)
    throw Error(ErrorCode::InvalidArgument, "lambda_noise must be non-negative");
  if (graph_kind == GraphKind::Hub && (n_hubs < 1 || n_hubs >= p))
    throw Error(ErrorCode::InvalidArgument, "hub graph needs 1 <= n_hubs < p");
  const double prob = effective_edge_prob();
  if (graph_kind == GraphKind::Random && (!(prob > 0.0) || !(prob < 1.0)))
    throw Error(ErrorCode::InvalidArgument, "edge probability must lie in (0, 1)");
}

AdjacencyMatrix gen_hub_graph(int p, int n_hubs, Rng& rng) {
  if (n_hubs < 1 || n_hubs >= p)
    throw Error(ErrorCode::InvalidArgument, "hub graph needs 1 <= n_hubs < p");
  AdjacencyMatrix A(p);
  // Hubs are nodes 0..n_hubs-1.
  for (int j = n_hubs; j < p; ++j) {
    const int hub = static_cast<int>(rng.uniform_int(0, n_hubs - 1));
    A.set_edge(j, hub, 1);
  }
  return A;
}

AdjacencyMatrix gen_scale_free(int p, Rng& rng) {
  if (p < 3) throw Error(ErrorCode::InvalidArgument, "scale-free graph needs p >= 3");
  AdjacencyMatrix A(p);
  A.set_edge(0, 1, 1);
  std::vector<int> degree(p, 0);
  degree[0] = degree[1] = 1;
  int degree_sum = 2;
  for (int j = 2; j < p; ++j) {
    // Attach to an existing node with probability proportional to its degree.
    std::int64_t ticket = rng.uniform_int(0, degree_sum - 1);
    int target = 0;
    for (int k = 0; k < j; ++k) {
      ticket -= degree[k];
      if (ticket < 0) {
        target = k;
        break;
      }
    }
    A.set_edge(j, target, 1);
    degree[j] = 1;
    degree[target] += 1;
    degree_sum += 2;
  }
  return A;
}

AdjacencyMatrix gen_random_graph(int p, double edge_prob, Rng& rng) {
  if (!(edge_prob > 0.0) || !(edge_prob < 1.0))
    throw Error(ErrorCode::InvalidArgument, "edge probability must lie in (0, 1)");
  AdjacencyMatrix A(p);
  for (int j = 0; j < p; ++j)
    for (int k = j + 1; k < p; ++k)
      if (rng.uniform() < edge_prob) A.set_edge(j, k, 1);
  return A;
}

AdjacencyMatrix gen_graph(const SimulationConfig& config) {
  config.validate();
  Rng rng(config.seed, kGraphStream);
  switch (config.graph_kind) {
    case GraphKind::Hub: return gen_hub_graph(config.p, config.n_hubs, rng);
    case GraphKind::ScaleFree: return gen_scale_free(config.p, rng);
    case GraphKind::Random: return gen_random_graph(config.p, config.effective_edge_prob(), rng);
  }
  throw Error(ErrorCode::Internal, "unknown graph kind");
}

CountMatrix simulate_counts(const AdjacencyMatrix& A, const SimulationConfig& config) {
  config.validate();
  A.validate();
  if (A.p != config.p)
    throw Error(ErrorCode::InvalidArgument, "adjacency dimension does not match config");
  const int n = config.n;
  const int p = config.p;
  Rng rng(config.seed, kCountStream);

  Eigen::MatrixXd X(n, p);
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < n; ++i)
      X(i, j) = static_cast<double>(rng.poisson(config.lambda_true));
  for (int j = 0; j < p; ++j) {
    for (int k = j + 1; k < p; ++k) {
      if (!A.at(j, k)) continue;
      for (int i = 0; i < n; ++i) {
        const double shared = static_cast<double>(rng.poisson(config.lambda_true));
        X(i, j) += shared;
        X(i, k) += shared;
      }
    }
  }
  if (config.lambda_noise > 0.0)
    for (int j = 0; j < p; ++j)
      for (int i = 0; i < n; ++i)
        X(i, j) += static_cast<double>(rng.poisson(config.lambda_noise));

  return CountMatrix::with_default_labels(std::move(X));
}

}  // namespace llgm
