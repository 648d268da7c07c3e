#pragma once

#include <cstdint>
#include <string>

#include "rng.hpp"
#include "types.hpp"

namespace llgm {

enum class GraphKind { Hub, ScaleFree, Random };

std::string to_string(GraphKind k);
GraphKind graph_kind_from_string(const std::string& s);

struct SimulationConfig {
  int p = 50;
  int n = 200;
  GraphKind graph_kind = GraphKind::Hub;
  int n_hubs = 3;
  double edge_prob = 0.0;    // 0 = default 2/(p-1), roughly p expected edges
  double lambda_true = 1.0;
  double lambda_noise = 0.5;
  std::uint64_t seed = 0;

  void validate() const;
  double effective_edge_prob() const { return edge_prob > 0.0 ? edge_prob : 2.0 / (p - 1); }
};

// Every non-hub node connects to exactly one of n_hubs hubs, chosen uniformly;
// no hub-hub edges.
AdjacencyMatrix gen_hub_graph(int p, int n_hubs, Rng& rng);

// One-edge-per-new-node preferential attachment from a connected 2-node seed;
// the result is a tree on p nodes.
AdjacencyMatrix gen_scale_free(int p, Rng& rng);

// Each unordered pair included independently with probability edge_prob.
AdjacencyMatrix gen_random_graph(int p, double edge_prob, Rng& rng);

AdjacencyMatrix gen_graph(const SimulationConfig& config);

// Correlated Poisson counts by trivariate reduction: each column gets its own
// Poisson(lambda_true) draws, one shared Poisson(lambda_true) latent per true
// edge added to both endpoints, and Poisson(lambda_noise) noise.
CountMatrix simulate_counts(const AdjacencyMatrix& A, const SimulationConfig& config);

}  // namespace llgm
