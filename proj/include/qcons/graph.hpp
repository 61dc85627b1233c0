#pragma once

#include <Eigen/Dense>

#include <string>
#include <tuple>
#include <vector>

#include "qcons/matrix_analysis.hpp"

namespace qcons {

inline constexpr double kConnectivityTolerance = 1e-10;

/// Undirected weighted communication graph over N agents.
struct Graph {
  Matrix adjacency;  // N x N, symmetric, nonnegative, zero diagonal

  int n_agents() const { return static_cast<int>(adjacency.rows()); }
  std::vector<int> neighbors(int i) const;
};

struct WeightedEdge {
  int from;
  int to;
  double weight;
};

/// Named presets: "star" (agent 0 is the hub), "path", "ring", "complete".
/// Unit edge weights.
Graph make_preset_graph(const std::string& name, int n_agents);
Graph make_graph(int n_agents, const std::vector<WeightedEdge>& edges);

/// Structural problems with the adjacency matrix (empty if none).
std::vector<std::string> graph_violations(const Graph& g);

struct LaplacianSpectrum {
  Matrix laplacian;
  Vector eigenvalues;  // ascending
  Matrix unitary;      // orthogonal, first column 1/sqrt(N)

  double lambda2() const { return eigenvalues.size() > 1 ? eigenvalues(1) : 0.0; }
};

Matrix laplacian_of(const Graph& g);

/// Throws DisconnectedGraph when lambda_2 <= 1e-10 (or N < 2).
LaplacianSpectrum build_laplacian(const Graph& g);

bool check_connected(const Graph& g);

}  // namespace qcons
