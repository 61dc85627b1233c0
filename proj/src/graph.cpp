#include "qcons/graph.hpp"

#include <cmath>

namespace qcons {

std::vector<int> Graph::neighbors(int i) const {
  std::vector<int> out;
  for (int j = 0; j < n_agents(); ++j) {
    if (j != i && adjacency(i, j) > 0) out.push_back(j);
  }
  return out;
}

Graph make_graph(int n_agents, const std::vector<WeightedEdge>& edges) {
  if (n_agents < 1) throw Error(ErrorCode::InvalidParams, "graph needs at least one agent");
  Graph g{Matrix::Zero(n_agents, n_agents)};
  for (const auto& e : edges) {
    if (e.from < 0 || e.to < 0 || e.from >= n_agents || e.to >= n_agents) {
      throw Error(ErrorCode::InvalidParams, "edge endpoint out of range");
    }
    if (e.from == e.to) throw Error(ErrorCode::InvalidParams, "self-loops are not allowed");
    if (!(e.weight > 0) || !std::isfinite(e.weight)) {
      throw Error(ErrorCode::InvalidParams, "edge weight must be positive and finite");
    }
    g.adjacency(e.from, e.to) = e.weight;
    g.adjacency(e.to, e.from) = e.weight;
  }
  return g;
}

Graph make_preset_graph(const std::string& name, int n_agents) {
  std::vector<WeightedEdge> edges;
  if (name == "star") {
    for (int j = 1; j < n_agents; ++j) edges.push_back({0, j, 1.0});
  } else if (name == "path") {
    for (int j = 1; j < n_agents; ++j) edges.push_back({j - 1, j, 1.0});
  } else if (name == "ring") {
    for (int j = 1; j < n_agents; ++j) edges.push_back({j - 1, j, 1.0});
    if (n_agents > 2) edges.push_back({n_agents - 1, 0, 1.0});
  } else if (name == "complete") {
    for (int i = 0; i < n_agents; ++i)
      for (int j = i + 1; j < n_agents; ++j) edges.push_back({i, j, 1.0});
  } else {
    throw Error(ErrorCode::InvalidParams, "unknown graph preset '" + name + "'");
  }
  return make_graph(n_agents, edges);
}

std::vector<std::string> graph_violations(const Graph& g) {
  std::vector<std::string> out;
  const auto& a = g.adjacency;
  if (a.rows() != a.cols()) {
    out.push_back("adjacency matrix is not square");
    return out;
  }
  for (int i = 0; i < a.rows(); ++i) {
    if (a(i, i) != 0.0) out.push_back("adjacency diagonal entry " + std::to_string(i) + " is nonzero");
    for (int j = 0; j < a.cols(); ++j) {
      if (!std::isfinite(a(i, j)) || a(i, j) < 0) {
        out.push_back("adjacency entry (" + std::to_string(i) + "," + std::to_string(j) + ") is negative or non-finite");
      }
      if (j > i && a(i, j) != a(j, i)) {
        out.push_back("adjacency is not symmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
  return out;
}

Matrix laplacian_of(const Graph& g) {
  Matrix l = -g.adjacency;
  for (int i = 0; i < l.rows(); ++i) {
    l(i, i) = 0.0;
    double degree = 0.0;
    for (int j = 0; j < l.cols(); ++j) {
      if (j != i) degree += g.adjacency(i, j);
    }
    l(i, i) = degree;
  }
  return l;
}

LaplacianSpectrum build_laplacian(const Graph& g) {
  if (auto v = graph_violations(g); !v.empty()) throw Error(ErrorCode::InvalidParams, v.front(), v);
  const int n = g.n_agents();
  if (n < 2) throw Error(ErrorCode::DisconnectedGraph, "a single agent has no communication graph");

  LaplacianSpectrum s;
  s.laplacian = laplacian_of(g);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(s.laplacian);
  s.eigenvalues = solver.eigenvalues();  // ascending
  if (s.eigenvalues(1) <= kConnectivityTolerance) {
    throw Error(ErrorCode::DisconnectedGraph, "lambda_2 = " + std::to_string(s.eigenvalues(1)));
  }
  // The null space of a connected Laplacian is span{1}; pin it exactly.
  s.eigenvalues(0) = 0.0;
  s.unitary = solver.eigenvectors();
  s.unitary.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(n)));
  return s;
}

bool check_connected(const Graph& g) {
  if (g.n_agents() < 2 || !graph_violations(g).empty()) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(laplacian_of(g), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(1) > kConnectivityTolerance;
}

}  // namespace qcons
