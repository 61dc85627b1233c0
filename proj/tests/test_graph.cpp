#include <doctest.h>

#include "qcons/graph.hpp"

using namespace qcons;

namespace {

// Characteristic polynomial check: det(L - lambda I) vanishes (relative to
// the matrix scale) at every reported eigenvalue.
double char_poly_residual(const Matrix& l, double lambda) {
  const Matrix shifted = l - lambda * Matrix::Identity(l.rows(), l.cols());
  const double scale = std::pow(1.0 + l.cwiseAbs().maxCoeff(), static_cast<double>(l.rows()));
  return std::abs(shifted.determinant()) / scale;
}

}  // namespace

TEST_CASE("star graph K_{1,3} has Laplacian spectrum {0, 1, 1, 4}") {
  const auto s = build_laplacian(make_preset_graph("star", 4));
  const Vector expected = (Vector(4) << 0, 1, 1, 4).finished();
  CHECK((s.eigenvalues - expected).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(s.lambda2() == doctest::Approx(1.0));
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(char_poly_residual(s.laplacian, s.eigenvalues(i)) < 1e-10);
}

TEST_CASE("Laplacian structure") {
  for (const char* preset : {"star", "path", "ring", "complete"}) {
    for (int n : {2, 3, 5, 7}) {
      const auto s = build_laplacian(make_preset_graph(preset, n));
      CAPTURE(preset);
      CAPTURE(n);
      CHECK(s.laplacian.rowwise().sum().cwiseAbs().maxCoeff() < 1e-14);
      CHECK((s.laplacian - s.laplacian.transpose()).cwiseAbs().maxCoeff() == 0.0);
      CHECK((s.unitary.transpose() * s.unitary - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((s.unitary * s.eigenvalues.asDiagonal() * s.unitary.transpose() - s.laplacian).cwiseAbs().maxCoeff() <
            1e-12);
      CHECK(s.eigenvalues(0) == 0.0);
      for (Eigen::Index i = 0; i < n; ++i) CHECK(char_poly_residual(s.laplacian, s.eigenvalues(i)) < 1e-9);
    }
  }
}

TEST_CASE("closed-form spectra") {
  // Complete graph: {0, N, ..., N}. Path on N nodes: 2 - 2 cos(pi k / N).
  const auto complete = build_laplacian(make_preset_graph("complete", 5));
  for (Eigen::Index i = 1; i < 5; ++i) CHECK(complete.eigenvalues(i) == doctest::Approx(5.0));
  const auto path = build_laplacian(make_preset_graph("path", 6));
  for (int k = 0; k < 6; ++k) CHECK(path.eigenvalues(k) == doctest::Approx(2.0 - 2.0 * std::cos(M_PI * k / 6.0)));
}

TEST_CASE("weighted edges and neighbours") {
  const Graph g = make_graph(3, {{0, 1, 2.0}, {1, 2, 0.5}});
  CHECK(g.adjacency(1, 0) == 2.0);
  CHECK(g.neighbors(1) == std::vector<int>{0, 2});
  CHECK(check_connected(g));
  const auto s = build_laplacian(g);
  CHECK(s.laplacian(1, 1) == doctest::Approx(2.5));
}

TEST_CASE("disconnected graphs are rejected") {
  const Graph split = make_graph(4, {{0, 1, 1.0}, {2, 3, 1.0}});
  CHECK_FALSE(check_connected(split));
  try {
    build_laplacian(split);
    FAIL("expected DisconnectedGraph");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DisconnectedGraph);
  }
  try {
    build_laplacian(make_graph(1, {}));
    FAIL("expected DisconnectedGraph");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DisconnectedGraph);
  }
}

TEST_CASE("malformed adjacency") {
  Graph g{Matrix::Zero(3, 3)};
  g.adjacency(0, 1) = 1.0;
  g.adjacency(1, 0) = 2.0;
  g.adjacency(2, 2) = 1.0;
  CHECK(graph_violations(g).size() == 2);
  CHECK_THROWS_AS(make_graph(2, {{0, 0, 1.0}}), Error);
  CHECK_THROWS_AS(make_graph(2, {{0, 1, -1.0}}), Error);
  CHECK_THROWS_AS(make_preset_graph("hypercube", 4), Error);
}
