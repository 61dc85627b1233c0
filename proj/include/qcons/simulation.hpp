#pragma once

// Closed-loop simulation of N identical agents exchanging quantized state
// estimates over a shared channel that a DoS attacker can jam.

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "qcons/dos.hpp"
#include "qcons/graph.hpp"
#include "qcons/matrix_analysis.hpp"
#include "qcons/quantizer.hpp"

namespace qcons {

using SymbolVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

/// Agent model x+ = A x + B u, y = C x with consensus gain K and observer gain F.
struct SystemSpec {
  Matrix A;
  Matrix B;
  Matrix C_out;
  Matrix K_gain;
  Matrix F_gain;
  double delta_s{0.1};
  double C_x0{1.0};

  int n() const { return static_cast<int>(A.rows()); }
  int w() const { return static_cast<int>(B.cols()); }
  int v() const { return static_cast<int>(C_out.rows()); }
};

/// Shape problems among A, B, C, K, F (empty if consistent).
std::vector<std::string> dimension_violations(const SystemSpec& s);

enum class SimMode {
  General,            // observer-based, quantized exchange of x_hat
  ScalarQuantized,    // x measured directly, quantized exchange of x
  ScalarUnquantized,  // x measured directly, exact exchange
};

struct CodecParams {
  double gamma1{0.5};
  double gamma2{2.0};
  double theta0{1.0};
  QuantizerParams<double> quantizer;
};

struct SimSetup {
  SystemSpec system;
  Graph graph;
  CodecParams codec;
  DosSignal dos;
  double horizon{0};
  std::vector<Vector> x0;  // one n-vector per agent
  SimMode mode{SimMode::General};
  bool strict{false};
  bool replicas{false};  // keep one decoder bank per receiving agent and compare
};

/// State of the network after step k. Stacked vectors are agent-major
/// (agent i occupies rows i*n .. i*n+n-1).
struct StepRecord {
  std::int64_t k{0};
  double t{0};
  bool jammed{false};
  bool control_active{false};  // u(k) computed from received data (not forced to 0)
  double theta{0};
  bool sat_any{false};
  Vector x;
  Vector x_hat;
  Vector x_tilde;
  Vector e_c;  // x_hat - x_tilde
  Vector e_o;  // x - x_hat
  Vector delta;
  SymbolVector symbols;  // delivered symbols z in [-R, R]; 0 on jammed steps
};

struct SimTrace {
  int n_agents{0};
  int n_state{0};
  std::vector<StepRecord> steps;
  std::int64_t saturation_steps{0};
  std::int64_t replica_checks{0};
  std::int64_t replica_mismatches{0};

  std::int64_t max_abs_symbol() const;
};

/// x - 1 (x) mean_i x_i.
Vector consensus_deviation(const Vector& x, int n_agents);

/// Runs floor(horizon/delta) steps after the initial record. Deterministic.
/// Throws SaturationAbort in strict mode, NotScalar for scalar modes with
/// n, v or w != 1, DimensionMismatch for inconsistent shapes.
SimTrace simulate(const SimSetup& setup);

}  // namespace qcons
