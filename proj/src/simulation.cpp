#include "qcons/simulation.hpp"

#include <algorithm>
#include <cstring>
#include <string>

namespace qcons {

namespace {

std::string shape(const Matrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

Vector block(const Vector& v, int i, int n) { return v.segment(static_cast<Eigen::Index>(i) * n, n); }

bool bit_equal(const Vector& a, const Vector& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

// u_i = K sum_j a_ij (s_j - s_i)
Vector consensus_input(const SystemSpec& sys, const Graph& g, const Vector& shared) {
  const int n = sys.n();
  const int w = sys.w();
  const int agents = g.n_agents();
  Vector u = Vector::Zero(static_cast<Eigen::Index>(agents) * w);
  for (int i = 0; i < agents; ++i) {
    Vector acc = Vector::Zero(n);
    for (int j : g.neighbors(i)) acc += g.adjacency(i, j) * (block(shared, j, n) - block(shared, i, n));
    u.segment(static_cast<Eigen::Index>(i) * w, w) = sys.K_gain * acc;
  }
  return u;
}

struct ReplicaBank {
  std::vector<Vector> x_tilde;
  std::vector<double> theta;
};

}  // namespace

std::vector<std::string> dimension_violations(const SystemSpec& s) {
  std::vector<std::string> out;
  const auto n = s.A.rows();
  if (s.A.rows() != s.A.cols() || n == 0) out.push_back("A must be square and nonempty, got " + shape(s.A));
  if (s.B.rows() != n || s.B.cols() == 0) out.push_back("B must be n x w with n = " + std::to_string(n) + ", got " + shape(s.B));
  if (s.C_out.cols() != n || s.C_out.rows() == 0) out.push_back("C must be v x n, got " + shape(s.C_out));
  if (s.K_gain.rows() != s.B.cols() || s.K_gain.cols() != n) out.push_back("K must be w x n, got " + shape(s.K_gain));
  if (s.F_gain.rows() != n || s.F_gain.cols() != s.C_out.rows()) out.push_back("F must be n x v, got " + shape(s.F_gain));
  for (const Matrix* m : {&s.A, &s.B, &s.C_out, &s.K_gain, &s.F_gain}) {
    if (!m->allFinite()) {
      out.push_back("system matrices must be finite");
      break;
    }
  }
  if (!(s.delta_s > 0) || !std::isfinite(s.delta_s)) out.push_back("sampling period must be positive");
  if (!(s.C_x0 > 0) || !std::isfinite(s.C_x0)) out.push_back("C_x0 must be positive");
  return out;
}

Vector consensus_deviation(const Vector& x, int n_agents) {
  const Eigen::Index n = x.size() / n_agents;
  const auto blocks = x.reshaped(n, n_agents);
  const Vector mean = blocks.rowwise().mean();
  Vector d(x.size());
  d.reshaped(n, n_agents) = blocks.colwise() - mean;
  return d;
}

std::int64_t SimTrace::max_abs_symbol() const {
  std::int64_t m = 0;
  for (const auto& r : steps) {
    if (r.symbols.size() > 0) m = std::max(m, r.symbols.cwiseAbs().maxCoeff());
  }
  return m;
}

SimTrace simulate(const SimSetup& setup) {
  const SystemSpec& sys = setup.system;
  if (auto v = dimension_violations(sys); !v.empty()) throw Error(ErrorCode::DimensionMismatch, v.front(), v);
  if (setup.mode != SimMode::General && (sys.n() != 1 || sys.w() != 1 || sys.v() != 1)) {
    throw Error(ErrorCode::NotScalar, "scalar modes need n = v = w = 1");
  }
  const int agents = setup.graph.n_agents();
  const int n = sys.n();
  if (static_cast<int>(setup.x0.size()) != agents) {
    throw Error(ErrorCode::DimensionMismatch, "need one initial state per agent");
  }
  const CodecParams& codec = setup.codec;
  if (!(codec.theta0 > 0) || !(codec.gamma1 > 0) || !(codec.gamma2 > 0)) {
    throw Error(ErrorCode::InvalidParams, "theta0 and zoom factors must be positive");
  }
  const auto& q = codec.quantizer;
  const Eigen::Index dim = static_cast<Eigen::Index>(agents) * n;
  const bool quantized = setup.mode != SimMode::ScalarUnquantized;
  const bool observer = setup.mode == SimMode::General;

  StepRecord rec;
  rec.x.resize(dim);
  for (int i = 0; i < agents; ++i) {
    if (setup.x0[i].size() != n) throw Error(ErrorCode::DimensionMismatch, "initial state has wrong dimension");
    rec.x.segment(static_cast<Eigen::Index>(i) * n, n) = setup.x0[i];
  }
  rec.x_hat = observer ? Vector::Zero(dim) : Vector(rec.x);
  rec.x_tilde = quantized ? Vector::Zero(dim) : Vector(rec.x);
  rec.theta = codec.theta0;
  rec.symbols = SymbolVector::Zero(dim);
  rec.control_active = !quantized;
  rec.e_c = rec.x_hat - rec.x_tilde;
  rec.e_o = rec.x - rec.x_hat;
  rec.delta = consensus_deviation(rec.x, agents);
  Vector u = quantized ? Vector::Zero(static_cast<Eigen::Index>(agents) * sys.w())
                       : consensus_input(sys, setup.graph, rec.x);

  SimTrace trace;
  trace.n_agents = agents;
  trace.n_state = n;
  const std::int64_t steps = setup.horizon > 0 ? sample_count(setup.horizon, sys.delta_s) : 0;
  trace.steps.reserve(static_cast<std::size_t>(steps) + 1);
  trace.steps.push_back(rec);

  ReplicaBank bank;
  if (setup.replicas) {
    bank.x_tilde.assign(agents, rec.x_tilde);
    bank.theta.assign(agents, rec.theta);
  }

  for (std::int64_t k = 1; k <= steps; ++k) {
    const StepRecord& prev = trace.steps.back();
    StepRecord next;
    next.k = k;
    next.t = static_cast<double>(k) * sys.delta_s;
    next.jammed = is_jammed(setup.dos, k, sys.delta_s);
    next.x.resize(dim);
    next.x_hat.resize(dim);
    next.x_tilde.resize(dim);
    next.symbols = SymbolVector::Zero(dim);

    for (int i = 0; i < agents; ++i) {
      const Eigen::Index off = static_cast<Eigen::Index>(i) * n;
      const auto ui = u.segment(static_cast<Eigen::Index>(i) * sys.w(), sys.w());
      const Vector xi = prev.x.segment(off, n);
      next.x.segment(off, n) = sys.A * xi + sys.B * ui;
      if (observer) {
        const Vector xh = prev.x_hat.segment(off, n);
        next.x_hat.segment(off, n) = sys.A * xh + sys.B * ui + sys.F_gain * (sys.C_out * xi - sys.C_out * xh);
      }
    }
    if (!observer) next.x_hat = next.x;

    if (quantized) {
      for (int j = 0; j < agents; ++j) {
        const Eigen::Index off = static_cast<Eigen::Index>(j) * n;
        const Vector predicted = sys.A * prev.x_tilde.segment(off, n);
        const Vector beta = (next.x_hat.segment(off, n) - predicted) / prev.theta;
        Vector decoded = predicted;
        if (!next.jammed) {
          const auto [levels, saturated] = quantize_vector(beta, q);
          next.sat_any = next.sat_any || saturated;
          for (int c = 0; c < n; ++c) next.symbols(off + c) = symbol_index(levels(c), q);
          decoded += prev.theta * levels;
        }
        next.x_tilde.segment(off, n) = decoded;
      }
    } else {
      next.x_tilde = next.x;
    }

    next.theta = prev.theta * (next.jammed ? codec.gamma2 : codec.gamma1);
    next.control_active = !next.jammed;
    u = next.jammed ? Vector::Zero(u.size()) : consensus_input(sys, setup.graph, next.x_tilde);

    next.e_c = next.x_hat - next.x_tilde;
    next.e_o = next.x - next.x_hat;
    next.delta = consensus_deviation(next.x, agents);

    if (!next.x.allFinite() || !std::isfinite(next.theta)) {
      throw Error(ErrorCode::NonFinite, "state became non-finite at step " + std::to_string(k));
    }

    if (setup.replicas && quantized) {
      for (int r = 0; r < agents; ++r) {
        Vector& mine = bank.x_tilde[r];
        for (int j = 0; j < agents; ++j) {
          const Eigen::Index off = static_cast<Eigen::Index>(j) * n;
          Vector decoded = sys.A * mine.segment(off, n);
          if (!next.jammed) {
            for (int c = 0; c < n; ++c) decoded(c) += bank.theta[r] * dequantize(next.symbols(off + c), q);
          }
          mine.segment(off, n) = decoded;
        }
        bank.theta[r] *= next.jammed ? codec.gamma2 : codec.gamma1;
        ++trace.replica_checks;
        if (!bit_equal(mine, next.x_tilde) || std::memcmp(&bank.theta[r], &next.theta, sizeof(double)) != 0) {
          ++trace.replica_mismatches;
        }
      }
    }

    if (next.sat_any) {
      ++trace.saturation_steps;
      if (setup.strict) {
        throw Error(ErrorCode::SaturationAbort, "quantizer saturated at step " + std::to_string(k));
      }
    }
    trace.steps.push_back(std::move(next));
  }
  return trace;
}

}  // namespace qcons
