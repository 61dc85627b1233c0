#include "qcons/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qcons/conditions.hpp"

namespace qcons {

using nlohmann::json;

std::string to_string(SimMode mode) {
  switch (mode) {
    case SimMode::General: return "general";
    case SimMode::ScalarQuantized: return "scalar_quantized";
    case SimMode::ScalarUnquantized: return "scalar_unquantized";
  }
  return "general";
}

namespace {

// Collects every type/shape problem instead of stopping at the first one.
class Reader {
 public:
  std::vector<std::string> problems;

  void allow(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) {
      problems.push_back(path + ": expected an object");
      return;
    }
    std::set<std::string> known(keys.begin(), keys.end());
    for (const auto& [k, _] : obj.items()) {
      if (!known.count(k)) problems.push_back(path + "." + k + ": unknown key");
    }
  }

  const json* field(const json& obj, const std::string& path, const char* key, bool required) {
    if (!obj.is_object()) return nullptr;
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) problems.push_back(path + "." + key + ": missing");
      return nullptr;
    }
    return &*it;
  }

  std::optional<double> number(const json& obj, const std::string& path, const char* key, bool required) {
    const json* v = field(obj, path, key, required);
    if (!v) return std::nullopt;
    if (!v->is_number()) {
      problems.push_back(path + "." + key + ": expected a number");
      return std::nullopt;
    }
    return v->get<double>();
  }

  // Numbers where null stands for +infinity.
  std::optional<double> number_or_inf(const json& obj, const std::string& path, const char* key) {
    const json* v = field(obj, path, key, true);
    if (!v) return std::nullopt;
    if (v->is_null()) return std::numeric_limits<double>::infinity();
    if (!v->is_number()) {
      problems.push_back(path + "." + key + ": expected a number or null");
      return std::nullopt;
    }
    return v->get<double>();
  }

  template <typename Int>
  std::optional<Int> integer(const json& obj, const std::string& path, const char* key, bool required) {
    const json* v = field(obj, path, key, required);
    if (!v) return std::nullopt;
    if (std::is_unsigned_v<Int> ? !v->is_number_unsigned() : !v->is_number_integer()) {
      problems.push_back(path + "." + key + ": expected " + (std::is_unsigned_v<Int> ? "a non-negative integer" : "an integer"));
      return std::nullopt;
    }
    return v->get<Int>();
  }

  std::optional<bool> boolean(const json& obj, const std::string& path, const char* key, bool required) {
    const json* v = field(obj, path, key, required);
    if (!v) return std::nullopt;
    if (!v->is_boolean()) {
      problems.push_back(path + "." + key + ": expected true or false");
      return std::nullopt;
    }
    return v->get<bool>();
  }

  std::optional<std::string> string(const json& obj, const std::string& path, const char* key, bool required) {
    const json* v = field(obj, path, key, required);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      problems.push_back(path + "." + key + ": expected a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<Vector> vector(const json& v, const std::string& path) {
    if (!v.is_array()) {
      problems.push_back(path + ": expected an array of numbers");
      return std::nullopt;
    }
    Vector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) {
        problems.push_back(path + "[" + std::to_string(i) + "]: expected a number");
        return std::nullopt;
      }
      out(static_cast<Eigen::Index>(i)) = v[i].get<double>();
    }
    return out;
  }

  std::optional<Matrix> matrix(const json& obj, const std::string& path, const char* key, bool required) {
    const json* v = field(obj, path, key, required);
    if (!v) return std::nullopt;
    const std::string here = path + "." + key;
    allow(*v, here, {"rows", "cols", "data"});
    const auto rows = integer<std::int64_t>(*v, here, "rows", true);
    const auto cols = integer<std::int64_t>(*v, here, "cols", true);
    const json* data = field(*v, here, "data", true);
    if (!rows || !cols || !data) return std::nullopt;
    if (*rows < 1 || *cols < 1 || !data->is_array() || static_cast<std::int64_t>(data->size()) != *rows) {
      problems.push_back(here + ": data must be " + std::to_string(*rows) + " rows of " + std::to_string(*cols) + " numbers");
      return std::nullopt;
    }
    Matrix m(*rows, *cols);
    for (std::int64_t r = 0; r < *rows; ++r) {
      auto row = vector((*data)[r], here + ".data[" + std::to_string(r) + "]");
      if (!row) return std::nullopt;
      if (row->size() != *cols) {
        problems.push_back(here + ".data[" + std::to_string(r) + "]: expected " + std::to_string(*cols) + " entries");
        return std::nullopt;
      }
      m.row(r) = row->transpose();
    }
    return m;
  }
};

json matrix_json(const Matrix& m) {
  json data = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    data.push_back(std::move(row));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

json inf_or_number(double v) { return std::isinf(v) ? json(nullptr) : json(v); }

ScenarioConfig parse(const json& doc) {
  Reader rd;
  ScenarioConfig c;
  const std::string root = "$";
  rd.allow(doc, root,
           {"name", "mode", "system", "graph", "zoom", "quantizer", "dos", "budget", "horizon", "initial_states",
            "strict_saturation", "settling_horizon", "M"});

  c.name = rd.string(doc, root, "name", false).value_or("");
  if (auto mode = rd.string(doc, root, "mode", false)) {
    if (*mode == "general") c.mode = SimMode::General;
    else if (*mode == "scalar_quantized") c.mode = SimMode::ScalarQuantized;
    else if (*mode == "scalar_unquantized") c.mode = SimMode::ScalarUnquantized;
    else rd.problems.push_back("$.mode: expected general, scalar_quantized or scalar_unquantized");
  }
  const bool scalar = c.mode != SimMode::General;

  if (const json* sys = rd.field(doc, root, "system", true)) {
    const std::string p = "$.system";
    rd.allow(*sys, p, {"A", "B", "C", "K", "F", "delta", "C_x0"});
    c.system.A = rd.matrix(*sys, p, "A", true).value_or(Matrix());
    c.system.B = rd.matrix(*sys, p, "B", true).value_or(Matrix());
    c.system.C_out = rd.matrix(*sys, p, "C", !scalar).value_or(scalar ? Matrix::Ones(1, 1) : Matrix());
    c.system.K_gain = rd.matrix(*sys, p, "K", true).value_or(Matrix());
    c.system.F_gain = rd.matrix(*sys, p, "F", !scalar).value_or(scalar ? Matrix::Zero(1, 1) : Matrix());
    c.system.delta_s = rd.number(*sys, p, "delta", true).value_or(kNaN);
    c.system.C_x0 = rd.number(*sys, p, "C_x0", true).value_or(kNaN);
  }

  if (const json* g = rd.field(doc, root, "graph", true)) {
    const std::string p = "$.graph";
    rd.allow(*g, p, {"preset", "agents", "edges"});
    c.graph.n_agents = rd.integer<int>(*g, p, "agents", true).value_or(0);
    c.graph.preset = rd.string(*g, p, "preset", false).value_or("");
    if (const json* edges = rd.field(*g, p, "edges", false)) {
      if (!edges->is_array()) rd.problems.push_back(p + ".edges: expected an array");
      for (std::size_t e = 0; edges->is_array() && e < edges->size(); ++e) {
        const json& item = (*edges)[e];
        const std::string ep = p + ".edges[" + std::to_string(e) + "]";
        if (!item.is_array() || item.size() != 3 || !item[0].is_number_integer() || !item[1].is_number_integer() ||
            !item[2].is_number()) {
          rd.problems.push_back(ep + ": expected [from, to, weight]");
          continue;
        }
        c.graph.edges.push_back({item[0].get<int>(), item[1].get<int>(), item[2].get<double>()});
      }
    }
    if (c.graph.preset.empty() == !g->contains("edges")) {
      rd.problems.push_back(p + ": give exactly one of preset or edges");
    }
  }

  if (const json* z = rd.field(doc, root, "zoom", true)) {
    const std::string p = "$.zoom";
    rd.allow(*z, p, {"gamma1", "gamma2", "theta0"});
    c.gamma1 = rd.number(*z, p, "gamma1", true).value_or(kNaN);
    c.gamma2 = rd.number(*z, p, "gamma2", !scalar);
    c.theta0 = rd.number(*z, p, "theta0", false).value_or(c.system.C_x0);
  }

  const bool need_quantizer = c.mode != SimMode::ScalarUnquantized;
  if (const json* q = rd.field(doc, root, "quantizer", need_quantizer)) {
    const std::string p = "$.quantizer";
    rd.allow(*q, p, {"R", "sigma"});
    c.R = rd.integer<std::int64_t>(*q, p, "R", true).value_or(0);
    c.sigma = rd.number(*q, p, "sigma", true).value_or(kNaN);
  }

  if (const json* d = rd.field(doc, root, "dos", false)) {
    const std::string p = "$.dos";
    const auto kind = rd.string(*d, p, "kind", true).value_or("none");
    if (kind == "none") {
      rd.allow(*d, p, {"kind"});
    } else if (kind == "explicit") {
      rd.allow(*d, p, {"kind", "intervals"});
      c.dos.kind = DosSpec::Kind::Explicit;
      if (const json* ivs = rd.field(*d, p, "intervals", true)) {
        if (!ivs->is_array()) rd.problems.push_back(p + ".intervals: expected an array");
        for (std::size_t i = 0; ivs->is_array() && i < ivs->size(); ++i) {
          const json& item = (*ivs)[i];
          if (!item.is_array() || item.size() != 2 || !item[0].is_number() || !item[1].is_number()) {
            rd.problems.push_back(p + ".intervals[" + std::to_string(i) + "]: expected [start, duration]");
            continue;
          }
          c.dos.intervals.push_back({item[0].get<double>(), item[1].get<double>()});
        }
      }
    } else if (kind == "generated") {
      rd.allow(*d, p, {"kind", "seed", "duty", "mean_period"});
      c.dos.kind = DosSpec::Kind::Generated;
      c.dos.seed = rd.integer<std::uint64_t>(*d, p, "seed", true).value_or(0);
      c.dos.duty = rd.number(*d, p, "duty", true).value_or(kNaN);
      c.dos.mean_period = rd.number(*d, p, "mean_period", true).value_or(kNaN);
    } else {
      rd.problems.push_back(p + ".kind: expected none, explicit or generated");
    }
  }

  std::optional<double> eta, kappa;
  if (const json* b = rd.field(doc, root, "budget", false)) {
    const std::string p = "$.budget";
    rd.allow(*b, p, {"tau_d", "T", "eta", "kappa"});
    DosBudget budget;
    budget.tau_d = rd.number_or_inf(*b, p, "tau_d").value_or(kNaN);
    budget.T = rd.number_or_inf(*b, p, "T").value_or(kNaN);
    eta = rd.number(*b, p, "eta", false);
    kappa = rd.number(*b, p, "kappa", false);
    budget.eta = eta.value_or(0);
    budget.kappa = kappa.value_or(0);
    c.budget = budget;
  }

  c.horizon = rd.number(doc, root, "horizon", true).value_or(kNaN);

  if (const json* init = rd.field(doc, root, "initial_states", false)) {
    const std::string p = "$.initial_states";
    const auto kind = rd.string(*init, p, "kind", true).value_or("random");
    if (kind == "random") {
      rd.allow(*init, p, {"kind", "seed", "zero_mean"});
      c.initial.random = true;
      c.initial.seed = rd.integer<std::uint64_t>(*init, p, "seed", true).value_or(0);
      c.initial.zero_mean = rd.boolean(*init, p, "zero_mean", false).value_or(false);
    } else if (kind == "explicit") {
      rd.allow(*init, p, {"kind", "values"});
      c.initial.random = false;
      if (const json* vals = rd.field(*init, p, "values", true)) {
        if (!vals->is_array()) rd.problems.push_back(p + ".values: expected an array");
        for (std::size_t i = 0; vals->is_array() && i < vals->size(); ++i) {
          if (auto v = rd.vector((*vals)[i], p + ".values[" + std::to_string(i) + "]")) c.initial.values.push_back(*v);
        }
      }
    } else {
      rd.problems.push_back(p + ".kind: expected random or explicit");
    }
  }

  c.strict_saturation = rd.boolean(doc, root, "strict_saturation", false).value_or(false);
  c.settling_horizon = rd.number(doc, root, "settling_horizon", false);
  c.M = rd.integer<std::int64_t>(doc, root, "M", false);

  if (!rd.problems.empty()) throw Error(ErrorCode::ParseError, rd.problems.front(), rd.problems);

  auto violations = scenario_violations(c);
  if (violations.empty() && c.budget && (!eta || !kappa)) {
    // Tightest constants consistent with the declared rates.
    try {
      const DosBudget tight = tight_budget(resolve_signal(c), c.budget->tau_d, c.budget->T, c.system.delta_s);
      if (!eta) c.budget->eta = tight.eta;
      if (!kappa) c.budget->kappa = tight.kappa;
    } catch (const Error& e) {
      violations.push_back(std::string("budget: ") + e.what());
    }
  }
  if (violations.empty() && !c.gamma2) {
    try {
      const auto spectrum = build_laplacian(resolve_graph(c));
      const double a = c.system.A(0, 0);
      double rho_j = 0;
      for (Eigen::Index i = 1; i < spectrum.eigenvalues.size(); ++i) {
        rho_j = std::max(rho_j, std::abs(a - spectrum.eigenvalues(i) * c.system.B(0, 0) * c.system.K_gain(0, 0)));
      }
      c.gamma2 = scalar_gamma2(c.gamma1, a, rho_j);
      c.gamma2_derived = true;
    } catch (const Error& e) {
      violations.push_back(std::string("zoom.gamma2 cannot be derived: ") + e.what());
    }
  }
  if (!violations.empty()) throw Error(ErrorCode::ValidationError, violations.front(), violations);
  return c;
}

bool same(const Matrix& a, const Matrix& b) { return a.rows() == b.rows() && a.cols() == b.cols() && a == b; }

}  // namespace

std::vector<std::string> scenario_violations(const ScenarioConfig& c) {
  std::vector<std::string> out = dimension_violations(c.system);
  const bool scalar = c.mode != SimMode::General;
  if (out.empty() && scalar && (c.system.n() != 1 || c.system.w() != 1 || c.system.v() != 1)) {
    out.push_back("scalar modes need 1 x 1 A, B, C, K and F");
  }
  if (!(c.gamma1 > 0 && c.gamma1 < 1)) out.push_back("gamma1 must lie in (0, 1)");
  if (c.gamma2 && !(*c.gamma2 > 0 && std::isfinite(*c.gamma2))) out.push_back("gamma2 must be positive");
  if (!c.gamma2 && !scalar) out.push_back("gamma2 is required in general mode");
  if (!(c.theta0 > 0) || !std::isfinite(c.theta0)) out.push_back("theta0 must be positive");
  if (c.mode != SimMode::ScalarUnquantized) {
    if (c.R < 1) out.push_back("quantizer R must be >= 1");
    if (!(c.sigma > 0) || !std::isfinite(c.sigma)) out.push_back("quantizer sigma must be positive");
  }
  if (!std::isfinite(c.horizon) || !(c.horizon >= c.system.delta_s)) out.push_back("horizon must be >= delta");

  if (c.graph.n_agents < 2) out.push_back("graph needs at least two agents");
  else {
    try {
      const Graph g = resolve_graph(c);
      if (!check_connected(g)) out.push_back("graph is disconnected");
    } catch (const Error& e) {
      out.push_back(std::string("graph: ") + e.what());
    }
  }

  if (c.dos.kind == DosSpec::Kind::Generated) {
    if (!(c.dos.duty > 0 && c.dos.duty < 1)) out.push_back("dos.duty must lie in (0, 1)");
    if (!(c.dos.mean_period > c.system.delta_s) || !std::isfinite(c.dos.mean_period)) {
      out.push_back("dos.mean_period must exceed delta");
    }
  } else if (c.dos.kind == DosSpec::Kind::Explicit && std::isfinite(c.horizon) && c.system.delta_s > 0) {
    try {
      DosSignal(c.dos.intervals, c.horizon, c.system.delta_s);
    } catch (const Error& e) {
      out.push_back(std::string("dos: ") + e.what());
    }
  }

  if (c.budget) {
    const auto& b = *c.budget;
    if (!(b.tau_d > 0)) out.push_back("budget.tau_d must be positive");
    if (!(b.T > 1)) out.push_back("budget.T must exceed 1");
    if (!(b.eta >= 0) || !std::isfinite(b.eta)) out.push_back("budget.eta must be >= 0");
    if (!(b.kappa >= 0) || !std::isfinite(b.kappa)) out.push_back("budget.kappa must be >= 0");
  }

  if (!c.initial.random) {
    if (static_cast<int>(c.initial.values.size()) != c.graph.n_agents) {
      out.push_back("initial_states.values needs one state per agent");
    }
    for (std::size_t i = 0; i < c.initial.values.size(); ++i) {
      const Vector& v = c.initial.values[i];
      if (v.size() != c.system.A.rows()) out.push_back("initial state " + std::to_string(i) + " has the wrong dimension");
      else if (!v.allFinite() || v.cwiseAbs().maxCoeff() > c.system.C_x0) {
        out.push_back("initial state " + std::to_string(i) + " exceeds C_x0");
      }
    }
  }
  if (c.settling_horizon && !(*c.settling_horizon > 0 && *c.settling_horizon <= c.horizon)) {
    out.push_back("settling_horizon must lie in (0, horizon]");
  }
  if (c.M && *c.M < 0) out.push_back("M must be >= 0");
  return out;
}

ScenarioConfig load_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return parse(doc);
}

ScenarioConfig load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return load_scenario(ss.str());
}

std::string save_scenario(const ScenarioConfig& c) {
  json doc;
  doc["name"] = c.name;
  doc["mode"] = to_string(c.mode);
  doc["system"] = {{"A", matrix_json(c.system.A)},       {"B", matrix_json(c.system.B)},
                   {"C", matrix_json(c.system.C_out)},   {"K", matrix_json(c.system.K_gain)},
                   {"F", matrix_json(c.system.F_gain)},  {"delta", c.system.delta_s},
                   {"C_x0", c.system.C_x0}};
  json graph = {{"agents", c.graph.n_agents}};
  if (!c.graph.preset.empty()) graph["preset"] = c.graph.preset;
  else {
    graph["edges"] = json::array();
    for (const auto& e : c.graph.edges) graph["edges"].push_back({e.from, e.to, e.weight});
  }
  doc["graph"] = graph;
  doc["zoom"] = {{"gamma1", c.gamma1}, {"theta0", c.theta0}};
  if (c.gamma2 && !c.gamma2_derived) doc["zoom"]["gamma2"] = *c.gamma2;
  doc["quantizer"] = {{"R", c.R}, {"sigma", c.sigma}};
  switch (c.dos.kind) {
    case DosSpec::Kind::None: doc["dos"] = {{"kind", "none"}}; break;
    case DosSpec::Kind::Explicit: {
      json ivs = json::array();
      for (const auto& iv : c.dos.intervals) ivs.push_back({iv.start, iv.duration});
      doc["dos"] = {{"kind", "explicit"}, {"intervals", ivs}};
      break;
    }
    case DosSpec::Kind::Generated:
      doc["dos"] = {{"kind", "generated"}, {"seed", c.dos.seed}, {"duty", c.dos.duty}, {"mean_period", c.dos.mean_period}};
      break;
  }
  if (c.budget) {
    doc["budget"] = {{"tau_d", inf_or_number(c.budget->tau_d)},
                     {"T", inf_or_number(c.budget->T)},
                     {"eta", c.budget->eta},
                     {"kappa", c.budget->kappa}};
  }
  doc["horizon"] = c.horizon;
  if (c.initial.random) {
    doc["initial_states"] = {{"kind", "random"}, {"seed", c.initial.seed}, {"zero_mean", c.initial.zero_mean}};
  } else {
    json vals = json::array();
    for (const auto& v : c.initial.values) vals.push_back(std::vector<double>(v.data(), v.data() + v.size()));
    doc["initial_states"] = {{"kind", "explicit"}, {"values", vals}};
  }
  doc["strict_saturation"] = c.strict_saturation;
  if (c.settling_horizon) doc["settling_horizon"] = *c.settling_horizon;
  if (c.M) doc["M"] = *c.M;
  return doc.dump(2) + "\n";
}

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
  auto same_budget = [](const std::optional<DosBudget>& x, const std::optional<DosBudget>& y) {
    if (x.has_value() != y.has_value()) return false;
    return !x || (x->eta == y->eta && x->tau_d == y->tau_d && x->kappa == y->kappa && x->T == y->T);
  };
  auto same_edges = [](const std::vector<WeightedEdge>& x, const std::vector<WeightedEdge>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].from != y[i].from || x[i].to != y[i].to || x[i].weight != y[i].weight) return false;
    }
    return true;
  };
  auto same_states = [](const std::vector<Vector>& x, const std::vector<Vector>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].size() != y[i].size() || x[i] != y[i]) return false;
    }
    return true;
  };
  const auto& s = a.system;
  const auto& t = b.system;
  return a.name == b.name && a.mode == b.mode && same(s.A, t.A) && same(s.B, t.B) && same(s.C_out, t.C_out) &&
         same(s.K_gain, t.K_gain) && same(s.F_gain, t.F_gain) && s.delta_s == t.delta_s && s.C_x0 == t.C_x0 &&
         a.graph.preset == b.graph.preset && a.graph.n_agents == b.graph.n_agents &&
         same_edges(a.graph.edges, b.graph.edges) && a.gamma1 == b.gamma1 && a.gamma2 == b.gamma2 &&
         a.gamma2_derived == b.gamma2_derived && a.theta0 == b.theta0 && a.R == b.R && a.sigma == b.sigma &&
         a.dos.kind == b.dos.kind && a.dos.intervals == b.dos.intervals && a.dos.seed == b.dos.seed &&
         a.dos.duty == b.dos.duty && a.dos.mean_period == b.dos.mean_period && same_budget(a.budget, b.budget) &&
         a.horizon == b.horizon && a.initial.random == b.initial.random && a.initial.seed == b.initial.seed &&
         a.initial.zero_mean == b.initial.zero_mean && same_states(a.initial.values, b.initial.values) &&
         a.strict_saturation == b.strict_saturation && a.settling_horizon == b.settling_horizon && a.M == b.M;
}

Graph resolve_graph(const ScenarioConfig& c) {
  if (!c.graph.preset.empty()) return make_preset_graph(c.graph.preset, c.graph.n_agents);
  return make_graph(c.graph.n_agents, c.graph.edges);
}

DosSignal resolve_signal(const ScenarioConfig& c) {
  switch (c.dos.kind) {
    case DosSpec::Kind::None: return DosSignal({}, c.horizon, c.system.delta_s);
    case DosSpec::Kind::Explicit: return DosSignal(c.dos.intervals, c.horizon, c.system.delta_s);
    case DosSpec::Kind::Generated:
      return generate_random(c.dos.seed, c.horizon, c.system.delta_s, c.dos.duty, c.dos.mean_period);
  }
  return {};
}

std::vector<Vector> resolve_initial_states(const ScenarioConfig& c) {
  if (!c.initial.random) return c.initial.values;
  const int agents = c.graph.n_agents;
  const auto n = c.system.A.rows();
  const double bound = c.system.C_x0;
  std::mt19937_64 rng(c.initial.seed);
  Matrix x(n, agents);
  for (int i = 0; i < agents; ++i) {
    for (Eigen::Index r = 0; r < n; ++r) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      x(r, i) = bound * (2.0 * u - 1.0);
    }
  }
  if (c.initial.zero_mean) {
    x.colwise() -= x.rowwise().mean();
    const double peak = x.cwiseAbs().maxCoeff();
    if (peak > bound) x *= bound / peak;
  }
  std::vector<Vector> out;
  for (int i = 0; i < agents; ++i) out.emplace_back(x.col(i));
  return out;
}

DosBudget declared_budget(const ScenarioConfig& c) { return c.budget.value_or(DosBudget{}); }

SimSetup make_setup(const ScenarioConfig& c) {
  SimSetup s;
  s.system = c.system;
  s.graph = resolve_graph(c);
  s.codec.gamma1 = c.gamma1;
  s.codec.gamma2 = c.gamma2.value_or(1.0);
  s.codec.theta0 = c.theta0;
  s.codec.quantizer = {c.R, c.sigma};
  s.dos = resolve_signal(c);
  s.horizon = c.horizon;
  s.x0 = resolve_initial_states(c);
  s.mode = c.mode;
  s.strict = c.strict_saturation;
  return s;
}

SimTrace run(const ScenarioConfig& c) { return simulate(make_setup(c)); }

}  // namespace qcons
