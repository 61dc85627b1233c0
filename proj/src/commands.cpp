#include "qcons/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qcons/oracle.hpp"
#include "qcons/plot.hpp"
#include "qcons/trace_io.hpp"

namespace qcons {

using nlohmann::json;

LogLevel log_level_from_env() {
  const char* v = std::getenv("QC_LOG");
  if (!v) return LogLevel::Info;
  const std::string s(v);
  if (s == "quiet" || s == "0") return LogLevel::Quiet;
  if (s == "debug" || s == "2") return LogLevel::Debug;
  return LogLevel::Info;
}

std::filesystem::path shipped_scenario_dir() {
  if (const char* dir = std::getenv("QCONS_SCENARIOS")) return dir;
  return QCONS_SCENARIO_DIR;
}

namespace {

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_file(const std::filesystem::path& path, const std::string& body, CommandResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!(out << body)) throw Error(ErrorCode::InvalidParams, "cannot write " + path.string());
  result.artifacts.push_back(path);
}

std::optional<ScenarioConfig> load_or_report(const std::filesystem::path& path, std::ostream& err) {
  try {
    return load_scenario_file(path);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    for (std::size_t i = 1; i < e.details().size(); ++i) err << "  also: " << e.details()[i] << "\n";
    return std::nullopt;
  }
}

json summary_json(const RunSummary& s) {
  return {{"initial_delta_norm", s.delta0_norm},
          {"final_delta_norm", s.final_delta_norm},
          {"max_abs_symbol", s.max_abs_symbol},
          {"saturation_steps", s.saturation_steps},
          {"steps", s.steps},
          {"jammed_samples", s.jammed_samples},
          {"dos_transitions", s.transitions},
          {"dos_jammed_time", s.jammed_time},
          {"max_consecutive_losses", s.max_consecutive_losses}};
}

}  // namespace

std::string report_to_json(const ConditionReport& r) {
  json verdicts = json::object();
  for (const auto& [name, v] : r.verdicts) verdicts[name] = {{"pass", v.pass}, {"margin", num(v.margin)}};
  json doc = {{"mode", r.mode},
              {"rho_A", num(r.rho_A)},
              {"rho_J", num(r.rho_J)},
              {"rho_AFC", num(r.rho_AFC)},
              {"lambda2", num(r.lambda2)},
              {"gamma1", num(r.gamma1)},
              {"gamma2", num(r.gamma2)},
              {"gamma2_derived", r.gamma2_derived},
              {"gamma0", num(r.gamma0)},
              {"gamma3", num(r.gamma3)},
              {"gamma4", num(r.gamma4)},
              {"c_a", num(r.c_a)},
              {"c_j", num(r.c_j)},
              {"c1", num(r.c1)},
              {"c2", num(r.c2)},
              {"c3", num(r.c3)},
              {"c4", num(r.c4)},
              {"c5", num(r.c5)},
              {"c6", num(r.c6)},
              {"c7", num(r.c7)},
              {"zeta", num(r.zeta)},
              {"norm_L", num(r.norm_L)},
              {"norm_H", num(r.norm_H)},
              {"norm_P", num(r.norm_P)},
              {"norm_AFC", num(r.norm_AFC)},
              {"norm_AN_FCN_inf", num(r.norm_AN_FCN_inf)},
              {"norm_LH_inf", num(r.norm_LH_inf)},
              {"bound_35", num(r.bound_35)},
              {"bound_40", num(r.bound_40)},
              {"bound_45", num(r.bound_45)},
              {"bound_69", num(r.bound_69)},
              {"range_capacity", num(r.range_capacity)},
              {"dos_level", num(r.dos_level)},
              {"M", r.M},
              {"budget",
               {{"eta", num(r.budget.eta)},
                {"tau_d", num(r.budget.tau_d)},
                {"kappa", num(r.budget.kappa)},
                {"T", num(r.budget.T)}}},
              {"verdicts", verdicts},
              {"notes", r.notes},
              {"structural_errors", r.structural_errors},
              {"all_pass", r.all_pass()}};
  return doc.dump(2) + "\n";
}

std::string report_to_text(const ConditionReport& r) {
  std::ostringstream os;
  os << std::setprecision(6);
  os << "mode " << r.mode << "\n";
  auto line = [&](const char* name, double v) {
    if (!std::isnan(v)) os << "  " << std::left << std::setw(10) << name << v << "\n";
  };
  line("rho(A)", r.rho_A);
  line("rho(J)", r.rho_J);
  line("rho(A-FC)", r.rho_AFC);
  line("gamma1", r.gamma1);
  line("gamma2", r.gamma2);
  line("gamma0", r.gamma0);
  line("gamma3", r.gamma3);
  line("gamma4", r.gamma4);
  line("C_A", r.c_a);
  line("C_J", r.c_j);
  line("C_1", r.c1);
  line("C_2", r.c2);
  line("C_3", r.c3);
  line("C_4", r.c4);
  line("C_5", r.c5);
  line("C_6", r.c6);
  line("C_7", r.c7);
  line("zeta", r.zeta);
  line("bound_35", r.bound_35);
  line("bound_40", r.bound_40);
  line("bound_45", r.bound_45);
  line("bound_69", r.bound_69);
  line("capacity", r.range_capacity);
  line("dos_level", r.dos_level);
  if (r.M >= 0) os << "  M         " << r.M << "\n";
  for (const auto& [name, v] : r.verdicts) {
    os << (v.pass ? "  PASS " : "  FAIL ") << name << " (margin " << v.margin << ")\n";
  }
  for (const auto& n : r.notes) os << "  note: " << n << "\n";
  for (const auto& e : r.structural_errors) os << "  error: " << e << "\n";
  return os.str();
}

RunSummary summarize(const SimTrace& trace, const SimSetup& setup) {
  RunSummary s;
  s.steps = static_cast<std::int64_t>(trace.steps.size()) - 1;
  s.delta0_norm = trace.steps.front().delta.norm();
  s.final_delta_norm = trace.steps.back().delta.norm();
  s.max_abs_symbol = trace.max_abs_symbol();
  s.saturation_steps = trace.saturation_steps;
  for (const auto& r : trace.steps) s.jammed_samples += r.jammed ? 1 : 0;
  const auto m = measure(setup.dos, 0.0, setup.dos.horizon());
  s.transitions = m.transitions;
  s.jammed_time = m.jammed_time;
  s.max_consecutive_losses = max_consecutive_losses(setup.dos, setup.system.delta_s, setup.horizon);
  return s;
}

CommandResult cmd_check(const std::filesystem::path& scenario, const std::filesystem::path& out_dir, std::ostream& out,
                        std::ostream& err) {
  CommandResult result;
  const auto config = load_or_report(scenario, err);
  if (!config) return {2, {}};
  const ConditionReport report = validate(*config);
  out << report_to_text(report);
  std::filesystem::create_directories(out_dir);
  write_file(out_dir / "conditions.json", report_to_json(report), result);
  result.exit_code = report.all_pass() ? 0 : 1;
  return result;
}

CommandResult cmd_simulate(const std::filesystem::path& scenario, const std::filesystem::path& out_dir, bool strict,
                           bool plot, std::ostream& out, std::ostream& err) {
  CommandResult result;
  auto config = load_or_report(scenario, err);
  if (!config) return {2, {}};
  if (strict) config->strict_saturation = true;
  std::filesystem::create_directories(out_dir);

  const ConditionReport report = validate(*config);
  write_file(out_dir / "conditions.json", report_to_json(report), result);
  if (!report.structural_errors.empty()) {
    for (const auto& e : report.structural_errors) err << "error: " << e << "\n";
    return {2, result.artifacts};
  }

  const SimSetup setup = make_setup(*config);
  SimTrace trace;
  try {
    trace = simulate(setup);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return {e.code() == ErrorCode::SaturationAbort ? 1 : 2, result.artifacts};
  }

  std::ostringstream csv;
  write_trace_csv(trace, csv);
  write_file(out_dir / "trace.csv", csv.str(), result);

  const RunSummary s = summarize(trace, setup);
  json summary = summary_json(s);
  summary["scenario"] = json::parse(save_scenario(*config));
  write_file(out_dir / "summary.json", summary.dump(2) + "\n", result);
  if (plot) {
    for (auto& p : write_plots(trace, out_dir)) result.artifacts.push_back(p);
  }
  if (log_level_from_env() != LogLevel::Quiet) {
    out << "steps " << s.steps << ", jammed " << s.jammed_samples << ", final |delta| " << s.final_delta_norm
        << " (initial " << s.delta0_norm << "), max |symbol| " << s.max_abs_symbol << ", saturated steps "
        << s.saturation_steps << "\n";
  }
  return result;
}

ScenarioConfig apply_axis(ScenarioConfig c, const std::string& axis, const std::string& value) {
  double v = 0;
  try {
    std::size_t used = 0;
    v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidParams, "not a number: '" + value + "'");
  }
  if (axis == "duty") {
    if (c.dos.kind != DosSpec::Kind::Generated) {
      throw Error(ErrorCode::InvalidParams, "the duty axis needs a generated DoS signal");
    }
    c.dos.duty = v;
  } else if (axis == "gamma1") {
    c.gamma1 = v;
    if (c.gamma2_derived) c.gamma2.reset();
  } else if (axis == "gamma2") {
    c.gamma2 = v;
    c.gamma2_derived = false;
  } else if (axis == "R") {
    if (v < 1 || v != std::floor(v)) throw Error(ErrorCode::InvalidParams, "R must be a positive integer");
    c.R = static_cast<std::int64_t>(v);
  } else if (axis == "seed") {
    if (v < 0 || v != std::floor(v)) throw Error(ErrorCode::InvalidParams, "seed must be a non-negative integer");
    const auto seed = static_cast<std::uint64_t>(v);
    if (c.dos.kind == DosSpec::Kind::Generated) c.dos.seed = seed;
    if (c.initial.random) c.initial.seed = seed;
  } else {
    throw Error(ErrorCode::InvalidParams, "unknown sweep axis '" + axis + "'");
  }
  if (!c.gamma2) {
    // Re-derive through a save/load round trip so the scalar rule is applied.
    c = load_scenario(save_scenario(c));
  }
  if (auto v2 = scenario_violations(c); !v2.empty()) throw Error(ErrorCode::InvalidParams, v2.front(), v2);
  return c;
}

CommandResult cmd_sweep(const std::filesystem::path& scenario, const std::string& axis,
                        const std::vector<std::string>& values, const std::filesystem::path& out_dir, unsigned jobs,
                        std::ostream& out, std::ostream& err) {
  CommandResult result;
  const auto config = load_or_report(scenario, err);
  if (!config) return {2, {}};
  if (values.empty()) {
    err << "error: no sweep values given\n";
    return {2, {}};
  }
  std::vector<ScenarioConfig> variants;
  try {
    for (const auto& v : values) variants.push_back(apply_axis(*config, axis, v));
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return {2, {}};
  }

  struct Row {
    RunSummary summary;
    bool aborted{false};
    std::string failure;
  };
  std::vector<Row> rows(variants.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < variants.size(); i = next++) {
      try {
        const SimSetup setup = make_setup(variants[i]);
        const SimTrace trace = simulate(setup);
        rows[i].summary = summarize(trace, setup);
      } catch (const Error& e) {
        rows[i].aborted = true;
        rows[i].failure = std::string(to_string(e.code()));
      }
    }
  };
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(variants.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::ostringstream csv;
  csv << "axis,value,final_delta_norm,initial_delta_norm,saturation_steps,aborted,max_abs_symbol,jammed_samples,"
         "dos_transitions,dos_jammed_time\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& s = rows[i].summary;
    csv << axis << ',' << values[i] << ',' << (rows[i].aborted ? "" : format_double(s.final_delta_norm)) << ','
        << (rows[i].aborted ? "" : format_double(s.delta0_norm)) << ',' << s.saturation_steps << ','
        << (rows[i].aborted ? rows[i].failure : "0") << ',' << s.max_abs_symbol << ',' << s.jammed_samples << ','
        << s.transitions << ',' << format_double(s.jammed_time) << '\n';
  }
  std::filesystem::create_directories(out_dir);
  write_file(out_dir / "sweep.csv", csv.str(), result);
  out << csv.str();
  return result;
}

namespace {

struct Checker {
  std::ostream& out;
  bool ok{true};

  void expect(bool pass, const std::string& what) {
    out << (pass ? "PASS " : "FAIL ") << what << "\n";
    ok = ok && pass;
  }
  void near(double value, double target, double tol, const std::string& what) {
    std::ostringstream os;
    os << std::setprecision(8) << what << " = " << value << " (target " << target << " +- " << tol << ")";
    expect(std::abs(value - target) <= tol, os.str());
  }
};

bool theta_law_exact(const SimTrace& trace, const CodecParams& codec) {
  for (std::size_t k = 1; k < trace.steps.size(); ++k) {
    const double expected = trace.steps[k - 1].theta * (trace.steps[k].jammed ? codec.gamma2 : codec.gamma1);
    if (trace.steps[k].theta != expected) return false;
  }
  return true;
}

}  // namespace

CommandResult cmd_repro(const std::string& which, const std::filesystem::path& out_dir, std::ostream& out,
                        std::ostream& err) {
  static const std::map<std::string, std::string> files = {{"example-a", "example_a.json"},
                                                           {"example-scalar", "example_scalar.json"},
                                                           {"example-scalar-unquantized",
                                                            "example_scalar_unquantized.json"}};
  const auto it = files.find(which);
  if (it == files.end()) {
    err << "error: unknown example '" << which << "'\n";
    return {2, {}};
  }
  const auto path = shipped_scenario_dir() / it->second;
  CommandResult result = cmd_simulate(path, out_dir, false, true, out, err);
  if (result.exit_code != 0) return result;

  const ScenarioConfig config = load_scenario_file(path);
  const ConditionReport report = validate(config);
  SimSetup setup = make_setup(config);
  setup.replicas = config.mode != SimMode::ScalarUnquantized;
  const SimTrace trace = simulate(setup);
  const RunSummary s = summarize(trace, setup);
  Checker check{out};

  if (which == "example-a") {
    check.near(report.rho_J, 0.8146, 5e-4, "rho(J)");
    check.near(report.rho_A, 1.2731, 5e-4, "rho(A)");
    check.near(report.rho_AFC, 0.81, 5e-3, "rho(A-FC)");
    check.near(report.bound_45, 0.3257, 1e-4, "DoS bound");
    check.near(report.c_a, 1.0607, 2e-2, "C_A");
    check.near(report.c_j, 1.1070, 2e-2, "C_J");
    check.expect(trace.replica_mismatches == 0 && trace.replica_checks > 0, "decoder replicas agree bit-exactly");
    check.expect(theta_law_exact(trace, setup.codec), "theta ratio is gamma1 on clean and gamma2 on jammed steps");
    check.expect(normalized_oracle(trace, setup).max() <= 1e-9, "normalized recursions match the trace");
    check.expect(s.saturation_steps == 0, "no quantizer saturation");
    check.expect(s.final_delta_norm <= 0.05 * s.delta0_norm, "consensus within the horizon");
  } else if (which == "example-scalar") {
    check.near(report.gamma2, 1.0962, 1e-4, "gamma2");
    check.near(report.bound_69, 0.8134, 1e-4, "unquantized DoS bound");
    check.expect(normalized_oracle(trace, setup).max() <= 1e-9, "normalized recursions match the trace");
    check.expect(trace.replica_mismatches == 0, "decoder replicas agree bit-exactly");
    check.expect(s.saturation_steps == 0, "no quantizer saturation");
    check.expect(s.final_delta_norm <= 0.05 * s.delta0_norm, "consensus within the horizon");
  } else {
    const DosBudget budget = declared_budget(config);
    const double a = config.system.A(0, 0);
    const Envelope env = unquantized_envelope(a, report.rho_J, budget, config.system.delta_s);
    check.expect(report.dos_level < report.bound_69, "declared DoS level below the unquantized bound");
    check.expect(env.rate < 1, "envelope contracts");
    bool inside = true;
    const double d1 = trace.steps.size() > 1 ? trace.steps[1].delta.norm() : 0.0;
    for (std::size_t k = 1; k < trace.steps.size(); ++k) {
      const double bound = env.c * std::pow(env.rate, static_cast<double>(k) - 1.0) * d1;
      inside = inside && trace.steps[k].delta.norm() <= bound * (1 + 1e-9) + 1e-12;
    }
    check.expect(inside, "|delta(k)| stays inside the envelope");
    check.expect(s.final_delta_norm <= 1e-3 * s.delta0_norm, "consensus within the horizon");
  }
  result.exit_code = check.ok ? 0 : 1;
  return result;
}

}  // namespace qcons
