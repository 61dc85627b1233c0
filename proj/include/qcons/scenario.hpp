#pragma once

// JSON experiment descriptions. Schema: docs/scenario_schema.md.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qcons/dos.hpp"
#include "qcons/graph.hpp"
#include "qcons/simulation.hpp"

namespace qcons {

struct GraphSpec {
  std::string preset;  // empty when `edges` is used
  int n_agents{0};
  std::vector<WeightedEdge> edges;
};

struct DosSpec {
  enum class Kind { None, Explicit, Generated };
  Kind kind{Kind::None};
  std::vector<DosInterval> intervals;
  std::uint64_t seed{0};
  double duty{0};
  double mean_period{0};
};

struct InitialStateSpec {
  bool random{true};
  std::uint64_t seed{0};
  bool zero_mean{false};       // subtract the agent average after drawing
  std::vector<Vector> values;  // explicit states, one per agent
};

struct ScenarioConfig {
  std::string name;
  SimMode mode{SimMode::General};
  SystemSpec system;
  GraphSpec graph;
  double gamma1{0};
  std::optional<double> gamma2;  // always set after load
  bool gamma2_derived{false};
  double theta0{0};  // defaults to C_x0
  std::int64_t R{1};
  double sigma{1};
  DosSpec dos;
  std::optional<DosBudget> budget;
  double horizon{0};
  InitialStateSpec initial;
  bool strict_saturation{false};
  std::optional<double> settling_horizon;
  std::optional<std::int64_t> M;
};

std::string to_string(SimMode mode);

/// Throws ParseError (malformed JSON, unknown keys, wrong types) or
/// ValidationError listing every violation found.
ScenarioConfig load_scenario(const std::string& text);
ScenarioConfig load_scenario_file(const std::filesystem::path& path);

std::string save_scenario(const ScenarioConfig& config);

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b);

/// Semantic violations (empty if valid).
std::vector<std::string> scenario_violations(const ScenarioConfig& config);

Graph resolve_graph(const ScenarioConfig& config);
DosSignal resolve_signal(const ScenarioConfig& config);
std::vector<Vector> resolve_initial_states(const ScenarioConfig& config);

/// Declared budget, or the no-attack budget when none is declared.
DosBudget declared_budget(const ScenarioConfig& config);

SimSetup make_setup(const ScenarioConfig& config);

/// Runs the scenario's simulation. Same scenario, same trace.
SimTrace run(const ScenarioConfig& config);

}  // namespace qcons
