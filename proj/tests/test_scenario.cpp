#include <doctest.h>

#include <random>

#include "qcons/conditions.hpp"
#include "qcons/error.hpp"
#include "test_support.hpp"

using namespace qcons;
using namespace qcons::testing;

namespace {

ErrorCode code_of(const std::string& text) {
  try {
    load_scenario(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a load error");
  return ErrorCode::InvalidParams;
}

std::vector<std::string> details_of(const std::string& text) {
  try {
    load_scenario(text);
  } catch (const Error& e) {
    return e.details();
  }
  return {};
}

ScenarioConfig random_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_int_distribution<int> dim(1, 3), agents(2, 6), pick(0, 3);
  auto mat = [&](int r, int c) {
    Matrix m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = u(rng);
    return m;
  };

  ScenarioConfig c;
  c.name = "random_" + std::to_string(rng() % 1000);
  c.mode = SimMode::General;
  const int n = dim(rng), w = dim(rng), v = dim(rng);
  c.system = {mat(n, n), mat(n, w), mat(v, n), mat(w, n), mat(n, v), 0.05 + 0.1 * std::abs(u(rng)), 1.0 + std::abs(u(rng))};
  c.graph.n_agents = agents(rng);
  const char* presets[] = {"star", "path", "ring", "complete"};
  if (pick(rng) == 0) {
    for (int i = 1; i < c.graph.n_agents; ++i) c.graph.edges.push_back({i - 1, i, 0.5 + std::abs(u(rng))});
  } else {
    c.graph.preset = presets[pick(rng)];
  }
  c.gamma1 = 0.5 + 0.2 * std::abs(u(rng));
  c.gamma2 = 1.0 + std::abs(u(rng));
  c.theta0 = 0.5 + std::abs(u(rng));
  c.R = 1 + static_cast<std::int64_t>(rng() % 100000);
  c.sigma = 0.1 + std::abs(u(rng));
  c.horizon = 5.0;
  switch (pick(rng) % 3) {
    case 0: c.dos.kind = DosSpec::Kind::None; break;
    case 1:
      c.dos.kind = DosSpec::Kind::Explicit;
      c.dos.intervals = {{0.5, 0.2}, {1.7, 0.0}, {3.1, 0.45}};
      break;
    default:
      c.dos = {DosSpec::Kind::Generated, {}, rng(), 0.1 + 0.2 * std::abs(u(rng)), 1.0 + std::abs(u(rng))};
  }
  if (pick(rng) != 0) {
    c.budget = DosBudget{std::abs(u(rng)), pick(rng) == 0 ? kInf : 1.0 + std::abs(u(rng)), std::abs(u(rng)),
                         2.0 + std::abs(u(rng))};
  }
  if (pick(rng) == 0) {
    c.initial.random = false;
    for (int i = 0; i < c.graph.n_agents; ++i) c.initial.values.push_back(Vector::Constant(n, 0.3 * u(rng)));
  } else {
    c.initial = {true, rng(), pick(rng) % 2 == 0, {}};
  }
  c.strict_saturation = pick(rng) == 0;
  if (pick(rng) != 0) c.settling_horizon = 4.0;
  if (pick(rng) == 0) c.M = pick(rng);
  return c;
}

}  // namespace

TEST_CASE("shipped scenarios load") {
  const auto a = shipped("example_a");
  CHECK(a.mode == SimMode::General);
  CHECK(a.graph.n_agents == 4);
  CHECK(a.R == 150960);
  CHECK(a.dos.intervals.size() == 15);
  REQUIRE(a.budget);
  CHECK(a.budget->eta >= 0);
  const auto s = shipped("example_scalar");
  CHECK(s.gamma2_derived);
  CHECK(*s.gamma2 == doctest::Approx(1.0962).epsilon(1e-4));
  CHECK(s.system.C_out(0, 0) == 1.0);
  CHECK(s.system.F_gain(0, 0) == 0.0);
  CHECK(s.theta0 == 1.0);
  const auto u = shipped("example_scalar_unquantized");
  CHECK(u.dos.kind == DosSpec::Kind::Generated);
  CHECK(u.dos.seed == 2024);
}

TEST_CASE("shipped scenarios round-trip") {
  for (const char* name : {"example_a", "example_scalar", "example_scalar_unquantized"}) {
    CAPTURE(name);
    const auto c = shipped(name);
    const auto back = load_scenario(save_scenario(c));
    CHECK(back == c);
    CHECK(save_scenario(back) == save_scenario(c));
  }
}

TEST_CASE("random scenarios round-trip") {
  std::mt19937_64 rng(2718);
  for (int i = 0; i < 50; ++i) {
    const auto c = random_config(rng);
    REQUIRE(scenario_violations(c).empty());
    const std::string text = save_scenario(c);
    const auto back = load_scenario(text);
    CHECK(back == c);
    CHECK(save_scenario(back) == text);
  }
}

TEST_CASE("malformed input is a parse error") {
  CHECK(code_of("") == ErrorCode::ParseError);
  CHECK(code_of("{") == ErrorCode::ParseError);
  CHECK(code_of("[]") == ErrorCode::ParseError);
  auto text = save_scenario(shipped("example_a"));
  text.insert(text.find('{') + 1, "\"colour\": 3,");
  const auto d = details_of(text);
  REQUIRE_FALSE(d.empty());
  CHECK(d.front().find("colour") != std::string::npos);
}

TEST_CASE("every problem is reported at once") {
  std::string text = save_scenario(shipped("example_a"));
  auto replace = [&](const std::string& from, const std::string& to) {
    const auto at = text.find(from);
    REQUIRE(at != std::string::npos);
    text.replace(at, from.size(), to);
  };
  replace("\"gamma1\": 0.85", "\"gamma1\": 1.5");
  replace("\"R\": 150960", "\"R\": 0");
  replace("\"horizon\": 10.0", "\"horizon\": 0.0");
  CHECK(code_of(text) == ErrorCode::ValidationError);
  CHECK(details_of(text).size() >= 3);

  std::string typed = save_scenario(shipped("example_a"));
  typed.replace(typed.find("\"gamma1\": 0.85"), 14, "\"gamma1\": \"x\"");
  typed.replace(typed.find("\"R\": 150960"), 11, "\"R\": 1.5");
  CHECK(code_of(typed) == ErrorCode::ParseError);
  CHECK(details_of(typed).size() >= 2);
}

TEST_CASE("semantic violations") {
  auto c = shipped("example_a");
  c.graph = {"", 4, {{0, 1, 1.0}, {2, 3, 1.0}}};
  CHECK_FALSE(scenario_violations(c).empty());
  c = shipped("example_a");
  c.system.B = Matrix::Identity(3, 3);
  CHECK_FALSE(scenario_violations(c).empty());
  c = shipped("example_scalar");
  c.system.A = Matrix::Identity(2, 2);
  CHECK_FALSE(scenario_violations(c).empty());
  c = shipped("example_a");
  c.initial.random = false;
  c.initial.values.assign(4, Vector::Constant(2, 5.0));
  CHECK_FALSE(scenario_violations(c).empty());
}

TEST_CASE("resolved initial states respect the bound") {
  for (const char* name : {"example_a", "example_scalar"}) {
    const auto c = shipped(name);
    const auto x = resolve_initial_states(c);
    REQUIRE(static_cast<int>(x.size()) == c.graph.n_agents);
    Vector sum = Vector::Zero(x.front().size());
    for (const auto& v : x) {
      CHECK(v.cwiseAbs().maxCoeff() <= c.system.C_x0);
      sum += v;
    }
    CHECK(sum.cwiseAbs().maxCoeff() <= 1e-12);
    const auto again = resolve_initial_states(c);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i] == again[i]);
  }
}

TEST_CASE("generated signal is fixed by its seed") {
  const auto c = shipped("example_scalar_unquantized");
  CHECK(resolve_signal(c).intervals() == resolve_signal(load_scenario(save_scenario(c))).intervals());
  auto other = c;
  other.dos.seed += 1;
  CHECK(resolve_signal(c).intervals() != resolve_signal(other).intervals());
}
