#include "trustgame/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <fmt/format.h>

namespace trustgame
{

using nlohmann::json;

namespace
{

const std::set<std::string>& known_keys()
{
  static const std::set<std::string> keys{
      "topology", "side",       "nodes",           "attach",    "R_T",        "r_UT",     "rule",
      "q",        "f_I",        "f_T",             "f_U",       "steps",      "runs",     "seed",
      "snapshot_every", "record_nodes", "probe_distances", "window", "tail_fraction", "max_lag",
      "f_min",    "box_sides",  "gl_distances",    "grid_step", "rules",      "topologies", "r_UT_values"};
  return keys;
}

template <typename T>
void read(const json& j, const char* key, T& out)
{
  const auto it = j.find(key);
  if (it == j.end()) {
    return;
  }
  try {
    out = it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(key, fmt::format("wrong type ({})", e.what()));
  }
}

Rule parse_rule(const std::string& key, const std::string& token)
{
  if (auto r = rule_from_token(token)) {
    return *r;
  }
  throw ConfigError(key, "unknown rule '" + token + "' (expected ui | ui_vm | moran | prop)");
}

TopologyType parse_topology(const std::string& key, const std::string& token)
{
  if (auto t = topology_from_token(token)) {
    return *t;
  }
  throw ConfigError(key, "unknown topology '" + token + "' (expected lattice | scale_free)");
}

void require(bool ok, const char* key, const std::string& message)
{
  if (!ok) {
    throw ConfigError(key, message);
  }
}

void validate(const ProjectConfig& c)
{
  const auto& s = c.sim;
  require(s.r_t > 1.0, "R_T", fmt::format("must be > 1, got {}", s.r_t));
  require(s.r_ut > 0.0 && s.r_ut < 1.0, "r_UT", fmt::format("must lie in (0,1), got {}", s.r_ut));
  require(s.rule.q >= 0.0 && s.rule.q <= 1.0, "q", fmt::format("must lie in [0,1], got {}", s.rule.q));
  require(s.initial.investors >= 0.0, "f_I", "must be non-negative");
  require(s.initial.trustworthy >= 0.0, "f_T", "must be non-negative");
  require(s.initial.untrustworthy >= 0.0, "f_U", "must be non-negative");
  require(std::abs(s.initial.investors + s.initial.trustworthy + s.initial.untrustworthy - 1.0) <= 1e-9, "f_U",
          "f_I + f_T + f_U must equal 1");
  require(s.steps >= 1, "steps", fmt::format("must be >= 1, got {}", s.steps));
  require(s.runs >= 1, "runs", fmt::format("must be >= 1, got {}", s.runs));
  require(s.topology.side >= 2, "side", fmt::format("must be >= 2, got {}", s.topology.side));
  require(s.topology.attach >= 1, "attach", "must be >= 1");
  require(s.topology.nodes > s.topology.attach, "nodes", "must exceed attach");
  require(!s.snapshot_every || *s.snapshot_every >= 1, "snapshot_every", "must be >= 1 or null");
  const int pop = s.topology.population();
  for (NodeId n : s.record_nodes) {
    require(n >= 0 && n < pop, "record_nodes", fmt::format("node {} out of range", n));
  }
  require(s.probe_distances.empty() || s.topology.type == TopologyType::Lattice, "probe_distances",
          "requires topology=lattice");
  for (int d : s.probe_distances) {
    require(d >= 1 && d <= 2 * (s.topology.side / 2), "probe_distances",
            fmt::format("distance {} not realizable on side {}", d, s.topology.side));
  }
  const auto& a = c.analysis;
  require(a.window > 0.0 && a.window <= 1.0, "window", "must lie in (0,1]");
  require(a.tail_fraction > 0.0 && a.tail_fraction <= 1.0, "tail_fraction", "must lie in (0,1]");
  require(a.max_lag >= 0, "max_lag", "must be >= 0");
  require(a.f_min >= 0.0 && a.f_min < 0.5, "f_min", "must lie in [0,0.5)");
  const auto& w = c.sweep;
  require(w.grid_step > 0.0 && w.grid_step <= 0.5, "grid_step", "must lie in (0,0.5]");
  for (double r : w.r_ut_values) {
    require(r > 0.0 && r < 1.0, "r_UT_values", fmt::format("{} must lie in (0,1)", r));
  }
  require(!w.rules.empty(), "rules", "must not be empty");
  require(!w.topologies.empty(), "topologies", "must not be empty");
  require(!w.r_ut_values.empty(), "r_UT_values", "must not be empty");
  try {
    (void)initial_condition_grid(w.grid_step);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("grid_step", e.what());
  }
}

} // namespace

SweepSpec ProjectConfig::sweep_spec() const
{
  return {initial_condition_grid(sweep.grid_step), sweep.rules, sweep.topologies, sweep.r_ut_values, analysis.window};
}

ProjectConfig config_from_json(const json& j)
{
  if (!j.is_object()) {
    throw ConfigError("<root>", "config must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    if (!known_keys().contains(key)) {
      throw ConfigError(key, "unknown key");
    }
  }
  ProjectConfig c;
  auto& s = c.sim;
  std::string token;
  if (j.contains("topology")) {
    read(j, "topology", token);
    s.topology.type = parse_topology("topology", token);
  }
  read(j, "side", s.topology.side);
  s.topology.nodes = s.topology.side * s.topology.side;
  read(j, "nodes", s.topology.nodes);
  read(j, "attach", s.topology.attach);
  read(j, "R_T", s.r_t);
  read(j, "r_UT", s.r_ut);
  if (j.contains("rule")) {
    read(j, "rule", token);
    s.rule.rule = parse_rule("rule", token);
  }
  read(j, "q", s.rule.q);
  read(j, "f_I", s.initial.investors);
  read(j, "f_T", s.initial.trustworthy);
  read(j, "f_U", s.initial.untrustworthy);
  read(j, "steps", s.steps);
  read(j, "runs", s.runs);
  read(j, "seed", s.master_seed);
  if (auto it = j.find("snapshot_every"); it != j.end() && !it->is_null()) {
    int every = 0;
    read(j, "snapshot_every", every);
    s.snapshot_every = every;
  }
  read(j, "record_nodes", s.record_nodes);
  read(j, "probe_distances", s.probe_distances);

  auto& a = c.analysis;
  read(j, "window", a.window);
  read(j, "tail_fraction", a.tail_fraction);
  read(j, "max_lag", a.max_lag);
  read(j, "f_min", a.f_min);
  read(j, "box_sides", a.box_sides);
  read(j, "gl_distances", a.gl_distances);

  auto& w = c.sweep;
  read(j, "grid_step", w.grid_step);
  if (j.contains("rules")) {
    std::vector<std::string> tokens;
    read(j, "rules", tokens);
    w.rules.clear();
    for (const auto& t : tokens) {
      w.rules.push_back(parse_rule("rules", t));
    }
  }
  if (j.contains("topologies")) {
    std::vector<std::string> tokens;
    read(j, "topologies", tokens);
    w.topologies.clear();
    for (const auto& t : tokens) {
      w.topologies.push_back(parse_topology("topologies", t));
    }
  }
  read(j, "r_UT_values", w.r_ut_values);

  validate(c);
  return c;
}

json config_to_json(const ProjectConfig& c)
{
  const auto& s = c.sim;
  json j;
  j["topology"] = std::string(to_token(s.topology.type));
  j["side"] = s.topology.side;
  j["nodes"] = s.topology.nodes;
  j["attach"] = s.topology.attach;
  j["R_T"] = s.r_t;
  j["r_UT"] = s.r_ut;
  j["rule"] = std::string(to_token(s.rule.rule));
  j["q"] = s.rule.q;
  j["f_I"] = s.initial.investors;
  j["f_T"] = s.initial.trustworthy;
  j["f_U"] = s.initial.untrustworthy;
  j["steps"] = s.steps;
  j["runs"] = s.runs;
  j["seed"] = s.master_seed;
  j["snapshot_every"] = s.snapshot_every ? json(*s.snapshot_every) : json(nullptr);
  j["record_nodes"] = s.record_nodes;
  j["probe_distances"] = s.probe_distances;
  j["window"] = c.analysis.window;
  j["tail_fraction"] = c.analysis.tail_fraction;
  j["max_lag"] = c.analysis.max_lag;
  j["f_min"] = c.analysis.f_min;
  j["box_sides"] = c.analysis.box_sides;
  j["gl_distances"] = c.analysis.gl_distances;
  j["grid_step"] = c.sweep.grid_step;
  std::vector<std::string> rules;
  for (auto r : c.sweep.rules) {
    rules.emplace_back(to_token(r));
  }
  j["rules"] = rules;
  std::vector<std::string> topologies;
  for (auto t : c.sweep.topologies) {
    topologies.emplace_back(to_token(t));
  }
  j["topologies"] = topologies;
  j["r_UT_values"] = c.sweep.r_ut_values;
  return j;
}

void apply_override(json& j, const std::string& assignment)
{
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError(assignment, "override must have the form key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  json parsed = json::parse(value, nullptr, false);
  j[key] = parsed.is_discarded() ? json(value) : parsed;
}

ProjectConfig parse_config(json j, const std::vector<std::string>& overrides)
{
  if (j.is_null()) {
    j = json::object();
  }
  for (const auto& o : overrides) {
    apply_override(j, o);
  }
  return config_from_json(j);
}

ProjectConfig parse_config(const std::filesystem::path& path, const std::vector<std::string>& overrides)
{
  json j = json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) {
      throw ConfigError("--config", "cannot open " + path.string());
    }
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError("--config", "parse failure in " + path.string() + ": " + e.what());
    }
  }
  return parse_config(std::move(j), overrides);
}

} // namespace trustgame
