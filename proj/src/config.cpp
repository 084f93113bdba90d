#include "rabi/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace rabi {

using nlohmann::json;

std::string_view to_string(ExperimentKind k) noexcept {
  switch (k) {
    case ExperimentKind::Fig2Distinguishable: return "fig2_distinguishable";
    case ExperimentKind::Fig3Indistinguishable: return "fig3_indistinguishable";
    case ExperimentKind::Fig5GammaRatio: return "fig5_gamma_ratio";
    case ExperimentKind::MasterEqBaseline: return "master_eq_baseline";
    case ExperimentKind::OracleCrossCheck: return "oracle_cross_check";
  }
  return "?";
}

std::string_view to_string(OutputFormat f) noexcept {
  switch (f) {
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Json: return "json";
    case OutputFormat::Svg: return "svg";
  }
  return "?";
}

std::string_view to_string(LadderBaseline b) noexcept {
  return b == LadderBaseline::Nested ? "nested" : "master_equation";
}

std::optional<OutputFormat> output_format_from_string(std::string_view s) noexcept {
  for (auto f : {OutputFormat::Csv, OutputFormat::Json, OutputFormat::Svg}) {
    if (to_string(f) == s) return f;
  }
  return std::nullopt;
}

namespace {

std::string describe(const std::vector<ConfigIssue>& issues) {
  std::ostringstream os;
  os << "invalid configuration";
  for (const auto& i : issues) {
    os << "\n  " << (i.field.empty() ? "<document>" : i.field);
    if (i.line > 0) os << " (line " << i.line << ")";
    os << ": " << i.message;
  }
  return os.str();
}

std::optional<ExperimentKind> experiment_from_string(std::string_view s) {
  for (auto k : {ExperimentKind::Fig2Distinguishable, ExperimentKind::Fig3Indistinguishable,
                 ExperimentKind::Fig5GammaRatio, ExperimentKind::MasterEqBaseline,
                 ExperimentKind::OracleCrossCheck}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

struct GridDefault {
  double omega_t_max;
  std::size_t n_points;
};

GridDefault grid_default(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Fig2Distinguishable: return {60.0, 400};
    case ExperimentKind::Fig3Indistinguishable: return {50.0, 300};
    case ExperimentKind::MasterEqBaseline: return {40.0, 400};
    case ExperimentKind::OracleCrossCheck: return {30.0, 200};
    case ExperimentKind::Fig5GammaRatio: return {0.0, 0};
  }
  return {0.0, 0};
}

// Maps dotted key paths back to lines of the source text by scanning for
// each quoted key in turn, starting after its parent.
class LineLocator {
 public:
  explicit LineLocator(std::string_view text) : text_(text) {}

  int line_of(const std::vector<std::string>& path) const {
    std::size_t pos = 0;
    for (const auto& key : path) {
      const std::string quoted = "\"" + key + "\"";
      std::size_t found = pos;
      while (true) {
        found = text_.find(quoted, found);
        if (found == std::string_view::npos) return 0;
        std::size_t after = found + quoted.size();
        while (after < text_.size() && std::isspace(static_cast<unsigned char>(text_[after]))) {
          ++after;
        }
        if (after < text_.size() && text_[after] == ':') break;
        found += quoted.size();
      }
      pos = found + quoted.size();
    }
    return line_at(pos == 0 ? 0 : pos - 1);
  }

  int line_at(std::size_t byte) const {
    byte = std::min(byte, text_.size());
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + byte, '\n'));
  }

 private:
  std::string_view text_;
};

class Reader {
 public:
  Reader(const LineLocator& lines, std::vector<ConfigIssue>& issues)
      : lines_(lines), issues_(issues) {}

  void fail(const std::vector<std::string>& path, std::string message) {
    std::string dotted;
    for (const auto& p : path) dotted += (dotted.empty() ? "" : ".") + p;
    issues_.push_back({dotted, lines_.line_of(path), std::move(message)});
  }

  // Returns the object at obj[key] (or nullptr), rejecting unknown members.
  const json* object(const json& parent, std::vector<std::string> path,
                     std::initializer_list<std::string_view> allowed) {
    const json* node = &parent;
    if (!path.empty()) {
      auto it = parent.find(path.back());
      if (it == parent.end()) return nullptr;
      node = &*it;
    }
    if (!node->is_object()) {
      fail(path, "expected an object");
      return nullptr;
    }
    for (auto it = node->begin(); it != node->end(); ++it) {
      if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
        auto sub = path;
        sub.push_back(it.key());
        fail(sub, "unknown key");
      }
    }
    return node;
  }

  bool number(const json* obj, std::vector<std::string> path, double& out) {
    if (!obj) return false;
    auto it = obj->find(path.back());
    if (it == obj->end()) return false;
    if (!it->is_number()) {
      fail(path, "expected a number");
      return false;
    }
    out = it->get<double>();
    return true;
  }

  template <class Int>
  bool integer(const json* obj, std::vector<std::string> path, Int& out) {
    if (!obj) return false;
    auto it = obj->find(path.back());
    if (it == obj->end()) return false;
    if (!it->is_number_integer()) {
      fail(path, "expected an integer");
      return false;
    }
    if constexpr (std::is_unsigned_v<Int>) {
      if (it->is_number_unsigned()) {
        out = static_cast<Int>(it->get<std::uint64_t>());
        return true;
      }
      fail(path, "expected a non-negative integer");
      return false;
    } else {
      out = static_cast<Int>(it->get<std::int64_t>());
      return true;
    }
  }

  bool string(const json* obj, std::vector<std::string> path, std::string& out) {
    if (!obj) return false;
    auto it = obj->find(path.back());
    if (it == obj->end()) return false;
    if (!it->is_string()) {
      fail(path, "expected a string");
      return false;
    }
    out = it->get<std::string>();
    return true;
  }

  bool string_list(const json* obj, std::vector<std::string> path, std::vector<std::string>& out) {
    if (!obj) return false;
    auto it = obj->find(path.back());
    if (it == obj->end()) return false;
    if (!it->is_array() || !std::all_of(it->begin(), it->end(),
                                        [](const json& v) { return v.is_string(); })) {
      fail(path, "expected a list of strings");
      return false;
    }
    out = it->get<std::vector<std::string>>();
    return true;
  }

  bool int_list(const json* obj, std::vector<std::string> path, std::vector<int>& out) {
    if (!obj) return false;
    auto it = obj->find(path.back());
    if (it == obj->end()) return false;
    if (!it->is_array() || !std::all_of(it->begin(), it->end(),
                                        [](const json& v) { return v.is_number_integer(); })) {
      fail(path, "expected a list of integers");
      return false;
    }
    out = it->get<std::vector<int>>();
    return true;
  }

 private:
  const LineLocator& lines_;
  std::vector<ConfigIssue>& issues_;
};

void check_invariants(const ExperimentConfig& cfg, Reader& r) {
  const auto& s = cfg.system;
  if (!(s.omega > 0.0) || !std::isfinite(s.omega)) {
    r.fail({"system", "omega"}, "must be positive and finite");
  }
  const auto& d = cfg.distinguishable;
  if (!(d.dt > 0.0) || !std::isfinite(d.dt)) r.fail({"distinguishable", "dt"}, "must be > 0");
  if (!(d.eta >= 0.0 && d.eta <= 1.0)) r.fail({"distinguishable", "eta"}, "must lie in [0, 1]");
  const auto& ind = cfg.indistinguishable;
  if (!(ind.dt > 0.0) || !std::isfinite(ind.dt)) {
    r.fail({"indistinguishable", "dt"}, "must be > 0");
  }
  if (!(ind.beta > 0.0 && ind.beta <= 1.0)) {
    r.fail({"indistinguishable", "beta"}, "must lie in (0, 1]");
  }
  if (ind.max_events < 0) r.fail({"indistinguishable", "max_events"}, "must be >= 0");
  const auto& me = cfg.master_equation;
  if (!(me.gamma_se >= 0.0) || !std::isfinite(me.gamma_se)) {
    r.fail({"master_equation", "gamma_se"}, "must be >= 0");
  } else if (cfg.experiment == ExperimentKind::MasterEqBaseline &&
             me.gamma_se >= 8.0 * s.omega) {
    r.fail({"master_equation", "gamma_se"}, "overdamped regime (gamma_se >= 8 omega) unsupported");
  }

  const bool single_curve = cfg.experiment != ExperimentKind::Fig5GammaRatio;
  if (single_curve) {
    if (!(cfg.grid.t_max > 0.0) || !std::isfinite(cfg.grid.t_max)) {
      r.fail({"grid", "t_max"}, "must be positive");
    }
    const bool fits = cfg.experiment != ExperimentKind::OracleCrossCheck;
    if (fits && cfg.grid.n_points < 10) {
      r.fail({"grid", "n_points"}, "fit needs at least 10 points");
    } else if (cfg.grid.n_points < 1) {
      r.fail({"grid", "n_points"}, "must be >= 1");
    }
    if (fits && s.omega > 0.0 && cfg.grid.t_max < 2.0 * std::numbers::pi / s.omega) {
      r.fail({"grid", "t_max"}, "fit window must cover two oscillation periods (2 pi / omega)");
    }
  }

  const auto& l = cfg.ladder;
  if (l.n_max < 0) r.fail({"ladder", "n_max"}, "must be >= 0");
  if (!(l.lamb_dicke > 0.0)) r.fail({"ladder", "lamb_dicke"}, "must be > 0");
  if (!(l.omega0_dt > 0.0)) r.fail({"ladder", "omega0_dt"}, "must be > 0");
  if (!(l.window >= 2.0 * std::numbers::pi)) {
    r.fail({"ladder", "window"}, "must cover two oscillation periods (>= 2 pi)");
  }
  if (l.n_points < 10) r.fail({"ladder", "n_points"}, "fit needs at least 10 points");
  if (cfg.experiment == ExperimentKind::Fig5GammaRatio &&
      l.baseline == LadderBaseline::MasterEquation && s.omega > 0.0 && l.lamb_dicke > 0.0) {
    // Smallest ladder frequency bounds the underdamped requirement.
    try {
      const auto ladder = rabi_frequency_ladder(s.omega, std::max(l.n_max, 0), l.lamb_dicke);
      for (const auto& e : ladder.entries) {
        if (!(e.omega_n > 0.0)) {
          r.fail({"ladder", "n_max"}, "ladder frequency non-positive at n=" + std::to_string(e.n));
          break;
        }
        if (me.gamma_se >= 8.0 * e.omega_n) {
          r.fail({"master_equation", "gamma_se"},
                 "overdamped at ladder level n=" + std::to_string(e.n));
          break;
        }
      }
    } catch (const std::exception& e) {
      r.fail({"ladder"}, e.what());
    }
  }

  const auto& o = cfg.oracle;
  if (o.n_systems < 1) r.fail({"oracle", "n_systems"}, "must be >= 1");
  if (o.chain_samples < 2) r.fail({"oracle", "chain_samples"}, "must be >= 2");
  if (std::any_of(o.chain_n.begin(), o.chain_n.end(), [](int n) { return n < 0; })) {
    r.fail({"oracle", "chain_n"}, "entries must be >= 0");
  }
  if (!(o.z_limit > 0.0)) r.fail({"oracle", "z_limit"}, "must be > 0");

  if (cfg.output.dir.empty()) r.fail({"output", "dir"}, "must not be empty");
  if (cfg.output.formats.empty()) r.fail({"output", "formats"}, "must list at least one format");
}

void resolve_grid(ExperimentConfig& cfg, bool have_t_max, bool have_points) {
  const auto def = grid_default(cfg.experiment);
  const double omega = cfg.system.omega > 0.0 ? cfg.system.omega : 1.0;
  if (!have_t_max) cfg.grid.t_max = def.omega_t_max / omega;
  if (!have_points) cfg.grid.n_points = def.n_points;
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error(describe(issues)), issues_(std::move(issues)) {}

std::string ExperimentConfig::file_prefix() const {
  return output.prefix.empty() ? std::string(to_string(experiment)) : output.prefix;
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig cfg;
  cfg.experiment = kind;
  resolve_grid(cfg, false, false);
  return cfg;
}

ExperimentConfig parse_config(std::string_view text) {
  std::vector<ConfigIssue> issues;
  const LineLocator lines(text);
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    issues.push_back({"", lines.line_at(e.byte == 0 ? 0 : e.byte - 1), e.what()});
    throw ConfigError(std::move(issues));
  }
  Reader r(lines, issues);
  ExperimentConfig cfg;

  const json* root = r.object(doc, {},
                              {"experiment", "system", "distinguishable", "indistinguishable",
                               "master_equation", "grid", "fit", "ladder", "oracle", "seed",
                               "output"});
  if (!root) throw ConfigError(std::move(issues));

  std::string name;
  if (!r.string(root, {"experiment"}, name)) {
    if (!root->contains("experiment")) r.fail({"experiment"}, "required key missing");
  } else if (auto kind = experiment_from_string(name)) {
    cfg.experiment = *kind;
  } else {
    r.fail({"experiment"}, "unknown experiment '" + name + "'");
  }

  if (const json* o = r.object(*root, {"system"}, {"omega", "initial_state"})) {
    r.number(o, {"system", "omega"}, cfg.system.omega);
    std::string state;
    if (r.string(o, {"system", "initial_state"}, state)) {
      if (state == "excited") {
        cfg.system.initial_state = Level::Excited;
      } else if (state == "ground") {
        cfg.system.initial_state = Level::Ground;
      } else {
        r.fail({"system", "initial_state"}, "must be \"excited\" or \"ground\"");
      }
    }
  }
  if (const json* o = r.object(*root, {"distinguishable"}, {"dt", "eta"})) {
    r.number(o, {"distinguishable", "dt"}, cfg.distinguishable.dt);
    r.number(o, {"distinguishable", "eta"}, cfg.distinguishable.eta);
  }
  if (const json* o = r.object(*root, {"indistinguishable"}, {"dt", "beta", "max_events"})) {
    r.number(o, {"indistinguishable", "dt"}, cfg.indistinguishable.dt);
    r.number(o, {"indistinguishable", "beta"}, cfg.indistinguishable.beta);
    r.integer(o, {"indistinguishable", "max_events"}, cfg.indistinguishable.max_events);
  }
  if (const json* o = r.object(*root, {"master_equation"}, {"gamma_se"})) {
    r.number(o, {"master_equation", "gamma_se"}, cfg.master_equation.gamma_se);
  }
  bool have_t_max = false;
  bool have_points = false;
  if (const json* o = r.object(*root, {"grid"}, {"t_max", "n_points"})) {
    have_t_max = r.number(o, {"grid", "t_max"}, cfg.grid.t_max);
    have_points = r.integer(o, {"grid", "n_points"}, cfg.grid.n_points);
  }
  if (const json* o = r.object(*root, {"fit"}, {"free"})) {
    std::vector<std::string> names;
    if (r.string_list(o, {"fit", "free"}, names)) {
      cfg.fit.free.clear();
      for (const auto& n : names) {
        try {
          cfg.fit.free.insert(fit_param_from_string(n));
        } catch (const std::invalid_argument&) {
          r.fail({"fit", "free"}, "unknown fit parameter '" + n + "'");
        }
      }
    }
  }
  if (const json* o = r.object(*root, {"ladder"},
                               {"n_max", "lamb_dicke", "omega0_dt", "window", "n_points",
                                "baseline"})) {
    r.integer(o, {"ladder", "n_max"}, cfg.ladder.n_max);
    r.number(o, {"ladder", "lamb_dicke"}, cfg.ladder.lamb_dicke);
    r.number(o, {"ladder", "omega0_dt"}, cfg.ladder.omega0_dt);
    r.number(o, {"ladder", "window"}, cfg.ladder.window);
    r.integer(o, {"ladder", "n_points"}, cfg.ladder.n_points);
    std::string baseline;
    if (r.string(o, {"ladder", "baseline"}, baseline)) {
      if (baseline == "nested") {
        cfg.ladder.baseline = LadderBaseline::Nested;
      } else if (baseline == "master_equation") {
        cfg.ladder.baseline = LadderBaseline::MasterEquation;
      } else {
        r.fail({"ladder", "baseline"}, "must be \"nested\" or \"master_equation\"");
      }
    }
  }
  if (const json* o = r.object(*root, {"oracle"},
                               {"n_systems", "chain_n", "chain_samples", "z_limit"})) {
    r.integer(o, {"oracle", "n_systems"}, cfg.oracle.n_systems);
    r.int_list(o, {"oracle", "chain_n"}, cfg.oracle.chain_n);
    r.integer(o, {"oracle", "chain_samples"}, cfg.oracle.chain_samples);
    r.number(o, {"oracle", "z_limit"}, cfg.oracle.z_limit);
  }
  r.integer(root, {"seed"}, cfg.seed);
  if (const json* o = r.object(*root, {"output"}, {"dir", "prefix", "formats"})) {
    r.string(o, {"output", "dir"}, cfg.output.dir);
    r.string(o, {"output", "prefix"}, cfg.output.prefix);
    std::vector<std::string> names;
    if (r.string_list(o, {"output", "formats"}, names)) {
      cfg.output.formats.clear();
      for (const auto& n : names) {
        if (auto f = output_format_from_string(n)) {
          if (std::find(cfg.output.formats.begin(), cfg.output.formats.end(), *f) ==
              cfg.output.formats.end()) {
            cfg.output.formats.push_back(*f);
          }
        } else {
          r.fail({"output", "formats"}, "unknown format '" + n + "'");
        }
      }
    }
  }

  resolve_grid(cfg, have_t_max, have_points);
  check_invariants(cfg, r);
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate_config(const ExperimentConfig& cfg) {
  std::vector<ConfigIssue> issues;
  const LineLocator none("");
  Reader r(none, issues);
  check_invariants(cfg, r);
  if (!issues.empty()) throw ConfigError(std::move(issues));
}

}  // namespace rabi
