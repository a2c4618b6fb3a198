#include "jmgt/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "jmgt/csv.hpp"

namespace jmgt {

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
  return model == o.model && length == o.length && signal == o.signal && source == o.source &&
         source_amplitude == o.source_amplitude && solver == o.solver && variant == o.variant &&
         bc == o.bc && tau_sweep == o.tau_sweep && parallel == o.parallel &&
         output_dir == o.output_dir;
}

namespace {

std::string join_errors(const std::vector<std::string>& errors) {
  std::string msg = "configuration errors:";
  for (const auto& e : errors) msg += "\n  " + e;
  return msg;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Entry {
  std::string value;
  int line = 0;
};

enum class Kind { Real, Integer, Boolean, Text, RealList };

struct KeySpec {
  const char* section;
  const char* key;
  Kind kind;
  bool required;
};

constexpr KeySpec kKeys[] = {
    {"model", "c2", Kind::Real, true},
    {"model", "delta", Kind::Real, true},
    {"model", "tau", Kind::Real, true},
    {"model", "k", Kind::Real, true},
    {"model", "beta", Kind::Real, false},
    {"model", "length", Kind::Real, false},
    {"signal", "amplitude", Kind::Real, true},
    {"signal", "omega", Kind::Real, true},
    {"signal", "power", Kind::Integer, true},
    {"signal", "decay", Kind::Real, false},
    {"signal", "window_end", Kind::Real, false},
    {"signal", "source", Kind::Text, false},
    {"signal", "source_amplitude", Kind::Real, false},
    {"discretization", "dt", Kind::Real, true},
    {"discretization", "T", Kind::Real, true},
    {"discretization", "n_modes", Kind::Integer, true},
    {"discretization", "quad_points", Kind::Integer, false},
    {"discretization", "picard_tol", Kind::Real, false},
    {"discretization", "picard_max", Kind::Integer, false},
    {"discretization", "eval_grid", Kind::Integer, false},
    {"experiment", "variant", Kind::Text, false},
    {"experiment", "bc", Kind::Text, false},
    {"experiment", "tau_sweep", Kind::RealList, false},
    {"experiment", "parallel", Kind::Boolean, false},
    {"experiment", "output", Kind::Text, false},
};

const KeySpec* find_spec(const std::string& section, const std::string& key) {
  for (const auto& spec : kKeys) {
    if (section == spec.section && key == spec.key) return &spec;
  }
  return nullptr;
}

bool parse_real(const std::string& text, double& out) {
  if (text.empty()) return false;
  errno = 0;
  char* end = nullptr;
  out = std::strtod(text.c_str(), &end);
  return errno == 0 && end == text.c_str() + text.size();
}

bool parse_integer(const std::string& text, int& out) {
  if (text.empty()) return false;
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(text.c_str(), &end, 10);
  if (errno != 0 || end != text.c_str() + text.size()) return false;
  out = static_cast<int>(v);
  return true;
}

class Parser {
 public:
  explicit Parser(const std::string& text) { tokenize(text); }

  ExperimentConfig build() {
    ExperimentConfig cfg;
    for (const auto& spec : kKeys) {
      const std::string full = std::string(spec.section) + "." + spec.key;
      if (spec.required && entries_.find(full) == entries_.end()) {
        errors_.push_back("missing required key '" + full + "'");
      }
    }

    real("model.c2", cfg.model.c2, [](double v) { return v > 0.0; }, "must be > 0");
    real("model.delta", cfg.model.delta, [](double v) { return v > 0.0; }, "must be > 0");
    real("model.tau", cfg.model.tau, [](double v) { return v >= 0.0; }, "must be >= 0");
    real("model.k", cfg.model.k, [](double v) { return std::isfinite(v); }, "must be finite");
    real("model.beta", cfg.model.beta, [](double v) { return v >= 0.0; }, "must be >= 0");
    real("model.length", cfg.length, [](double v) { return v > 0.0; }, "must be > 0");

    real("signal.amplitude", cfg.signal.amplitude, [](double v) { return std::isfinite(v); }, "must be finite");
    real("signal.omega", cfg.signal.omega, [](double v) { return std::isfinite(v); }, "must be finite");
    integer("signal.power", cfg.signal.power, [](int v) { return v >= 5; }, "must be >= 5");
    real("signal.decay", cfg.signal.decay, [](double v) { return v >= 0.0; }, "must be >= 0");
    real("signal.window_end", cfg.signal.window_end, [](double v) { return v > 0.0; }, "must be > 0");
    text("signal.source", [&](const std::string& v, int line) {
      if (v == "none") cfg.source = SourceKind::None;
      else if (v == "constant") cfg.source = SourceKind::Constant;
      else error(line, "signal.source", "must be one of none, constant");
    });
    real("signal.source_amplitude", cfg.source_amplitude, [](double v) { return std::isfinite(v); }, "must be finite");

    real("discretization.dt", cfg.solver.dt, [](double v) { return v > 0.0; }, "must be > 0");
    real("discretization.T", cfg.solver.final_time, [](double v) { return v > 0.0; }, "must be > 0");
    integer("discretization.n_modes", cfg.solver.n_modes, [](int v) { return v >= 1; }, "must be >= 1");
    integer("discretization.quad_points", cfg.solver.quad_points, [](int v) { return v >= 0; }, "must be >= 0");
    real("discretization.picard_tol", cfg.solver.picard_tol, [](double v) { return v > 0.0; }, "must be > 0");
    integer("discretization.picard_max", cfg.solver.picard_max, [](int v) { return v >= 1; }, "must be >= 1");
    integer("discretization.eval_grid", cfg.solver.eval_grid, [](int v) { return v >= 0; }, "must be >= 0");

    text("experiment.variant", [&](const std::string& v, int line) {
      if (v == "full") cfg.variant = NonlinearVariant::FullJMGT;
      else if (v == "relaxed") cfg.variant = NonlinearVariant::RelaxedJMGT;
      else if (v == "westervelt") cfg.variant = NonlinearVariant::Westervelt;
      else error(line, "experiment.variant", "must be one of full, relaxed, westervelt");
    });
    text("experiment.bc", [&](const std::string& v, int line) {
      if (v == "neumann") cfg.bc = BoundaryMode::PureNeumann;
      else if (v == "mixed") cfg.bc = BoundaryMode::Mixed;
      else error(line, "experiment.bc", "must be one of neumann, mixed");
    });
    text("experiment.output", [&](const std::string& v, int) { cfg.output_dir = v; });
    if (auto it = entries_.find("experiment.parallel"); it != entries_.end()) {
      if (it->second.value == "true") cfg.parallel = true;
      else if (it->second.value == "false") cfg.parallel = false;
      else error(it->second.line, "experiment.parallel", "expected true or false");
    }
    if (auto it = entries_.find("experiment.tau_sweep"); it != entries_.end()) {
      std::stringstream ss(it->second.value);
      std::string item;
      while (std::getline(ss, item, ',')) {
        double v = 0.0;
        if (!parse_real(trim(item), v)) {
          error(it->second.line, "experiment.tau_sweep", "expected a comma-separated list of reals");
          break;
        }
        cfg.tau_sweep.push_back(v);
      }
      for (std::size_t i = 0; i < cfg.tau_sweep.size(); ++i) {
        if (!(cfg.tau_sweep[i] > 0.0)) {
          error(it->second.line, "experiment.tau_sweep", "entries must be > 0");
          break;
        }
        if (i > 0 && !(cfg.tau_sweep[i] < cfg.tau_sweep[i - 1])) {
          error(it->second.line, "experiment.tau_sweep", "entries must be strictly decreasing");
          break;
        }
      }
    }

    if (entries_.count("discretization.dt") && entries_.count("discretization.T") &&
        !(cfg.solver.dt < cfg.solver.final_time)) {
      error(entries_["discretization.dt"].line, "discretization.dt", "must be < T");
    }
    if (cfg.solver.quad_points != 0 && cfg.solver.quad_points < 4 * cfg.solver.n_modes) {
      error(entries_["discretization.quad_points"].line, "discretization.quad_points",
            "must be >= 4 * n_modes");
    }

    if (!errors_.empty()) throw ConfigError(errors_);
    cfg.warnings = warnings_;
    return cfg;
  }

 private:
  void tokenize(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
      ++line;
      if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      const std::string s = trim(raw);
      if (s.empty()) continue;
      if (s.front() == '[') {
        if (s.back() != ']') {
          errors_.push_back("line " + std::to_string(line) + ": malformed section header");
          continue;
        }
        section = trim(s.substr(1, s.size() - 2));
        if (section != "model" && section != "signal" && section != "discretization" &&
            section != "experiment") {
          errors_.push_back("line " + std::to_string(line) + ": unknown section '" + section + "'");
        }
        continue;
      }
      const auto eq = s.find('=');
      if (eq == std::string::npos) {
        errors_.push_back("line " + std::to_string(line) + ": expected 'key = value'");
        continue;
      }
      const std::string key = trim(s.substr(0, eq));
      const std::string value = trim(s.substr(eq + 1));
      if (section.empty()) {
        errors_.push_back("line " + std::to_string(line) + ": key '" + key + "' outside any section");
        continue;
      }
      if (!find_spec(section, key)) {
        errors_.push_back("line " + std::to_string(line) + ": unknown key '" + section + "." + key + "'");
        continue;
      }
      const std::string full = section + "." + key;
      if (auto it = entries_.find(full); it != entries_.end()) {
        warnings_.push_back("line " + std::to_string(line) + ": duplicate key '" + full +
                            "' overrides line " + std::to_string(it->second.line));
      }
      entries_[full] = Entry{value, line};
    }
  }

  void error(int line, const std::string& key, const std::string& what) {
    errors_.push_back("line " + std::to_string(line) + ": " + key + " " + what);
  }

  void real(const std::string& key, double& out, const std::function<bool(double)>& ok,
            const char* constraint) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return;
    double v = 0.0;
    if (!parse_real(it->second.value, v)) {
      error(it->second.line, key, "expected a real number, got '" + it->second.value + "'");
      return;
    }
    if (!ok(v)) {
      error(it->second.line, key, constraint);
      return;
    }
    out = v;
  }

  void integer(const std::string& key, int& out, const std::function<bool(int)>& ok,
               const char* constraint) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return;
    int v = 0;
    if (!parse_integer(it->second.value, v)) {
      error(it->second.line, key, "expected an integer, got '" + it->second.value + "'");
      return;
    }
    if (!ok(v)) {
      error(it->second.line, key, constraint);
      return;
    }
    out = v;
  }

  void text(const std::string& key, const std::function<void(const std::string&, int)>& apply) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return;
    apply(it->second.value, it->second.line);
  }

  std::map<std::string, Entry> entries_;
  std::vector<std::string> errors_;
  std::vector<std::string> warnings_;
};

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : Error(join_errors(errors)), errors_(std::move(errors)) {}

ExperimentConfig parse_config_text(const std::string& text) { return Parser(text).build(); }

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read configuration file '" + path + "'"});
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::string write_config(const ExperimentConfig& c) {
  std::ostringstream out;
  auto real = [&](const char* key, double v) { out << key << " = " << format_real(v) << "\n"; };
  out << "[model]\n";
  real("c2", c.model.c2);
  real("delta", c.model.delta);
  real("tau", c.model.tau);
  real("k", c.model.k);
  real("beta", c.model.beta);
  real("length", c.length);
  out << "\n[signal]\n";
  real("amplitude", c.signal.amplitude);
  real("omega", c.signal.omega);
  out << "power = " << c.signal.power << "\n";
  real("decay", c.signal.decay);
  if (c.signal.windowed()) real("window_end", c.signal.window_end);
  out << "source = " << (c.source == SourceKind::Constant ? "constant" : "none") << "\n";
  real("source_amplitude", c.source_amplitude);
  out << "\n[discretization]\n";
  real("dt", c.solver.dt);
  real("T", c.solver.final_time);
  out << "n_modes = " << c.solver.n_modes << "\n";
  out << "quad_points = " << c.solver.quad_points << "\n";
  real("picard_tol", c.solver.picard_tol);
  out << "picard_max = " << c.solver.picard_max << "\n";
  out << "eval_grid = " << c.solver.eval_grid << "\n";
  out << "\n[experiment]\n";
  const char* variant = c.variant == NonlinearVariant::FullJMGT      ? "full"
                        : c.variant == NonlinearVariant::RelaxedJMGT ? "relaxed"
                                                                     : "westervelt";
  out << "variant = " << variant << "\n";
  out << "bc = " << (c.bc == BoundaryMode::Mixed ? "mixed" : "neumann") << "\n";
  if (!c.tau_sweep.empty()) {
    out << "tau_sweep = ";
    for (std::size_t i = 0; i < c.tau_sweep.size(); ++i) {
      out << (i ? ", " : "") << format_real(c.tau_sweep[i]);
    }
    out << "\n";
  }
  out << "parallel = " << (c.parallel ? "true" : "false") << "\n";
  out << "output = " << c.output_dir << "\n";
  return out.str();
}

}  // namespace jmgt
