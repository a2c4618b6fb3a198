#pragma once

#include <string>
#include <vector>

#include "jmgt/error.hpp"
#include "jmgt/model.hpp"
#include "jmgt/nonlinear.hpp"
#include "jmgt/trajectory.hpp"

namespace jmgt {

/// Interior source selection; `constant` is f(x, t) = source_amplitude.
enum class SourceKind { None, Constant };

struct ExperimentConfig {
  ModelParams model;
  double length = 3.141592653589793;
  WindowedSignal signal;
  SourceKind source = SourceKind::None;
  double source_amplitude = 0.0;
  SolverConfig solver;
  NonlinearVariant variant = NonlinearVariant::FullJMGT;
  BoundaryMode bc = BoundaryMode::PureNeumann;
  std::vector<double> tau_sweep;
  bool parallel = true;
  std::string output_dir = "./out";

  /// Non-fatal findings (duplicate keys); not part of equality.
  std::vector<std::string> warnings;

  bool operator==(const ExperimentConfig& other) const;
};

/// Raised by the parser with every problem found, each prefixed by its line.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const noexcept { return errors_; }

 private:
  std::vector<std::string> errors_;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config(const std::string& path);
std::string write_config(const ExperimentConfig& config);

}  // namespace jmgt
