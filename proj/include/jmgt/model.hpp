#pragma once

#include <limits>
#include <string>
#include <vector>

namespace jmgt {

/// Physical coefficients of the third-order acoustic model.
///
/// The damping coefficient b = delta + tau * c2 is derived, never stored,
/// so it stays consistent with every field change.
struct ModelParams {
  double c2 = 1.0;     ///< squared sound speed (> 0)
  double delta = 0.1;  ///< sound diffusivity (> 0)
  double tau = 0.0;    ///< relaxation time (>= 0)
  double k = 0.0;      ///< nonlinearity coefficient
  double beta = 0.0;   ///< absorbing-boundary coefficient (>= 0)

  double b() const { return delta + tau * c2; }

  /// Empty when valid, otherwise one message per violated constraint.
  std::vector<std::string> validate() const;

  bool operator==(const ModelParams&) const = default;
};

double derived_b(const ModelParams& params);

/// Boundary data g(t) = A t^p (1 - t/t_end)^p e^{-sigma t} sin(omega t).
///
/// The (1 - t/t_end)^p envelope is present only when window_end is finite;
/// g vanishes identically for t >= window_end. With p >= 5 both ends of the
/// window are C^4 so all derivatives used by the estimates exist in closed form.
struct WindowedSignal {
  double amplitude = 0.0;
  double omega = 0.0;
  int power = 5;
  double decay = 0.0;
  double window_end = std::numeric_limits<double>::infinity();

  bool windowed() const { return window_end < std::numeric_limits<double>::infinity(); }

  std::vector<std::string> validate() const;

  bool operator==(const WindowedSignal&) const = default;
};

inline constexpr int kMaxSignalOrder = 4;

/// Exact order-th time derivative of the signal (order in 0..4).
double signal_eval(const WindowedSignal& sig, double t, int order);

/// Orders m < required_order with a nonzero derivative at t = 0. Empty means compatible.
std::vector<int> validate_compatibility(const WindowedSignal& sig, int required_order);

/// Numerical controls of a simulation run.
struct SolverConfig {
  double dt = 1e-2;
  double final_time = 1.0;
  int n_modes = 8;
  int quad_points = 0;  ///< 0 selects the default (32 per mode)
  double picard_tol = 1e-10;
  int picard_max = 50;
  int eval_grid = 0;  ///< 0 selects the default (16 per mode)

  int steps() const;
  int quadrature_nodes() const;
  int eval_points() const;

  std::vector<std::string> validate() const;

  bool operator==(const SolverConfig&) const = default;
};

}  // namespace jmgt
