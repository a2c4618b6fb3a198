#pragma once

#include <vector>

#include "jmgt/basis.hpp"
#include "jmgt/model.hpp"

namespace jmgt {

/// PureNeumann: data g on x = 0, homogeneous Neumann at x = L.
/// Mixed: data g on x = 0, absorbing condition d_n psi = -beta psi_t at x = L.
enum class BoundaryMode { PureNeumann, Mixed };

/// Galerkin coefficient history on the uniform grid t_m = m dt.
///
/// third[m] holds xi''' recovered from the equation; it is empty for
/// second-order (tau = 0) runs.
struct Trajectory {
  std::vector<double> time;
  std::vector<Vector> xi;
  std::vector<Vector> velocity;
  std::vector<Vector> acceleration;
  std::vector<Vector> third;
  BoundaryMode bc = BoundaryMode::PureNeumann;
  ModelParams params;
  double dt = 0.0;

  std::size_t steps() const { return time.size(); }
  int modes() const { return xi.empty() ? 0 : static_cast<int>(xi.front().size()); }
  bool has_third() const { return !third.empty(); }

  /// xi' at an arbitrary time by linear interpolation between stored steps.
  Vector velocity_at(double t) const;
  /// d/dt xi' on the interval containing t (slope of the interpolant).
  Vector velocity_slope_at(double t) const;
};

}  // namespace jmgt
