#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>

#include "jmgt/basis.hpp"
#include "jmgt/model.hpp"
#include "jmgt/trajectory.hpp"

namespace jmgt {

using SpaceTimeFn = std::function<double(double x, double t)>;

/// Coefficient alpha(x, t) of the second time derivative, with its partials.
struct CoefficientField {
  enum class Provenance { Analytic, Reconstructed };

  SpaceTimeFn alpha;
  SpaceTimeFn alpha_x;
  SpaceTimeFn alpha_t;
  Provenance provenance = Provenance::Analytic;

  // Reconstructed fields also expose alpha = law(psi_t) with psi_t given by
  // modal coefficients, so mass assembly can use the cached mode table.
  std::function<Vector(double t)> velocity_coeffs;
  std::function<double(double psi_t)> law;

  static CoefficientField constant(double value);
  static CoefficientField analytic(SpaceTimeFn alpha, SpaceTimeFn alpha_x, SpaceTimeFn alpha_t);
};

/// How the frozen coefficient is built from the previous iterate's psi_t.
enum class CoefficientLaw {
  Linear,   ///< alpha = 1 - 2k psi_t
  Clamped,  ///< alpha = h(psi_t) = 1 - clamp(2k psi_t, -1, 1)
};

/// alpha reconstructed from the trajectory's xi' (linear in time between steps).
/// The trajectory is shared, so the field remains valid after the caller's copy goes away.
CoefficientField reconstructed_field(std::shared_ptr<const Trajectory> traj,
                                     const SpectralBasis& basis, double k, CoefficientLaw law);

/// Source term f(x, t). An empty `value` means f == 0.
struct SourceField {
  SpaceTimeFn value;
  SpaceTimeFn value_t;  ///< optional; central differences are used when absent

  bool is_zero() const { return !value; }
  double operator()(double x, double t) const { return value ? value(x, t) : 0.0; }
  double time_derivative(double x, double t) const;

  static SourceField zero() { return {}; }
};

Matrix assemble_stiffness(const SpectralBasis& basis, const QuadratureRule& quad);
Matrix assemble_mass(const SpectralBasis& basis, const QuadratureRule& quad,
                     const CoefficientField& field, double t);
/// B_ij = w_i(a) w_j(a) at the chosen end.
Matrix assemble_boundary(const SpectralBasis& basis, End end);

/// F_i(t) = (f(t), w_i) + (c2 g(t) + b g_t(t)) w_i(0). The absorbing end enters
/// through the boundary matrix, so the load is the same in both modes.
Vector assemble_load(const SpectralBasis& basis, const QuadratureRule& quad,
                     const SourceField& f, const WindowedSignal& g, const ModelParams& params,
                     double t, BoundaryMode bc);

/// Samples M(t) on demand, caching the matrices per time value for one run.
class TimeVaryingMass {
 public:
  TimeVaryingMass(const SpectralBasis& basis, const QuadratureRule& quad, CoefficientField field);

  const Matrix& at(double t);
  const CoefficientField& field() const { return field_; }

 private:
  const SpectralBasis& basis_;
  const QuadratureRule& quad_;
  CoefficientField field_;
  Matrix modes_;
  std::map<double, Matrix> cache_;
};

/// Closed-form Neumann lift v = N h: -v'' + v = 0, -v'(0) = h, v'(L) = 0.
struct HarmonicExtension {
  double length = 1.0;
  double h = 0.0;

  double value(double x, int deriv = 0) const;
  /// Profile for unit boundary data, cosh(L - x) / sinh(L).
  static double profile(double length, double x);
  Vector coefficients(const SpectralBasis& basis, const QuadratureRule& quad) const;
};

HarmonicExtension harmonic_extension(double length, double h);

/// Forcing of the homogeneous-Neumann problem for psi - N g:
/// f - tau N g_ttt - alpha N g_tt + c2 N g + b N g_t  (Delta N g = N g).
std::function<double(double)> lift_forcing(const WindowedSignal& g, const CoefficientField& field,
                                           const SourceField& f, const ModelParams& params,
                                           double length, double t);

}  // namespace jmgt
