#pragma once

#include <map>
#include <string>
#include <vector>

#include "jmgt/assembly.hpp"
#include "jmgt/integrate.hpp"
#include "jmgt/trajectory.hpp"

namespace jmgt {

/// Energy functionals of the lower-order (H1-level) estimates. Accumulators
/// are cumulative trapezoid integrals on the trajectory grid.
struct LowerEnergy {
  std::vector<double> time;
  std::vector<double> e_low;          ///< tau |psi_tt|^2_L2 + |psi_t|^2_H1
  std::vector<double> accel_sq;       ///< |psi_tt|^2_L2
  std::vector<double> velocity_h1_sq; ///< |psi_t|^2_H1
  std::vector<double> a_dual;         ///< tau^2 int |psi_ttt|^2_(H1)*
  std::vector<double> a_tt;           ///< int |psi_tt|^2_L2
};

/// Energy functionals of the higher-order (H2-level) estimate.
struct HigherEnergy {
  std::vector<double> time;
  std::vector<double> e_high;           ///< tau |grad psi_tt|^2_L2 + |Delta psi_t|^2_L2
  std::vector<double> accel_h1_sq;      ///< |psi_tt|^2_H1
  std::vector<double> velocity_lap_sq;  ///< |Delta psi_t|^2_L2
  std::vector<double> a_tt_h1;          ///< int |psi_tt|^2_H1
  std::vector<double> a_ttt_l2;         ///< tau^2 int |psi_ttt|^2_L2
};

/// Absorbing-boundary flux terms at x = L. `present` is false for PureNeumann runs.
struct BoundaryFlux {
  bool present = false;
  std::vector<double> time;
  std::vector<double> trace_tt_sq;  ///< |tr psi_tt|^2
  std::vector<double> trace_t_sq;   ///< |tr psi_t|^2
  std::vector<double> dissipated;   ///< c2 beta int |tr psi_tt|^2
  std::vector<double> trace_peak;   ///< running max of b beta |tr psi_t|^2
};

struct EnergyRecord {
  double tau = 0.0;
  LowerEnergy lower;
  HigherEnergy higher;
  BoundaryFlux flux;
};

LowerEnergy energy_lower(const Trajectory& traj, const SpectralBasis& basis);
HigherEnergy energy_higher(const Trajectory& traj, const SpectralBasis& basis);
BoundaryFlux boundary_flux(const Trajectory& traj, const SpectralBasis& basis);
EnergyRecord energy_record(const Trajectory& traj, const SpectralBasis& basis);

/// Cumulative trapezoid integral of a sampled series.
std::vector<double> cumulative_trapezoid(const std::vector<double>& values, double dt);

/// Norms of the data. Boundary norms are point values (the boundary is a point).
struct DataNorms {
  int max_order = 2;
  std::vector<double> g_sup;  ///< sup_t |d^m g / dt^m|, m = 0..max_order
  std::vector<double> g_l2;   ///< L2(0,T) norm of d^m g / dt^m
  double f_l2l2 = 0.0;
  double f_h1l2 = 0.0;        ///< sqrt(||f||^2_{L2L2} + ||f_t||^2_{L2L2})
};

DataNorms data_norms(const WindowedSignal& g, const SourceField& f, const QuadratureRule& quad,
                     double final_time, int max_order);

enum class AuditMode { TauDependent, TauUniform, Higher };

const char* to_string(AuditMode mode);

struct AuditReport {
  AuditMode mode = AuditMode::TauUniform;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  /// log of the structural tau-dependent constant (unit C1, C2), TauDependent only.
  double log_constant = 0.0;
  bool tau_robust = true;
  std::vector<std::string> notes;
  std::map<std::string, double> metadata;
};

/// Inputs for the coefficient-dependent parts of the audit.
struct CoefficientStats {
  double alpha_min = 1.0;
  double alpha_sup = 1.0;
  double grad_alpha_linf_l3 = 0.0;
};

CoefficientStats coefficient_stats(const CoefficientField& field, const QuadratureRule& quad,
                                   const std::vector<double>& times);

/// Beyond this many e-folds the tau-dependent constant is flagged as not tau-robust.
inline constexpr double kTauRobustExponentLimit = 100.0;

AuditReport audit_estimate(const EnergyRecord& energy, const DataNorms& data, AuditMode mode,
                           double final_time, const CoefficientStats& stats = {});

struct ResidualSeries {
  std::vector<double> time;
  std::vector<double> residual;
  double max = 0.0;
};

/// Residual of b z_t + c2 z = f - tau psi_ttt - alpha psi_tt + b psi_t + c2 psi for
/// z = -Delta psi + psi, divided by b, in coefficient space. -Delta psi carries the
/// boundary data (g at x = 0, -beta psi_t at x = L in Mixed mode); z_t is a backward difference.
ResidualSeries ode_residual_z(const Trajectory& traj, const Discretization& disc,
                              const CoefficientField& field, const SourceField& f,
                              const WindowedSignal& g);

}  // namespace jmgt
