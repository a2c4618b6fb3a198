#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "jmgt/config.hpp"
#include "jmgt/csv.hpp"
#include "jmgt/energy.hpp"
#include "jmgt/integrate.hpp"
#include "jmgt/nonlinear.hpp"

namespace jmgt {

SourceField make_source(const ExperimentConfig& config);

/// Manufactured solution psi*(x, t) = t^3 cos(pi x / L) with alpha == 1.
/// The returned source makes psi* exact for the third-order (tau > 0) or the
/// second-order (Westervelt, b = delta) linear equation; g == 0.
SourceField manufactured_source(const ModelParams& params, double length, bool third_order);
/// Mode-1 coefficient of psi* and its time derivatives (order 0..3).
double manufactured_coefficient(double length, double t, int order);
/// max_m |xi_m - xi*(t_m)| (L2 error of psi, maximised over the grid).
double manufactured_error(const Trajectory& traj, double length);

struct MmsRow {
  std::string solver;
  double dt = 0.0;
  double error = 0.0;
  double observed_order = 0.0;  ///< NaN on the coarsest row
};

/// Temporal convergence on psi* for the given step sizes (decreasing).
std::vector<MmsRow> mms_convergence(const ModelParams& params, double length, int n_modes,
                                    double final_time, const std::vector<double>& dts,
                                    bool third_order);

struct LimitRow {
  double tau = 0.0;
  double e_t = 0.0;       ///< max_m ||psi^tau_t - psi_bar_t||_L2
  double e_energy = 0.0;  ///< difference in the tau-free part of the energy norm
  int picard_iterations = 0;
  double margin = 1.0;
};

struct LimitStudyResult {
  std::vector<LimitRow> rows;
  int reference_iterations = 0;
  double reference_margin = 1.0;
  Trajectory reference;
  std::vector<Trajectory> members;
};

/// Nonlinear Westervelt reference once, then one nonlinear JMGT run per tau.
LimitStudyResult limit_study(const ExperimentConfig& config);

struct TauSweepRow {
  double tau = 0.0;
  double energy_total = 0.0;  ///< tau-uniform left-hand side
  AuditReport uniform;
  AuditReport dependent;
  double ratio_relative = 1.0;  ///< R(tau) / R(tau_max)
};

/// Linear solves with alpha == 1 over the tau sweep, audited in both accountings.
std::vector<TauSweepRow> energy_audit_sweep(const ExperimentConfig& config);

CsvTable trajectory_table(const Trajectory& traj);
CsvTable energy_table(const EnergyRecord& energy);

/// Runs a subcommand and writes its CSV artifacts into `out_dir`.
/// Returns 0 on success, 2 on solver failure; throws ConfigError for unusable settings.
int run(const std::string& subcommand, const ExperimentConfig& config, const std::string& out_dir,
        std::ostream& log);

const std::vector<std::string>& subcommands();

}  // namespace jmgt
