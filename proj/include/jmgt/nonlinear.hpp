#pragma once

#include <vector>

#include "jmgt/error.hpp"
#include "jmgt/integrate.hpp"

namespace jmgt {

/// Bounded relaxation of 1 - 2ks: 1 - clamp(2ks, -1, 1), with range [0, 2].
double clamp_h(double s, double k);

enum class NonlinearVariant {
  FullJMGT,     ///< alpha = 1 - 2k psi_t
  RelaxedJMGT,  ///< alpha = h(psi_t)
  Westervelt,   ///< tau = 0, alpha = 1 - 2k psi_t
};

const char* to_string(NonlinearVariant variant);

/// Location of min (1 - 2k psi_t) over the evaluation grid and stored steps.
struct DegeneracyMargin {
  double margin = 1.0;
  double time = 0.0;
  double x = 0.0;
};

DegeneracyMargin degeneracy_check(const Trajectory& traj, const SpectralBasis& basis, double k,
                                  int eval_grid);

struct PicardReport {
  NonlinearVariant variant = NonlinearVariant::FullJMGT;
  int iterations = 0;
  std::vector<double> differences;    ///< d_m = |||psi^{m+1} - psi^m|||
  std::vector<double> factors;        ///< q_m = d_m / d_{m-1}
  std::vector<double> iterate_norms;  ///< |||psi^{m+1}|||
  bool converged = false;
  DegeneracyMargin degeneracy;
  bool degeneracy_warning = false;  ///< margin below 0.1

  double max_factor() const;
};

/// Raised when the fixed-point loop fails; carries the partial report.
class PicardFailure : public SolverFailure {
 public:
  PicardFailure(Kind kind, const std::string& what, PicardReport report)
      : SolverFailure(kind, what), report_(std::move(report)) {}

  const PicardReport& report() const noexcept { return report_; }

 private:
  PicardReport report_;
};

/// Energy norm |||u - v|||, where
///   |||w|||^2 = tau^2 ||w_ttt||^2_{L2 (H1)*} + tau ||w_tt||^2_{Linf L2}
///             + ||w_tt||^2_{L2 L2} + ||w_t||^2_{Linf H1}.
/// With include_tau_terms == false the first two terms are dropped.
/// `v` may be null, meaning zero.
double energy_norm(const Trajectory& u, const Trajectory* v, const SpectralBasis& basis,
                   double tau, bool include_tau_terms);

struct NonlinearResult {
  Trajectory trajectory;
  PicardReport report;
};

/// Whole-horizon Picard iteration on the linear SMGT solver, starting from alpha == 1.
NonlinearResult solve_jmgt(const ModelParams& params, const Discretization& disc,
                           const SourceField& f, const WindowedSignal& g,
                           const SolverConfig& config, BoundaryMode bc, NonlinearVariant variant);

/// Same loop over the second-order solver, measured without the tau-weighted terms.
NonlinearResult solve_westervelt_nonlinear(const ModelParams& params, const Discretization& disc,
                                           const SourceField& f, const WindowedSignal& g,
                                           const SolverConfig& config, BoundaryMode bc);

}  // namespace jmgt
