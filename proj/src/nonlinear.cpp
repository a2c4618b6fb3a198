#include "jmgt/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace jmgt {

double clamp_h(double s, double k) { return 1.0 - std::clamp(2.0 * k * s, -1.0, 1.0); }

const char* to_string(NonlinearVariant variant) {
  switch (variant) {
    case NonlinearVariant::FullJMGT:
      return "full-jmgt";
    case NonlinearVariant::RelaxedJMGT:
      return "relaxed-jmgt";
    case NonlinearVariant::Westervelt:
      return "westervelt";
  }
  return "unknown";
}

DegeneracyMargin degeneracy_check(const Trajectory& traj, const SpectralBasis& basis, double k,
                                  int eval_grid) {
  DegeneracyMargin result;
  if (k == 0.0 || traj.steps() == 0) return result;
  const int points = std::max(eval_grid, 2);
  std::vector<double> xs(static_cast<std::size_t>(points));
  Matrix table(points, basis.size());
  for (int j = 0; j < points; ++j) {
    xs[static_cast<std::size_t>(j)] = basis.length() * j / (points - 1);
    for (int i = 0; i < basis.size(); ++i) table(j, i) = basis.eval(i, xs[static_cast<std::size_t>(j)]);
  }
  for (std::size_t m = 0; m < traj.steps(); ++m) {
    const Vector psi_t = table * traj.velocity[m];
    Eigen::Index where = 0;
    const double margin = (1.0 - 2.0 * k * psi_t.array()).minCoeff(&where);
    if (margin < result.margin) {
      result.margin = margin;
      result.time = traj.time[m];
      result.x = xs[static_cast<std::size_t>(where)];
    }
  }
  return result;
}

double PicardReport::max_factor() const {
  return factors.empty() ? 0.0 : *std::max_element(factors.begin(), factors.end());
}

namespace {

double trapezoid(const std::vector<double>& values, double dt) {
  if (values.size() < 2) return 0.0;
  double sum = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) sum += values[i];
  return sum * dt;
}

}  // namespace

double energy_norm(const Trajectory& u, const Trajectory* v, const SpectralBasis& basis,
                   double tau, bool include_tau_terms) {
  const std::size_t steps = u.steps();
  if (v && v->steps() != steps) throw InvalidArgument("energy_norm: trajectory length mismatch");
  const bool use_third = include_tau_terms && u.has_third() && (!v || v->has_third());
  std::vector<double> third_sq(steps, 0.0), accel_sq(steps, 0.0);
  double accel_max = 0.0;
  double velocity_max = 0.0;
  for (std::size_t m = 0; m < steps; ++m) {
    const Vector dv = v ? Vector(u.velocity[m] - v->velocity[m]) : u.velocity[m];
    const Vector da = v ? Vector(u.acceleration[m] - v->acceleration[m]) : u.acceleration[m];
    accel_sq[m] = da.squaredNorm();
    accel_max = std::max(accel_max, accel_sq[m]);
    velocity_max = std::max(velocity_max, norm_squared(dv, basis, Space::H1));
    if (use_third) {
      const Vector d3 = v ? Vector(u.third[m] - v->third[m]) : u.third[m];
      third_sq[m] = norm_squared(d3, basis, Space::H1Dual);
    }
  }
  double total = trapezoid(accel_sq, u.dt) + velocity_max;
  if (include_tau_terms) total += tau * tau * trapezoid(third_sq, u.dt) + tau * accel_max;
  return std::sqrt(total);
}

namespace {

struct LoopSettings {
  NonlinearVariant variant;
  bool second_order;
  bool guard;
  CoefficientLaw law;
};

NonlinearResult picard_loop(const ModelParams& params, const Discretization& disc,
                            const SourceField& f, const WindowedSignal& g,
                            const SolverConfig& config, BoundaryMode bc, const LoopSettings& s) {
  PicardReport report;
  report.variant = s.variant;
  const double tau = s.second_order ? 0.0 : params.tau;

  auto linear_solve = [&](const CoefficientField& field) {
    return s.second_order ? solve_westervelt_linearized(params, disc, field, f, g, config, bc)
                          : solve_smgt_linear(params, disc, field, f, g, config, bc);
  };

  auto check_guard = [&](const Trajectory& traj, const char* stage) {
    report.degeneracy = degeneracy_check(traj, disc.basis, params.k, config.eval_points());
    report.degeneracy_warning = report.degeneracy.margin < 0.1;
    if (s.guard && report.degeneracy.margin <= 0.0) {
      std::ostringstream msg;
      msg << "non-degeneracy violated (" << stage << "): 1 - 2k psi_t = "
          << report.degeneracy.margin << " at t = " << report.degeneracy.time
          << ", x = " << report.degeneracy.x;
      throw PicardFailure(SolverFailure::Kind::NonDegeneracyViolated, msg.str(), report);
    }
  };

  auto current = std::make_shared<const Trajectory>(linear_solve(CoefficientField::constant(1.0)));
  // psi^0 == 0, so the first difference is the norm of psi^1.
  double previous_diff = energy_norm(*current, nullptr, disc.basis, tau, !s.second_order);
  report.differences.push_back(previous_diff);
  report.iterate_norms.push_back(previous_diff);
  report.iterations = 1;
  if (previous_diff < config.picard_tol) {
    report.converged = true;
    check_guard(*current, "converged iterate");
    return {*current, report};
  }

  while (report.iterations < config.picard_max) {
    check_guard(*current, "iterate");
    const CoefficientField field = reconstructed_field(current, disc.basis, params.k, s.law);
    auto next = std::make_shared<const Trajectory>(linear_solve(field));
    const double diff = energy_norm(*next, current.get(), disc.basis, tau, !s.second_order);
    report.differences.push_back(diff);
    report.factors.push_back(previous_diff > 0.0 ? diff / previous_diff : 0.0);
    report.iterate_norms.push_back(energy_norm(*next, nullptr, disc.basis, tau, !s.second_order));
    ++report.iterations;
    previous_diff = diff;
    current = std::move(next);
    if (!std::isfinite(diff)) break;
    if (diff < config.picard_tol) {
      report.converged = true;
      check_guard(*current, "converged iterate");
      return {*current, report};
    }
  }

  std::ostringstream msg;
  msg << "fixed-point iteration did not converge in " << report.iterations
      << " iterations (last difference " << previous_diff << ")";
  throw PicardFailure(SolverFailure::Kind::Divergence, msg.str(), report);
}

}  // namespace

NonlinearResult solve_jmgt(const ModelParams& params, const Discretization& disc,
                           const SourceField& f, const WindowedSignal& g,
                           const SolverConfig& config, BoundaryMode bc, NonlinearVariant variant) {
  switch (variant) {
    case NonlinearVariant::FullJMGT:
      return picard_loop(params, disc, f, g, config, bc,
                         {variant, false, true, CoefficientLaw::Linear});
    case NonlinearVariant::RelaxedJMGT:
      return picard_loop(params, disc, f, g, config, bc,
                         {variant, false, false, CoefficientLaw::Clamped});
    case NonlinearVariant::Westervelt:
      return solve_westervelt_nonlinear(params, disc, f, g, config, bc);
  }
  throw InvalidArgument("solve_jmgt: unknown variant");
}

NonlinearResult solve_westervelt_nonlinear(const ModelParams& params, const Discretization& disc,
                                           const SourceField& f, const WindowedSignal& g,
                                           const SolverConfig& config, BoundaryMode bc) {
  return picard_loop(params, disc, f, g, config, bc,
                     {NonlinearVariant::Westervelt, true, true, CoefficientLaw::Linear});
}

}  // namespace jmgt
