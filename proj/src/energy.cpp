#include "jmgt/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jmgt/error.hpp"

namespace jmgt {

std::vector<double> cumulative_trapezoid(const std::vector<double>& values, double dt) {
  std::vector<double> out(values.size(), 0.0);
  for (std::size_t m = 1; m < values.size(); ++m) {
    out[m] = out[m - 1] + 0.5 * dt * (values[m] + values[m - 1]);
  }
  return out;
}

LowerEnergy energy_lower(const Trajectory& traj, const SpectralBasis& basis) {
  const double tau = traj.params.tau;
  const std::size_t steps = traj.steps();
  LowerEnergy e;
  e.time = traj.time;
  e.e_low.resize(steps);
  e.accel_sq.resize(steps);
  e.velocity_h1_sq.resize(steps);
  std::vector<double> third_dual(steps, 0.0);
  for (std::size_t m = 0; m < steps; ++m) {
    e.accel_sq[m] = norm_squared(traj.acceleration[m], basis, Space::L2);
    e.velocity_h1_sq[m] = norm_squared(traj.velocity[m], basis, Space::H1);
    e.e_low[m] = tau * e.accel_sq[m] + e.velocity_h1_sq[m];
    if (traj.has_third()) third_dual[m] = tau * tau * norm_squared(traj.third[m], basis, Space::H1Dual);
  }
  e.a_dual = cumulative_trapezoid(third_dual, traj.dt);
  e.a_tt = cumulative_trapezoid(e.accel_sq, traj.dt);
  return e;
}

HigherEnergy energy_higher(const Trajectory& traj, const SpectralBasis& basis) {
  const double tau = traj.params.tau;
  const std::size_t steps = traj.steps();
  const Vector& lambda = basis.eigenvalues();
  HigherEnergy e;
  e.time = traj.time;
  e.e_high.resize(steps);
  e.accel_h1_sq.resize(steps);
  e.velocity_lap_sq.resize(steps);
  std::vector<double> third_l2(steps, 0.0);
  for (std::size_t m = 0; m < steps; ++m) {
    const Vector& a = traj.acceleration[m];
    const double grad_sq = (a.array().square() * lambda.array()).sum();
    e.accel_h1_sq[m] = norm_squared(a, basis, Space::H1);
    e.velocity_lap_sq[m] = norm_squared(traj.velocity[m], basis, Space::LaplacianL2);
    e.e_high[m] = tau * grad_sq + e.velocity_lap_sq[m];
    if (traj.has_third()) third_l2[m] = tau * tau * traj.third[m].squaredNorm();
  }
  e.a_tt_h1 = cumulative_trapezoid(e.accel_h1_sq, traj.dt);
  e.a_ttt_l2 = cumulative_trapezoid(third_l2, traj.dt);
  return e;
}

BoundaryFlux boundary_flux(const Trajectory& traj, const SpectralBasis& basis) {
  BoundaryFlux flux;
  if (traj.bc != BoundaryMode::Mixed) return flux;
  flux.present = true;
  const ModelParams& p = traj.params;
  const Vector tr = basis.traces(End::Right);
  const std::size_t steps = traj.steps();
  flux.time = traj.time;
  flux.trace_tt_sq.resize(steps);
  flux.trace_t_sq.resize(steps);
  flux.trace_peak.resize(steps);
  double peak = 0.0;
  for (std::size_t m = 0; m < steps; ++m) {
    const double tr_tt = tr.dot(traj.acceleration[m]);
    const double tr_t = tr.dot(traj.velocity[m]);
    flux.trace_tt_sq[m] = tr_tt * tr_tt;
    flux.trace_t_sq[m] = tr_t * tr_t;
    peak = std::max(peak, p.b() * p.beta * flux.trace_t_sq[m]);
    flux.trace_peak[m] = peak;
  }
  flux.dissipated = cumulative_trapezoid(flux.trace_tt_sq, traj.dt);
  for (double& v : flux.dissipated) v *= p.c2 * p.beta;
  return flux;
}

EnergyRecord energy_record(const Trajectory& traj, const SpectralBasis& basis) {
  EnergyRecord record;
  record.tau = traj.params.tau;
  record.lower = energy_lower(traj, basis);
  record.higher = energy_higher(traj, basis);
  record.flux = boundary_flux(traj, basis);
  return record;
}

namespace {

// |g^(m)| maximised by dense sampling and golden-section refinement around the best sample.
double signal_sup(const WindowedSignal& g, int order, double final_time) {
  const int samples = 8192;
  const double h = final_time / samples;
  auto value = [&](double t) { return std::abs(signal_eval(g, std::clamp(t, 0.0, final_time), order)); };
  double best = 0.0;
  int best_j = 0;
  for (int j = 0; j <= samples; ++j) {
    const double v = value(j * h);
    if (v > best) {
      best = v;
      best_j = j;
    }
  }
  double lo = std::max(0.0, (best_j - 1) * h);
  double hi = std::min(final_time, (best_j + 1) * h);
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = value(x1);
  double f2 = value(x2);
  for (int iter = 0; iter < 80; ++iter) {
    if (f1 > f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = value(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = value(x2);
    }
  }
  return std::max({best, f1, f2});
}

}  // namespace

DataNorms data_norms(const WindowedSignal& g, const SourceField& f, const QuadratureRule& quad,
                     double final_time, int max_order) {
  if (max_order < 0 || max_order > kMaxSignalOrder) {
    throw InvalidArgument("data_norms: signal derivatives are available up to order 4");
  }
  DataNorms norms;
  norms.max_order = max_order;
  norms.g_sup.assign(static_cast<std::size_t>(max_order + 1), 0.0);
  norms.g_l2.assign(static_cast<std::size_t>(max_order + 1), 0.0);

  // Time integrals: composite 8-point Gauss-Legendre, panel edges aligned with the window end.
  std::vector<double> ref_nodes, ref_weights;
  gauss_legendre(8, ref_nodes, ref_weights);
  std::vector<double> edges;
  const int panels = 256;
  for (int p = 0; p <= panels; ++p) edges.push_back(final_time * p / panels);
  if (g.windowed() && g.window_end < final_time) edges.push_back(g.window_end);
  std::sort(edges.begin(), edges.end());

  std::vector<double> g_sq(norms.g_l2.size(), 0.0);
  double f_sq = 0.0;
  double ft_sq = 0.0;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double a = edges[p];
    const double b = edges[p + 1];
    if (b <= a) continue;
    for (std::size_t q = 0; q < ref_nodes.size(); ++q) {
      const double t = 0.5 * (a + b) + 0.5 * (b - a) * ref_nodes[q];
      const double w = 0.5 * (b - a) * ref_weights[q];
      for (int m = 0; m <= max_order; ++m) {
        const double v = signal_eval(g, t, m);
        g_sq[static_cast<std::size_t>(m)] += w * v * v;
      }
      if (!f.is_zero()) {
        f_sq += w * quad.integrate([&](double x) { return f(x, t) * f(x, t); });
        ft_sq += w * quad.integrate([&](double x) {
          const double d = f.time_derivative(x, t);
          return d * d;
        });
      }
    }
  }
  for (int m = 0; m <= max_order; ++m) {
    const auto i = static_cast<std::size_t>(m);
    norms.g_l2[i] = std::sqrt(g_sq[i]);
    norms.g_sup[i] = signal_sup(g, m, final_time);
  }
  norms.f_l2l2 = std::sqrt(f_sq);
  norms.f_h1l2 = std::sqrt(f_sq + ft_sq);
  return norms;
}

const char* to_string(AuditMode mode) {
  switch (mode) {
    case AuditMode::TauDependent:
      return "tau-dependent";
    case AuditMode::TauUniform:
      return "tau-uniform";
    case AuditMode::Higher:
      return "higher";
  }
  return "unknown";
}

CoefficientStats coefficient_stats(const CoefficientField& field, const QuadratureRule& quad,
                                   const std::vector<double>& times) {
  CoefficientStats stats;
  stats.alpha_min = std::numeric_limits<double>::infinity();
  stats.alpha_sup = 0.0;
  for (double t : times) {
    double grad_l3 = 0.0;
    for (int q = 0; q < quad.size(); ++q) {
      const double x = quad.nodes()[static_cast<std::size_t>(q)];
      const double a = field.alpha(x, t);
      stats.alpha_min = std::min(stats.alpha_min, a);
      stats.alpha_sup = std::max(stats.alpha_sup, std::abs(a));
      grad_l3 += quad.weights()[static_cast<std::size_t>(q)] * std::pow(std::abs(field.alpha_x(x, t)), 3);
    }
    stats.grad_alpha_linf_l3 = std::max(stats.grad_alpha_linf_l3, std::cbrt(grad_l3));
  }
  return stats;
}

namespace {

double series_max(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

double series_last(const std::vector<double>& v) { return v.empty() ? 0.0 : v.back(); }

double squared(double v) { return v * v; }

}  // namespace

AuditReport audit_estimate(const EnergyRecord& energy, const DataNorms& data, AuditMode mode,
                           double final_time, const CoefficientStats& stats) {
  AuditReport report;
  report.mode = mode;
  const double tau = energy.tau;
  const auto& lo = energy.lower;
  const auto& hi = energy.higher;
  auto g_sup = [&](int m) { return m <= data.max_order ? data.g_sup[static_cast<std::size_t>(m)] : 0.0; };
  auto g_l2 = [&](int m) { return m <= data.max_order ? data.g_l2[static_cast<std::size_t>(m)] : 0.0; };

  double tau_max_accel = 0.0;
  for (double v : lo.accel_sq) tau_max_accel = std::max(tau_max_accel, tau * v);

  switch (mode) {
    case AuditMode::TauDependent:
    case AuditMode::TauUniform: {
      if (data.max_order < 2) throw InvalidArgument("audit_estimate: data bundle needs g_tt");
      report.lhs = series_last(lo.a_dual) + tau_max_accel + series_max(lo.velocity_h1_sq);
      if (mode == AuditMode::TauUniform) report.lhs += series_last(lo.a_tt);
      report.rhs = squared(g_sup(0)) + squared(g_sup(1)) + squared(g_l2(1)) + squared(g_l2(2)) +
                   squared(data.f_l2l2);
      break;
    }
    case AuditMode::Higher: {
      if (data.max_order < 3) throw InvalidArgument("audit_estimate: higher bundle needs g_ttt");
      double tau_max_accel_h1 = 0.0;
      for (double v : hi.accel_h1_sq) tau_max_accel_h1 = std::max(tau_max_accel_h1, tau * v);
      report.lhs = series_last(hi.a_ttt_l2) + tau_max_accel_h1 + series_last(hi.a_tt_h1) +
                   series_max(hi.velocity_lap_sq);
      report.rhs = tau * tau * squared(g_l2(3)) + tau * squared(g_sup(2)) + squared(g_l2(0)) +
                   squared(g_l2(1)) + squared(g_l2(2)) + squared(g_sup(1)) + squared(data.f_h1l2);
      report.metadata["alpha_min"] = stats.alpha_min;
      report.metadata["grad_alpha_linf_l3"] = stats.grad_alpha_linf_l3;
      report.notes.emplace_back(
          "smallness of grad alpha is relative to an unknown embedding constant; only its inputs are reported");
      break;
    }
  }

  if (energy.flux.present) {
    report.lhs += series_last(energy.flux.dissipated) + series_max(energy.flux.trace_peak);
  }

  if (report.rhs == 0.0) {
    if (report.lhs != 0.0) {
      throw Error("audit_estimate: nonzero energy from zero data (uniqueness violated)");
    }
    report.ratio = 0.0;
  } else {
    report.ratio = report.lhs / report.rhs;
  }

  if (mode == AuditMode::TauDependent) {
    if (!(tau > 0.0)) throw InvalidArgument("audit_estimate: tau-dependent accounting needs tau > 0");
    const double a = stats.alpha_sup;
    const double T = final_time;
    const double exponent = (1.0 / tau + a / tau + 1.0 + T) * T;
    report.log_constant = std::log(a * a / (tau * tau) + T * T + 1.0) + exponent + std::log1p(tau);
    report.tau_robust = (1.0 + a) * T / tau <= kTauRobustExponentLimit;
    if (!report.tau_robust) report.notes.emplace_back("constant not tau-robust");
    report.metadata["log_constant"] = report.log_constant;
  }
  return report;
}

ResidualSeries ode_residual_z(const Trajectory& traj, const Discretization& disc,
                              const CoefficientField& field, const SourceField& f,
                              const WindowedSignal& g) {
  const ModelParams& p = traj.params;
  if (!(p.tau > 0.0)) throw InvalidArgument("ode_residual_z: tau must be > 0");
  if (!traj.has_third()) throw InvalidArgument("ode_residual_z: trajectory lacks recovered xi'''");
  const SpectralBasis& basis = disc.basis;
  const double b = p.b();
  const double beta = traj.bc == BoundaryMode::Mixed ? p.beta : 0.0;
  const Vector one_plus_lambda = (1.0 + basis.eigenvalues().array()).matrix();
  const Vector left = basis.traces(End::Left);
  TimeVaryingMass mass(basis, disc.quad, field);

  auto z_of = [&](std::size_t m) -> Vector {
    Vector z = one_plus_lambda.cwiseProduct(traj.xi[m]) - signal_eval(g, traj.time[m], 0) * left;
    if (beta != 0.0) z += beta * (disc.boundary * traj.velocity[m]);
    return z;
  };

  ResidualSeries out;
  out.time.push_back(traj.time.front());
  out.residual.push_back(0.0);
  Vector z_prev = z_of(0);
  for (std::size_t m = 1; m < traj.steps(); ++m) {
    const double t = traj.time[m];
    const Vector z = z_of(m);
    const Vector z_t = (z - z_prev) / traj.dt;
    Vector rhs = -p.tau * traj.third[m] - mass.at(t) * traj.acceleration[m] + b * traj.velocity[m] +
                 p.c2 * traj.xi[m];
    if (!f.is_zero()) rhs += project(basis, disc.quad, [&](double x) { return f(x, t); });
    const Vector r = z_t + (p.c2 / b) * z - rhs / b;
    out.time.push_back(t);
    out.residual.push_back(r.norm());
    out.max = std::max(out.max, r.norm());
    z_prev = z;
  }
  return out;
}

}  // namespace jmgt
