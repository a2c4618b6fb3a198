#include "jmgt/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "jmgt/error.hpp"

namespace jmgt {

Vector Trajectory::velocity_at(double t) const {
  if (steps() == 0) throw InvalidArgument("Trajectory::velocity_at: empty trajectory");
  if (steps() == 1 || t <= time.front()) return velocity.front();
  if (t >= time.back()) return velocity.back();
  const auto m = std::min(static_cast<std::size_t>(t / dt), steps() - 2);
  const double theta = (t - time[m]) / dt;
  return (1.0 - theta) * velocity[m] + theta * velocity[m + 1];
}

Vector Trajectory::velocity_slope_at(double t) const {
  if (steps() < 2) return Vector::Zero(modes());
  const double clamped = std::clamp(t, time.front(), time.back());
  const auto m = std::min(static_cast<std::size_t>(clamped / dt), steps() - 2);
  return (velocity[m + 1] - velocity[m]) / dt;
}

Discretization::Discretization(double length, const SolverConfig& config)
    : basis(length, config.n_modes),
      quad(length, config.quadrature_nodes()),
      stiffness(assemble_stiffness(basis, quad)),
      boundary(assemble_boundary(basis, End::Right)) {}

namespace {

void check_inputs(const ModelParams& params, const SolverConfig& config) {
  auto errors = params.validate();
  auto more = config.validate();
  errors.insert(errors.end(), more.begin(), more.end());
  if (!errors.empty()) {
    std::string msg = "invalid solver input:";
    for (const auto& e : errors) msg += " " + e + ";";
    throw InvalidArgument(msg);
  }
}

Vector solve_step(const Matrix& system, const Vector& rhs, std::size_t step) {
  Eigen::PartialPivLU<Matrix> lu(system);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14)) {
    std::ostringstream msg;
    msg << "singular step matrix at time index " << step << " (rcond " << rcond << ")";
    throw SolverFailure(SolverFailure::Kind::SingularStep, msg.str());
  }
  Vector x = lu.solve(rhs);
  if (!x.allFinite()) {
    throw SolverFailure(SolverFailure::Kind::SingularStep,
                        "non-finite step solution at time index " + std::to_string(step));
  }
  return x;
}

Trajectory start_trajectory(const ModelParams& params, const SolverConfig& config, BoundaryMode bc,
                            int n) {
  Trajectory traj;
  traj.bc = bc;
  traj.params = params;
  traj.dt = config.dt;
  const auto count = static_cast<std::size_t>(config.steps()) + 1;
  traj.time.reserve(count);
  traj.xi.reserve(count);
  traj.velocity.reserve(count);
  traj.acceleration.reserve(count);
  traj.time.push_back(0.0);
  traj.xi.push_back(Vector::Zero(n));
  traj.velocity.push_back(Vector::Zero(n));
  traj.acceleration.push_back(Vector::Zero(n));
  return traj;
}

}  // namespace

Vector recover_third(const Trajectory& traj, std::size_t m, const Matrix& mass,
                     const Matrix& stiffness, const Matrix& boundary, const Vector& load) {
  const ModelParams& p = traj.params;
  if (!(p.tau > 0.0)) throw InvalidArgument("recover_third: tau must be > 0");
  const double b = p.b();
  const Vector& xi = traj.xi[m];
  const Vector& v = traj.velocity[m];
  const Vector& a = traj.acceleration[m];
  Vector r = load - mass * a - b * (stiffness * v) - p.c2 * (stiffness * xi);
  if (p.beta != 0.0) r -= p.beta * (boundary * (b * a + p.c2 * v));
  return r / p.tau;
}

Trajectory solve_smgt_linear(const ModelParams& params, const Discretization& disc,
                             const CoefficientField& field, const SourceField& f,
                             const WindowedSignal& g, const SolverConfig& config, BoundaryMode bc) {
  check_inputs(params, config);
  if (!(params.tau > 0.0)) throw InvalidArgument("solve_smgt_linear: tau must be > 0");
  const int n = disc.basis.size();
  if (n != config.n_modes) throw InvalidArgument("solve_smgt_linear: basis/config mode mismatch");

  const double tau = params.tau;
  const double b = params.b();
  const double dt = config.dt;
  const Matrix zero_b = Matrix::Zero(n, n);
  const Matrix& boundary = bc == BoundaryMode::Mixed ? disc.boundary : zero_b;
  const double beta = bc == BoundaryMode::Mixed ? params.beta : 0.0;
  const Matrix damping = b * disc.stiffness + params.c2 * beta * boundary;
  const Matrix elastic = params.c2 * disc.stiffness;
  const Matrix identity = Matrix::Identity(n, n);

  ModelParams snapshot = params;
  snapshot.beta = beta;
  Trajectory traj = start_trajectory(snapshot, config, bc, n);
  traj.third.reserve(traj.time.capacity());

  TimeVaryingMass mass(disc.basis, disc.quad, field);
  traj.third.push_back(recover_third(traj, 0, mass.at(0.0), disc.stiffness, boundary,
                                     assemble_load(disc.basis, disc.quad, f, g, params, 0.0, bc)));

  const int steps = config.steps();
  for (int m = 0; m < steps; ++m) {
    const double t_next = (m + 1) * dt;
    const auto cur = static_cast<std::size_t>(m);
    double gamma = dt;
    Vector r_xi = traj.xi[cur];
    Vector r_v = traj.velocity[cur];
    Vector r_a = traj.acceleration[cur];
    if (m > 0) {
      gamma = 2.0 * dt / 3.0;
      r_xi = (4.0 * traj.xi[cur] - traj.xi[cur - 1]) / 3.0;
      r_v = (4.0 * traj.velocity[cur] - traj.velocity[cur - 1]) / 3.0;
      r_a = (4.0 * traj.acceleration[cur] - traj.acceleration[cur - 1]) / 3.0;
    }
    const Matrix inertia = mass.at(t_next) + b * beta * boundary;
    const Vector load = assemble_load(disc.basis, disc.quad, f, g, params, t_next, bc);

    // Eliminate xi = r_xi + gamma v and v = r_v + gamma a; solve for a.
    const Matrix system =
        tau * identity + gamma * inertia + gamma * gamma * damping + gamma * gamma * gamma * elastic;
    const Vector rhs =
        tau * r_a + gamma * load - gamma * (damping * r_v) - gamma * (elastic * (r_xi + gamma * r_v));
    Vector a = solve_step(system, rhs, cur + 1);
    Vector v = r_v + gamma * a;
    Vector xi = r_xi + gamma * v;

    traj.time.push_back(t_next);
    traj.xi.push_back(std::move(xi));
    traj.velocity.push_back(std::move(v));
    traj.acceleration.push_back(std::move(a));
    traj.third.push_back(recover_third(traj, cur + 1, mass.at(t_next), disc.stiffness, boundary, load));
  }
  return traj;
}

Trajectory solve_westervelt_linearized(const ModelParams& params, const Discretization& disc,
                                       const CoefficientField& field, const SourceField& f,
                                       const WindowedSignal& g, const SolverConfig& config,
                                       BoundaryMode bc) {
  ModelParams reduced = params;
  reduced.tau = 0.0;
  check_inputs(reduced, config);
  const int n = disc.basis.size();
  if (n != config.n_modes) throw InvalidArgument("solve_westervelt_linearized: basis/config mode mismatch");

  const double b = reduced.b();  // == delta
  const double dt = config.dt;
  const Matrix zero_b = Matrix::Zero(n, n);
  const Matrix& boundary = bc == BoundaryMode::Mixed ? disc.boundary : zero_b;
  const double beta = bc == BoundaryMode::Mixed ? params.beta : 0.0;
  const Matrix damping = b * disc.stiffness + reduced.c2 * beta * boundary;
  const Matrix elastic = reduced.c2 * disc.stiffness;

  reduced.beta = beta;
  Trajectory traj = start_trajectory(reduced, config, bc, n);
  TimeVaryingMass mass(disc.basis, disc.quad, field);

  // The second-order state is (xi, xi'); xi'' is whatever the equation gives.
  {
    const Vector load0 = assemble_load(disc.basis, disc.quad, f, g, reduced, 0.0, bc);
    const Matrix inertia0 = mass.at(0.0) + b * beta * boundary;
    traj.acceleration[0] = solve_step(inertia0, load0, 0);
  }

  const int steps = config.steps();
  for (int m = 0; m < steps; ++m) {
    const double t_next = (m + 1) * dt;
    const auto cur = static_cast<std::size_t>(m);
    double gamma = dt;
    Vector r_xi = traj.xi[cur];
    Vector r_v = traj.velocity[cur];
    if (m > 0) {
      gamma = 2.0 * dt / 3.0;
      r_xi = (4.0 * traj.xi[cur] - traj.xi[cur - 1]) / 3.0;
      r_v = (4.0 * traj.velocity[cur] - traj.velocity[cur - 1]) / 3.0;
    }
    const Matrix inertia = mass.at(t_next) + b * beta * boundary;
    const Vector load = assemble_load(disc.basis, disc.quad, f, g, reduced, t_next, bc);

    const Matrix system = inertia + gamma * damping + gamma * gamma * elastic;
    const Vector rhs = gamma * load + inertia * r_v - gamma * (elastic * r_xi);
    Vector v = solve_step(system, rhs, cur + 1);
    Vector a = (v - r_v) / gamma;
    Vector xi = r_xi + gamma * v;

    traj.time.push_back(t_next);
    traj.xi.push_back(std::move(xi));
    traj.velocity.push_back(std::move(v));
    traj.acceleration.push_back(std::move(a));
  }
  return traj;
}

}  // namespace jmgt
