#include "jmgt/assembly.hpp"

#include <cmath>

#include "jmgt/error.hpp"
#include "jmgt/nonlinear.hpp"

namespace jmgt {

CoefficientField CoefficientField::constant(double value) {
  CoefficientField field;
  field.alpha = [value](double, double) { return value; };
  field.alpha_x = [](double, double) { return 0.0; };
  field.alpha_t = [](double, double) { return 0.0; };
  return field;
}

CoefficientField CoefficientField::analytic(SpaceTimeFn alpha, SpaceTimeFn alpha_x,
                                            SpaceTimeFn alpha_t) {
  CoefficientField field;
  field.alpha = std::move(alpha);
  field.alpha_x = std::move(alpha_x);
  field.alpha_t = std::move(alpha_t);
  return field;
}

CoefficientField reconstructed_field(std::shared_ptr<const Trajectory> traj,
                                     const SpectralBasis& basis, double k, CoefficientLaw law) {
  if (!traj || traj->steps() == 0) throw InvalidArgument("reconstructed_field: empty trajectory");
  const SpectralBasis local = basis;

  std::function<double(double)> apply = [k](double s) { return 1.0 - 2.0 * k * s; };
  // d alpha / d psi_t
  std::function<double(double)> slope = [k](double) { return -2.0 * k; };
  if (law == CoefficientLaw::Clamped) {
    apply = [k](double s) { return clamp_h(s, k); };
    slope = [k](double s) { return std::abs(2.0 * k * s) < 1.0 ? -2.0 * k : 0.0; };
  }

  CoefficientField field;
  field.provenance = CoefficientField::Provenance::Reconstructed;
  field.law = apply;
  field.velocity_coeffs = [traj](double t) { return traj->velocity_at(t); };
  field.alpha = [traj, local, apply](double x, double t) {
    return apply(local.synthesize(traj->velocity_at(t), x));
  };
  field.alpha_x = [traj, local, slope](double x, double t) {
    const Vector v = traj->velocity_at(t);
    return slope(local.synthesize(v, x)) * local.synthesize(v, x, 1);
  };
  field.alpha_t = [traj, local, slope](double x, double t) {
    const double psi_t = local.synthesize(traj->velocity_at(t), x);
    return slope(psi_t) * local.synthesize(traj->velocity_slope_at(t), x);
  };
  return field;
}

double SourceField::time_derivative(double x, double t) const {
  if (!value) return 0.0;
  if (value_t) return value_t(x, t);
  const double h = 1e-5 * std::max(1.0, std::abs(t));
  if (t - h < 0.0) return (value(x, t + h) - value(x, t)) / h;
  return (value(x, t + h) - value(x, t - h)) / (2.0 * h);
}

Matrix assemble_stiffness(const SpectralBasis& basis, const QuadratureRule& quad) {
  const Matrix d = mode_table(basis, quad, 1);
  const Eigen::Map<const Vector> w(quad.weights().data(), quad.size());
  Matrix k = d.transpose() * w.asDiagonal() * d;
  return 0.5 * (k + k.transpose());
}

namespace {

Matrix weighted_gram(const Matrix& modes, const QuadratureRule& quad, const Vector& alpha_nodes) {
  const Eigen::Map<const Vector> w(quad.weights().data(), quad.size());
  const Vector weights = w.cwiseProduct(alpha_nodes);
  Matrix m = modes.transpose() * weights.asDiagonal() * modes;
  return 0.5 * (m + m.transpose());
}

Vector alpha_at_nodes(const CoefficientField& field, const Matrix& modes,
                      const QuadratureRule& quad, double t) {
  Vector alpha(quad.size());
  if (field.velocity_coeffs && field.law) {
    const Vector psi_t = modes * field.velocity_coeffs(t);
    for (int q = 0; q < quad.size(); ++q) alpha[q] = field.law(psi_t[q]);
    return alpha;
  }
  for (int q = 0; q < quad.size(); ++q) {
    alpha[q] = field.alpha(quad.nodes()[static_cast<std::size_t>(q)], t);
  }
  return alpha;
}

}  // namespace

Matrix assemble_mass(const SpectralBasis& basis, const QuadratureRule& quad,
                     const CoefficientField& field, double t) {
  const Matrix modes = mode_table(basis, quad, 0);
  return weighted_gram(modes, quad, alpha_at_nodes(field, modes, quad, t));
}

Matrix assemble_boundary(const SpectralBasis& basis, End end) {
  const Vector tr = basis.traces(end);
  return tr * tr.transpose();
}

Vector assemble_load(const SpectralBasis& basis, const QuadratureRule& quad,
                     const SourceField& f, const WindowedSignal& g, const ModelParams& params,
                     double t, BoundaryMode /*bc*/) {
  Vector load = Vector::Zero(basis.size());
  if (!f.is_zero()) load = project(basis, quad, [&](double x) { return f(x, t); });
  const double flux = params.c2 * signal_eval(g, t, 0) + params.b() * signal_eval(g, t, 1);
  if (flux != 0.0) load += flux * basis.traces(End::Left);
  return load;
}

TimeVaryingMass::TimeVaryingMass(const SpectralBasis& basis, const QuadratureRule& quad,
                                 CoefficientField field)
    : basis_(basis), quad_(quad), field_(std::move(field)), modes_(mode_table(basis, quad, 0)) {}

const Matrix& TimeVaryingMass::at(double t) {
  auto it = cache_.find(t);
  if (it != cache_.end()) return it->second;
  Matrix m = weighted_gram(modes_, quad_, alpha_at_nodes(field_, modes_, quad_, t));
  return cache_.emplace(t, std::move(m)).first->second;
}

double HarmonicExtension::profile(double length, double x) {
  return std::cosh(length - x) / std::sinh(length);
}

double HarmonicExtension::value(double x, int deriv) const {
  const double s = std::sinh(length);
  switch (deriv) {
    case 0:
      return h * std::cosh(length - x) / s;
    case 1:
      return -h * std::sinh(length - x) / s;
    case 2:
      return h * std::cosh(length - x) / s;
    default:
      throw InvalidArgument("HarmonicExtension::value: derivative order must be 0, 1 or 2");
  }
}

Vector HarmonicExtension::coefficients(const SpectralBasis& basis, const QuadratureRule& quad) const {
  return project(basis, quad, [this](double x) { return value(x); });
}

HarmonicExtension harmonic_extension(double length, double h) {
  if (!(length > 0.0)) throw InvalidArgument("harmonic_extension: length must be > 0");
  if (!std::isfinite(h)) throw InvalidArgument("harmonic_extension: boundary value must be finite");
  return HarmonicExtension{length, h};
}

std::function<double(double)> lift_forcing(const WindowedSignal& g, const CoefficientField& field,
                                           const SourceField& f, const ModelParams& params,
                                           double length, double t) {
  if (!validate_compatibility(g, 3).empty()) {
    throw InvalidArgument("lift_forcing: boundary signal violates compatibility up to order 2");
  }
  const double g0 = signal_eval(g, t, 0);
  const double g1 = signal_eval(g, t, 1);
  const double g2 = signal_eval(g, t, 2);
  const double g3 = signal_eval(g, t, 3);
  const double tau = params.tau;
  const double c2 = params.c2;
  const double b = params.b();
  return [=](double x) {
    const double n = HarmonicExtension::profile(length, x);
    return f(x, t) - tau * g3 * n - field.alpha(x, t) * g2 * n + c2 * g0 * n + b * g1 * n;
  };
}

}  // namespace jmgt
