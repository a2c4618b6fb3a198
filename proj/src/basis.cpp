#include "jmgt/basis.hpp"

#include <cmath>
#include <numbers>

#include "jmgt/error.hpp"

namespace jmgt {

void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(static_cast<std::size_t>(count), 0.0);
  weights.assign(static_cast<std::size_t>(count), 0.0);
  const int half = (count + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton on P_count starting from the Chebyshev-like guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int j = 2; j <= count; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      const double pn = count == 1 ? x : p1;
      const double pm = count == 1 ? 1.0 : p0;
      dp = count * (x * pn - pm) / (x * x - 1.0);
      const double step = pn / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    if (count == 1) {
      x = 0.0;
      dp = 1.0;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(count - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(count - 1 - i)] = w;
  }
}

QuadratureRule::QuadratureRule(double length, int min_nodes, int points_per_panel)
    : points_per_panel_(points_per_panel) {
  if (!(length > 0.0)) throw InvalidArgument("QuadratureRule: length must be > 0");
  if (min_nodes < 1 || points_per_panel < 1) throw InvalidArgument("QuadratureRule: empty rule");
  const int panels = (min_nodes + points_per_panel - 1) / points_per_panel;
  std::vector<double> ref_nodes, ref_weights;
  gauss_legendre(points_per_panel, ref_nodes, ref_weights);
  const double h = length / panels;
  nodes_.reserve(static_cast<std::size_t>(panels * points_per_panel));
  weights_.reserve(nodes_.capacity());
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    for (int q = 0; q < points_per_panel; ++q) {
      nodes_.push_back(mid + 0.5 * h * ref_nodes[static_cast<std::size_t>(q)]);
      weights_.push_back(0.5 * h * ref_weights[static_cast<std::size_t>(q)]);
    }
  }
}

double QuadratureRule::integrate(const std::function<double(double)>& fn) const {
  double sum = 0.0;
  for (std::size_t q = 0; q < nodes_.size(); ++q) sum += weights_[q] * fn(nodes_[q]);
  return sum;
}

SpectralBasis::SpectralBasis(double length, int modes)
    : length_(length), modes_(modes), eigenvalues_(modes) {
  if (!(length > 0.0)) throw InvalidArgument("SpectralBasis: length must be > 0");
  if (modes < 1) throw InvalidArgument("SpectralBasis: need at least one mode");
  for (int i = 0; i < modes; ++i) {
    const double freq = i * std::numbers::pi / length;
    eigenvalues_[i] = freq * freq;
  }
}

double SpectralBasis::eval(int i, double x, int deriv) const {
  if (i < 0 || i >= modes_) throw InvalidArgument("SpectralBasis::eval: mode index out of range");
  if (x < 0.0 || x > length_) throw InvalidArgument("SpectralBasis::eval: position outside [0, L]");
  if (deriv < 0 || deriv > 2) throw InvalidArgument("SpectralBasis::eval: derivative order must be 0, 1 or 2");
  if (i == 0) return deriv == 0 ? 1.0 / std::sqrt(length_) : 0.0;
  const double scale = std::sqrt(2.0 / length_);
  const double freq = i * std::numbers::pi / length_;
  switch (deriv) {
    case 0:
      return scale * std::cos(freq * x);
    case 1:
      return -scale * freq * std::sin(freq * x);
    default:
      return -freq * freq * scale * std::cos(freq * x);
  }
}

double SpectralBasis::trace(int i, End end) const {
  return eval(i, end == End::Left ? 0.0 : length_, 0);
}

Vector SpectralBasis::values_at(double x) const {
  Vector v(modes_);
  for (int i = 0; i < modes_; ++i) v[i] = eval(i, x, 0);
  return v;
}

Vector SpectralBasis::traces(End end) const {
  return values_at(end == End::Left ? 0.0 : length_);
}

double SpectralBasis::synthesize(const Vector& coeffs, double x, int deriv) const {
  double sum = 0.0;
  for (int i = 0; i < modes_; ++i) sum += coeffs[i] * eval(i, x, deriv);
  return sum;
}

Matrix mode_table(const SpectralBasis& basis, const QuadratureRule& quad, int deriv) {
  Matrix table(quad.size(), basis.size());
  for (int q = 0; q < quad.size(); ++q) {
    for (int i = 0; i < basis.size(); ++i) {
      table(q, i) = basis.eval(i, quad.nodes()[static_cast<std::size_t>(q)], deriv);
    }
  }
  return table;
}

Vector project(const SpectralBasis& basis, const QuadratureRule& quad,
               const std::function<double(double)>& fn) {
  Vector c = Vector::Zero(basis.size());
  for (int q = 0; q < quad.size(); ++q) {
    const double x = quad.nodes()[static_cast<std::size_t>(q)];
    const double fw = quad.weights()[static_cast<std::size_t>(q)] * fn(x);
    if (fw == 0.0) continue;
    for (int i = 0; i < basis.size(); ++i) c[i] += fw * basis.eval(i, x, 0);
  }
  return c;
}

double norm_squared(const Vector& coeffs, const SpectralBasis& basis, Space space) {
  if (coeffs.size() != basis.size()) throw InvalidArgument("norm: coefficient length mismatch");
  const Vector& lambda = basis.eigenvalues();
  switch (space) {
    case Space::L2:
      return coeffs.squaredNorm();
    case Space::H1:
      return (coeffs.array().square() * (1.0 + lambda.array())).sum();
    case Space::H1Dual:
      return (coeffs.array().square() / (1.0 + lambda.array())).sum();
    case Space::LaplacianL2:
      return (coeffs.array().square() * lambda.array().square()).sum();
  }
  throw InvalidArgument("norm: unknown space");
}

double norm(const Vector& coeffs, const SpectralBasis& basis, Space space) {
  return std::sqrt(norm_squared(coeffs, basis, space));
}

}  // namespace jmgt
