#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace jmgt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class End { Left, Right };

/// Composite Gauss-Legendre rule on [0, L].
class QuadratureRule {
 public:
  /// At least `min_nodes` nodes, split into panels of `points_per_panel` nodes.
  QuadratureRule(double length, int min_nodes, int points_per_panel = 16);

  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  /// Exact for polynomials up to this degree on each panel.
  int degree() const { return 2 * points_per_panel_ - 1; }

  double integrate(const std::function<double(double)>& fn) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
  int points_per_panel_;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights);

/// Orthonormal eigenfunctions of the Neumann Laplacian on [0, L]:
/// w_0 = 1/sqrt(L), w_i = sqrt(2/L) cos(i pi x / L), lambda_i = (i pi / L)^2.
class SpectralBasis {
 public:
  SpectralBasis(double length, int modes);

  double length() const { return length_; }
  int size() const { return modes_; }
  double eigenvalue(int i) const { return eigenvalues_[static_cast<Eigen::Index>(i)]; }
  const Vector& eigenvalues() const { return eigenvalues_; }

  /// w_i, w_i', or w_i'' at x.
  double eval(int i, double x, int deriv = 0) const;
  double trace(int i, End end) const;
  /// (w_0(x), ..., w_{n-1}(x)).
  Vector values_at(double x) const;
  Vector traces(End end) const;

  /// Reconstructs sum_i coeffs_i w_i^{(deriv)}(x).
  double synthesize(const Vector& coeffs, double x, int deriv = 0) const;

 private:
  double length_;
  int modes_;
  Vector eigenvalues_;
};

/// Q x n table of mode values at the quadrature nodes.
Matrix mode_table(const SpectralBasis& basis, const QuadratureRule& quad, int deriv = 0);

/// c_i = sum_q rho_q fn(x_q) w_i(x_q).
Vector project(const SpectralBasis& basis, const QuadratureRule& quad,
               const std::function<double(double)>& fn);

enum class Space { L2, H1, H1Dual, LaplacianL2 };

/// Sobolev-scale norms that are diagonal in the eigenbasis.
double norm(const Vector& coeffs, const SpectralBasis& basis, Space space);
double norm_squared(const Vector& coeffs, const SpectralBasis& basis, Space space);

}  // namespace jmgt
