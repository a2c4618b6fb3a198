#include <doctest.h>

#include <numbers>
#include <random>

#include "jmgt/basis.hpp"
#include "jmgt/error.hpp"

using namespace jmgt;
using std::numbers::pi;

TEST_CASE("Gauss-Legendre rule integrates polynomials up to its degree") {
  const QuadratureRule rule(2.0, 32, 8);
  double wsum = 0.0;
  for (double w : rule.weights()) {
    CHECK(w > 0.0);
    wsum += w;
  }
  CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(rule.degree() == 15);
  // Single panel of 8 nodes: exact for x^k, k <= 15.
  const QuadratureRule one(1.0, 8, 8);
  for (int k = 0; k <= 15; ++k) {
    const double v = one.integrate([k](double x) { return std::pow(x, k); });
    CHECK(v == doctest::Approx(1.0 / (k + 1)).epsilon(1e-14));
  }
}

TEST_CASE("eigenvalues of the Neumann Laplacian") {
  const SpectralBasis b(pi, 4);
  CHECK(b.eigenvalue(0) == 0.0);
  CHECK(b.eigenvalue(1) == doctest::Approx(1.0));
  CHECK(b.eigenvalue(2) == doctest::Approx(4.0));
  CHECK(b.eigenvalue(3) == doctest::Approx(9.0));
  CHECK(SpectralBasis(1.0, 2).eigenvalue(1) == doctest::Approx(pi * pi));
}

TEST_CASE("Gram and stiffness matrices under the quadrature rule") {
  const SpectralBasis b(pi, 8);
  const QuadratureRule q(pi, 32 * 8);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      const double gram = q.integrate([&](double x) { return b.eval(i, x) * b.eval(j, x); });
      const double stiff = q.integrate([&](double x) { return b.eval(i, x, 1) * b.eval(j, x, 1); });
      CHECK(std::abs(gram - (i == j ? 1.0 : 0.0)) < 1e-12);
      CHECK(std::abs(stiff - (i == j ? b.eigenvalue(i) : 0.0)) < 1e-12);
    }
  }
}

TEST_CASE("mode evaluation") {
  const SpectralBasis b(pi, 4);
  for (double x : {0.0, 0.4, 2.0, pi}) CHECK(b.eval(0, x, 1) == 0.0);
  CHECK(b.eval(2, 0.0) == doctest::Approx(std::sqrt(2.0 / pi)).epsilon(1e-15));
  for (double x : {0.1, 1.3, 2.9}) {
    CHECK(std::abs(b.eval(3, x, 2) + 9.0 * b.eval(3, x)) < 1e-13);
  }
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(b.eval(i, 0.0, 1)) < 1e-15);
    CHECK(std::abs(b.eval(i, pi, 1)) < 1e-14);
  }
  CHECK_THROWS_AS(b.eval(4, 0.0), InvalidArgument);
  CHECK_THROWS_AS(b.eval(0, pi + 0.1), InvalidArgument);
  CHECK_THROWS_AS(b.eval(0, 0.1, 3), InvalidArgument);
}

TEST_CASE("traces at the interval ends") {
  const SpectralBasis b(pi, 3);
  CHECK(b.trace(1, End::Right) == doctest::Approx(-std::sqrt(2.0 / pi)));
  CHECK(b.trace(2, End::Right) == doctest::Approx(std::sqrt(2.0 / pi)));
  const SpectralBasis c(2.5, 2);
  CHECK(c.trace(0, End::Left) == doctest::Approx(1.0 / std::sqrt(2.5)));
  CHECK(c.trace(0, End::Right) == doctest::Approx(1.0 / std::sqrt(2.5)));
}

TEST_CASE("projection onto the basis") {
  const SpectralBasis b(pi, 6);
  const QuadratureRule q(pi, 32 * 6);
  const Vector e3 = project(b, q, [&](double x) { return b.eval(3, x); });
  for (int i = 0; i < 6; ++i) CHECK(std::abs(e3[i] - (i == 3 ? 1.0 : 0.0)) < 1e-12);
  CHECK(project(b, q, [](double) { return 0.0; }).norm() == 0.0);

  // f(x) = x: analytic coefficients sqrt(2/pi) ((-1)^i - 1) / i^2 for i >= 1.
  const Vector c = project(b, q, [](double x) { return x; });
  CHECK(c[0] == doctest::Approx(std::pow(pi, 1.5) / 2.0).epsilon(1e-13));
  for (int i = 1; i < 6; ++i) {
    const double exact = std::sqrt(2.0 / pi) * ((i % 2 ? -1.0 : 1.0) - 1.0) / (i * i);
    CHECK(std::abs(c[i] - exact) < 1e-12);
  }
}

TEST_CASE("Parseval on the span") {
  const SpectralBasis b(2.0, 7);
  const QuadratureRule q(2.0, 32 * 7);
  std::mt19937 rng(3);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 10; ++trial) {
    Vector xi(7);
    for (int i = 0; i < 7; ++i) xi[i] = normal(rng);
    auto fn = [&](double x) { return b.synthesize(xi, x); };
    const double quad_norm = std::sqrt(q.integrate([&](double x) { return fn(x) * fn(x); }));
    CHECK(std::abs(norm(project(b, q, fn), b, Space::L2) - quad_norm) < 1e-10);
  }
}

TEST_CASE("Sobolev-scale norms") {
  const SpectralBasis b(pi, 4);
  const Vector e0 = Vector::Unit(4, 0);
  CHECK(norm(e0, b, Space::L2) == 1.0);
  CHECK(norm(e0, b, Space::H1) == 1.0);
  CHECK(norm(e0, b, Space::H1Dual) == 1.0);
  CHECK(norm(e0, b, Space::LaplacianL2) == 0.0);
  const Vector e2 = Vector::Unit(4, 2);
  CHECK(norm(e2, b, Space::H1) == doctest::Approx(std::sqrt(5.0)));
  CHECK(norm(e2, b, Space::H1Dual) == doctest::Approx(1.0 / std::sqrt(5.0)));

  std::mt19937 rng(11);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 100; ++trial) {
    Vector xi(4);
    for (int i = 0; i < 4; ++i) xi[i] = normal(rng);
    CHECK(norm(xi, b, Space::H1Dual) <= norm(xi, b, Space::L2));
    CHECK(norm(xi, b, Space::L2) <= norm(xi, b, Space::H1));
  }
  CHECK_THROWS_AS(norm(Vector::Zero(3), b, Space::L2), InvalidArgument);
}

TEST_CASE("the (H1)* norm is the dual of H1 on the span") {
  // sup over unit-H1 eta of <xi, eta>, brute force on a dense circle for n = 2.
  const SpectralBasis b(1.3, 2);
  std::mt19937 rng(5);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 5; ++trial) {
    Vector xi(2);
    xi << normal(rng), normal(rng);
    double best = 0.0;
    const int samples = 200000;
    for (int s = 0; s < samples; ++s) {
      const double theta = 2.0 * pi * s / samples;
      const double e0 = std::cos(theta) / std::sqrt(1.0 + b.eigenvalue(0));
      const double e1 = std::sin(theta) / std::sqrt(1.0 + b.eigenvalue(1));
      best = std::max(best, xi[0] * e0 + xi[1] * e1);
    }
    CHECK(best == doctest::Approx(norm(xi, b, Space::H1Dual)).epsilon(1e-8));
  }
}
