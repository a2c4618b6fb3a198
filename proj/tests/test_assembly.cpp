#include <doctest.h>

#include <numbers>
#include <random>

#include "jmgt/assembly.hpp"
#include "jmgt/error.hpp"
#include "test_support.hpp"

using namespace jmgt;
using std::numbers::pi;

namespace {

// Brute-force reference: Gauss-Legendre with 10x the nodes, explicit double loop.
Matrix reference_mass(const SpectralBasis& b, int nodes, const std::function<double(double)>& alpha) {
  const QuadratureRule fine(b.length(), nodes);
  Matrix m(b.size(), b.size());
  for (int i = 0; i < b.size(); ++i) {
    for (int j = 0; j < b.size(); ++j) {
      m(i, j) = fine.integrate([&](double x) { return alpha(x) * b.eval(i, x) * b.eval(j, x); });
    }
  }
  return m;
}

}  // namespace

TEST_CASE("stiffness matrix is diag(lambda)") {
  {
    const SpectralBasis b(pi, 4);
    const Matrix k = assemble_stiffness(b, QuadratureRule(pi, 128));
    Matrix expected = Matrix::Zero(4, 4);
    expected.diagonal() << 0.0, 1.0, 4.0, 9.0;
    CHECK((k - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
  {
    const SpectralBasis b(pi, 1);
    const Matrix k = assemble_stiffness(b, QuadratureRule(pi, 32));
    CHECK(k.rows() == 1);
    CHECK(std::abs(k(0, 0)) < 1e-15);
  }
  {
    const SpectralBasis b(2.0, 6);
    const Matrix k = assemble_stiffness(b, QuadratureRule(2.0, 32 * 6));
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) {
        const double exact = i == j ? std::pow(i * pi / 2.0, 2) : 0.0;
        CHECK(std::abs(k(i, j) - exact) < 1e-12);
      }
    }
  }
}

TEST_CASE("mass matrix for constant and affine coefficients") {
  const SpectralBasis b(pi, 3);
  const QuadratureRule q(pi, 96);
  CHECK((assemble_mass(b, q, CoefficientField::constant(1.0), 0.0) - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((assemble_mass(b, q, CoefficientField::constant(3.5), 0.7) - 3.5 * Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);

  const auto field = CoefficientField::analytic([](double x, double) { return x; },
                                                [](double, double) { return 1.0; },
                                                [](double, double) { return 0.0; });
  const Matrix m = assemble_mass(b, q, field, 0.0);
  CHECK(m(0, 1) == doctest::Approx(-2.0 * std::sqrt(2.0) / pi).epsilon(1e-12));
  const Matrix ref = reference_mass(b, 10 * q.size(), [](double x) { return x; });
  CHECK((m - ref).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("mass matrix spectrum stays inside the coefficient range") {
  const SpectralBasis b(pi, 10);
  const QuadratureRule q(pi, 320);
  const auto field = CoefficientField::analytic(
      [](double x, double t) { return 1.5 + 0.5 * std::cos(3.0 * x) * std::sin(t); },
      [](double x, double t) { return -1.5 * std::sin(3.0 * x) * std::sin(t); },
      [](double x, double t) { return 0.5 * std::cos(3.0 * x) * std::cos(t); });
  TimeVaryingMass sampler(b, q, field);
  for (double t : {0.0, 0.5, 1.57, 3.0, 4.7}) {
    const Matrix& m = sampler.at(t);
    CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);
    const Vector eig = Eigen::SelfAdjointEigenSolver<Matrix>(m).eigenvalues();
    CHECK(eig.minCoeff() >= 1.0 - 1e-8);
    CHECK(eig.maxCoeff() <= 2.0 + 1e-8);
    CHECK(&sampler.at(t) == &m);
  }
}

TEST_CASE("boundary trace matrices") {
  const SpectralBasis b(pi, 2);
  const Matrix br = assemble_boundary(b, End::Right);
  Matrix expected(2, 2);
  expected << 1.0 / pi, -std::sqrt(2.0) / pi, -std::sqrt(2.0) / pi, 2.0 / pi;
  CHECK((br - expected).cwiseAbs().maxCoeff() < 1e-15);

  const SpectralBasis b3(pi, 3);
  const Matrix bl = assemble_boundary(b3, End::Left);
  const Matrix b3r = assemble_boundary(b3, End::Right);
  for (const Matrix* m : {&bl, &b3r}) {
    Eigen::FullPivLU<Matrix> lu(*m);
    lu.setThreshold(1e-12);
    CHECK(lu.rank() == 1);
    CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(*m).eigenvalues().minCoeff() >= -1e-14);
  }
  std::mt19937 rng(1);
  std::normal_distribution<double> normal;
  Vector v(3);
  for (int i = 0; i < 3; ++i) v[i] = normal(rng);
  const Vector w = b3.traces(End::Right);
  CHECK(((b3r * v) - w * w.dot(v)).norm() < 1e-14);
}

TEST_CASE("load vector") {
  const SpectralBasis b(pi, 4);
  const QuadratureRule q(pi, 128);
  const ModelParams params{4.0, 0.5, 0.125, 0.0, 0.0};  // b = 1
  CHECK(assemble_load(b, q, SourceField::zero(), WindowedSignal{}, params, 0.3, BoundaryMode::PureNeumann).norm() == 0.0);

  const WindowedSignal g{1.0, 2.0, 5, 0.5};
  const double t0 = 0.8;
  const Vector load = assemble_load(b, q, SourceField::zero(), g, params, t0, BoundaryMode::Mixed);
  const double flux = 4.0 * signal_eval(g, t0, 0) + 1.0 * signal_eval(g, t0, 1);
  for (int i = 0; i < 4; ++i) CHECK(load[i] == doctest::Approx(flux * b.trace(i, End::Left)).epsilon(1e-14));

  const SourceField f{[](double x, double) { return std::cos(2.0 * x); }, {}};
  const Vector fl = assemble_load(b, q, f, WindowedSignal{}, params, 0.0, BoundaryMode::PureNeumann);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(fl[i] - (i == 2 ? std::sqrt(pi / 2.0) : 0.0)) < 1e-12);
}

TEST_CASE("load is jointly linear in (f, g)") {
  const SpectralBasis b(1.7, 5);
  const QuadratureRule q(1.7, 160);
  const ModelParams params{2.0, 0.3, 0.05, 0.0, 0.0};
  const SourceField f1{[](double x, double t) { return x * t; }, {}};
  const SourceField f2{[](double x, double t) { return std::sin(x + t); }, {}};
  const WindowedSignal g1{0.7, 3.0, 5, 0.0};
  WindowedSignal g1x3 = g1;
  g1x3.amplitude *= 3.0;
  const SourceField sum{[&](double x, double t) { return f1(x, t) + 3.0 * f2(x, t); }, {}};
  const double t = 1.1;
  const Vector lhs = assemble_load(b, q, sum, g1x3, params, t, BoundaryMode::PureNeumann);
  const Vector rhs = assemble_load(b, q, f1, WindowedSignal{}, params, t, BoundaryMode::PureNeumann) +
                     3.0 * assemble_load(b, q, f2, g1, params, t, BoundaryMode::PureNeumann);
  CHECK((lhs - rhs).norm() < 1e-12);
}

TEST_CASE("harmonic extension") {
  CHECK(harmonic_extension(pi, 0.0).value(1.0) == 0.0);
  const HarmonicExtension n = harmonic_extension(pi, 1.0);
  CHECK(n.value(0.0) == doctest::Approx(1.0 / std::tanh(pi)).epsilon(1e-15));

  // Residual -v'' + v and Neumann data from sixth-order differences of v itself.
  auto v = [&](double x) { return n.value(x); };
  double worst = 0.0;
  const double h = 1e-2;
  for (int j = 0; j < 1000; ++j) {
    const double x = 0.05 + (pi - 0.1) * j / 999.0;
    const double vxx = test::central_difference(v, x, 2, h);
    worst = std::max(worst, std::abs(-vxx + v(x)));
  }
  CHECK(worst < 1e-10);
  const auto d1 = test::fd_weights({0.0, 1e-3, 2e-3, 3e-3, 4e-3, 5e-3, 6e-3}, 1);
  double v0 = 0.0, vl = 0.0;
  for (int j = 0; j < 7; ++j) {
    v0 += d1[static_cast<std::size_t>(j)] * v(j * 1e-3);
    vl -= d1[static_cast<std::size_t>(j)] * v(pi - j * 1e-3);
  }
  CHECK(-v0 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(vl) < 1e-9);

  const HarmonicExtension n2 = harmonic_extension(pi, 2.0);
  for (double x : {0.0, 0.5, 2.0, pi}) CHECK(n2.value(x) == doctest::Approx(2.0 * n.value(x)).epsilon(1e-15));
  CHECK_THROWS_AS(harmonic_extension(0.0, 1.0), InvalidArgument);
}

TEST_CASE("lifted forcing") {
  const double L = pi;
  const ModelParams params{2.0, 0.3, 0.2, 0.0, 0.0};
  const SourceField f{[](double x, double t) { return x + t; }, {}};
  const auto ones = CoefficientField::constant(1.0);

  auto same = lift_forcing(WindowedSignal{}, ones, f, params, L, 0.4);
  for (double x : {0.0, 1.0, 3.0}) CHECK(same(x) == f(x, 0.4));

  const WindowedSignal g{0.9, 2.5, 5, 0.3};
  const ModelParams no_tau{2.0, 0.3, 0.0, 0.0, 0.0};
  const double t = 1.3;
  auto lifted = lift_forcing(g, ones, SourceField::zero(), no_tau, L, t);
  const double scale = -signal_eval(g, t, 2) + 2.0 * signal_eval(g, t, 0) + 0.3 * signal_eval(g, t, 1);
  for (double x : {0.0, 0.7, 2.2}) {
    CHECK(lifted(x) == doctest::Approx(scale * HarmonicExtension::profile(L, x)).epsilon(1e-13));
  }

  // Term-by-term oracle with a variable coefficient.
  const auto alpha = CoefficientField::analytic([](double x, double s) { return 1.0 + 0.1 * x * s; },
                                                [](double, double s) { return 0.1 * s; },
                                                [](double x, double) { return 0.1 * x; });
  auto full = lift_forcing(g, alpha, f, params, L, t);
  for (double x : {0.0, 1.1, pi}) {
    const double nx = harmonic_extension(L, 1.0).value(x);
    const double expected = f(x, t) - params.tau * signal_eval(g, t, 3) * nx -
                            alpha.alpha(x, t) * signal_eval(g, t, 2) * nx +
                            params.c2 * signal_eval(g, t, 0) * nx + params.b() * signal_eval(g, t, 1) * nx;
    CHECK(full(x) == doctest::Approx(expected).epsilon(1e-13));
  }
  CHECK_THROWS_AS(lift_forcing(WindowedSignal{1.0, 1.0, 1, 0.0}, ones, f, params, L, t), InvalidArgument);
}
