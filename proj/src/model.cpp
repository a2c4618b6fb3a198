#include "jmgt/model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "jmgt/error.hpp"

namespace jmgt {

std::vector<std::string> ModelParams::validate() const {
  std::vector<std::string> errors;
  if (!(c2 > 0.0)) errors.emplace_back("c2 must be > 0");
  if (!(delta > 0.0)) errors.emplace_back("delta must be > 0");
  if (!(tau >= 0.0)) errors.emplace_back("tau must be >= 0");
  if (!(beta >= 0.0)) errors.emplace_back("beta must be >= 0");
  if (!std::isfinite(k)) errors.emplace_back("k must be finite");
  return errors;
}

double derived_b(const ModelParams& params) { return params.b(); }

std::vector<std::string> WindowedSignal::validate() const {
  std::vector<std::string> errors;
  if (power < 5) errors.emplace_back("power must be >= 5");
  if (!(decay >= 0.0)) errors.emplace_back("decay must be >= 0");
  if (!std::isfinite(amplitude)) errors.emplace_back("amplitude must be finite");
  if (!std::isfinite(omega)) errors.emplace_back("omega must be finite");
  if (!(window_end > 0.0)) errors.emplace_back("window_end must be > 0");
  return errors;
}

namespace {

// d^i/dt^i of x^p at x, scaled by the chain factor scale^i.
double monomial_derivative(int p, int i, double x, double scale) {
  if (i > p) return 0.0;
  double falling = 1.0;
  for (int j = 0; j < i; ++j) falling *= static_cast<double>(p - j);
  return falling * std::pow(x, p - i) * std::pow(scale, i);
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * static_cast<double>(n - k + j) / static_cast<double>(j);
  return r;
}

}  // namespace

double signal_eval(const WindowedSignal& sig, double t, int order) {
  if (order < 0 || order > kMaxSignalOrder) {
    throw InvalidArgument("signal_eval: unsupported derivative order " + std::to_string(order));
  }
  if (t < 0.0) throw InvalidArgument("signal_eval: negative time");
  if (sig.amplitude == 0.0 || sig.omega == 0.0) return 0.0;
  if (sig.windowed() && t >= sig.window_end) return 0.0;

  // Envelope P(t) = t^p s(t)^p with s = 1 - t/window_end (s == 1 when unwindowed).
  double envelope[kMaxSignalOrder + 1];
  for (int j = 0; j <= order; ++j) {
    if (!sig.windowed()) {
      envelope[j] = monomial_derivative(sig.power, j, t, 1.0);
      continue;
    }
    const double s = 1.0 - t / sig.window_end;
    double sum = 0.0;
    for (int i = 0; i <= j; ++i) {
      sum += binomial(j, i) * monomial_derivative(sig.power, i, t, 1.0) *
             monomial_derivative(sig.power, j - i, s, -1.0 / sig.window_end);
    }
    envelope[j] = sum;
  }

  // Carrier e^{-sigma t} sin(omega t) = Im(e^{(i omega - sigma) t}).
  const std::complex<double> rate(-sig.decay, sig.omega);
  const std::complex<double> carrier_base = std::exp(rate * t);
  double result = 0.0;
  std::complex<double> rate_pow(1.0, 0.0);
  for (int j = 0; j <= order; ++j) {
    const double carrier = (rate_pow * carrier_base).imag();
    result += binomial(order, j) * envelope[order - j] * carrier;
    rate_pow *= rate;
  }
  return sig.amplitude * result;
}

std::vector<int> validate_compatibility(const WindowedSignal& sig, int required_order) {
  std::vector<int> violations;
  const int upto = std::min(required_order, kMaxSignalOrder + 1);
  for (int m = 0; m < upto; ++m) {
    if (signal_eval(sig, 0.0, m) != 0.0) violations.push_back(m);
  }
  return violations;
}

int SolverConfig::steps() const {
  return static_cast<int>(std::llround(final_time / dt));
}

int SolverConfig::quadrature_nodes() const {
  return quad_points > 0 ? quad_points : 32 * n_modes;
}

int SolverConfig::eval_points() const {
  return eval_grid > 0 ? eval_grid : 16 * n_modes;
}

std::vector<std::string> SolverConfig::validate() const {
  std::vector<std::string> errors;
  if (!(dt > 0.0)) errors.emplace_back("dt must be > 0");
  if (!(final_time > 0.0)) errors.emplace_back("T must be > 0");
  if (dt > 0.0 && final_time > 0.0 && !(dt < final_time)) errors.emplace_back("dt must be < T");
  if (n_modes < 1) errors.emplace_back("n_modes must be >= 1");
  if (quad_points != 0 && quad_points < 4 * n_modes) errors.emplace_back("quad_points must be >= 4 * n_modes");
  if (!(picard_tol > 0.0)) errors.emplace_back("picard_tol must be > 0");
  if (picard_max < 1) errors.emplace_back("picard_max must be >= 1");
  if (eval_grid < 0) errors.emplace_back("eval_grid must be positive");
  return errors;
}

}  // namespace jmgt
