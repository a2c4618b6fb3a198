#pragma once

#include "jmgt/assembly.hpp"
#include "jmgt/basis.hpp"
#include "jmgt/model.hpp"
#include "jmgt/trajectory.hpp"

namespace jmgt {

/// Basis, quadrature and the time-independent operators of one discretization.
struct Discretization {
  Discretization(double length, const SolverConfig& config);

  SpectralBasis basis;
  QuadratureRule quad;
  Matrix stiffness;
  Matrix boundary;  ///< absorbing end x = L
};

/// Third-order Galerkin system
///   tau xi''' + (M(t) + b beta B) xi'' + (b K + c2 beta B) xi' + c2 K xi = F(t)
/// integrated by BDF2 with an implicit-Euler first step. B = 0 in PureNeumann mode.
Trajectory solve_smgt_linear(const ModelParams& params, const Discretization& disc,
                             const CoefficientField& field, const SourceField& f,
                             const WindowedSignal& g, const SolverConfig& config, BoundaryMode bc);

/// Second-order (tau = 0) system
///   (M(t) + delta beta B) xi'' + (delta K + c2 beta B) xi' + c2 K xi = F(t),
/// F built with delta in place of b. tau in `params` is ignored.
Trajectory solve_westervelt_linearized(const ModelParams& params, const Discretization& disc,
                                       const CoefficientField& field, const SourceField& f,
                                       const WindowedSignal& g, const SolverConfig& config,
                                       BoundaryMode bc);

/// xi''' = (F - (M + b beta B) xi'' - (b K + c2 beta B) xi' - c2 K xi) / tau at step m.
/// `boundary` is the B_Sigma matrix, or a zero matrix in PureNeumann mode.
Vector recover_third(const Trajectory& traj, std::size_t m, const Matrix& mass,
                     const Matrix& stiffness, const Matrix& boundary, const Vector& load);

}  // namespace jmgt
