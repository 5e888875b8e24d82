#pragma once

#include "enstro/biot_savart.hpp"
#include "enstro/stokes.hpp"

namespace enstro {

/// B(v, w) in disk coordinates. For mapped domains the disk-plane velocity is
/// used, so the transport term already carries the Jacobian factor.
struct AdvectionTerm {
  SpectralField field;
  /// Largest |v| on the angular grid.
  double max_speed = 0.0;
};

/// Pseudo-spectral (v, grad w): products on nphi >= 3K angles, truncated back
/// to K modes. The outer node is set to zero (it carries the Dirichlet row).
AdvectionTerm advection(const VelocityField& v, const SpectralField& w, Index nphi);

/// 2 pi r0 sum_{k=-K..K} Re( w_k(r0) conj([G_tau B]_k) ): the contour integral of
/// w times the tangential Biot-Savart trace of the advection term.
double boundary_advective_term(const SpectralField& w, const AdvectionTerm& b);

/// Rows of the explicit load for DiffusionSolver::advance: -weights * B plus the
/// pseudo boundary term -2 r0 [G_tau B]_k on the first row.
Eigen::MatrixXcd explicit_load(const AdvectionTerm& b);

/// dt * max over the polar grid of |u_r| / h_r + |u_phi| / (r dphi), with h_r
/// the smaller neighbouring radial cell.
double cfl_number(const VelocityField& v, double dt, Index nphi);

/// IMEX stepper for the vorticity transport equation
///   J dw/dt - nu Delta w + B(v, w) = 0,
/// with the pseudo boundary condition r0 w_k' + |k| w_k = (2 r0 / nu) [G_tau B]_k.
/// Diffusion is Crank-Nicolson (or backward Euler); advection and the boundary
/// right-hand side are Adams-Bashforth 2; the first step uses a Heun
/// predictor-corrector so that it is second order as well.
/// The boundary load and the advective load use the same quadrature, so the
/// discrete moments are conserved up to the flux through Rmax.
class NseStepper {
 public:
  NseStepper(GridPtr grid, Index K, const SolverConfig& config);

  FlowState step(const FlowState& s);

  const SolverConfig& config() const { return config_; }
  const DiffusionSolver& diffusion() const { return diffusion_; }
  const BiotSavartSolver& biot_savart() const { return biot_savart_; }
  Index nphi() const { return nphi_; }
  /// Largest CFL number seen so far.
  double max_cfl() const { return max_cfl_; }

  /// Advection term for a state, reusing its cached velocity when present.
  AdvectionTerm advection_of(const FlowState& s) const;
  /// Advection term of the input of the last step() (empty without advection).
  const std::optional<AdvectionTerm>& last_advection() const { return last_; }

 private:
  SolverConfig config_;
  Index nphi_;
  DiffusionSolver diffusion_;
  BiotSavartSolver biot_savart_;
  double max_cfl_ = 0.0;
  bool warned_ = false;
  std::optional<AdvectionTerm> last_;
};

/// Initial data compatible with the pseudo boundary condition.
///
/// A projected field satisfies the homogeneous Robin row, while the nonlinear
/// flow immediately requires r0 w_k' + |k| w_k = (2 r0 / nu) [G_tau B]_k. The
/// mismatch creates a sqrt(t) boundary layer that limits the time accuracy of
/// the first steps. This adds near-wall profiles (r - r0) exp(-((r - r0)/width)^2)
/// (r0/r)^k to match the boundary row and re-projects the moments. The
/// amplitudes come from Newton iterations with a finite-difference Jacobian;
/// the best iterate is returned when the mismatch stops decreasing.
SpectralField compatible_initial_field(const SpectralField& w, const NseStepper& stepper,
                                       double width = 0.0, int iterations = 8);

/// Single IMEX step; builds an NseStepper per call.
FlowState step_nse(const FlowState& s, double dt);

}  // namespace enstro
