#pragma once

#include <vector>

#include "enstro/conformal.hpp"
#include "enstro/operators.hpp"

namespace enstro {

/// Disk-plane velocity in spectral form, including the uniform far-field flow
/// (which lives in mode 1).
struct VelocityField {
  GridPtr grid;
  Eigen::MatrixXcd radial;     ///< (u_r)_k
  Eigen::MatrixXcd azimuthal;  ///< (u_phi)_k
  Eigen::MatrixXcd stream;     ///< psi_k, total streamfunction
  double v_inf = 0.0;

  Index K() const { return radial.cols() - 1; }
};

/// Fourier coefficients g_k of a function on the circle |z| = r0, k = 0..K.
struct BoundaryTrace {
  double r0 = 1.0;
  Eigen::VectorXcd coeffs;

  Index K() const { return coeffs.size() - 1; }
  Complex at(Index k) const { return k >= 0 ? coeffs(k) : std::conj(coeffs(-k)); }
};

/// M_k = (1/2pi) int_Omega w / Phi^k dx = sum_i weights_i r_i^{-k} (J w)_k(r_i).
Eigen::VectorXcd moments(const SpectralField& w, const JacobianWeight& jw, Index kmax);
Eigen::VectorXcd moments(const SpectralField& w, const ConformalMap& map, Index kmax);

/// Per-mode streamfunction solver: Delta_k psi_k = -(J w)_k, psi_k(r0) = 0 and the
/// decaying far-field condition psi' + |k| psi / r = 0 at Rmax (zero flux of
/// the stiffness form). Factorizations are computed once.
class BiotSavartSolver {
 public:
  BiotSavartSolver(GridPtr grid, Index K, JacobianWeight jacobian);

  /// Throws NumericalError when the circulation moment M_0 is nonzero.
  VelocityField velocity(const SpectralField& w, double v_inf) const;
  const JacobianWeight& jacobian() const { return jacobian_; }

 private:
  GridPtr grid_;
  Index K_;
  JacobianWeight jacobian_;
  std::vector<Tridiagonal<double>> solvers_;
};

VelocityField velocity_from_vorticity(const SpectralField& w, double v_inf,
                                      const ConformalMap& map);

/// max over the boundary circle of |u_phi(r0, phi)|.
double boundary_slip(const VelocityField& v, Index nphi = 0);

/// [G_tau f]_k = -(r0^{|k|-1}/2) int_{r0}^{Rmax} s^{1-|k|} f_k(s) ds.
BoundaryTrace gtau_trace(const SpectralField& f);

/// Boundary trace of the mapped operator L: gtau_trace of J f.
BoundaryTrace l_trace(const SpectralField& f, const ConformalMap& map);

}  // namespace enstro
