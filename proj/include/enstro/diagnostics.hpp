#pragma once

#include <string>
#include <vector>

#include "enstro/navier_stokes.hpp"

namespace enstro {

/// Scalars of the enstrophy balance at one time level.
struct DiagnosticsRecord {
  double t = 0.0;
  double E = 0.0;  ///< enstrophy
  double P = 0.0;  ///< palinstrophy
  double S = 0.0;  ///< boundary H^{1/2} seminorm
  double D = 0.0;  ///< dissipation sum
  double A = 0.0;  ///< advective boundary term
  Eigen::VectorXcd moments;
  /// Filled by assign_residuals once neighbours are known.
  double residual_linear = 0.0;
  double residual_nonlinear = 0.0;
};

/// int w^2 J dx.
double enstrophy(const SpectralField& w, const JacobianWeight& jw);
double enstrophy(const SpectralField& w, const ConformalMap& map);

/// int |grad w|^2 dx = 2 pi sum_k int (|w_k'|^2 + k^2 |w_k|^2 / r^2) r dr.
double palinstrophy(const SpectralField& w);

/// 2 pi sum_{k=-K..K} |k| |w_k(r0)|^2.
double boundary_h12(const SpectralField& w);

/// Record at time t. `advective` is the advection term of the state (null for
/// Stokes runs, giving A = 0).
DiagnosticsRecord make_record(double t, const SpectralField& w, const JacobianWeight& jw,
                              const AdvectionTerm* advective = nullptr, Index kmax = 4);

/// Residuals of the enstrophy identities along a history with dE/dt from
/// centered differences (three-point one-sided at both ends):
///   linear     dE/dt / 2 + nu (P - S)   and   dE/dt / 2 + nu D
///   nonlinear  dE/dt / 2 + nu (P - S) + 2 A   and   dE/dt / 2 + nu D + 2 A
struct ResidualSeries {
  std::vector<double> linear_ps, linear_d, nonlinear_ps, nonlinear_d;
};

/// Time derivative of E along the history.
std::vector<double> enstrophy_rate(const std::vector<DiagnosticsRecord>& h);

/// Requires at least two records with increasing t.
ResidualSeries residual_linear(const std::vector<DiagnosticsRecord>& h, double nu);
ResidualSeries residual_nonlinear(const std::vector<DiagnosticsRecord>& h, double nu);

/// Stores the D-forms of both residuals into the records.
void assign_residuals(std::vector<DiagnosticsRecord>& h, double nu);

/// Signed contributions to dE/dt / 2.
struct SignSplit {
  double viscous = 0.0;   ///< -nu P
  double boundary = 0.0;  ///< +nu S
  double advective = 0.0; ///< -2 A
  double net = 0.0;
  /// P - S - D, which vanishes to discretization error.
  double quadratic_gap = 0.0;
  bool stokes_ok = true;  ///< P - S >= 0 and D >= 0, checked for Stokes runs

  std::string str() const;
};

SignSplit sign_split(const DiagnosticsRecord& r, double nu, bool stokes = false);

}  // namespace enstro
