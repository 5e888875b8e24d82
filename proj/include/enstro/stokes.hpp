#pragma once

#include <memory>
#include <optional>
#include <vector>

#include <Eigen/SparseLU>

#include "enstro/biot_savart.hpp"
#include "enstro/conformal.hpp"
#include "enstro/operators.hpp"

namespace enstro {

enum class TimeScheme { crank_nicolson, backward_euler };
enum class CflAction { warn, abort };

struct SolverConfig {
  double nu = 1.0;
  /// Far-field speed; the flow at infinity is (v_inf, 0).
  double v_inf = 0.0;
  TimeScheme scheme = TimeScheme::crank_nicolson;
  double dt = 1e-3;
  ConformalMap map = disk_map(1.0);
  /// Angles used for the nonlinear product; 0 selects 3K.
  Index nphi = 0;
  bool advection = true;
  CflAction cfl = CflAction::warn;
};

struct FlowState {
  double t = 0.0;
  SpectralField w;
  SolverConfig config;
  /// Velocity reconstructed from w at time t, when available.
  std::optional<VelocityField> velocity;
  /// Explicit load of the previous time level, for the multistep advection scheme.
  std::optional<Eigen::MatrixXcd> previous_load;
};

/// Sum over k = -K..K of int |D_k w_k|^2 r dr, with the 2 pi factor of the
/// angular integral: the discrete dissipation of enstrophy.
double dissipation_sum(const SpectralField& w);

/// One implicit diffusion step of  J dw/dt = nu Delta w  in disk coordinates with
/// the Robin condition at r0 and w(Rmax) = 0.
///
/// The semi-discrete system is  M_J dw/dt = -nu A w + load, where M_J is the
/// lumped mass weighted by J (mode coupling through the angular modes of J)
/// and A the mode stiffness of ModeOperator. For the disk each mode is an
/// independent tridiagonal solve; other maps assemble one sparse system over
/// k = -K..K. Factorizations are computed once per instance.
class DiffusionSolver {
 public:
  DiffusionSolver(GridPtr grid, Index K, const ConformalMap& map, double nu, double dt,
                  TimeScheme scheme);

  Index K() const { return K_; }
  double dt() const { return dt_; }
  const JacobianWeight& jacobian() const { return jacobian_; }
  const ModeOperator& mode_operator(Index k) const { return ops_[static_cast<std::size_t>(k)]; }

  /// Advance by dt. `load` (nodes x (K+1)) is integrated loads acting on the
  /// rows, e.g. quadrature weights times a source plus boundary terms; it is
  /// held constant over the step. The last node is kept at zero.
  SpectralField advance(const SpectralField& w, const Eigen::MatrixXcd* load = nullptr) const;

 private:
  SpectralField advance_disk(const SpectralField& w, const Eigen::MatrixXcd* load) const;
  SpectralField advance_coupled(const SpectralField& w, const Eigen::MatrixXcd* load) const;

  GridPtr grid_;
  Index K_;
  double nu_, dt_, theta_;
  JacobianWeight jacobian_;
  std::vector<ModeOperator> ops_;
  std::vector<Tridiagonal<double>> lhs_;
  std::shared_ptr<Eigen::SparseLU<Eigen::SparseMatrix<Complex>>> coupled_;
};

/// Crank-Nicolson (default) or backward-Euler step of the linear vorticity
/// equation. Builds a DiffusionSolver per call; time loops should hold one.
FlowState step_stokes(const FlowState& s, double dt);

/// Moment targets of the no-slip condition: 0 for k != 1, i v_inf for k = 1.
Eigen::VectorXcd moment_targets(Index K, double v_inf);

/// Window of the moment corrections: exp(-((r - r0)/width)^2); width <= 0 means r0.
Eigen::VectorXd correction_window(const RadialGrid& g, double width = 0.0);

/// Enforce the moment conditions M_k = target_k for k = 0..K.
///
/// Mode k is corrected by c_k * window(r) * (r0/r)^k with the last node pinned
/// to zero; this is the minimal change in the L2 norm weighted by 1/window.
/// The window has zero slope at r0, so each correction satisfies the Robin
/// condition. For mapped domains the J-weighted moments couple modes k and
/// k +- m; the coefficients then come from one real linear solve.
SpectralField project_orthogonality(const SpectralField& w, double v_inf, const ConformalMap& map,
                                    double width = 0.0);

}  // namespace enstro
