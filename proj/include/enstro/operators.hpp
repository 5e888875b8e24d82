#pragma once

#include <cmath>

#include "enstro/grid.hpp"

namespace enstro {

/// Symmetric or general tridiagonal matrix with a cached Thomas factorization.
/// The matrix scalar may be real while right-hand sides are complex.
template <typename Scalar>
class Tridiagonal {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Tridiagonal() = default;
  Tridiagonal(Vector lower, Vector diag, Vector upper)
      : lower_(std::move(lower)), diag_(std::move(diag)), upper_(std::move(upper)) {
    const Index n = diag_.size();
    if (lower_.size() != n - 1 || upper_.size() != n - 1) {
      throw ShapeError("Tridiagonal: band sizes do not match");
    }
    factor();
  }

  Index size() const { return diag_.size(); }

  template <typename Derived>
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> solve(
      const Eigen::MatrixBase<Derived>& rhs) const {
    using R = typename Derived::Scalar;
    const Index n = size();
    if (rhs.size() != n) throw ShapeError("Tridiagonal::solve: rhs length mismatch");
    Eigen::Matrix<R, Eigen::Dynamic, 1> x(n);
    x(0) = rhs(0) / pivot_(0);
    for (Index i = 1; i < n; ++i) x(i) = (rhs(i) - lower_(i - 1) * x(i - 1)) / pivot_(i);
    for (Index i = n - 2; i >= 0; --i) x(i) -= factor_(i) * x(i + 1);
    return x;
  }

  template <typename Derived>
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> apply(
      const Eigen::MatrixBase<Derived>& x) const {
    const Index n = size();
    Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> y(n);
    for (Index i = 0; i < n; ++i) {
      y(i) = diag_(i) * x(i);
      if (i > 0) y(i) += lower_(i - 1) * x(i - 1);
      if (i + 1 < n) y(i) += upper_(i) * x(i + 1);
    }
    return y;
  }

 private:
  void factor() {
    const Index n = size();
    pivot_.resize(n);
    factor_.resize(n > 0 ? n - 1 : 0);
    pivot_(0) = diag_(0);
    for (Index i = 1; i < n; ++i) {
      if (pivot_(i - 1) == Scalar(0)) throw NumericalError("Tridiagonal: zero pivot");
      factor_(i - 1) = upper_(i - 1) / pivot_(i - 1);
      pivot_(i) = diag_(i) - lower_(i - 1) * factor_(i - 1);
    }
    if (n > 0 && pivot_(n - 1) == Scalar(0)) throw NumericalError("Tridiagonal: zero pivot");
  }

  Vector lower_, diag_, upper_;
  Vector pivot_, factor_;
};

/// Discrete radial operators for Fourier mode k.
///
/// D_k f = f' + |k| f / r is written as r^{-|k|} (r^{|k|} f)' and discretized
/// cell by cell, (D f)_c = [ (r_{c+1}/m_c)^{|k|} f_{c+1} - (r_c/m_c)^{|k|} f_c ] / h_c
/// with m_c the cell midpoint. The stiffness matrix is A = D^T Q D with
/// Q_c = int_cell r dr, and the mode Laplacian is -A / weights. Both annihilate
/// samples of r^{-|k|} exactly, and w^T A w is the discrete sum of squares
/// int |D_k w|^2 r dr, so the quadratic form is dissipative by construction.
/// The Robin condition r0 w' + |k| w = 0 at r0, which equals r0 D_k w(r0) = 0,
/// is the zero-flux (natural) condition of this form.
class ModeOperator {
 public:
  ModeOperator(GridPtr grid, Index k);

  Index k() const { return k_; }
  const RadialGrid& grid() const { return *grid_; }

  /// Stiffness bands over all nodes: diagonal (n) and off-diagonal (n - 1).
  const Eigen::VectorXd& stiffness_diag() const { return diag_; }
  const Eigen::VectorXd& stiffness_off() const { return off_; }

  /// D_k on cells.
  Eigen::VectorXcd cell_dk(const Eigen::Ref<const Eigen::VectorXcd>& p) const;
  /// A p over all nodes.
  Eigen::VectorXcd apply_stiffness(const Eigen::Ref<const Eigen::VectorXcd>& p) const;
  /// sum_c Q_c |(D p)_c|^2.
  double dissipation(const Eigen::Ref<const Eigen::VectorXcd>& p) const;

  /// Delta_k p: finite-volume rows in the interior, one-sided stencils at both ends.
  Eigen::VectorXcd laplacian(const Eigen::Ref<const Eigen::VectorXcd>& p) const;
  /// D_k p at the nodes via the three-point derivative of r^{|k|} p.
  Eigen::VectorXcd dk_nodes(const Eigen::Ref<const Eigen::VectorXcd>& p) const;
  /// r0 p'(r0) + |k| p(r0), second-order one-sided.
  Complex robin_row(const Eigen::Ref<const Eigen::VectorXcd>& p) const;
  /// Finite-volume balance of the first (boundary) row: -(A p)_0. For smooth p
  /// this equals r0 D_k p(r0) + weights_0 Delta_k p(r0) to second order.
  Complex boundary_flux(const Eigen::Ref<const Eigen::VectorXcd>& p) const;

 private:
  GridPtr grid_;
  Index k_;
  Eigen::VectorXd left_, right_;  // cell coefficients of D_k
  Eigen::VectorXd diag_, off_;
};

/// Delta_k p = (1/r)(r p')' - k^2 p / r^2.
Eigen::VectorXcd apply_mode_laplacian(const Eigen::Ref<const Eigen::VectorXcd>& p, Index k,
                                      const GridPtr& grid);
/// D_k p = p' + |k| p / r.
Eigen::VectorXcd apply_Dk(const Eigen::Ref<const Eigen::VectorXcd>& p, Index k,
                          const GridPtr& grid);

}  // namespace enstro
