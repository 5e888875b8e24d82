#include "enstro/biot_savart.hpp"

#include <cmath>

namespace enstro {

Eigen::VectorXcd moments(const SpectralField& w, const JacobianWeight& jw, Index kmax) {
  if (kmax > w.K()) throw ShapeError("moments: kmax exceeds K");
  const SpectralField src = apply_jacobian(jw, w);
  const RadialGrid& g = w.grid();
  Eigen::VectorXcd m(kmax + 1);
  for (Index k = 0; k <= kmax; ++k) {
    const Eigen::VectorXd weight = g.weights().cwiseProduct(
        g.nodes().unaryExpr([&](double r) { return std::pow(r, -static_cast<double>(k)); }));
    m(k) = (weight.cast<Complex>().array() * src.mode(k).array()).sum();
  }
  return m;
}

Eigen::VectorXcd moments(const SpectralField& w, const ConformalMap& map, Index kmax) {
  return moments(w, make_jacobian(map, w.grid_ptr(), w.K()), kmax);
}

BiotSavartSolver::BiotSavartSolver(GridPtr grid, Index K, JacobianWeight jacobian)
    : grid_(std::move(grid)), K_(K), jacobian_(std::move(jacobian)) {
  const Index n = grid_->size();
  solvers_.reserve(static_cast<std::size_t>(K + 1));
  for (Index k = 0; k <= K; ++k) {
    const ModeOperator op(grid_, k);
    const Eigen::VectorXd off = op.stiffness_off().tail(n - 2);
    solvers_.emplace_back(off, op.stiffness_diag().tail(n - 1), off);
  }
}

VelocityField BiotSavartSolver::velocity(const SpectralField& w, double v_inf) const {
  if (w.K() != K_ || !w.grid().same_nodes(*grid_)) {
    throw ShapeError("BiotSavartSolver: field does not match solver");
  }
  const RadialGrid& g = *grid_;
  const Index n = g.size();
  const SpectralField src = apply_jacobian(jacobian_, w);

  const Eigen::VectorXd& W = g.weights();
  const Complex circulation = (W.cast<Complex>().array() * src.mode(0).array()).sum();
  const double scale = W.dot(src.mode(0).cwiseAbs());
  if (std::abs(circulation) > 1e-8 * scale) {
    throw NumericalError(
        "velocity_from_vorticity: nonzero circulation moment M_0; project the field first");
  }

  VelocityField v;
  v.grid = grid_;
  v.v_inf = v_inf;
  v.stream = Eigen::MatrixXcd::Zero(n, K_ + 1);
  for (Index k = 0; k <= K_; ++k) {
    const Eigen::VectorXcd rhs = W.tail(n - 1).cwiseProduct(src.mode(k).tail(n - 1));
    v.stream.col(k).tail(n - 1) = solvers_[static_cast<std::size_t>(k)].solve(rhs);
  }
  v.azimuthal = -radial_derivative(v.stream, g);

  if (K_ >= 1 && v_inf != 0.0) {
    // Potential flow past the disk, psi = v_inf (r - r0^2/r) sin(phi).
    const double r0 = g.r0();
    for (Index i = 0; i < n; ++i) {
      const double r = g.node(i);
      v.stream(i, 1) += Complex(0.0, -0.5 * v_inf * (r - r0 * r0 / r));
      v.azimuthal(i, 1) += Complex(0.0, 0.5 * v_inf * (1.0 + r0 * r0 / (r * r)));
    }
  }

  v.radial.resize(n, K_ + 1);
  for (Index k = 0; k <= K_; ++k) {
    v.radial.col(k) = Complex(0.0, static_cast<double>(k)) *
                      v.stream.col(k).cwiseQuotient(g.nodes().cast<Complex>());
  }
  return v;
}

VelocityField velocity_from_vorticity(const SpectralField& w, double v_inf,
                                      const ConformalMap& map) {
  const BiotSavartSolver solver(w.grid_ptr(), w.K(), make_jacobian(map, w.grid_ptr(), w.K()));
  return solver.velocity(w, v_inf);
}

double boundary_slip(const VelocityField& v, Index nphi) {
  if (nphi == 0) nphi = 4 * v.K() + 4;
  const Eigen::MatrixXd u = synthesize(v.azimuthal.topRows(1), nphi);
  return u.cwiseAbs().maxCoeff();
}

BoundaryTrace gtau_trace(const SpectralField& f) {
  const RadialGrid& g = f.grid();
  const double r0 = g.r0();
  BoundaryTrace tr;
  tr.r0 = r0;
  tr.coeffs.resize(f.K() + 1);
  for (Index k = 0; k <= f.K(); ++k) {
    const Eigen::VectorXd weight = g.weights().cwiseProduct(
        g.nodes().unaryExpr([&](double r) { return std::pow(r0 / r, static_cast<double>(k)); }));
    tr.coeffs(k) = -(weight.cast<Complex>().array() * f.mode(k).array()).sum() / (2.0 * r0);
  }
  tr.coeffs(0) = Complex(tr.coeffs(0).real(), 0.0);
  return tr;
}

BoundaryTrace l_trace(const SpectralField& f, const ConformalMap& map) {
  if (map.is_identity()) return gtau_trace(f);
  return gtau_trace(apply_jacobian(make_jacobian(map, f.grid_ptr(), f.K()), f));
}

}  // namespace enstro
