#include "enstro/stokes.hpp"

#include <cmath>

#include <Eigen/QR>

#include "enstro/parallel.hpp"

namespace enstro {

// ---------------------------------------------------------------------------
// ModeOperator

ModeOperator::ModeOperator(GridPtr grid, Index k) : grid_(std::move(grid)), k_(k) {
  const RadialGrid& g = *grid_;
  const Index n = g.size();
  const double kk = static_cast<double>(std::abs(k));
  left_.resize(n - 1);
  right_.resize(n - 1);
  diag_ = Eigen::VectorXd::Zero(n);
  off_.resize(n - 1);
  for (Index c = 0; c < n - 1; ++c) {
    const double h = g.widths()(c);
    const double m = g.midpoints()(c);
    left_(c) = std::pow(g.node(c) / m, kk) / h;
    right_(c) = std::pow(g.node(c + 1) / m, kk) / h;
    const double q = h * m;
    diag_(c) += q * left_(c) * left_(c);
    diag_(c + 1) += q * right_(c) * right_(c);
    off_(c) = -q * left_(c) * right_(c);
  }
}

Eigen::VectorXcd ModeOperator::cell_dk(const Eigen::Ref<const Eigen::VectorXcd>& p) const {
  const Index n = grid_->size();
  if (p.size() != n) throw ShapeError("ModeOperator: profile length does not match grid");
  return right_.cwiseProduct(p.tail(n - 1)) - left_.cwiseProduct(p.head(n - 1));
}

Eigen::VectorXcd ModeOperator::apply_stiffness(const Eigen::Ref<const Eigen::VectorXcd>& p) const {
  const Index n = grid_->size();
  if (p.size() != n) throw ShapeError("ModeOperator: profile length does not match grid");
  Eigen::VectorXcd y = diag_.cwiseProduct(p);
  y.head(n - 1) += off_.cwiseProduct(p.tail(n - 1));
  y.tail(n - 1) += off_.cwiseProduct(p.head(n - 1));
  return y;
}

double ModeOperator::dissipation(const Eigen::Ref<const Eigen::VectorXcd>& p) const {
  const RadialGrid& g = *grid_;
  const Eigen::VectorXcd d = cell_dk(p);
  return (g.widths().cwiseProduct(g.midpoints()).array() * d.array().abs2()).sum();
}

Eigen::VectorXcd ModeOperator::dk_nodes(const Eigen::Ref<const Eigen::VectorXcd>& p) const {
  const RadialGrid& g = *grid_;
  const Index n = g.size();
  if (p.size() != n) throw ShapeError("ModeOperator: profile length does not match grid");
  const double kk = static_cast<double>(std::abs(k_));
  Eigen::VectorXcd out(n);
  for (Index i = 0; i < n; ++i) {
    const Index s = g.stencil_start(i);
    Complex acc{};
    for (Index j = 0; j < 3; ++j) {
      acc += g.d1()(i, j) * std::pow(g.node(s + j) / g.node(i), kk) * p(s + j);
    }
    out(i) = acc;
  }
  return out;
}

Eigen::VectorXcd ModeOperator::laplacian(const Eigen::Ref<const Eigen::VectorXcd>& p) const {
  const RadialGrid& g = *grid_;
  const Index n = g.size();
  Eigen::VectorXcd out = -apply_stiffness(p).cwiseQuotient(g.weights().cast<Complex>());
  // Delta_k p = r^{|k|-1} (r^{1-|k|} D_k p)' at the two end nodes.
  const Eigen::VectorXcd dk = dk_nodes(p);
  const double e = 1.0 - static_cast<double>(std::abs(k_));
  for (Index i : {Index{0}, n - 1}) {
    const Index s = g.stencil_start(i);
    Complex acc{};
    for (Index j = 0; j < 3; ++j) {
      acc += g.d1()(i, j) * std::pow(g.node(s + j) / g.node(i), e) * dk(s + j);
    }
    out(i) = acc;
  }
  return out;
}

Complex ModeOperator::robin_row(const Eigen::Ref<const Eigen::VectorXcd>& p) const {
  return grid_->r0() * dk_nodes(p)(0);
}

Complex ModeOperator::boundary_flux(const Eigen::Ref<const Eigen::VectorXcd>& p) const {
  return -apply_stiffness(p)(0);
}

Eigen::VectorXcd apply_mode_laplacian(const Eigen::Ref<const Eigen::VectorXcd>& p, Index k,
                                      const GridPtr& grid) {
  return ModeOperator(grid, k).laplacian(p);
}

Eigen::VectorXcd apply_Dk(const Eigen::Ref<const Eigen::VectorXcd>& p, Index k,
                          const GridPtr& grid) {
  return ModeOperator(grid, k).dk_nodes(p);
}

double dissipation_sum(const SpectralField& w) {
  double total = 0.0;
  for (Index k = 0; k <= w.K(); ++k) {
    total += multiplicity(k) * ModeOperator(w.grid_ptr(), k).dissipation(w.mode(k));
  }
  return kTwoPi * total;
}

// ---------------------------------------------------------------------------
// DiffusionSolver

DiffusionSolver::DiffusionSolver(GridPtr grid, Index K, const ConformalMap& map, double nu,
                                 double dt, TimeScheme scheme)
    : grid_(std::move(grid)),
      K_(K),
      nu_(nu),
      dt_(dt),
      theta_(scheme == TimeScheme::crank_nicolson ? 0.5 : 1.0) {
  if (!(dt > 0.0)) throw ConfigError("DiffusionSolver: dt must be positive");
  if (!(nu > 0.0)) throw ConfigError("DiffusionSolver: nu must be positive");
  if (std::abs(grid_->r0() - map.r0()) > 1e-12 * map.r0()) {
    throw ConfigError("DiffusionSolver: grid r0 differs from the map's disk radius");
  }
  jacobian_ = make_jacobian(map, grid_, K);
  const Index n = grid_->size();
  const Index m = n - 1;  // unknowns: all nodes but the outer one
  const Eigen::VectorXd& W = grid_->weights();
  const double a = theta_ * dt_ * nu_;

  ops_.reserve(static_cast<std::size_t>(K + 1));
  for (Index k = 0; k <= K; ++k) ops_.emplace_back(grid_, k);

  if (jacobian_.identity) {
    lhs_.reserve(static_cast<std::size_t>(K + 1));
    for (Index k = 0; k <= K; ++k) {
      const ModeOperator& op = ops_[static_cast<std::size_t>(k)];
      Eigen::VectorXd diag = W.head(m) + a * op.stiffness_diag().head(m);
      Eigen::VectorXd off = a * op.stiffness_off().head(m - 1);
      lhs_.emplace_back(off, diag, off);
    }
    return;
  }

  const Index M = jacobian_.bandwidth();
  const Index modes = 2 * K + 1;
  auto index = [&](Index k, Index i) { return (k + K) * m + i; };
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(static_cast<std::size_t>(modes * m * (2 * M + 3)));
  for (Index k = -K; k <= K; ++k) {
    const ModeOperator& op = ops_[static_cast<std::size_t>(std::abs(k))];
    for (Index i = 0; i < m; ++i) {
      for (Index s = -M; s <= M; ++s) {
        const Index src = k - s;
        if (src < -K || src > K) continue;
        const Complex js = s >= 0 ? jacobian_.modes(i, s) : std::conj(jacobian_.modes(i, -s));
        triplets.emplace_back(index(k, i), index(src, i), W(i) * js);
      }
      triplets.emplace_back(index(k, i), index(k, i), a * op.stiffness_diag()(i));
      if (i + 1 < m) {
        triplets.emplace_back(index(k, i), index(k, i + 1), a * op.stiffness_off()(i));
        triplets.emplace_back(index(k, i + 1), index(k, i), a * op.stiffness_off()(i));
      }
    }
  }
  Eigen::SparseMatrix<Complex> lhs(modes * m, modes * m);
  lhs.setFromTriplets(triplets.begin(), triplets.end());
  lhs.makeCompressed();
  coupled_ = std::make_shared<Eigen::SparseLU<Eigen::SparseMatrix<Complex>>>();
  coupled_->analyzePattern(lhs);
  coupled_->factorize(lhs);
  if (coupled_->info() != Eigen::Success) {
    throw NumericalError("DiffusionSolver: coupled factorization failed");
  }
}

SpectralField DiffusionSolver::advance(const SpectralField& w, const Eigen::MatrixXcd* load) const {
  if (w.K() != K_ || !w.grid().same_nodes(*grid_)) {
    throw ShapeError("DiffusionSolver::advance: field does not match solver");
  }
  if (load && (load->rows() != grid_->size() || load->cols() != K_ + 1)) {
    throw ShapeError("DiffusionSolver::advance: load shape mismatch");
  }
  SpectralField out = jacobian_.identity ? advance_disk(w, load) : advance_coupled(w, load);
  if (!out.is_finite()) throw NumericalError("DiffusionSolver: non-finite solution");
  return out;
}

SpectralField DiffusionSolver::advance_disk(const SpectralField& w,
                                            const Eigen::MatrixXcd* load) const {
  const Index n = grid_->size();
  const Index m = n - 1;
  const Eigen::VectorXd& W = grid_->weights();
  const double b = (1.0 - theta_) * dt_ * nu_;
  SpectralField out(grid_, K_);
  parallel_for(K_ + 1, [&](Index k) {
    const auto p = w.mode(k);
    Eigen::VectorXcd rhs = W.cwiseProduct(p) - b * ops_[static_cast<std::size_t>(k)].apply_stiffness(p);
    if (load) rhs += dt_ * load->col(k);
    out.mode(k).head(m) = lhs_[static_cast<std::size_t>(k)].solve(rhs.head(m));
    out.mode(k)(m) = 0.0;
  });
  out.enforce_reality();
  return out;
}

SpectralField DiffusionSolver::advance_coupled(const SpectralField& w,
                                               const Eigen::MatrixXcd* load) const {
  const Index n = grid_->size();
  const Index m = n - 1;
  const Eigen::VectorXd& W = grid_->weights();
  const double b = (1.0 - theta_) * dt_ * nu_;
  const SpectralField jw = apply_jacobian(jacobian_, w);
  Eigen::VectorXcd rhs((2 * K_ + 1) * m);
  for (Index k = 0; k <= K_; ++k) {
    Eigen::VectorXcd r = W.cwiseProduct(jw.mode(k)) -
                         b * ops_[static_cast<std::size_t>(k)].apply_stiffness(w.mode(k));
    if (load) r += dt_ * load->col(k);
    rhs.segment((k + K_) * m, m) = r.head(m);
    if (k > 0) rhs.segment((K_ - k) * m, m) = r.head(m).conjugate();
  }
  const Eigen::VectorXcd x = coupled_->solve(rhs);
  if (coupled_->info() != Eigen::Success) throw NumericalError("DiffusionSolver: solve failed");
  SpectralField out(grid_, K_);
  for (Index k = 0; k <= K_; ++k) {
    out.mode(k).head(m) = x.segment((k + K_) * m, m);
    out.mode(k)(m) = 0.0;
  }
  out.enforce_reality();
  return out;
}

FlowState step_stokes(const FlowState& s, double dt) {
  if (!(dt > 0.0)) throw ConfigError("step_stokes: dt must be positive");
  const DiffusionSolver solver(s.w.grid_ptr(), s.w.K(), s.config.map, s.config.nu, dt,
                               s.config.scheme);
  FlowState next{s.t + dt, solver.advance(s.w), s.config, std::nullopt, std::nullopt};
  return next;
}

// ---------------------------------------------------------------------------
// Moment projection

Eigen::VectorXcd moment_targets(Index K, double v_inf) {
  Eigen::VectorXcd t = Eigen::VectorXcd::Zero(K + 1);
  if (K >= 1) t(1) = Complex(0.0, v_inf);
  return t;
}

Eigen::VectorXd correction_window(const RadialGrid& g, double width) {
  const double r0 = g.r0();
  if (width <= 0.0) width = r0;
  Eigen::VectorXd win = ((g.nodes().array() - r0) / width).square().unaryExpr([](double x) {
    return std::exp(-x);
  });
  win(g.size() - 1) = 0.0;
  return win;
}

namespace {

Eigen::VectorXd correction_shape(const RadialGrid& g, const Eigen::VectorXd& window, Index k) {
  const double r0 = g.r0();
  return window.cwiseProduct(
      g.nodes().unaryExpr([&](double r) { return std::pow(r0 / r, static_cast<double>(k)); }));
}

// Real unknowns: c_0 (real), then (Re c_k, Im c_k) for k >= 1; same packing for moments.
Eigen::VectorXd pack(const Eigen::VectorXcd& v) {
  const Index K = v.size() - 1;
  Eigen::VectorXd out(2 * K + 1);
  out(0) = v(0).real();
  for (Index k = 1; k <= K; ++k) {
    out(2 * k - 1) = v(k).real();
    out(2 * k) = v(k).imag();
  }
  return out;
}

}  // namespace

SpectralField project_orthogonality(const SpectralField& w, double v_inf, const ConformalMap& map,
                                    double width) {
  const RadialGrid& g = w.grid();
  const Index K = w.K();
  if (K < 1) throw ConfigError("project_orthogonality: need K >= 1");
  const JacobianWeight jw = make_jacobian(map, w.grid_ptr(), K);
  const Eigen::VectorXcd targets = moment_targets(K, v_inf);
  const Eigen::VectorXd window = correction_window(g, width);

  std::vector<Eigen::VectorXd> shapes;
  shapes.reserve(static_cast<std::size_t>(K + 1));
  for (Index k = 0; k <= K; ++k) shapes.push_back(correction_shape(g, window, k));

  SpectralField out = w;
  out.enforce_reality();

  if (jw.identity) {
    const Eigen::VectorXcd current = moments(out, jw, K);
    for (Index k = 0; k <= K; ++k) {
      const Eigen::VectorXd weight = g.weights().cwiseProduct(
          g.nodes().unaryExpr([&](double r) { return std::pow(r, -static_cast<double>(k)); }));
      const double denom = weight.dot(shapes[static_cast<std::size_t>(k)]);
      Complex c = (targets(k) - current(k)) / denom;
      if (k == 0) c = Complex(c.real(), 0.0);
      if (c != Complex{}) out.mode(k) += c * shapes[static_cast<std::size_t>(k)];
    }
    return out;
  }

  // Response of the packed moments to each packed unit correction.
  const Index dim = 2 * K + 1;
  Eigen::MatrixXd response(dim, dim);
  for (Index col = 0; col < dim; ++col) {
    const Index k = (col + 1) / 2;
    const Complex unit = (col > 0 && col % 2 == 0) ? Complex(0.0, 1.0) : Complex(1.0, 0.0);
    SpectralField delta(w.grid_ptr(), K);
    delta.mode(k) = unit * shapes[static_cast<std::size_t>(k)];
    response.col(col) = pack(moments(delta, jw, K));
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(response);
  for (int pass = 0; pass < 2; ++pass) {
    const Eigen::VectorXd rhs = pack(targets - moments(out, jw, K));
    if (rhs.cwiseAbs().maxCoeff() == 0.0) break;
    const Eigen::VectorXd x = qr.solve(rhs);
    out.mode(0) += x(0) * shapes[0];
    for (Index k = 1; k <= K; ++k) {
      out.mode(k) += Complex(x(2 * k - 1), x(2 * k)) * shapes[static_cast<std::size_t>(k)];
    }
  }
  return out;
}

}  // namespace enstro
