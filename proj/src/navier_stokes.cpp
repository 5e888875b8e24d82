#include "enstro/navier_stokes.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

namespace enstro {

AdvectionTerm advection(const VelocityField& v, const SpectralField& w, Index nphi) {
  const Index K = w.K();
  if (v.K() != K || !v.grid->same_nodes(w.grid())) {
    throw ShapeError("advection: velocity and vorticity do not match");
  }
  if (nphi < 3 * K) throw AliasingError("advection: nphi must be at least 3K for dealiasing");
  const RadialGrid& g = w.grid();
  const Index n = g.size();

  const Eigen::MatrixXcd dwdr = radial_derivative(w.modes(), g);
  Eigen::MatrixXcd dwdphi_r(n, K + 1);
  for (Index k = 0; k <= K; ++k) {
    dwdphi_r.col(k) = Complex(0.0, static_cast<double>(k)) *
                      w.mode(k).cwiseQuotient(g.nodes().cast<Complex>());
  }

  const Eigen::MatrixXd ur = synthesize(v.radial, nphi);
  const Eigen::MatrixXd uphi = synthesize(v.azimuthal, nphi);
  const Eigen::MatrixXd product =
      ur.cwiseProduct(synthesize(dwdr, nphi)) + uphi.cwiseProduct(synthesize(dwdphi_r, nphi));

  AdvectionTerm b{SpectralField(w.grid_ptr(), analyze(product, K)), 0.0};
  b.field.mode(0) = b.field.mode(0).real().cast<Complex>();
  b.field.modes().row(n - 1).setZero();
  b.max_speed = (ur.array().square() + uphi.array().square()).sqrt().maxCoeff();
  return b;
}

double boundary_advective_term(const SpectralField& w, const AdvectionTerm& b) {
  const BoundaryTrace g = gtau_trace(b.field);
  double sum = 0.0;
  for (Index k = 0; k <= w.K(); ++k) {
    sum += multiplicity(k) * (w.mode(k)(0) * std::conj(g.coeffs(k))).real();
  }
  return kTwoPi * w.grid().r0() * sum;
}

Eigen::MatrixXcd explicit_load(const AdvectionTerm& b) {
  const RadialGrid& g = b.field.grid();
  const Index n = g.size();
  const BoundaryTrace trace = gtau_trace(b.field);
  Eigen::MatrixXcd load(n, b.field.K() + 1);
  for (Index k = 0; k <= b.field.K(); ++k) {
    load.col(k) = -g.weights().cwiseProduct(b.field.mode(k));
    load(0, k) -= 2.0 * g.r0() * trace.coeffs(k);
  }
  load.row(n - 1).setZero();
  return load;
}

double cfl_number(const VelocityField& v, double dt, Index nphi) {
  const RadialGrid& g = *v.grid;
  const Eigen::MatrixXd ur = synthesize(v.radial, nphi).cwiseAbs();
  const Eigen::MatrixXd uphi = synthesize(v.azimuthal, nphi).cwiseAbs();
  const double dphi = kTwoPi / static_cast<double>(nphi);
  double worst = 0.0;
  for (Index i = 0; i < g.size(); ++i) {
    const double hr = i == 0 ? g.widths()(0)
                      : i == g.size() - 1 ? g.widths()(i - 1)
                                          : std::min(g.widths()(i - 1), g.widths()(i));
    const double rate = (ur.row(i).array() / hr + uphi.row(i).array() / (g.node(i) * dphi)).maxCoeff();
    worst = std::max(worst, rate);
  }
  return worst * dt;
}

namespace {
Index resolve_nphi(Index K, Index requested) { return requested > 0 ? requested : 3 * K; }
}  // namespace

NseStepper::NseStepper(GridPtr grid, Index K, const SolverConfig& config)
    : config_(config),
      nphi_(resolve_nphi(K, config.nphi)),
      diffusion_(grid, K, config.map, config.nu, config.dt, config.scheme),
      biot_savart_(grid, K, diffusion_.jacobian()) {
  if (nphi_ < 3 * K) throw ConfigError("NseStepper: nphi must be at least 3K");
}

AdvectionTerm NseStepper::advection_of(const FlowState& s) const {
  if (s.velocity) return advection(*s.velocity, s.w, nphi_);
  return advection(biot_savart_.velocity(s.w, config_.v_inf), s.w, nphi_);
}

FlowState NseStepper::step(const FlowState& s) {
  const double dt = config_.dt;
  if (!config_.advection) {
    last_.reset();
    return FlowState{s.t + dt, diffusion_.advance(s.w), s.config, std::nullopt, std::nullopt};
  }

  const VelocityField v = s.velocity ? *s.velocity : biot_savart_.velocity(s.w, config_.v_inf);
  last_ = advection(v, s.w, nphi_);
  const double cfl = cfl_number(v, dt, nphi_);
  max_cfl_ = std::max(max_cfl_, cfl);
  if (cfl > 1.0) {
    std::ostringstream msg;
    msg << "CFL number " << cfl << " exceeds 1 at t = " << s.t;
    if (config_.cfl == CflAction::abort) throw CflError(msg.str());
    if (!warned_) {
      std::cerr << "warning: " << msg.str() << '\n';
      warned_ = true;
    }
  }

  const Eigen::MatrixXcd load = explicit_load(*last_);
  Eigen::MatrixXcd effective;
  if (s.previous_load) {
    effective = 1.5 * load - 0.5 * (*s.previous_load);
  } else {
    // Startup: Heun predictor-corrector keeps the first step second order.
    const SpectralField predicted = diffusion_.advance(s.w, &load);
    const VelocityField vp = biot_savart_.velocity(predicted, config_.v_inf);
    effective = 0.5 * (load + explicit_load(advection(vp, predicted, nphi_)));
  }

  FlowState next{s.t + dt, diffusion_.advance(s.w, &effective), s.config, std::nullopt, load};
  next.velocity = biot_savart_.velocity(next.w, config_.v_inf);
  return next;
}

namespace {

// Real packing: Re c_0, then (Re c_k, Im c_k) for k >= 1.
Eigen::VectorXd pack_modes(const Eigen::VectorXcd& v) {
  Eigen::VectorXd out(2 * v.size() - 1);
  out(0) = v(0).real();
  for (Index k = 1; k < v.size(); ++k) {
    out(2 * k - 1) = v(k).real();
    out(2 * k) = v(k).imag();
  }
  return out;
}

Eigen::VectorXcd unpack_modes(const Eigen::VectorXd& x) {
  const Index K = (x.size() - 1) / 2;
  Eigen::VectorXcd v(K + 1);
  v(0) = x(0);
  for (Index k = 1; k <= K; ++k) v(k) = Complex(x(2 * k - 1), x(2 * k));
  return v;
}

}  // namespace

SpectralField compatible_initial_field(const SpectralField& w0, const NseStepper& stepper,
                                       double width, int iterations) {
  const SolverConfig& cfg = stepper.config();
  if (!cfg.advection) return w0;
  const RadialGrid& g = w0.grid();
  const double r0 = g.r0();
  if (width <= 0.0) width = r0;
  const Index K = w0.K();

  Eigen::MatrixXcd shapes(g.size(), K + 1);
  for (Index k = 0; k <= K; ++k) {
    shapes.col(k) = g.nodes()
                        .unaryExpr([&](double r) {
                          const double x = (r - r0) / width;
                          return (r - r0) * std::exp(-x * x) *
                                 std::pow(r0 / r, static_cast<double>(k));
                        })
                        .cast<Complex>();
  }
  shapes.row(g.size() - 1).setZero();

  auto field = [&](const Eigen::VectorXd& x) {
    SpectralField w = w0;
    const Eigen::VectorXcd c = unpack_modes(x);
    for (Index k = 0; k <= K; ++k) w.mode(k) += c(k) * shapes.col(k);
    return project_orthogonality(w, cfg.v_inf, cfg.map, width);
  };
  // Boundary row minus its pseudo boundary target, and the target scale.
  auto mismatch = [&](const SpectralField& w, double* scale) {
    const VelocityField v = stepper.biot_savart().velocity(w, cfg.v_inf);
    const BoundaryTrace trace = gtau_trace(advection(v, w, stepper.nphi()).field);
    Eigen::VectorXcd m(K + 1);
    double sc = 0.0;
    for (Index k = 0; k <= K; ++k) {
      const Complex target = 2.0 * r0 * trace.coeffs(k) / cfg.nu;
      m(k) = stepper.diffusion().mode_operator(k).robin_row(w.mode(k)) - target;
      sc = std::max(sc, std::abs(target));
    }
    if (scale) *scale = sc;
    return pack_modes(m);
  };

  const Index dim = 2 * K + 1;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
  double scale = 0.0;
  Eigen::VectorXd f = mismatch(field(x), &scale);
  Eigen::VectorXd best_x = x;
  double best = f.norm();
  const double tol = 1e-12 * std::max(scale, 1e-300);
  for (int it = 0; it < iterations && best > tol; ++it) {
    // Columns by finite differences; the map is affine up to the quadratic self-advection.
    Eigen::MatrixXd jac(dim, dim);
    const double h = 1e-6 * std::max(1.0, x.cwiseAbs().maxCoeff());
    for (Index j = 0; j < dim; ++j) {
      Eigen::VectorXd xp = x;
      xp(j) += h;
      jac.col(j) = (mismatch(field(xp), nullptr) - f) / h;
    }
    x -= jac.colPivHouseholderQr().solve(f);
    f = mismatch(field(x), nullptr);
    if (!f.allFinite()) break;
    if (f.norm() < best) {
      best = f.norm();
      best_x = x;
    } else {
      break;
    }
  }
  return field(best_x);
}

FlowState step_nse(const FlowState& s, double dt) {
  SolverConfig cfg = s.config;
  cfg.dt = dt;
  NseStepper stepper(s.w.grid_ptr(), s.w.K(), cfg);
  return stepper.step(s);
}

}  // namespace enstro
