#include <doctest.h>

#include <cmath>

#include "enstro/diagnostics.hpp"
#include "enstro/initial_conditions.hpp"

using namespace enstro;

namespace {

Eigen::VectorXcd power(const RadialGrid& g, double p) {
  return g.nodes().array().pow(p).cast<Complex>().matrix();
}

double interior_error(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  const Index n = a.size();
  return (a.segment(1, n - 2) - b.segment(1, n - 2)).cwiseAbs().maxCoeff();
}

FlowState ring_state(const GridPtr& g, Index K, double v_inf) {
  SolverConfig cfg;
  cfg.v_inf = v_inf;
  return FlowState{0.0, initial_field(InitialCondition{}, g, K, v_inf, disk_map(1.0)), cfg,
                   std::nullopt, std::nullopt};
}

}  // namespace

TEST_CASE("mode laplacian and D_k annihilate r^-k") {
  const GridPtr g = build_grid(1.0, 32.0, 256);
  for (Index k = 0; k <= 8; ++k) {
    const Eigen::VectorXcd p = power(*g, -double(k));
    CHECK(apply_mode_laplacian(p, k, g).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(apply_Dk(p, k, g).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(std::abs(ModeOperator(g, k).robin_row(p)) < 1e-9);
  }
}

TEST_CASE("mode laplacian of ln r vanishes and of r^-3 converges") {
  const GridPtr g0 = build_grid(1.0, 8.0, 256);
  const Eigen::VectorXcd ln = g0->nodes().array().log().cast<Complex>().matrix();
  CHECK(interior_error(apply_mode_laplacian(ln, 0, g0), Eigen::VectorXcd::Zero(256)) < 1e-3);

  std::vector<double> err;
  for (Index n : {64, 128, 256}) {
    const GridPtr g = build_grid(1.0, 8.0, n);
    const Eigen::VectorXcd lap = apply_mode_laplacian(power(*g, -3.0), 1, g);
    err.push_back(interior_error(lap, 8.0 * power(*g, -5.0)));
  }
  CHECK(std::log2(err[0] / err[1]) > 1.8);
  CHECK(std::log2(err[1] / err[2]) > 1.8);
}

TEST_CASE("D_k examples") {
  const GridPtr g = build_grid(1.0, 2.0, 1024, Stretch::uniform());
  const Eigen::VectorXcd r = power(*g, 1.0);
  CHECK(std::abs(apply_Dk(r, 2, g)(0) - 3.0) < 1e-5);
  const Eigen::VectorXcd sq = power(*g, 2.0);
  CHECK((apply_Dk(sq, 0, g) - 2.0 * r).cwiseAbs().maxCoeff() < 1e-10);
  CHECK_THROWS_AS(apply_Dk(Eigen::VectorXcd::Zero(3), 1, g), ShapeError);
}

TEST_CASE("dissipation_sum vanishes on zero and harmonic fields") {
  const GridPtr g = build_grid(1.0, 32.0, 256);
  CHECK(dissipation_sum(SpectralField(g, 4)) == 0.0);
  SpectralField w(g, 4);
  w.mode(3) = power(*g, -3.0);
  CHECK(dissipation_sum(w) < 1e-20);
}

TEST_CASE("Crank-Nicolson is second order on a manufactured solution") {
  // w_2(t, r) = exp(-t) psi(r) with psi(r0) = psi'(r0) = 0, forced so that it solves
  // dw/dt = nu Delta_2 w + f. The forcing enters as a midpoint load.
  const GridPtr g = build_grid(1.0, 16.0, 256);
  const Index k = 2;
  const double nu = 0.5;
  const Eigen::ArrayXd x = g->nodes().array() - 1.0;
  const Eigen::ArrayXd psi = x.square() * (-x.square()).exp();
  const Eigen::ArrayXd r = g->nodes().array();
  // Delta_2 psi from the analytic derivatives.
  const Eigen::ArrayXd e = (-x.square()).exp();
  const Eigen::ArrayXd d1 = (2.0 * x - 2.0 * x.cube()) * e;
  const Eigen::ArrayXd d2 = (2.0 - 10.0 * x.square() + 4.0 * x.pow(4)) * e;
  const Eigen::ArrayXd lap = d2 + d1 / r - 4.0 * psi / r.square();

  auto solve = [&](double dt) {
    const DiffusionSolver solver(g, 2, disk_map(1.0), nu, dt, TimeScheme::crank_nicolson);
    SpectralField w(g, 2);
    w.mode(k) = psi.cast<Complex>().matrix();
    const Index steps = static_cast<Index>(std::lround(0.5 / dt));
    for (Index n = 0; n < steps; ++n) {
      const double tm = (n + 0.5) * dt;
      Eigen::MatrixXcd load = Eigen::MatrixXcd::Zero(g->size(), 3);
      load.col(k) = (g->weights().array() * std::exp(-tm) * (-psi - nu * lap)).cast<Complex>().matrix();
      w = solver.advance(w, &load);
    }
    return Eigen::VectorXcd(w.mode(k));
  };
  const Eigen::VectorXcd a = solve(0.02), b = solve(0.01), c = solve(0.005);
  const double ratio = (a - b).cwiseAbs().maxCoeff() / (b - c).cwiseAbs().maxCoeff();
  CHECK(std::log2(ratio) > 1.9);
  const Eigen::VectorXcd exact = (std::exp(-0.5) * psi).cast<Complex>().matrix();
  CHECK((c - exact).cwiseAbs().maxCoeff() < 1e-3 * exact.cwiseAbs().maxCoeff());
}

TEST_CASE("step_stokes keeps zero at zero and decreases enstrophy") {
  const GridPtr g = build_grid(1.0, 32.0, 128);
  SolverConfig cfg;
  const FlowState zero{0.0, SpectralField(g, 8), cfg, std::nullopt, std::nullopt};
  CHECK(step_stokes(zero, 1e-3).w.modes().cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(step_stokes(zero, 0.0), ConfigError);

  FlowState s = ring_state(g, 8, 1.0);
  double e = enstrophy(s.w, disk_map(1.0));
  for (int n = 0; n < 50; ++n) {
    s = step_stokes(s, 1e-3);
    const double next = enstrophy(s.w, disk_map(1.0));
    CHECK(next < e);
    e = next;
  }
  CHECK(s.t == doctest::Approx(0.05));
}

TEST_CASE("Crank-Nicolson ring run matches a fine backward-Euler run") {
  const Index K = 8;
  auto final_enstrophy = [&](Index n, double dt, TimeScheme scheme) {
    const GridPtr g = build_grid(1.0, 32.0, n);
    const DiffusionSolver solver(g, K, disk_map(1.0), 1.0, dt, scheme);
    SpectralField w = initial_field(InitialCondition{}, g, K, 1.0, disk_map(1.0));
    const Index steps = static_cast<Index>(std::lround(0.1 / dt));
    for (Index i = 0; i < steps; ++i) w = solver.advance(w);
    return enstrophy(w, disk_map(1.0));
  };
  const double cn = final_enstrophy(256, 1e-3, TimeScheme::crank_nicolson);
  const double be = final_enstrophy(512, 1e-5, TimeScheme::backward_euler);
  CHECK(std::abs(cn - be) <= 1e-3 * be);
}

TEST_CASE("Stokes runs conserve the moments") {
  const GridPtr g = build_grid(1.0, 32.0, 128);
  FlowState s = ring_state(g, 8, 2.0);
  const DiffusionSolver solver(g, 8, disk_map(1.0), 1.0, 1e-3, TimeScheme::crank_nicolson);
  const Eigen::VectorXcd m0 = moments(s.w, disk_map(1.0), 4);
  for (int n = 0; n < 200; ++n) s.w = solver.advance(s.w);
  CHECK((moments(s.w, disk_map(1.0), 4) - m0).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("project_orthogonality hits the moment targets") {
  const GridPtr g = build_grid(1.0, 32.0, 256);
  const SpectralField raw = raw_initial_field(InitialCondition{}, g, 8);
  const SpectralField p = project_orthogonality(raw, 150.0, disk_map(1.0));
  const Eigen::VectorXcd m = moments(p, disk_map(1.0), 8);
  CHECK(std::abs(m(1) - Complex(0.0, 150.0)) < 1e-10 * 150.0);
  CHECK((m - moment_targets(8, 150.0)).cwiseAbs().maxCoeff() < 1e-10 * 150.0);
  const SpectralField again = project_orthogonality(p, 150.0, disk_map(1.0));
  CHECK((again.modes() - p.modes()).cwiseAbs().maxCoeff() < 1e-12 * p.modes().cwiseAbs().maxCoeff());
  CHECK_THROWS_AS(project_orthogonality(SpectralField(g, 0), 1.0, disk_map(1.0)), ConfigError);
}

TEST_CASE("projection removes the moment of s^-3") {
  const GridPtr g = build_grid(1.0, 200.0, 2048);
  SpectralField w(g, 2);
  w.mode(1) = power(*g, -3.0);
  w.mode(1)(g->size() - 1) = 0.0;
  CHECK(std::abs(moments(w, disk_map(1.0), 2)(1) - 0.5) < 1e-4);
  const SpectralField p = project_orthogonality(w, 0.0, disk_map(1.0));
  CHECK(moments(p, disk_map(1.0), 2).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("projection on a joukowski domain") {
  const GridPtr g = build_grid(1.0, 32.0, 128);
  const ConformalMap map = joukowski_map(1.0, 0.5);
  const SpectralField p = initial_field(InitialCondition{}, g, 8, 3.0, map);
  CHECK((moments(p, map, 8) - moment_targets(8, 3.0)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("mapped diffusion conserves J-weighted moments and decreases enstrophy") {
  const GridPtr g = build_grid(1.0, 32.0, 128);
  const ConformalMap map = joukowski_map(1.0, 0.5);
  SpectralField w = initial_field(InitialCondition{}, g, 8, 1.0, map);
  const DiffusionSolver solver(g, 8, map, 1.0, 1e-3, TimeScheme::crank_nicolson);
  const Eigen::VectorXcd m0 = moments(w, map, 4);
  double e = enstrophy(w, map);
  for (int n = 0; n < 50; ++n) {
    w = solver.advance(w);
    const double next = enstrophy(w, map);
    CHECK(next < e);
    e = next;
  }
  CHECK((moments(w, map, 4) - m0).cwiseAbs().maxCoeff() < 1e-10);
}
