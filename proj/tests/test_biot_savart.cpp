#include <doctest.h>

#include <cmath>

#include "enstro/initial_conditions.hpp"
#include "support/oracles.hpp"

using namespace enstro;

namespace {

Eigen::VectorXcd power(const RadialGrid& g, double p) {
  return g.nodes().array().pow(p).cast<Complex>().matrix();
}

}  // namespace

TEST_CASE("moments of elementary profiles") {
  const GridPtr g = build_grid(1.0, 200.0, 2048);
  SpectralField w(g, 3);
  w.mode(1) = power(*g, -3.0);
  CHECK(std::abs(moments(w, disk_map(1.0), 3)(1) - 0.5) < 1e-4);
  CHECK_THROWS_AS(moments(w, disk_map(1.0), 4), ShapeError);

  const SpectralField ring = initial_field(InitialCondition{.ring_mode = 0}, g, 3, 0.0, disk_map(1.0));
  CHECK(std::abs(moments(ring, disk_map(1.0), 0)(0)) < 1e-12);
}

TEST_CASE("zero vorticity gives potential flow past the disk") {
  const GridPtr g = build_grid(1.0, 32.0, 128);
  const VelocityField v = velocity_from_vorticity(SpectralField(g, 4), 1.0, disk_map(1.0));
  CHECK(v.radial.row(0).cwiseAbs().maxCoeff() < 1e-14);
  // Slip speed of potential flow: 2 v_inf sin(phi) on the body.
  CHECK(boundary_slip(v) == doctest::Approx(2.0).epsilon(1e-3));
  // Far field approaches the uniform flow (v_inf, 0).
  const Index far = g->size() - 1;
  CHECK(std::abs(v.azimuthal(far, 1) - Complex(0.0, 0.5)) < 1e-3);
}

TEST_CASE("nonzero circulation is rejected") {
  const GridPtr g = build_grid(1.0, 32.0, 64);
  SpectralField w(g, 2);
  w.mode(0) = (-(g->nodes().array() - 3.0).square()).exp().cast<Complex>().matrix();
  CHECK_THROWS_AS(velocity_from_vorticity(w, 0.0, disk_map(1.0)), NumericalError);
}

TEST_CASE("projected vorticity recovers no-slip, improving under refinement") {
  std::vector<double> slip;
  for (Index n : {128, 256}) {
    const GridPtr g = build_grid(1.0, 32.0, n);
    const SpectralField w = initial_field(InitialCondition{}, g, 16, 1.0, disk_map(1.0));
    slip.push_back(boundary_slip(velocity_from_vorticity(w, 1.0, disk_map(1.0))));
  }
  CHECK(slip[1] <= 1e-3);
  CHECK(slip[1] < slip[0]);
}

TEST_CASE("reconstructed velocity is divergence free with no penetration") {
  const GridPtr g = build_grid(1.0, 32.0, 256);
  const SpectralField w = initial_field(InitialCondition{}, g, 8, 1.0, disk_map(1.0));
  const VelocityField v = velocity_from_vorticity(w, 1.0, disk_map(1.0));
  CHECK(v.radial.row(0).cwiseAbs().maxCoeff() < 1e-13);
  const Eigen::MatrixXcd r_ur = g->nodes().cast<Complex>().asDiagonal() * v.radial;
  const Eigen::MatrixXcd d = radial_derivative(r_ur, *g);
  double worst = 0.0;
  for (Index k = 0; k <= 8; ++k) {
    const Eigen::VectorXcd div = (d.col(k) + Complex(0.0, double(k)) * v.azimuthal.col(k))
                                     .cwiseQuotient(g->nodes().cast<Complex>());
    worst = std::max(worst, div.segment(1, g->size() - 2).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-2 * v.azimuthal.cwiseAbs().maxCoeff());
}

TEST_CASE("axisymmetric zero-circulation vorticity induces no far swirl") {
  const GridPtr g = build_grid(1.0, 32.0, 256);
  const SpectralField w = initial_field(InitialCondition{.ring_mode = 0}, g, 2, 0.0, disk_map(1.0));
  const VelocityField v = velocity_from_vorticity(w, 0.0, disk_map(1.0));
  const Index beyond = (g->nodes().array() < 10.0).count();
  CHECK(v.azimuthal.col(0).tail(g->size() - beyond).cwiseAbs().maxCoeff() <
        1e-6 * v.azimuthal.col(0).cwiseAbs().maxCoeff());
}

TEST_CASE("gtau_trace of elementary profiles") {
  const GridPtr g = build_grid(1.0, 200.0, 2048);
  CHECK(gtau_trace(SpectralField(g, 3)).coeffs.cwiseAbs().maxCoeff() == 0.0);
  SpectralField f(g, 3);
  f.mode(1) = power(*g, -3.0);
  const BoundaryTrace t = gtau_trace(f);
  CHECK(std::abs(t.coeffs(1) + 0.25) < 1e-4);
  CHECK(t.at(-1) == std::conj(t.at(1)));
}

TEST_CASE("gtau_trace matches the direct kernel quadrature") {
  const GridPtr g = build_grid(1.0, 32.0, 64);
  const SpectralField f = oracle::sample(oracle::gaussian_modes(4, 1.0), g, 4);
  const Eigen::VectorXd phi = angles(16);
  const Eigen::VectorXd direct = oracle::gtau_direct(synthesize(f.modes(), 16 * 256), *g, phi);
  const Eigen::VectorXd lib = synthesize(gtau_trace(f).coeffs.transpose(), 16).row(0).transpose();
  CHECK((direct - lib).cwiseAbs().maxCoeff() < 1e-10 * lib.cwiseAbs().maxCoeff());
}

TEST_CASE("l_trace reduces to gtau_trace and weights by J") {
  const GridPtr g = build_grid(1.0, 32.0, 64);
  const SpectralField f = oracle::sample(oracle::gaussian_modes(4, 1.0), g, 4);
  CHECK(l_trace(f, disk_map(1.0)).coeffs == gtau_trace(f).coeffs);
  const ConformalMap map = joukowski_map(1.0, 0.5);
  CHECK(l_trace(SpectralField(g, 4), map).coeffs.cwiseAbs().maxCoeff() == 0.0);
  const SpectralField jf = apply_jacobian(make_jacobian(map, g, 4), f);
  CHECK((l_trace(f, map).coeffs - gtau_trace(jf).coeffs).cwiseAbs().maxCoeff() < 1e-14);
}
