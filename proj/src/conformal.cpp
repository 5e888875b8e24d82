#include "enstro/conformal.hpp"

#include <cmath>

namespace enstro {

ConformalMap disk_map(double r0) {
  if (!(r0 > 0.0)) throw ConfigError("disk_map: r0 must be positive");
  return ConformalMap(ConformalMap::Kind::disk, r0, 0.0);
}

ConformalMap joukowski_map(double r0, double c) {
  if (!(r0 > 0.0)) throw ConfigError("joukowski_map: r0 must be positive");
  if (!(c >= 0.0) || !(c < r0)) {
    throw ConfigError("joukowski_map: need 0 <= c < r0 for an injective map");
  }
  return ConformalMap(ConformalMap::Kind::joukowski, r0, c);
}

ConformalMap make_map(ConformalMap::Kind kind, double r0, double param) {
  switch (kind) {
    case ConformalMap::Kind::disk:
      return disk_map(r0);
    case ConformalMap::Kind::joukowski:
      return joukowski_map(r0, param);
  }
  throw ConfigError("make_map: unknown map kind");
}

std::string ConformalMap::name() const {
  return kind_ == Kind::disk ? "disk" : "joukowski";
}

Complex ConformalMap::inverse(Complex z) const {
  if (kind_ == Kind::disk) return z;
  return z + c_ * c_ / z;
}

Complex ConformalMap::inverse_derivative(Complex z) const {
  if (kind_ == Kind::disk) return {1.0, 0.0};
  return 1.0 - c_ * c_ / (z * z);
}

Complex ConformalMap::forward(Complex p) const {
  if (kind_ == Kind::disk) return p;
  // Roots of z^2 - p z + c^2 = 0 multiply to c^2 < r0^2; take the outer one.
  // Choosing the square-root branch aligned with p avoids cancellation.
  Complex s = std::sqrt(p * p - 4.0 * c_ * c_);
  if (std::real(std::conj(p) * s) < 0.0) s = -s;
  return 0.5 * (p + s);
}

Index jacobian_nphi(Index K) {
  Index n = 2 * K + 9;
  return n < 16 ? 16 : n;
}

JacobianWeight jacobian_weight(const ConformalMap& map, const GridPtr& grid, Index nphi) {
  const RadialGrid& g = *grid;
  if (g.r0() < map.r0() * (1.0 - 1e-12)) {
    throw DomainError("jacobian_weight: grid extends inside |z| < r0");
  }
  JacobianWeight jw;
  jw.grid = grid;
  jw.identity = map.is_identity();
  jw.samples.resize(g.size(), nphi);
  const Eigen::VectorXd phi = angles(nphi);
  for (Index i = 0; i < g.size(); ++i) {
    for (Index j = 0; j < nphi; ++j) {
      jw.samples(i, j) = map.jacobian(std::polar(g.node(i), phi(j)));
    }
  }
  if (jw.identity) {
    jw.modes = Eigen::MatrixXcd::Ones(g.size(), 1);
    return jw;
  }
  const Eigen::MatrixXcd full = analyze(jw.samples, (nphi - 1) / 2);
  // Keep modes up to the last one that is not roundoff.
  const double ref = full.col(0).cwiseAbs().maxCoeff();
  Index band = 0;
  for (Index m = 1; m < full.cols(); ++m) {
    if (full.col(m).cwiseAbs().maxCoeff() > 1e-14 * ref) band = m;
  }
  jw.modes = full.leftCols(band + 1);
  return jw;
}

JacobianWeight make_jacobian(const ConformalMap& map, const GridPtr& grid, Index K) {
  return jacobian_weight(map, grid, jacobian_nphi(K));
}

SpectralField apply_jacobian(const JacobianWeight& jw, const SpectralField& w) {
  if (!jw.grid->same_nodes(w.grid())) throw ShapeError("apply_jacobian: grid mismatch");
  if (jw.identity) return w;
  const Index K = w.K();
  const Index M = jw.bandwidth();
  SpectralField out(w.grid_ptr(), K);
  auto& o = out.modes();
  for (Index k = 0; k <= K; ++k) {
    for (Index m = -M; m <= M; ++m) {
      const Index src = k - m;
      if (src < -K || src > K) continue;
      const Eigen::VectorXcd jm = m >= 0 ? Eigen::VectorXcd(jw.modes.col(m))
                                         : Eigen::VectorXcd(jw.modes.col(-m).conjugate());
      if (src >= 0) {
        o.col(k).array() += jm.array() * w.mode(src).array();
      } else {
        o.col(k).array() += jm.array() * w.mode(-src).conjugate().array();
      }
    }
  }
  out.enforce_reality();
  return out;
}

}  // namespace enstro
