#pragma once

#include <cstdint>
#include <string>

#include "enstro/grid.hpp"

namespace enstro {

/// Conformal map between the flow domain (p-plane) and the exterior of the
/// disk |z| > r0 (z-plane), normalized so that Phi^{-1}(z) = z + O(1/z).
///
/// Two closed-form families ship: the identity (flow past a cylinder) and the
/// Joukowski family Phi^{-1}(z) = z + c^2 / z, whose image of |z| = r0 is the
/// ellipse with semi-axes r0 + c^2/r0 and r0 - c^2/r0.
class ConformalMap {
 public:
  enum class Kind : std::uint32_t { disk = 0, joukowski = 1 };

  Kind kind() const { return kind_; }
  double r0() const { return r0_; }
  /// Joukowski parameter c (0 for the disk).
  double c() const { return c_; }
  bool is_identity() const { return kind_ == Kind::disk || c_ == 0.0; }
  std::string name() const;

  /// z = Phi(p), defined outside the body.
  Complex forward(Complex p) const;
  /// p = Phi^{-1}(z) for |z| >= r0.
  Complex inverse(Complex z) const;
  Complex inverse_derivative(Complex z) const;
  /// |(Phi^{-1})'(z)|^2.
  double jacobian(Complex z) const { return std::norm(inverse_derivative(z)); }

  friend ConformalMap disk_map(double r0);
  friend ConformalMap joukowski_map(double r0, double c);

  bool operator==(const ConformalMap&) const = default;

 private:
  ConformalMap(Kind kind, double r0, double c) : kind_(kind), r0_(r0), c_(c) {}

  Kind kind_;
  double r0_;
  double c_;
};

ConformalMap disk_map(double r0);
/// Requires 0 <= c < r0.
ConformalMap joukowski_map(double r0, double c);
ConformalMap make_map(ConformalMap::Kind kind, double r0, double param);

/// J = |(Phi^{-1})'|^2 sampled on the polar grid, plus its angular Fourier
/// coefficients J_m(r), m = 0..bandwidth, used for products J * w.
struct JacobianWeight {
  GridPtr grid;
  Eigen::MatrixXd samples;
  Eigen::MatrixXcd modes;
  bool identity = false;

  Index bandwidth() const { return modes.cols() - 1; }
};

/// Throws DomainError if a grid node lies inside |z| < r0.
JacobianWeight jacobian_weight(const ConformalMap& map, const GridPtr& grid, Index nphi);

/// Angular resolution sufficient to resolve J for a field with max mode K.
Index jacobian_nphi(Index K);

/// jacobian_weight at jacobian_nphi(K) angles.
JacobianWeight make_jacobian(const ConformalMap& map, const GridPtr& grid, Index K);

/// (J w)_k for k = 0..K; contributions above K are truncated.
SpectralField apply_jacobian(const JacobianWeight& jw, const SpectralField& w);

}  // namespace enstro
