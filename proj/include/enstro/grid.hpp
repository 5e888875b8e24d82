#pragma once

#include <complex>
#include <memory>
#include <optional>

#include <Eigen/Dense>

#include "enstro/errors.hpp"

namespace enstro {

using Index = Eigen::Index;
using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Node distribution along the radius.
struct Stretch {
  enum class Kind { uniform, geometric };

  Kind kind = Kind::geometric;
  /// Geometric grids: log of the ratio between the last and the first cell width.
  double growth = 5.0;

  static Stretch uniform() { return {Kind::uniform, 0.0}; }
  static Stretch geometric(double growth = 5.0) { return {Kind::geometric, growth}; }
};

/// Radial nodes on [r0, Rmax] with quadrature weights for the measure r dr.
///
/// The weights integrate the piecewise-linear interpolant of f against r
/// exactly, so sum(weights * f) is exact whenever f is linear on every cell.
/// First derivatives use three-point Lagrange stencils: centered in the
/// interior, one-sided at both ends. Both are exact for quadratics on any
/// node distribution.
class RadialGrid {
 public:
  explicit RadialGrid(Eigen::VectorXd nodes, Stretch stretch = {});

  Index size() const { return nodes_.size(); }
  double r0() const { return nodes_(0); }
  double rmax() const { return nodes_(nodes_.size() - 1); }
  double node(Index i) const { return nodes_(i); }

  const Eigen::VectorXd& nodes() const { return nodes_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  /// size() - 1 cell widths and midpoints.
  const Eigen::VectorXd& widths() const { return widths_; }
  const Eigen::VectorXd& midpoints() const { return midpoints_; }
  const Stretch& stretch() const { return stretch_; }
  double min_spacing() const { return widths_.minCoeff(); }

  /// First node of the derivative stencil used at node i.
  Index stencil_start(Index i) const {
    if (i == 0) return 0;
    if (i == size() - 1) return size() - 3;
    return i - 1;
  }
  /// Coefficients of the derivative stencil at node i.
  const Eigen::Matrix<double, Eigen::Dynamic, 3>& d1() const { return d1_; }

  bool same_nodes(const RadialGrid& other) const {
    return this == &other || nodes_ == other.nodes_;
  }

 private:
  Eigen::VectorXd nodes_;
  Eigen::VectorXd weights_;
  Eigen::VectorXd widths_;
  Eigen::VectorXd midpoints_;
  Eigen::Matrix<double, Eigen::Dynamic, 3> d1_;
  Stretch stretch_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Grid with n nodes on [r0, rmax]; requires r0 > 0, rmax > r0, n >= 16.
GridPtr build_grid(double r0, double rmax, Index n, Stretch stretch = {});

/// Radial derivative of every column of p (second order, exact for quadratics).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Derived::ColsAtCompileTime>
radial_derivative(const Eigen::MatrixBase<Derived>& p, const RadialGrid& g) {
  if (p.rows() != g.size()) {
    throw ShapeError("radial_derivative: profile length does not match grid");
  }
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Derived::ColsAtCompileTime> out(
      p.rows(), p.cols());
  const auto& c = g.d1();
  for (Index i = 0; i < p.rows(); ++i) {
    const Index s = g.stencil_start(i);
    out.row(i) = c(i, 0) * p.row(s) + c(i, 1) * p.row(s + 1) + c(i, 2) * p.row(s + 2);
  }
  return out;
}

/// Radial profiles w_k(r), k = 0..K, of a real field
/// w(r, phi) = sum_{k=-K..K} w_k(r) exp(i k phi), with w_{-k} = conj(w_k).
class SpectralField {
 public:
  SpectralField(GridPtr grid, Index max_mode);
  SpectralField(GridPtr grid, Eigen::MatrixXcd modes);

  Index K() const { return modes_.cols() - 1; }
  Index size() const { return modes_.rows(); }
  const RadialGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }

  /// size() x (K + 1); column k holds w_k at the grid nodes.
  Eigen::MatrixXcd& modes() { return modes_; }
  const Eigen::MatrixXcd& modes() const { return modes_; }
  auto mode(Index k) { return modes_.col(k); }
  auto mode(Index k) const { return modes_.col(k); }

  /// Coefficient for a signed mode index, |k| <= K.
  Complex at(Index k, Index node) const {
    return k >= 0 ? modes_(node, k) : std::conj(modes_(node, -k));
  }

  bool is_finite() const { return modes_.allFinite(); }
  /// Drops the imaginary part of w_0 (roundoff from coupled solves).
  void enforce_reality() { modes_.col(0) = modes_.col(0).real().cast<Complex>(); }

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double s) {
    modes_ *= s;
    return *this;
  }

 private:
  GridPtr grid_;
  Eigen::MatrixXcd modes_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// Samples on the tensor grid nodes x angles, phi_j = 2 pi j / n_phi.
struct PhysicalField {
  GridPtr grid;
  Eigen::MatrixXd values;

  Index nphi() const { return values.cols(); }
};

Eigen::VectorXd angles(Index nphi);

/// Requires nphi >= 2K + 1.
PhysicalField to_physical(const SpectralField& w, Index nphi);
/// Coefficients w_k = (1/2pi) int f exp(-i k phi) dphi for k = 0..K; requires nphi >= 2K + 1.
SpectralField to_spectral(const PhysicalField& f, Index K);
SpectralField to_spectral(const PhysicalField& f);

/// Angular transforms of plain matrices (rows = radii); used on intermediate products.
Eigen::MatrixXd synthesize(const Eigen::MatrixXcd& modes, Index nphi);
Eigen::MatrixXcd analyze(const Eigen::MatrixXd& values, Index K);

/// int f conj(g) weight dx = 2pi sum_{k=-K..K} int f_k conj(g_k) weight r dr.
double l2_inner(const SpectralField& f, const SpectralField& g,
                const std::optional<Eigen::VectorXd>& weight = std::nullopt);

/// Mode multiplicity in sums over k = -K..K: 1 for k = 0, 2 otherwise.
inline double multiplicity(Index k) { return k == 0 ? 1.0 : 2.0; }

}  // namespace enstro
