#include "enstro/grid.hpp"

#include <cmath>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace enstro {

RadialGrid::RadialGrid(Eigen::VectorXd nodes, Stretch stretch)
    : nodes_(std::move(nodes)), stretch_(stretch) {
  const Index n = nodes_.size();
  if (n < 3) throw ConfigError("RadialGrid: need at least three nodes");
  if (!(nodes_(0) > 0.0)) throw ConfigError("RadialGrid: r0 must be positive");
  for (Index i = 1; i < n; ++i) {
    if (!(nodes_(i) > nodes_(i - 1))) {
      throw ConfigError("RadialGrid: nodes must be strictly increasing");
    }
  }

  widths_ = nodes_.tail(n - 1) - nodes_.head(n - 1);
  midpoints_ = 0.5 * (nodes_.tail(n - 1) + nodes_.head(n - 1));

  // Hat-function weights: int phi_i(r) r dr.
  weights_ = Eigen::VectorXd::Zero(n);
  for (Index c = 0; c < n - 1; ++c) {
    const double a = nodes_(c), b = nodes_(c + 1), h = widths_(c);
    weights_(c) += h * (2.0 * a + b) / 6.0;
    weights_(c + 1) += h * (a + 2.0 * b) / 6.0;
  }

  d1_.resize(n, 3);
  for (Index i = 0; i < n; ++i) {
    const Index s = stencil_start(i);
    const double x0 = nodes_(s), x1 = nodes_(s + 1), x2 = nodes_(s + 2);
    const double x = nodes_(i);
    // Derivatives of the Lagrange basis through x0, x1, x2 evaluated at x.
    d1_(i, 0) = ((x - x1) + (x - x2)) / ((x0 - x1) * (x0 - x2));
    d1_(i, 1) = ((x - x0) + (x - x2)) / ((x1 - x0) * (x1 - x2));
    d1_(i, 2) = ((x - x0) + (x - x1)) / ((x2 - x0) * (x2 - x1));
  }
}

GridPtr build_grid(double r0, double rmax, Index n, Stretch stretch) {
  if (!(r0 > 0.0)) throw ConfigError("build_grid: r0 must be positive");
  if (!(rmax > r0)) throw ConfigError("build_grid: rmax must exceed r0");
  if (n < 16) throw ConfigError("build_grid: need at least 16 nodes");

  Eigen::VectorXd nodes(n);
  const double length = rmax - r0;
  const bool geometric = stretch.kind == Stretch::Kind::geometric && stretch.growth > 0.0;
  if (stretch.kind == Stretch::Kind::geometric && !(stretch.growth >= 0.0)) {
    throw ConfigError("build_grid: geometric growth must be non-negative");
  }
  for (Index i = 0; i < n; ++i) {
    const double xi = static_cast<double>(i) / static_cast<double>(n - 1);
    const double s = geometric ? std::expm1(stretch.growth * xi) / std::expm1(stretch.growth) : xi;
    nodes(i) = r0 + length * s;
  }
  nodes(0) = r0;
  nodes(n - 1) = rmax;
  return std::make_shared<const RadialGrid>(std::move(nodes), stretch);
}

SpectralField::SpectralField(GridPtr grid, Index max_mode)
    : grid_(std::move(grid)), modes_(Eigen::MatrixXcd::Zero(grid_->size(), max_mode + 1)) {
  if (max_mode < 0) throw ConfigError("SpectralField: K must be non-negative");
}

SpectralField::SpectralField(GridPtr grid, Eigen::MatrixXcd modes)
    : grid_(std::move(grid)), modes_(std::move(modes)) {
  if (modes_.rows() != grid_->size()) throw ShapeError("SpectralField: rows must match grid");
  if (modes_.cols() < 1) throw ShapeError("SpectralField: need at least mode 0");
}

namespace {
void require_compatible(const SpectralField& a, const SpectralField& b) {
  if (a.K() != b.K() || !a.grid().same_nodes(b.grid())) {
    throw ShapeError("SpectralField: grid or K mismatch");
  }
}
}  // namespace

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  require_compatible(*this, o);
  modes_ += o.modes_;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  require_compatible(*this, o);
  modes_ -= o.modes_;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

Eigen::VectorXd angles(Index nphi) {
  return Eigen::VectorXd::LinSpaced(nphi, 0.0, kTwoPi * static_cast<double>(nphi - 1) /
                                                   static_cast<double>(nphi));
}

Eigen::MatrixXd synthesize(const Eigen::MatrixXcd& modes, Index nphi) {
  const Index K = modes.cols() - 1;
  if (nphi < 2 * K + 1) throw AliasingError("to_physical: nphi must be at least 2K + 1");
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  std::vector<Complex> spec(static_cast<std::size_t>(nphi));
  std::vector<Complex> vals;
  Eigen::MatrixXd out(modes.rows(), nphi);
  for (Index i = 0; i < modes.rows(); ++i) {
    std::fill(spec.begin(), spec.end(), Complex{});
    spec[0] = Complex(modes(i, 0).real(), 0.0);
    for (Index k = 1; k <= K; ++k) {
      spec[static_cast<std::size_t>(k)] = modes(i, k);
      spec[static_cast<std::size_t>(nphi - k)] = std::conj(modes(i, k));
    }
    fft.inv(vals, spec);
    for (Index j = 0; j < nphi; ++j) out(i, j) = vals[static_cast<std::size_t>(j)].real();
  }
  return out;
}

Eigen::MatrixXcd analyze(const Eigen::MatrixXd& values, Index K) {
  const Index nphi = values.cols();
  if (nphi < 2 * K + 1) throw AliasingError("to_spectral: nphi must be at least 2K + 1");
  Eigen::FFT<double> fft;
  std::vector<Complex> row(static_cast<std::size_t>(nphi));
  std::vector<Complex> spec;
  Eigen::MatrixXcd out(values.rows(), K + 1);
  const double scale = 1.0 / static_cast<double>(nphi);
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < nphi; ++j) row[static_cast<std::size_t>(j)] = values(i, j);
    fft.fwd(spec, row);
    out(i, 0) = Complex(spec[0].real() * scale, 0.0);
    for (Index k = 1; k <= K; ++k) out(i, k) = spec[static_cast<std::size_t>(k)] * scale;
  }
  return out;
}

PhysicalField to_physical(const SpectralField& w, Index nphi) {
  return {w.grid_ptr(), synthesize(w.modes(), nphi)};
}

SpectralField to_spectral(const PhysicalField& f, Index K) {
  if (f.values.rows() != f.grid->size()) throw ShapeError("to_spectral: rows must match grid");
  return SpectralField(f.grid, analyze(f.values, K));
}

SpectralField to_spectral(const PhysicalField& f) { return to_spectral(f, (f.nphi() - 1) / 2); }

double l2_inner(const SpectralField& f, const SpectralField& g,
                const std::optional<Eigen::VectorXd>& weight) {
  if (f.K() != g.K() || !f.grid().same_nodes(g.grid())) {
    throw ShapeError("l2_inner: grid or K mismatch");
  }
  Eigen::VectorXd w = f.grid().weights();
  if (weight) {
    if (weight->size() != w.size()) throw ShapeError("l2_inner: weight length mismatch");
    w = w.cwiseProduct(*weight);
  }
  double total = 0.0;
  for (Index k = 0; k <= f.K(); ++k) {
    const Complex s = (f.mode(k).array() * g.mode(k).conjugate().array() * w.array()).sum();
    total += multiplicity(k) * s.real();
  }
  return kTwoPi * total;
}

}  // namespace enstro
