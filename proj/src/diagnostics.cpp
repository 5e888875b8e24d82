#include "enstro/diagnostics.hpp"

#include <cmath>
#include <sstream>

namespace enstro {

double enstrophy(const SpectralField& w, const JacobianWeight& jw) {
  if (jw.identity) return l2_inner(w, w);
  return l2_inner(w, apply_jacobian(jw, w));
}

double enstrophy(const SpectralField& w, const ConformalMap& map) {
  return enstrophy(w, make_jacobian(map, w.grid_ptr(), w.K()));
}

double palinstrophy(const SpectralField& w) {
  const RadialGrid& g = w.grid();
  const Eigen::MatrixXcd dw = radial_derivative(w.modes(), g);
  const Eigen::ArrayXd inv_r2 = g.nodes().array().square().inverse();
  double sum = 0.0;
  for (Index k = 0; k <= w.K(); ++k) {
    const Eigen::ArrayXd density =
        dw.col(k).array().abs2() + double(k * k) * inv_r2 * w.mode(k).array().abs2();
    sum += multiplicity(k) * (g.weights().array() * density).sum();
  }
  return kTwoPi * sum;
}

double boundary_h12(const SpectralField& w) {
  double sum = 0.0;
  for (Index k = 1; k <= w.K(); ++k) sum += 2.0 * double(k) * std::norm(w.mode(k)(0));
  return kTwoPi * sum;
}

DiagnosticsRecord make_record(double t, const SpectralField& w, const JacobianWeight& jw,
                              const AdvectionTerm* advective, Index kmax) {
  DiagnosticsRecord r;
  r.t = t;
  r.E = enstrophy(w, jw);
  r.P = palinstrophy(w);
  r.S = boundary_h12(w);
  r.D = dissipation_sum(w);
  r.A = advective ? boundary_advective_term(w, *advective) : 0.0;
  r.moments = moments(w, jw, std::min(kmax, w.K()));
  return r;
}

namespace {

// Derivative at x of the quadratic through (a, fa), (b, fb), (c, fc).
double lagrange_slope(double x, double a, double b, double c, double fa, double fb, double fc) {
  return fa * ((x - b) + (x - c)) / ((a - b) * (a - c)) +
         fb * ((x - a) + (x - c)) / ((b - a) * (b - c)) +
         fc * ((x - a) + (x - b)) / ((c - a) * (c - b));
}

}  // namespace

std::vector<double> enstrophy_rate(const std::vector<DiagnosticsRecord>& h) {
  const std::size_t n = h.size();
  if (n < 2) throw ShapeError("residual: history needs at least two records");
  std::vector<double> rate(n);
  if (n == 2) {
    rate[0] = rate[1] = (h[1].E - h[0].E) / (h[1].t - h[0].t);
    return rate;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t s = i == 0 ? 0 : (i == n - 1 ? n - 3 : i - 1);
    rate[i] = lagrange_slope(h[i].t, h[s].t, h[s + 1].t, h[s + 2].t, h[s].E, h[s + 1].E,
                             h[s + 2].E);
  }
  return rate;
}

namespace {

ResidualSeries residuals(const std::vector<DiagnosticsRecord>& h, double nu, bool advective) {
  const std::vector<double> rate = enstrophy_rate(h);
  ResidualSeries out;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double half = 0.5 * rate[i];
    const double a = advective ? 2.0 * h[i].A : 0.0;
    out.linear_ps.push_back(half + nu * (h[i].P - h[i].S));
    out.linear_d.push_back(half + nu * h[i].D);
    out.nonlinear_ps.push_back(half + nu * (h[i].P - h[i].S) + a);
    out.nonlinear_d.push_back(half + nu * h[i].D + a);
  }
  return out;
}

}  // namespace

ResidualSeries residual_linear(const std::vector<DiagnosticsRecord>& h, double nu) {
  return residuals(h, nu, false);
}

ResidualSeries residual_nonlinear(const std::vector<DiagnosticsRecord>& h, double nu) {
  return residuals(h, nu, true);
}

void assign_residuals(std::vector<DiagnosticsRecord>& h, double nu) {
  if (h.size() < 2) return;
  const ResidualSeries r = residuals(h, nu, true);
  for (std::size_t i = 0; i < h.size(); ++i) {
    h[i].residual_linear = r.linear_d[i];
    h[i].residual_nonlinear = r.nonlinear_d[i];
  }
}

SignSplit sign_split(const DiagnosticsRecord& r, double nu, bool stokes) {
  SignSplit s;
  s.viscous = -nu * r.P;
  s.boundary = nu * r.S;
  s.advective = -2.0 * r.A;
  s.net = s.viscous + s.boundary + s.advective;
  s.quadratic_gap = r.P - r.S - r.D;
  if (stokes) {
    const double tol = 1e-12 * std::max(r.P, 1.0);
    s.stokes_ok = r.P - r.S >= -tol && r.D >= 0.0;
  }
  return s;
}

std::string SignSplit::str() const {
  std::ostringstream os;
  os.precision(6);
  os << "-nu P = " << viscous << ", +nu S = " << boundary << ", -2A = " << advective
     << ", net = " << net << ", P - S - D = " << quadratic_gap;
  return os.str();
}

}  // namespace enstro
