#include "enstro/initial_conditions.hpp"

#include <cmath>
#include <random>

#include "enstro/stokes.hpp"

namespace enstro {

SpectralField raw_initial_field(const InitialCondition& ic, const GridPtr& grid, Index K) {
  SpectralField w(grid, K);
  const double r0 = grid->r0();
  const Eigen::ArrayXd r = grid->nodes().array() / r0;
  switch (ic.kind) {
    case InitialCondition::Kind::zero:
      break;
    case InitialCondition::Kind::ring: {
      if (ic.ring_mode < 0 || ic.ring_mode > K) throw ConfigError("ring mode must be in [0, K]");
      const Eigen::ArrayXd profile =
          ic.amplitude * (-ic.ring_beta * (r - ic.ring_radius).square()).exp();
      w.mode(ic.ring_mode) = (ic.ring_mode == 0 ? profile : 0.5 * profile).cast<Complex>().matrix();
      break;
    }
    case InitialCondition::Kind::power: {
      if (ic.ring_mode < 0 || ic.ring_mode > K) throw ConfigError("ring mode must be in [0, K]");
      const double cutoff = 0.25 * grid->rmax() / r0;
      const Eigen::ArrayXd profile =
          ic.amplitude * r.pow(-ic.power_exponent) * (-(r / cutoff).square()).exp();
      w.mode(ic.ring_mode) = (ic.ring_mode == 0 ? profile : 0.5 * profile).cast<Complex>().matrix();
      break;
    }
    case InitialCondition::Kind::noise: {
      std::mt19937_64 rng(ic.seed);
      std::normal_distribution<double> normal;
      std::uniform_real_distribution<double> centre(1.0, 4.0),
          width(ic.noise_min_width, ic.noise_max_width);
      const Index top = std::min(ic.noise_modes, K);
      for (Index k = 0; k <= top; ++k) {
        const double scale = ic.amplitude / std::pow(1.0 + double(k), 2);
        for (Index b = 0; b < ic.noise_bumps; ++b) {
          const Complex a(normal(rng), k == 0 ? 0.0 : normal(rng));
          const double c = centre(rng);
          const double s = width(rng);
          const Eigen::ArrayXd bump = (-((r - c) / s).square()).exp();
          w.mode(k) += (scale * a) * bump.cast<Complex>().matrix();
        }
      }
      break;
    }
  }
  w.modes().row(w.size() - 1).setZero();
  return w;
}

SpectralField initial_field(const InitialCondition& ic, const GridPtr& grid, Index K,
                            double v_inf, const ConformalMap& map) {
  return project_orthogonality(raw_initial_field(ic, grid, K), v_inf, map,
                              ic.correction_width * grid->r0());
}

}  // namespace enstro
