#pragma once

#include <cstdint>

#include "enstro/conformal.hpp"

namespace enstro {

/// Initial vorticity before the moment projection.
struct InitialCondition {
  enum class Kind { ring, power, noise, zero };
  Kind kind = Kind::ring;
  double amplitude = 1.0;
  /// Ring: A exp(-beta (r - rc)^2) cos(m phi), with rc and beta in units of r0.
  double ring_radius = 3.0;
  double ring_beta = 4.0;
  Index ring_mode = 2;
  /// Power: A (r/r0)^{-p} exp(-(r / (Rmax/4))^2) cos(m phi) with m = ring_mode.
  /// Without an intrinsic length the heat flow of this profile is close to
  /// self-similar once sqrt(nu t) exceeds r0, which gives clean power-law decay.
  double power_exponent = 1.5;
  /// Noise: random Gaussian bumps in modes 0..noise_modes with amplitudes
  /// falling off like 1/(1 + k)^2; the field is a smooth function of r, so the
  /// same seed gives the same field on every grid.
  Index noise_modes = 8;
  Index noise_bumps = 4;
  /// Bump centres are uniform in [r0, 4 r0], widths uniform in this range (units of r0).
  double noise_min_width = 0.3;
  double noise_max_width = 1.0;
  std::uint64_t seed = 1;
  /// Width of the moment-correction window, in units of r0.
  double correction_width = 1.0;
};

SpectralField raw_initial_field(const InitialCondition& ic, const GridPtr& grid, Index K);

/// raw_initial_field followed by project_orthogonality.
SpectralField initial_field(const InitialCondition& ic, const GridPtr& grid, Index K,
                            double v_inf, const ConformalMap& map);

}  // namespace enstro
