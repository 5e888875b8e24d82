#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "enstro/initial_conditions.hpp"
#include "enstro/stokes.hpp"

namespace enstro {

/// Settings of one simulation, read from flat `key = value` text.
struct RunConfig {
  enum class Mode { stokes, nse };
  Mode mode = Mode::stokes;
  ConformalMap::Kind map = ConformalMap::Kind::disk;
  double map_c = 0.0;
  double nu = 1.0;
  double v_inf = 0.0;
  double r0 = 1.0;
  double rmax = 32.0;
  Index n = 256;
  Index K = 16;
  /// 0 selects 3K.
  Index nphi = 0;
  Stretch stretch = Stretch::geometric();
  double dt = 1e-3;
  Index steps = 1000;
  TimeScheme scheme = TimeScheme::crank_nicolson;
  CflAction cfl = CflAction::warn;
  bool advection = true;
  /// nse: adjust the initial field to the pseudo boundary condition.
  bool compatible_start = true;
  InitialCondition ic;
  std::filesystem::path csv = "diagnostics.csv";
  /// Snapshot interval in steps (0: final state only when snapshot_prefix is set).
  Index snapshot_every = 0;
  std::filesystem::path snapshot_prefix;
  std::string preset;

  ConformalMap conformal_map() const { return make_map(map, r0, map_c); }
  GridPtr grid() const { return build_grid(r0, rmax, n, stretch); }
  SolverConfig solver() const;
  Index resolved_nphi() const { return nphi > 0 ? nphi : 3 * K; }
  /// Throws ConfigError on inconsistent settings.
  void validate() const;
  /// Notes for settings that are legal but questionable (e.g. the appendix preset).
  std::vector<std::string> warnings() const;
};

/// Named starting points: stokes_demo, nse_demo, appendix.
RunConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

/// Parses `key = value` lines; `#` starts a comment. A `preset` key is applied
/// first, regardless of its position. Unknown keys and bad values throw ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// All recognised keys, for help output.
std::vector<std::string> config_keys();

}  // namespace enstro
