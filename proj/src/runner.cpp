#include "enstro/runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "enstro/snapshot.hpp"

namespace enstro {

namespace {
constexpr Index kCsvMoments = 5;
}

FlowState initial_state(const RunConfig& c) {
  const GridPtr grid = c.grid();
  const ConformalMap map = c.conformal_map();
  SpectralField w = initial_field(c.ic, grid, c.K, c.v_inf, map);
  const SolverConfig cfg = c.solver();
  if (cfg.advection && c.compatible_start) {
    const NseStepper stepper(grid, c.K, cfg);
    w = compatible_initial_field(w, stepper, c.ic.correction_width * c.r0);
  }
  return FlowState{0.0, std::move(w), cfg, std::nullopt, std::nullopt};
}

void check_compatible(const FlowState& snapshot, const RunConfig& c) {
  const RadialGrid& g = snapshot.w.grid();
  if (snapshot.w.K() != c.K) {
    throw ConfigError("snapshot has K = " + std::to_string(snapshot.w.K()) + ", config has K = " +
                      std::to_string(c.K));
  }
  if (!g.same_nodes(*c.grid())) {
    throw ConfigError("snapshot grid does not match the configured r0, rmax, n and stretch");
  }
  if (!(snapshot.config.map == c.conformal_map())) {
    throw ConfigError("snapshot map " + snapshot.config.map.name() +
                      " does not match the configured map");
  }
}

std::string csv_header() {
  std::string h = "t,E,P,S,D,A,residual_linear,residual_nonlinear";
  for (Index k = 0; k < kCsvMoments; ++k) h += ",Re_M" + std::to_string(k);
  for (Index k = 0; k < kCsvMoments; ++k) h += ",Im_M" + std::to_string(k);
  return h;
}

void write_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& history) {
  out << csv_header() << '\n';
  char buf[32];
  auto put = [&](double x, bool first = false) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    if (!first) out << ',';
    out << buf;
  };
  for (const DiagnosticsRecord& r : history) {
    put(r.t, true);
    put(r.E);
    put(r.P);
    put(r.S);
    put(r.D);
    put(r.A);
    put(r.residual_linear);
    put(r.residual_nonlinear);
    for (Index k = 0; k < kCsvMoments; ++k) put(k < r.moments.size() ? r.moments(k).real() : 0.0);
    for (Index k = 0; k < kCsvMoments; ++k) put(k < r.moments.size() ? r.moments(k).imag() : 0.0);
    out << '\n';
  }
}

RunResult run_simulation(const RunConfig& c, const std::optional<FlowState>& start) {
  c.validate();
  FlowState state = start ? *start : initial_state(c);
  if (start) {
    check_compatible(*start, c);
    state.config = c.solver();
    state.velocity.reset();
    state.previous_load.reset();
  }
  const GridPtr grid = state.w.grid_ptr();
  const SolverConfig cfg = c.solver();
  const JacobianWeight jw = make_jacobian(cfg.map, grid, c.K);
  const bool nonlinear = cfg.advection;

  std::optional<NseStepper> nse;
  std::optional<DiffusionSolver> stokes;
  if (nonlinear) {
    nse.emplace(grid, c.K, cfg);
  } else {
    stokes.emplace(grid, c.K, cfg.map, cfg.nu, cfg.dt, cfg.scheme);
  }

  std::vector<DiagnosticsRecord> history;
  history.reserve(static_cast<std::size_t>(c.steps + 1));
  std::vector<std::filesystem::path> snapshots;
  Index last_snapshot = -1;
  const Index first_step = static_cast<Index>(std::llround(state.t / c.dt));
  auto snapshot = [&](const FlowState& s, Index step) {
    char name[32];
    std::snprintf(name, sizeof name, "_%08lld.snap", static_cast<long long>(step));
    std::filesystem::path p = c.snapshot_prefix;
    p += name;
    write_snapshot(s, p);
    snapshots.push_back(p);
    last_snapshot = step;
  };

  for (Index n = 0; n < c.steps; ++n) {
    FlowState next = nonlinear ? nse->step(state)
                               : FlowState{state.t + c.dt, stokes->advance(state.w), state.config,
                                           std::nullopt, std::nullopt};
    const AdvectionTerm* b = nonlinear && nse->last_advection() ? &*nse->last_advection() : nullptr;
    history.push_back(make_record(state.t, state.w, jw, b));
    state = std::move(next);
    const Index step = first_step + n + 1;
    if (!c.snapshot_prefix.empty() && c.snapshot_every > 0 && step % c.snapshot_every == 0) {
      snapshot(state, step);
    }
  }
  std::optional<AdvectionTerm> last;
  if (nonlinear) last = nse->advection_of(state);
  history.push_back(make_record(state.t, state.w, jw, last ? &*last : nullptr));
  assign_residuals(history, c.nu);
  if (!c.snapshot_prefix.empty() && last_snapshot != first_step + c.steps) {
    snapshot(state, first_step + c.steps);
  }

  if (!c.csv.empty()) {
    std::ofstream out(c.csv, std::ios::trunc);
    if (!out) throw IoError("cannot open " + c.csv.string() + " for writing");
    write_csv(out, history);
    if (!out) throw IoError("failed writing " + c.csv.string());
  }
  const double max_cfl = nonlinear ? nse->max_cfl() : 0.0;
  return RunResult{std::move(history), std::move(state), max_cfl, std::move(snapshots)};
}

}  // namespace enstro
