// enstro: run, resume and inspect exterior-domain vorticity simulations.

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "enstro/parallel.hpp"
#include "enstro/runner.hpp"
#include "enstro/snapshot.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeAbort = 2;

void report(const enstro::RunConfig& c, const enstro::RunResult& r) {
  const auto& last = r.history.back();
  std::printf("%s run: %lld steps, t = %.6g, E = %.6g, P = %.6g\n",
              c.mode == enstro::RunConfig::Mode::nse ? "nse" : "stokes",
              static_cast<long long>(c.steps), last.t, last.E, last.P);
  if (c.mode == enstro::RunConfig::Mode::nse) std::printf("max CFL %.3g\n", r.max_cfl);
  if (!c.csv.empty()) std::printf("diagnostics -> %s\n", c.csv.string().c_str());
  for (const auto& p : r.snapshots) std::printf("snapshot -> %s\n", p.string().c_str());
}

void print_info(const enstro::FlowState& s) {
  const auto& g = s.w.grid();
  std::printf("t         %.17g\n", s.t);
  std::printf("r0        %.17g\n", g.r0());
  std::printf("rmax      %.17g\n", g.rmax());
  std::printf("N         %lld\n", static_cast<long long>(g.size()));
  std::printf("K         %lld\n", static_cast<long long>(s.w.K()));
  std::printf("map       %s (c = %.17g)\n", s.config.map.name().c_str(), s.config.map.c());
  std::printf("E         %.17g\n", enstrophy(s.w, s.config.map));
  const Eigen::VectorXcd m = moments(s.w, s.config.map, std::min<enstro::Index>(4, s.w.K()));
  for (enstro::Index k = 0; k < m.size(); ++k) {
    std::printf("M_%lld       %.6e %+.6ei\n", static_cast<long long>(k), m(k).real(), m(k).imag());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral vorticity solver for flow past a body: Stokes and Navier-Stokes runs "
               "with enstrophy diagnostics.\nENSTRO_THREADS caps solver threads."};
  app.require_subcommand(1);

  std::string config_path, snapshot_path;
  auto* run = app.add_subcommand("run", "run a simulation from a config file");
  run->add_option("config", config_path, "key = value config file")->required();

  auto* resume = app.add_subcommand("resume", "continue a simulation from a snapshot");
  resume->add_option("snapshot", snapshot_path, "snapshot file")->required();
  resume->add_option("config", config_path, "key = value config file")->required();

  auto* info = app.add_subcommand("info", "print the header and moments of a snapshot");
  info->add_option("snapshot", snapshot_path, "snapshot file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  enstro::RunConfig config;
  try {
    if (!config_path.empty()) config = enstro::load_config(config_path);
  } catch (const enstro::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  for (const auto& w : config.warnings()) std::cerr << "warning: " << w << '\n';

  try {
    if (*run) {
      report(config, enstro::run_simulation(config));
    } else if (*resume) {
      const enstro::FlowState start = enstro::read_snapshot(snapshot_path);
      report(config, enstro::run_simulation(config, start));
    } else {
      print_info(enstro::read_snapshot(snapshot_path));
    }
  } catch (const enstro::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "aborted: " << e.what() << '\n';
    return kRuntimeAbort;
  }
  return kOk;
}
