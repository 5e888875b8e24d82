#include <doctest.h>

#include <bit>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "enstro/parallel.hpp"
#include "enstro/runner.hpp"
#include "enstro/snapshot.hpp"

using namespace enstro;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "enstro_tests";
  fs::create_directories(dir);
  return dir / name;
}

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<double>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream s(line);
    std::string cell;
    while (std::getline(s, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(ENSTRO_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

// Independent little-endian encoder for the golden layout.
struct Bytes {
  std::vector<std::uint8_t> b;
  void u(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f(double v) { u(std::bit_cast<std::uint64_t>(v), 8); }
};

FlowState small_state() {
  const GridPtr g = build_grid(1.0, 2.0, 16, Stretch::uniform());
  SpectralField w(g, 1);
  for (Index i = 0; i < 16; ++i) {
    w.mode(0)(i) = 0.1 * i;
    w.mode(1)(i) = Complex(-0.5 * i, 1.0 / (1.0 + i));
  }
  SolverConfig cfg;
  return FlowState{0.5, w, cfg, std::nullopt, std::nullopt};
}

}  // namespace

TEST_CASE("config parsing applies presets first and rejects unknown keys") {
  const RunConfig c = parse_config("# demo\nsteps = 10\npreset = nse_demo\n dt = 2e-4 \n");
  CHECK(c.mode == RunConfig::Mode::nse);
  CHECK(c.steps == 10);
  CHECK(c.dt == 2e-4);
  CHECK(c.v_inf == preset_config("nse_demo").v_inf);
  CHECK_THROWS_AS(parse_config("stepz = 10\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("steps = 10\nsteps = 20\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("steps\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("dt = fast\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("preset = nope\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("mode = nse\nK = 16\nnphi = 40\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("map = joukowski\nmap_c = 1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("dt = -1\n"), ConfigError);
  for (const std::string& name : preset_names()) CHECK_NOTHROW(preset_config(name));
  CHECK(preset_config("appendix").v_inf == 150.0);
  CHECK_FALSE(preset_config("appendix").warnings().empty());
}

TEST_CASE("CSV schema") {
  CHECK(csv_header() ==
        "t,E,P,S,D,A,residual_linear,residual_nonlinear,Re_M0,Re_M1,Re_M2,Re_M3,Re_M4,Im_M0,Im_M1,Im_M2,"
        "Im_M3,Im_M4");
}

TEST_CASE("stokes preset gives non-increasing enstrophy end to end") {
  const fs::path csv = scratch("stokes.csv");
  RunConfig c = preset_config("stokes_demo");
  c.steps = 500;
  c.csv = csv;
  run_simulation(c);
  const auto rows = read_csv(csv);
  REQUIRE(rows.size() == 501);
  CHECK(rows[0].size() == 18);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][1] <= rows[i - 1][1]);
}

TEST_CASE("nse demo shows non-monotone enstrophy") {
  RunConfig c = preset_config("nse_demo");
  c.steps = 300;
  c.csv.clear();
  const RunResult r = run_simulation(c);
  std::size_t up = 0, down = 0;
  for (std::size_t i = 1; i < r.history.size(); ++i) {
    up += r.history[i].E > r.history[i - 1].E;
    down += r.history[i].E < r.history[i - 1].E;
  }
  CHECK(up > 0);
  CHECK(down > 0);
  CHECK(r.max_cfl < 1.0);
}

TEST_CASE("zero initial condition without far field gives zero diagnostics") {
  RunConfig c = parse_config("ic = zero\nsteps = 5\nn = 32\nK = 4\n");
  c.csv = scratch("zero.csv");
  run_simulation(c);
  for (const auto& row : read_csv(c.csv)) {
    for (std::size_t j = 1; j < row.size(); ++j) CHECK(row[j] == 0.0);
  }
}

TEST_CASE("identical configs give byte-identical CSV") {
  RunConfig c = parse_config("mode = nse\nv_inf = 2\nic = noise\nseed = 5\nsteps = 20\nn = 64\nK = 8\n");
  c.csv = scratch("det_a.csv");
  run_simulation(c);
  c.csv = scratch("det_b.csv");
  run_simulation(c);
  CHECK(read_text(scratch("det_a.csv")) == read_text(scratch("det_b.csv")));
}

TEST_CASE("snapshot bytes follow the documented little-endian layout") {
  const FlowState s = small_state();
  const std::vector<std::uint8_t> bytes = encode_snapshot(s);
  Bytes want;
  for (int i = 0; i < 8; ++i) want.b.push_back(static_cast<std::uint8_t>(kSnapshotMagic[i]));
  want.u(1, 4);
  want.f(1.0), want.f(2.0);
  want.u(16, 8), want.u(1, 8), want.u(0, 4);
  want.f(0.0), want.f(0.5);
  for (Index i = 0; i < 16; ++i) want.f(s.w.grid().node(i));
  for (Index k = 0; k <= 1; ++k) {
    for (Index i = 0; i < 16; ++i) want.f(s.w.mode(k)(i).real()), want.f(s.w.mode(k)(i).imag());
  }
  CHECK(bytes == want.b);

  // Golden header: magic, version 1, r0 = 1, Rmax = 2, N = 16, K = 1, disk, c = 0, t = 0.5.
  const std::string golden = std::string("454e5354524f534e") + "01000000" + "000000000000f03f" +
                             "0000000000000040" + "1000000000000000" + "0100000000000000" + "00000000" +
                             "0000000000000000" + "000000000000e03f";
  std::string hex;
  char buf[3];
  for (std::size_t i = 0; i < 64; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", bytes[i]);
    hex += buf;
  }
  CHECK(hex == golden);
}

TEST_CASE("snapshot round trip is bitwise exact") {
  const FlowState s = small_state();
  const fs::path p = scratch("state.snap");
  write_snapshot(s, p);
  const FlowState back = read_snapshot(p);
  CHECK(back.t == s.t);
  CHECK(back.w.modes() == s.w.modes());
  CHECK(back.w.grid().nodes() == s.w.grid().nodes());
  CHECK(encode_snapshot(back) == encode_snapshot(s));

  const FlowState mapped{1.0, s.w, SolverConfig{.map = joukowski_map(1.0, 0.3)}, std::nullopt, std::nullopt};
  CHECK(decode_snapshot(encode_snapshot(mapped)).config.map == joukowski_map(1.0, 0.3));
}

TEST_CASE("corrupt snapshots raise I/O errors") {
  const std::vector<std::uint8_t> good = encode_snapshot(small_state());
  auto bad = good;
  bad[0] = 'X';
  CHECK_THROWS_AS(decode_snapshot(bad), IoError);
  bad = good;
  bad[8] = 2;
  CHECK_THROWS_AS(decode_snapshot(bad), IoError);
  bad = good;
  bad.resize(good.size() - 1);
  CHECK_THROWS_AS(decode_snapshot(bad), IoError);
  CHECK_THROWS_AS(read_snapshot(scratch("missing.snap")), IoError);
}

TEST_CASE("snapshots must match the resuming configuration") {
  const RunConfig c = parse_config("steps = 2\nn = 32\nK = 4\n");
  const FlowState s = initial_state(c);
  CHECK_NOTHROW(check_compatible(s, c));
  CHECK_THROWS_AS(check_compatible(s, parse_config("steps = 2\nn = 32\nK = 5\n")), ConfigError);
  CHECK_THROWS_AS(check_compatible(s, parse_config("steps = 2\nn = 48\nK = 4\n")), ConfigError);
  CHECK_THROWS_AS(check_compatible(s, parse_config("steps = 2\nn = 32\nK = 4\nmap = joukowski\nmap_c = 0.3\n")),
                  ConfigError);
}

TEST_CASE("resumed run continues from the snapshot time") {
  RunConfig c = parse_config("mode = nse\nv_inf = 1\nsteps = 10\nn = 64\nK = 8\n");
  c.csv.clear();
  c.snapshot_prefix = scratch("resume");
  const RunResult first = run_simulation(c);
  REQUIRE_FALSE(first.snapshots.empty());
  const FlowState s = read_snapshot(first.snapshots.back());
  c.snapshot_prefix.clear();
  const RunResult second = run_simulation(c, s);
  CHECK(second.history.front().t == doctest::Approx(0.01));
  CHECK(second.history.back().t == doctest::Approx(0.02));
}

TEST_CASE("ENSTRO_THREADS caps the worker count") {
  ::setenv("ENSTRO_THREADS", "1", 1);
  CHECK(solver_threads() == 1);
  std::vector<int> hits(100, 0);
  parallel_for(100, [&](Index i) { ++hits[static_cast<std::size_t>(i)]; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  ::unsetenv("ENSTRO_THREADS");
  CHECK(solver_threads() >= 1);
}

TEST_CASE("command line verbs and exit codes") {
  const fs::path cfg = scratch("cli.cfg");
  const fs::path csv = scratch("cli.csv");
  const fs::path prefix = scratch("cli");
  write_text(cfg, "steps = 4\nn = 32\nK = 4\ncsv = " + csv.string() + "\nsnapshot_prefix = " + prefix.string() + "\n");
  CHECK(cli("run " + cfg.string()) == 0);
  CHECK(fs::exists(csv));
  const fs::path snap = prefix.string() + "_00000004.snap";
  REQUIRE(fs::exists(snap));
  CHECK(cli("info " + snap.string()) == 0);
  CHECK(cli("resume " + snap.string() + " " + cfg.string()) == 0);

  const fs::path bad = scratch("bad.cfg");
  write_text(bad, "unknown_key = 1\n");
  CHECK(cli("run " + bad.string()) == 1);
  CHECK(cli("run " + scratch("absent.cfg").string()) == 1);
  CHECK(cli("") == 1);

  const fs::path other = scratch("other.cfg");
  write_text(other, "steps = 4\nn = 32\nK = 6\ncsv = " + csv.string() + "\n");
  CHECK(cli("resume " + snap.string() + " " + other.string()) == 1);

  const fs::path garbage = scratch("garbage.snap");
  write_text(garbage, "not a snapshot");
  CHECK(cli("info " + garbage.string()) == 2);

  const fs::path unstable = scratch("unstable.cfg");
  write_text(unstable, "mode = nse\nv_inf = 50\ndt = 0.1\nsteps = 3\nn = 32\nK = 4\ncfl = abort\ncsv = " +
                           csv.string() + "\n");
  CHECK(cli("run " + unstable.string()) == 2);
}
