#include "enstro/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace enstro {

namespace {

class Writer {
 public:
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
  void raw(const char* s, std::size_t n) { bytes.insert(bytes.end(), s, s + n); }
  std::vector<std::uint8_t> bytes;

 private:
  void put(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& b) : bytes_(b) {}
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  double f64() { return std::bit_cast<double>(get(8)); }
  void raw(char* out, std::size_t n) {
    need(n);
    std::memcpy(out, bytes_.data() + pos_, n);
    pos_ += n;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (remaining() < n) throw IoError("snapshot: file is truncated");
  }
  std::uint64_t get(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= std::uint64_t(bytes_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_snapshot(const FlowState& s) {
  const RadialGrid& g = s.w.grid();
  const ConformalMap& map = s.config.map;
  Writer w;
  w.raw(kSnapshotMagic, 8);
  w.u32(kSnapshotVersion);
  w.f64(g.r0());
  w.f64(g.rmax());
  w.u64(static_cast<std::uint64_t>(g.size()));
  w.u64(static_cast<std::uint64_t>(s.w.K()));
  w.u32(static_cast<std::uint32_t>(map.kind()));
  w.f64(map.c());
  w.f64(s.t);
  for (Index i = 0; i < g.size(); ++i) w.f64(g.node(i));
  for (Index k = 0; k <= s.w.K(); ++k) {
    for (Index i = 0; i < g.size(); ++i) {
      w.f64(s.w.mode(k)(i).real());
      w.f64(s.w.mode(k)(i).imag());
    }
  }
  return std::move(w.bytes);
}

FlowState decode_snapshot(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  char magic[8];
  r.raw(magic, 8);
  if (std::memcmp(magic, kSnapshotMagic, 8) != 0) throw IoError("snapshot: bad magic");
  const std::uint32_t version = r.u32();
  if (version != kSnapshotVersion) {
    throw IoError("snapshot: unsupported version " + std::to_string(version));
  }
  const double r0 = r.f64();
  const double rmax = r.f64();
  const std::uint64_t n = r.u64();
  const std::uint64_t K = r.u64();
  const std::uint32_t map_id = r.u32();
  const double param = r.f64();
  const double t = r.f64();
  if (n < 3 || n > (1u << 26) || K > (1u << 20)) throw IoError("snapshot: implausible sizes");
  if (r.remaining() != 8 * (n + 2 * n * (K + 1))) {
    throw IoError("snapshot: payload size does not match header");
  }
  if (map_id > 1) throw IoError("snapshot: unknown map id");

  Eigen::VectorXd nodes(static_cast<Index>(n));
  for (Index i = 0; i < nodes.size(); ++i) nodes(i) = r.f64();
  if (nodes(0) != r0 || nodes(nodes.size() - 1) != rmax) {
    throw IoError("snapshot: node range does not match header");
  }
  GridPtr grid;
  try {
    grid = std::make_shared<const RadialGrid>(nodes);
  } catch (const Error& e) {
    throw IoError(std::string("snapshot: ") + e.what());
  }
  Eigen::MatrixXcd modes(static_cast<Index>(n), static_cast<Index>(K + 1));
  for (Index k = 0; k < modes.cols(); ++k) {
    for (Index i = 0; i < modes.rows(); ++i) {
      const double re = r.f64();
      modes(i, k) = Complex(re, r.f64());
    }
  }
  FlowState s{t, SpectralField(grid, std::move(modes)), {}, std::nullopt, std::nullopt};
  try {
    s.config.map = make_map(static_cast<ConformalMap::Kind>(map_id), r0, param);
  } catch (const Error& e) {
    throw IoError(std::string("snapshot: ") + e.what());
  }
  return s;
}

void write_snapshot(const FlowState& s, const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = encode_snapshot(s);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

FlowState read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_snapshot(bytes);
}

}  // namespace enstro
