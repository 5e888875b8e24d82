#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "enstro/stokes.hpp"

namespace enstro {

/// Restart file layout, all little-endian:
///   "ENSTROSN" | u32 version | f64 r0 | f64 Rmax | u64 N | u64 K |
///   u32 map id | f64 map parameter | f64 t | N x f64 nodes |
///   for k = 0..K, for each node: f64 Re, f64 Im
inline constexpr char kSnapshotMagic[9] = "ENSTROSN";
inline constexpr std::uint32_t kSnapshotVersion = 1;

std::vector<std::uint8_t> encode_snapshot(const FlowState& s);
/// The returned state carries the stored map; other solver settings are defaults.
FlowState decode_snapshot(const std::vector<std::uint8_t>& bytes);

void write_snapshot(const FlowState& s, const std::filesystem::path& path);
FlowState read_snapshot(const std::filesystem::path& path);

}  // namespace enstro
