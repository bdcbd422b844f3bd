#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>

#include "helix/solver.hpp"

namespace helix {

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

/// Hash of every SolverConfig field that influences the trajectory.
std::uint64_t config_hash(const SolverConfig& cfg);

struct Checkpoint {
  Grid3 grid;
  double t = 0.0;
  std::uint64_t cfg_hash = 0;
  VectorField3 u;  ///< spectral coefficients
};

/// Little-endian: u32 nx, u32 ny, u32 nz, f64 L, f64 t, u64 cfg hash, then the
/// spectral coefficients of u1, u2, u3 as (re, im) f64 pairs in storage order.
void write_checkpoint(const std::filesystem::path& path, const HelicalState& s, const Grid3& grid,
                      const SolverConfig& cfg);
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace helix
