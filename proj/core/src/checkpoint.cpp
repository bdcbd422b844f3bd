#include "helix/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include "binary_io.hpp"
#include "helix/errors.hpp"

namespace helix {

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t config_hash(const SolverConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  os << "nu=" << cfg.nu << ";epsilon=" << cfg.epsilon << ";max_epsilon=" << cfg.max_epsilon
     << ";dt=" << cfg.dt << ";t_end=" << cfg.t_end << ";cfl=" << cfg.cfl_safety
     << ";dealias=" << cfg.dealias << ";rule=" << static_cast<int>(cfg.dealias_rule)
     << ";enforce=" << cfg.enforce_every << ";interp=" << to_string(cfg.interp);
  return fnv1a(os.str());
}

void write_checkpoint(const std::filesystem::path& path, const HelicalState& s, const Grid3& grid,
                      const SolverConfig& cfg) {
  if (!(s.u.grid() == grid) || s.u.space() != Space::kSpectral) {
    throw GridMismatch("checkpoint state does not match the grid");
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidArgument("cannot open '" + path.string() + "' for writing");
  binary::put<std::uint32_t>(os, static_cast<std::uint32_t>(grid.nx));
  binary::put<std::uint32_t>(os, static_cast<std::uint32_t>(grid.ny));
  binary::put<std::uint32_t>(os, static_cast<std::uint32_t>(grid.nz));
  binary::put<double>(os, grid.length);
  binary::put<double>(os, s.t);
  binary::put<std::uint64_t>(os, config_hash(cfg));
  for (int c = 0; c < 3; ++c) {
    for (const Complex& z : s.u[c].coeffs()) {
      binary::put<double>(os, z.real());
      binary::put<double>(os, z.imag());
    }
  }
  if (!os) throw InvalidArgument("write to '" + path.string() + "' failed");
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidArgument("cannot open '" + path.string() + "'");
  Checkpoint cp;
  const auto nx = binary::get<std::uint32_t>(is);
  const auto ny = binary::get<std::uint32_t>(is);
  const auto nz = binary::get<std::uint32_t>(is);
  const auto len = binary::get<double>(is);
  if (nx > (1u << 14) || ny > (1u << 14) || nz > (1u << 14)) throw FormatError("checkpoint grid too large");
  try {
    cp.grid = Grid3::make(static_cast<int>(nx), static_cast<int>(ny), static_cast<int>(nz), len);
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("checkpoint header: ") + e.what());
  }
  cp.t = binary::get<double>(is);
  cp.cfg_hash = binary::get<std::uint64_t>(is);
  cp.u = VectorField3(cp.grid, Space::kSpectral);
  for (int c = 0; c < 3; ++c) {
    for (Complex& z : cp.u[c].coeffs()) {
      const double re = binary::get<double>(is);
      const double im = binary::get<double>(is);
      z = {re, im};
    }
  }
  if (is.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes in checkpoint");
  return cp;
}

}  // namespace helix
