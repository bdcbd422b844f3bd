#include "helix/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cstring>
#include <map>
#include <mutex>
#include <tuple>

namespace helix::fft {
namespace {

enum class Kind { kR2C, kC2R };

struct Key {
  Kind kind;
  int rank;
  std::array<int, 3> dims;  // slowest first, as FFTW expects
  bool operator<(const Key& o) const {
    return std::tie(kind, rank, dims) < std::tie(o.kind, o.rank, o.dims);
  }
};

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

std::map<Key, fftw_plan>& plan_table() {
  static std::map<Key, fftw_plan> table;
  return table;
}

std::size_t real_count(const Key& k) {
  std::size_t n = 1;
  for (int d = 0; d < k.rank; ++d) n *= static_cast<std::size_t>(k.dims[d]);
  return n;
}

std::size_t complex_count(const Key& k) {
  std::size_t n = 1;
  for (int d = 0; d < k.rank - 1; ++d) n *= static_cast<std::size_t>(k.dims[d]);
  return n * static_cast<std::size_t>(k.dims[k.rank - 1] / 2 + 1);
}

fftw_plan get_plan(const Key& key) {
  std::lock_guard lock(plan_mutex());
  auto& table = plan_table();
  if (auto it = table.find(key); it != table.end()) return it->second;

  auto* r = fftw_alloc_real(real_count(key));
  auto* c = fftw_alloc_complex(complex_count(key));
  fftw_plan p = key.kind == Kind::kR2C
                    ? fftw_plan_dft_r2c(key.rank, key.dims.data(), r, c, FFTW_ESTIMATE)
                    : fftw_plan_dft_c2r(key.rank, key.dims.data(), c, r, FFTW_ESTIMATE);
  fftw_free(r);
  fftw_free(c);
  table.emplace(key, p);
  return p;
}

// Scratch keeps the new-array interface honest: FFTW requires the execution
// arrays to share the SIMD alignment of the planning arrays.
struct Scratch {
  RealBuffer real;
  ComplexBuffer cplx;
};

Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

bool aligned(const void* p) { return fftw_alignment_of(const_cast<double*>(static_cast<const double*>(p))) == 0; }

void run_r2c(const Key& key, const double* in, Complex* out) {
  fftw_plan p = get_plan(key);
  const std::size_t nr = real_count(key);
  const std::size_t nc = complex_count(key);
  auto& s = scratch();
  const double* src = in;
  if (!aligned(in)) {
    s.real.resize(std::max(s.real.size(), nr));
    std::copy(in, in + nr, s.real.data());
    src = s.real.data();
  }
  Complex* dst = out;
  if (!aligned(out)) {
    s.cplx.resize(std::max(s.cplx.size(), nc));
    dst = s.cplx.data();
  }
  fftw_execute_dft_r2c(p, const_cast<double*>(src), reinterpret_cast<fftw_complex*>(dst));
  const double scale = 1.0 / static_cast<double>(nr);
  if (dst != out) {
    for (std::size_t n = 0; n < nc; ++n) out[n] = dst[n] * scale;
  } else {
    for (std::size_t n = 0; n < nc; ++n) out[n] *= scale;
  }
}

void run_c2r(const Key& key, const Complex* in, double* out) {
  fftw_plan p = get_plan(key);
  const std::size_t nr = real_count(key);
  const std::size_t nc = complex_count(key);
  auto& s = scratch();
  // c2r destroys its input; always work on a copy.
  s.cplx.resize(std::max(s.cplx.size(), nc));
  std::copy(in, in + nc, s.cplx.data());
  double* dst = out;
  if (!aligned(out)) {
    s.real.resize(std::max(s.real.size(), nr));
    dst = s.real.data();
  }
  fftw_execute_dft_c2r(p, reinterpret_cast<fftw_complex*>(s.cplx.data()), dst);
  if (dst != out) std::copy(dst, dst + nr, out);
}

}  // namespace

void forward_3d(const Grid3& g, const double* in, Complex* out) {
  run_r2c({Kind::kR2C, 3, {g.nz, g.ny, g.nx}}, in, out);
}

void inverse_3d(const Grid3& g, const Complex* in, double* out) {
  run_c2r({Kind::kC2R, 3, {g.nz, g.ny, g.nx}}, in, out);
}

void forward_2d(int nx, int ny, const double* in, Complex* out) {
  run_r2c({Kind::kR2C, 2, {ny, nx, 0}}, in, out);
}

void inverse_2d(int nx, int ny, const Complex* in, double* out) {
  run_c2r({Kind::kC2R, 2, {ny, nx, 0}}, in, out);
}

void forward_1d(int n, const double* in, Complex* out) {
  run_r2c({Kind::kR2C, 1, {n, 0, 0}}, in, out);
}

void inverse_1d(int n, const Complex* in, double* out) {
  run_c2r({Kind::kC2R, 1, {n, 0, 0}}, in, out);
}

std::size_t cached_plan_count() {
  std::lock_guard lock(plan_mutex());
  return plan_table().size();
}

}  // namespace helix::fft
