#pragma once

#include "helix/aligned.hpp"
#include "helix/grid.hpp"

// Thin wrapper over FFTW real transforms. Plans are created once per shape
// under a global lock (FFTW planning is not thread-safe) with FFTW_ESTIMATE so
// results are deterministic, then executed through the new-array interface.
//
// Conventions: forward transforms are normalized by 1/N so that
//   f(x) = sum_k c_k exp(i k.x);
// inverse transforms are unnormalized and never modify their input.
namespace helix::fft {

/// 3D real-to-complex on a Grid3 layout; out has grid.spectral_size() entries.
void forward_3d(const Grid3& grid, const double* in, Complex* out);
void inverse_3d(const Grid3& grid, const Complex* in, double* out);

/// 2D real-to-complex on an ny x nx plane (x fastest); out has ny*(nx/2+1).
void forward_2d(int nx, int ny, const double* in, Complex* out);
void inverse_2d(int nx, int ny, const Complex* in, double* out);

/// 1D real-to-complex of length n; out has n/2+1 entries.
void forward_1d(int n, const double* in, Complex* out);
void inverse_1d(int n, const Complex* in, double* out);

/// Number of cached plans (for tests and diagnostics).
std::size_t cached_plan_count();

}  // namespace helix::fft
