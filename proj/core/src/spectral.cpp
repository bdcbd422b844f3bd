#include "helix/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "helix/errors.hpp"
#include "helix/fft.hpp"

namespace helix {
namespace {

constexpr Complex kI{0.0, 1.0};

double dk(const Grid3& g, int axis, int i, int j, int k) {
  switch (axis) {
    case 0: return g.dkx(i);
    case 1: return g.dky(j);
    default: return g.dkz(k);
  }
}

void require_same_grid(const VectorField3& v) {
  if (!(v[0].grid() == v[1].grid() && v[1].grid() == v[2].grid())) {
    throw GridMismatch("vector components on different grids");
  }
}

}  // namespace

ScalarField transform(const ScalarField& f, Direction dir) {
  const Grid3& g = f.grid();
  if (dir == Direction::kForward) {
    if (f.space() != Space::kPhysical) throw InvalidArgument("forward transform needs a physical field");
    ScalarField out(g, Space::kSpectral);
    fft::forward_3d(g, f.values().data(), out.coeffs().data());
    return out;
  }
  if (f.space() != Space::kSpectral) throw InvalidArgument("inverse transform needs a spectral field");
  ScalarField out(g, Space::kPhysical);
  fft::inverse_3d(g, f.coeffs().data(), out.values().data());
  return out;
}

VectorField3 transform(const VectorField3& v, Direction dir) {
  return {transform(v[0], dir), transform(v[1], dir), transform(v[2], dir)};
}

ScalarField to_spectral(const ScalarField& f) {
  return f.is_physical() ? transform(f, Direction::kForward) : f;
}
ScalarField to_physical(const ScalarField& f) {
  return f.is_physical() ? f : transform(f, Direction::kInverse);
}
VectorField3 to_spectral(const VectorField3& v) {
  return {to_spectral(v[0]), to_spectral(v[1]), to_spectral(v[2])};
}
VectorField3 to_physical(const VectorField3& v) {
  return {to_physical(v[0]), to_physical(v[1]), to_physical(v[2])};
}

ScalarField derivative(const ScalarField& f, int axis) {
  if (axis < 0 || axis > 2) throw InvalidArgument("derivative axis must be 0, 1 or 2");
  ScalarField s = to_spectral(f);
  const Grid3& g = s.grid();
  auto c = s.coeffs();
  for_each_mode(g, [&](int i, int j, int k, std::size_t n) { c[n] *= kI * dk(g, axis, i, j, k); });
  return f.is_physical() ? to_physical(s) : s;
}

ScalarField laplacian(const ScalarField& f) {
  ScalarField s = to_spectral(f);
  const Grid3& g = s.grid();
  auto c = s.coeffs();
  for_each_mode(g, [&](int i, int j, int k, std::size_t n) {
    const double kx = g.kx(i), ky = g.ky(j), kz = g.kz(k);
    c[n] *= -(kx * kx + ky * ky + kz * kz);
  });
  return f.is_physical() ? to_physical(s) : s;
}

VectorField3 gradient(const ScalarField& f) {
  return {derivative(f, 0), derivative(f, 1), derivative(f, 2)};
}

ScalarField divergence(const VectorField3& v) {
  require_same_grid(v);
  VectorField3 s = to_spectral(v);
  const Grid3& g = v.grid();
  ScalarField out(g, Space::kSpectral);
  auto o = out.coeffs();
  auto a = s[0].coeffs();
  auto b = s[1].coeffs();
  auto c = s[2].coeffs();
  for_each_mode(g, [&](int i, int j, int k, std::size_t n) {
    o[n] = kI * (g.dkx(i) * a[n] + g.dky(j) * b[n] + g.dkz(k) * c[n]);
  });
  return v.space() == Space::kPhysical ? to_physical(out) : out;
}

VectorField3 curl(const VectorField3& v) {
  require_same_grid(v);
  VectorField3 s = to_spectral(v);
  const Grid3& g = v.grid();
  VectorField3 out(g, Space::kSpectral);
  auto a = s[0].coeffs();
  auto b = s[1].coeffs();
  auto c = s[2].coeffs();
  auto o0 = out[0].coeffs();
  auto o1 = out[1].coeffs();
  auto o2 = out[2].coeffs();
  for_each_mode(g, [&](int i, int j, int k, std::size_t n) {
    const double kx = g.dkx(i), ky = g.dky(j), kz = g.dkz(k);
    o0[n] = kI * (ky * c[n] - kz * b[n]);
    o1[n] = kI * (kz * a[n] - kx * c[n]);
    o2[n] = kI * (kx * b[n] - ky * a[n]);
  });
  return v.space() == Space::kPhysical ? to_physical(out) : out;
}

VectorField3 leray_project(const VectorField3& v) {
  require_same_grid(v);
  VectorField3 s = to_spectral(v);
  const Grid3& g = v.grid();
  auto a = s[0].coeffs();
  auto b = s[1].coeffs();
  auto c = s[2].coeffs();
  for_each_mode(g, [&](int i, int j, int k, std::size_t n) {
    const double kx = g.dkx(i), ky = g.dky(j), kz = g.dkz(k);
    const double k2 = kx * kx + ky * ky + kz * kz;
    if (k2 == 0.0) return;
    const Complex kv = (kx * a[n] + ky * b[n] + kz * c[n]) / k2;
    a[n] -= kx * kv;
    b[n] -= ky * kv;
    c[n] -= kz * kv;
  });
  return v.space() == Space::kPhysical ? to_physical(s) : s;
}

bool dealias_keeps(const Grid3& g, int i, int j, int k, DealiasShape shape) {
  const int mx = i;
  const int my = j <= g.ny / 2 ? j : g.ny - j;
  const int mz = k <= g.nz / 2 ? k : g.nz - k;
  const int cx = (g.nx - 1) / 3;
  const int cy = (g.ny - 1) / 3;
  const int cz = (g.nz - 1) / 3;
  if (mz > cz) return false;
  if (shape == DealiasShape::kBox) return mx <= cx && my <= cy;
  const double rx = static_cast<double>(mx) / cx;
  const double ry = static_cast<double>(my) / cy;
  return rx * rx + ry * ry <= 1.0 + 1e-12;
}

void dealias_in_place(ScalarField& f, DealiasShape shape) {
  const Grid3& g = f.grid();
  auto c = f.coeffs();
  for_each_mode(g, [&](int i, int j, int k, std::size_t n) {
    if (!dealias_keeps(g, i, j, k, shape)) c[n] = Complex{};
  });
}

ScalarField dealias(const ScalarField& f, DealiasShape shape) {
  if (f.is_physical()) throw InvalidArgument("dealias needs a spectral field");
  ScalarField out = f;
  dealias_in_place(out, shape);
  return out;
}

VectorField3 dealias(const VectorField3& v, DealiasShape shape) {
  return {dealias(v[0], shape), dealias(v[1], shape), dealias(v[2], shape)};
}

ScalarField resample(const ScalarField& f, const Grid3& target) {
  if (f.is_physical()) throw InvalidArgument("resample needs a spectral field");
  const Grid3& g = f.grid();
  if (g.length != target.length) throw GridMismatch("resample keeps the box size");
  ScalarField out(target, Space::kSpectral);
  auto src = f.coeffs();
  auto dst = out.coeffs();
  const int hx = std::min(g.nx, target.nx) / 2;
  const int hy = std::min(g.ny, target.ny) / 2;
  const int hz = std::min(g.nz, target.nz) / 2;
  // signed index m -> storage row on a grid with n points
  auto row = [](int m, int n) { return m >= 0 ? m : m + n; };
  for (int mz = 1 - hz; mz < hz; ++mz) {
    for (int my = 1 - hy; my < hy; ++my) {
      for (int mx = 0; mx < hx; ++mx) {
        dst[target.spectral_index(mx, row(my, target.ny), row(mz, target.nz))] =
            src[g.spectral_index(mx, row(my, g.ny), row(mz, g.nz))];
      }
    }
  }
  return out;
}

VectorField3 resample(const VectorField3& v, const Grid3& target) {
  return {resample(v[0], target), resample(v[1], target), resample(v[2], target)};
}

double l2_norm(const ScalarField& f) {
  if (!f.is_physical()) return spectral_l2_norm(f);
  double s = 0.0;
  for (double v : f.values()) s += v * v;
  return std::sqrt(s * f.grid().cell_volume());
}

double l2_norm(const VectorField3& v) {
  const double a = l2_norm(v[0]), b = l2_norm(v[1]), c = l2_norm(v[2]);
  return std::sqrt(a * a + b * b + c * c);
}

double l4_norm(const ScalarField& f) {
  ScalarField p = to_physical(f);
  double s = 0.0;
  for (double v : p.values()) s += v * v * v * v;
  return std::pow(s * f.grid().cell_volume(), 0.25);
}

double l4_norm(const VectorField3& v) {
  VectorField3 p = to_physical(v);
  auto a = p[0].values();
  auto b = p[1].values();
  auto c = p[2].values();
  double s = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    const double m2 = a[n] * a[n] + b[n] * b[n] + c[n] * c[n];
    s += m2 * m2;
  }
  return std::pow(s * v.grid().cell_volume(), 0.25);
}

double spectral_l2_norm(const ScalarField& f) {
  if (f.is_physical()) throw InvalidArgument("spectral_l2_norm needs a spectral field");
  const Grid3& g = f.grid();
  auto c = f.coeffs();
  double s = 0.0;
  for_each_mode(g, [&](int i, int, int, std::size_t n) { s += mode_weight(g, i) * std::norm(c[n]); });
  return std::sqrt(s * g.volume());
}

double h1_seminorm(const ScalarField& f) {
  ScalarField s = to_spectral(f);
  const Grid3& g = s.grid();
  auto c = s.coeffs();
  double acc = 0.0;
  for_each_mode(g, [&](int i, int j, int k, std::size_t n) {
    const double kx = g.dkx(i), ky = g.dky(j), kz = g.dkz(k);
    acc += mode_weight(g, i) * (kx * kx + ky * ky + kz * kz) * std::norm(c[n]);
  });
  return std::sqrt(acc * g.volume());
}

double h1_seminorm(const VectorField3& v) {
  const double a = h1_seminorm(v[0]), b = h1_seminorm(v[1]), c = h1_seminorm(v[2]);
  return std::sqrt(a * a + b * b + c * c);
}

double inner_product(const VectorField3& a, const VectorField3& b) {
  VectorField3 pa = to_physical(a);
  VectorField3 pb = to_physical(b);
  if (!(pa.grid() == pb.grid())) throw GridMismatch("inner product of fields on different grids");
  double s = 0.0;
  for (int c = 0; c < 3; ++c) {
    auto x = pa[c].values();
    auto y = pb[c].values();
    for (std::size_t n = 0; n < x.size(); ++n) s += x[n] * y[n];
  }
  return s * a.grid().cell_volume();
}

double local_l2_norm(const VectorField3& v, const LocalBox& box) {
  VectorField3 p = to_physical(v);
  const Grid3& g = v.grid();
  double s = 0.0;
  for (int k = 0; k < g.nz; ++k) {
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        if (!box.contains(g.x(i), g.y(j))) continue;
        const auto n = g.index(i, j, k);
        for (int c = 0; c < 3; ++c) {
          const double x = p[c].values()[n];
          s += x * x;
        }
      }
    }
  }
  return std::sqrt(s * g.cell_volume());
}

NormReport norms(const VectorField3& v, std::optional<LocalBox> box) {
  if (v.space() != Space::kPhysical) throw InvalidArgument("norms need a physical field");
  NormReport r;
  r.l2 = l2_norm(v);
  r.l4 = l4_norm(v);
  r.h1_seminorm = h1_seminorm(v);
  r.div_l2 = l2_norm(divergence(to_spectral(v)));
  r.curl_l2 = l2_norm(curl(to_spectral(v)));
  if (box) r.local_l2 = local_l2_norm(v, *box);
  return r;
}

}  // namespace helix
