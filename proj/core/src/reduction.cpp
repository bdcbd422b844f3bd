#include "helix/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "binary_io.hpp"
#include "helix/errors.hpp"
#include "helix/fft.hpp"
#include "helix/helical.hpp"
#include "helix/spectral.hpp"

namespace helix {
namespace {

void require_plane_match(const PlaneGrid& p, const Grid3& g) {
  if (!(p == PlaneGrid::of(g))) throw GridMismatch("trace plane does not match the grid slice");
}

// Returns the index of the grid plane at z = x3, or -1 when x3 is off-grid.
int grid_plane_at(const Grid3& g, double x3) {
  const double u = (wrap_angle(x3) + kPi) / g.dz();
  const double r = std::nearbyint(u);
  if (std::abs(u - r) > 1e-12) return -1;
  return static_cast<int>(r) % g.nz;
}

}  // namespace

TraceField2 TraceField2::zeros(const PlaneGrid& grid) {
  TraceField2 t{grid, {}};
  for (auto& c : t.w) c.assign(grid.size(), 0.0);
  return t;
}

double TraceField2::max_abs() const {
  double m = 0.0;
  for (std::size_t n = 0; n < grid.size(); ++n) {
    m = std::max(m, std::sqrt(w[0][n] * w[0][n] + w[1][n] * w[1][n] + w[2][n] * w[2][n]));
  }
  return m;
}

double TraceField2::lp_norm(double p) const {
  double s = 0.0;
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const double m2 = w[0][n] * w[0][n] + w[1][n] * w[1][n] + w[2][n] * w[2][n];
    s += std::pow(m2, 0.5 * p);
  }
  return std::pow(s * grid.cell_area(), 1.0 / p);
}

double TraceField2::l2_norm() const {
  double s = 0.0;
  for (const auto& c : w) {
    for (double v : c) s += v * v;
  }
  return std::sqrt(s * grid.cell_area());
}

TraceField2 operator-(const TraceField2& a, const TraceField2& b) { return a + (-1.0) * b; }

TraceField2 operator+(const TraceField2& a, const TraceField2& b) {
  if (!(a.grid == b.grid)) throw GridMismatch("traces on different planes");
  TraceField2 out = a;
  for (int c = 0; c < 3; ++c) {
    for (std::size_t n = 0; n < a.grid.size(); ++n) out.w[c][n] += b.w[c][n];
  }
  return out;
}

TraceField2 operator*(double s, const TraceField2& a) {
  TraceField2 out = a;
  for (auto& c : out.w) {
    for (double& v : c) v *= s;
  }
  return out;
}

double support_leakage(const TraceField2& w, double radius_fraction) {
  const double peak = w.max_abs();
  if (peak == 0.0) return 0.0;
  const double r = radius_fraction * w.grid.length;
  double outside = 0.0;
  for (int j = 0; j < w.grid.ny; ++j) {
    for (int i = 0; i < w.grid.nx; ++i) {
      const double x = w.grid.x(i), y = w.grid.y(j);
      if (x * x + y * y <= r * r) continue;
      const auto n = w.grid.index(i, j);
      outside = std::max(outside, std::sqrt(w.w[0][n] * w.w[0][n] + w.w[1][n] * w.w[1][n] +
                                            w.w[2][n] * w.w[2][n]));
    }
  }
  return outside / peak;
}

VectorField3 lift(const TraceField2& w, const Grid3& grid, const LiftOptions& opts) {
  require_plane_match(w.grid, grid);
  if (opts.check_support) {
    const double leak = support_leakage(w, opts.support_radius_fraction);
    if (leak > opts.support_tolerance) {
      throw SupportViolation("trace is not negligible outside the support radius (relative " +
                             std::to_string(leak) + ")");
    }
  }
  VectorField3 u(grid);
  const std::size_t ps = grid.plane_size();
  std::vector<double> a(ps), b(ps), c(ps);
  for (int k = 0; k < grid.nz; ++k) {
    const double z = grid.z(k);
    rotate_plane(w.grid, w.w[0], a, z, opts.interp);
    rotate_plane(w.grid, w.w[1], b, z, opts.interp);
    rotate_plane(w.grid, w.w[2], c, z, opts.interp);
    const double cz = std::cos(z), sz = std::sin(z);
    auto u0 = u[0].values().subspan(k * ps, ps);
    auto u1 = u[1].values().subspan(k * ps, ps);
    auto u2 = u[2].values().subspan(k * ps, ps);
    for (std::size_t n = 0; n < ps; ++n) {
      u0[n] = cz * a[n] + sz * b[n];
      u1[n] = -sz * a[n] + cz * b[n];
      u2[n] = c[n];
    }
  }
  return u;
}

TraceField2 trace(const VectorField3& u, double x3, Interp interp) {
  const Grid3& g = u.grid();
  const PlaneGrid pg = PlaneGrid::of(g);
  const std::size_t ps = g.plane_size();
  std::array<std::vector<double>, 3> p;
  const int k = grid_plane_at(g, x3);
  for (int c = 0; c < 3; ++c) {
    if (k >= 0) {
      auto v = u[c].values().subspan(k * ps, ps);
      p[c].assign(v.begin(), v.end());
    } else {
      // shift so the plane through z = 0 carries u(., ., x3)
      ScalarField s = shift_z(u[c], wrap_angle(x3));
      auto v = s.values().subspan(static_cast<std::size_t>(g.z_origin_plane()) * ps, ps);
      p[c].assign(v.begin(), v.end());
    }
  }
  TraceField2 out = TraceField2::zeros(pg);
  std::vector<double> q0(ps), q1(ps);
  rotate_plane(pg, p[0], q0, -x3, interp);
  rotate_plane(pg, p[1], q1, -x3, interp);
  rotate_plane(pg, p[2], out.w[2], -x3, interp);
  const double c = std::cos(x3), s = std::sin(x3);
  for (std::size_t n = 0; n < ps; ++n) {
    out.w[0][n] = c * q0[n] - s * q1[n];
    out.w[1][n] = s * q0[n] + c * q1[n];
  }
  return out;
}

TraceField2 trace(const VectorField3& u, double x3, Interp interp, TraceReport& report) {
  TraceField2 w = trace(u, x3, interp);
  TraceField2 other = trace(u, x3 + 0.5 * kPi, interp);
  const double n = w.l2_norm();
  const double d = (w - other).l2_norm();
  report.slice_defect = n > 0.0 ? d / n : d;
  return w;
}

std::pair<double, double> norm_correspondence(const TraceField2& w, const VectorField3& u,
                                              double p) {
  if (!(p >= 1.0)) throw InvalidArgument("norm exponent must be >= 1");
  const double wn = w.lp_norm(p);
  double un = 0.0;
  if (p == 2.0) {
    un = l2_norm(u);
  } else {
    VectorField3 ph = to_physical(u);
    auto a = ph[0].values();
    auto b = ph[1].values();
    auto c = ph[2].values();
    double s = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) {
      s += std::pow(a[n] * a[n] + b[n] * b[n] + c[n] * c[n], 0.5 * p);
    }
    un = std::pow(s * u.grid().cell_volume(), 1.0 / p);
  }
  return {wn, std::pow(kTwoPi, -1.0 / p) * un};
}

GradientCorrespondence gradient_correspondence(const TraceField2& w, const VectorField3& u) {
  const PlaneGrid& pg = w.grid;
  const int nxh = pg.nx / 2 + 1;
  const double dk = kTwoPi / pg.length;
  ComplexBuffer c(static_cast<std::size_t>(pg.ny) * nxh);
  double acc = 0.0;
  for (int comp = 0; comp < 3; ++comp) {
    fft::forward_2d(pg.nx, pg.ny, w.w[comp].data(), c.data());
    for (int j = 0; j < pg.ny; ++j) {
      const double ky = (2 * j == pg.ny) ? 0.0 : dk * (j <= pg.ny / 2 ? j : j - pg.ny);
      for (int i = 0; i < nxh; ++i) {
        const double kx = (2 * i == pg.nx) ? 0.0 : dk * i;
        const double wt = (i == 0 || 2 * i == pg.nx) ? 1.0 : 2.0;
        acc += wt * (kx * kx + ky * ky) * std::norm(c[static_cast<std::size_t>(j) * nxh + i]);
      }
    }
  }
  GradientCorrespondence r;
  r.grad_trace = std::sqrt(acc * pg.length * pg.length);
  r.grad_field = h1_seminorm(u);
  r.ratio = r.grad_field > 0.0 ? r.grad_trace / r.grad_field : 0.0;
  return r;
}

void write_trace(const std::filesystem::path& path, const TraceField2& w) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidArgument("cannot open '" + path.string() + "' for writing");
  binary::put<std::uint32_t>(os, static_cast<std::uint32_t>(w.grid.nx));
  binary::put<std::uint32_t>(os, static_cast<std::uint32_t>(w.grid.ny));
  binary::put<double>(os, w.grid.length);
  for (const auto& c : w.w) {
    for (double v : c) binary::put<double>(os, v);
  }
  if (!os) throw InvalidArgument("write to '" + path.string() + "' failed");
}

TraceField2 read_trace(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidArgument("cannot open '" + path.string() + "'");
  const auto n1 = binary::get<std::uint32_t>(is);
  const auto n2 = binary::get<std::uint32_t>(is);
  const auto len = binary::get<double>(is);
  if (n1 < 8 || n2 < 8 || n1 > (1u << 16) || n2 > (1u << 16) || !(len > 0.0)) {
    throw FormatError("trace snapshot header is invalid");
  }
  TraceField2 w = TraceField2::zeros({static_cast<int>(n1), static_cast<int>(n2), len});
  for (auto& c : w.w) {
    for (double& v : c) v = binary::get<double>(is);
  }
  if (is.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes in trace snapshot");
  return w;
}

}  // namespace helix
