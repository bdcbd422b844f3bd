#include "helix/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "helix/errors.hpp"
#include "helix/fft.hpp"

namespace helix {
namespace {

int wrap(int i, int n) {
  const int r = i % n;
  return r < 0 ? r + n : r;
}

// Exact quarter turn: out(y) = in(Rot(q pi/2) y) on a square grid whose node
// set is symmetric under y -> -y modulo the period.
void quarter_turn(int n, std::span<const double> in, std::span<double> out, int q) {
  auto at = [&](int i, int j) { return in[static_cast<std::size_t>(j) * n + i]; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      double v = 0.0;
      switch (q) {
        case 0: v = at(i, j); break;
        case 1: v = at(wrap(n - j, n), i); break;
        case 2: v = at(wrap(n - i, n), wrap(n - j, n)); break;
        default: v = at(j, wrap(n - i, n)); break;
      }
      out[static_cast<std::size_t>(j) * n + i] = v;
    }
  }
}

void transpose(int n, std::span<const double> in, std::span<double> out) {
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      out[static_cast<std::size_t>(i) * n + j] = in[static_cast<std::size_t>(j) * n + i];
    }
  }
}

double catmull_rom(double p0, double p1, double p2, double p3, double t) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  return 0.5 * ((-t3 + 2.0 * t2 - t) * p0 + (3.0 * t3 - 5.0 * t2 + 2.0) * p1 +
                (-3.0 * t3 + 4.0 * t2 + t) * p2 + (t3 - t2) * p3);
}

double sample_bicubic(const PlaneGrid& g, std::span<const double> in, double x, double y) {
  const double u = (x - g.x(0)) / g.dx();
  const double v = (y - g.y(0)) / g.dy();
  const int i0 = static_cast<int>(std::floor(u));
  const int j0 = static_cast<int>(std::floor(v));
  const double tu = u - i0;
  const double tv = v - j0;
  double rows[4];
  for (int b = 0; b < 4; ++b) {
    const std::size_t row = static_cast<std::size_t>(wrap(j0 - 1 + b, g.ny)) * g.nx;
    rows[b] = catmull_rom(in[row + wrap(i0 - 1, g.nx)], in[row + wrap(i0, g.nx)],
                          in[row + wrap(i0 + 1, g.nx)], in[row + wrap(i0 + 2, g.nx)], tu);
  }
  return catmull_rom(rows[0], rows[1], rows[2], rows[3], tv);
}

// Trigonometric interpolant of one plane, Nyquist terms split symmetrically.
class TrigPlane {
 public:
  TrigPlane(const PlaneGrid& g, std::span<const double> in)
      : g_(g), nxh_(g.nx / 2 + 1), coeffs_(static_cast<std::size_t>(g.ny) * nxh_) {
    fft::forward_2d(g.nx, g.ny, in.data(), coeffs_.data());
  }

  double operator()(double x, double y) const {
    const double dkx = kTwoPi / g_.length;
    const double sx = x - g_.x(0);
    const double sy = y - g_.y(0);
    std::vector<Complex> ey(static_cast<std::size_t>(g_.ny));
    for (int j = 0; j < g_.ny; ++j) {
      const int m = j <= g_.ny / 2 ? j : j - g_.ny;
      ey[j] = (2 * j == g_.ny) ? Complex(std::cos(dkx * m * sy), 0.0) : std::polar(1.0, dkx * m * sy);
    }
    double total = 0.0;
    for (int i = 0; i < nxh_; ++i) {
      Complex col{};
      for (int j = 0; j < g_.ny; ++j) col += coeffs_[static_cast<std::size_t>(j) * nxh_ + i] * ey[j];
      const Complex ex =
          (2 * i == g_.nx) ? Complex(std::cos(dkx * i * sx), 0.0) : std::polar(1.0, dkx * i * sx);
      const double w = (i == 0 || 2 * i == g_.nx) ? 1.0 : 2.0;
      total += w * (col * ex).real();
    }
    return total;
  }

 private:
  PlaneGrid g_;
  int nxh_;
  ComplexBuffer coeffs_;
};

void shear_rotate(const PlaneGrid& g, std::span<const double> in, std::span<double> out,
                  double beta) {
  const int n = g.nx;
  const double a = -std::tan(0.5 * beta);
  const double b = std::sin(beta);
  std::vector<double> s1(in.size()), s2(in.size()), shift(static_cast<std::size_t>(n));

  for (int j = 0; j < n; ++j) shift[j] = a * g.y(j);
  shift_rows(g, in, s1, shift);

  transpose(n, s1, s2);
  for (int i = 0; i < n; ++i) shift[i] = b * g.x(i);
  shift_rows(g, s2, s1, shift);
  transpose(n, s1, s2);

  for (int j = 0; j < n; ++j) shift[j] = a * g.y(j);
  shift_rows(g, s2, out, shift);
}

}  // namespace

const char* to_string(Interp interp) {
  switch (interp) {
    case Interp::kSpectralShear: return "spectral_shear";
    case Interp::kBicubic: return "bicubic";
    default: return "trigonometric";
  }
}

Interp interp_from_string(const std::string& name) {
  if (name == "spectral_shear") return Interp::kSpectralShear;
  if (name == "bicubic") return Interp::kBicubic;
  if (name == "trigonometric") return Interp::kTrigonometric;
  throw InvalidArgument("unknown interpolation '" + name + "'");
}

void shift_rows(const PlaneGrid& g, std::span<const double> in, std::span<double> out,
                std::span<const double> shift) {
  const int nxh = g.nx / 2 + 1;
  const double dk = kTwoPi / g.length;
  ComplexBuffer c(static_cast<std::size_t>(nxh));
  RealBuffer row(static_cast<std::size_t>(g.nx));
  for (int j = 0; j < g.ny; ++j) {
    const std::size_t off = static_cast<std::size_t>(j) * g.nx;
    std::copy(in.begin() + off, in.begin() + off + g.nx, row.begin());
    fft::forward_1d(g.nx, row.data(), c.data());
    const double s = shift[j];
    for (int m = 0; m < nxh; ++m) {
      c[m] *= (2 * m == g.nx) ? Complex(std::cos(dk * m * s), 0.0) : std::polar(1.0, dk * m * s);
    }
    fft::inverse_1d(g.nx, c.data(), row.data());
    std::copy(row.begin(), row.end(), out.begin() + off);
  }
}

double sample_plane(const PlaneGrid& g, std::span<const double> in, double x, double y,
                    Interp interp) {
  if (interp == Interp::kTrigonometric) return TrigPlane(g, in)(x, y);
  return sample_bicubic(g, in, x, y);
}

void rotate_plane(const PlaneGrid& g, std::span<const double> in, std::span<double> out,
                  double beta, Interp interp) {
  if (g.nx != g.ny) throw InvalidArgument("plane rotation needs nx == ny");
  if (in.size() != g.size() || out.size() != g.size()) throw GridMismatch("plane size mismatch");
  if (!std::isfinite(beta)) throw InvalidArgument("rotation angle must be finite");

  const double quarter = 0.5 * kPi;
  const double q = std::nearbyint(beta / quarter);
  const double rest = beta - q * quarter;
  const int turns = wrap(static_cast<int>(std::fmod(q, 4.0)), 4);

  std::vector<double> base(g.size());
  quarter_turn(g.nx, in, base, turns);
  if (std::abs(rest) < 1e-15) {
    std::copy(base.begin(), base.end(), out.begin());
    return;
  }

  if (interp == Interp::kSpectralShear) {
    shear_rotate(g, base, out, rest);
    return;
  }

  const double c = std::cos(rest), s = std::sin(rest);
  if (interp == Interp::kTrigonometric) {
    TrigPlane tp(g, base);
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const double x = g.x(i), y = g.y(j);
        out[g.index(i, j)] = tp(c * x - s * y, s * x + c * y);
      }
    }
    return;
  }
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double x = g.x(i), y = g.y(j);
      out[g.index(i, j)] = sample_bicubic(g, base, c * x - s * y, s * x + c * y);
    }
  }
}

ScalarField rotate_planes(const ScalarField& f, double beta, Interp interp) {
  const Grid3& g = f.grid();
  const PlaneGrid pg = PlaneGrid::of(g);
  ScalarField out(g);
  auto in = f.values();
  auto o = out.values();
  const std::size_t ps = g.plane_size();
  for (int k = 0; k < g.nz; ++k) {
    rotate_plane(pg, in.subspan(k * ps, ps), o.subspan(k * ps, ps), beta, interp);
  }
  return out;
}

ScalarField shift_z(const ScalarField& f, double theta) {
  const Grid3& g = f.grid();
  ScalarField s(g, Space::kSpectral);
  fft::forward_3d(g, f.values().data(), s.coeffs().data());
  auto c = s.coeffs();
  const int nxh = g.nxh();
  std::size_t idx = 0;
  for (int k = 0; k < g.nz; ++k) {
    const double kz = g.kz(k);
    const Complex phase =
        (2 * k == g.nz) ? Complex(std::cos(kz * theta), 0.0) : std::polar(1.0, kz * theta);
    const std::size_t count = static_cast<std::size_t>(g.ny) * nxh;
    for (std::size_t n = 0; n < count; ++n, ++idx) c[idx] *= phase;
  }
  ScalarField out(g);
  fft::inverse_3d(g, s.coeffs().data(), out.values().data());
  return out;
}

VectorField3 compose_S_theta(const VectorField3& v, double theta, Interp interp) {
  VectorField3 out;
  for (int c = 0; c < 3; ++c) {
    out[c] = rotate_planes(shift_z(v[c], theta), -theta, interp);
  }
  return out;
}

}  // namespace helix
