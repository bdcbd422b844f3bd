#include "helix/helical.hpp"

#include <algorithm>
#include <cmath>

#include "helix/errors.hpp"
#include "helix/spectral.hpp"

namespace helix {

Vec3 xi(const Point3& p) { return {p.y, -p.x, 1.0}; }

double wrap_angle(double z) {
  double r = std::fmod(z + kPi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r - kPi;
}

Point3 apply_S_theta(const Point3& p, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {p.x * c + p.y * s, -p.x * s + p.y * c, wrap_angle(p.z + theta)};
}

Vec3 apply_R_theta(const Vec3& v, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {c * v[0] + s * v[1], -s * v[0] + c * v[1], v[2]};
}

std::vector<double> default_theta_samples() {
  return {0.25 * kPi, 0.5 * kPi, kPi, 1.5 * kPi};
}

ScalarField xi_component(const Grid3& g, int c) {
  return ScalarField::from_function(g, [c](double x, double y, double z) {
    return xi({x, y, z})[static_cast<std::size_t>(c)];
  });
}

ScalarField inv_xi_sq(const Grid3& g) {
  return ScalarField::from_function(
      g, [](double x, double y, double) { return 1.0 / (1.0 + x * x + y * y); });
}

ScalarField d_xi(const ScalarField& f) {
  const Grid3& g = f.grid();
  ScalarField s = to_spectral(f);
  ScalarField fx = to_physical(derivative(s, 0));
  ScalarField fy = to_physical(derivative(s, 1));
  ScalarField fz = to_physical(derivative(s, 2));
  ScalarField out(g);
  auto o = out.values();
  auto a = fx.values();
  auto b = fy.values();
  auto c = fz.values();
  for (int k = 0; k < g.nz; ++k) {
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const auto n = g.index(i, j, k);
        o[n] = g.y(j) * a[n] - g.x(i) * b[n] + c[n];
      }
    }
  }
  return out;
}

HelicalityReport helicality_report(const VectorField3& v, std::span<const double> thetas,
                                   Interp interp) {
  if (thetas.empty()) throw InvalidArgument("helicality_report needs at least one theta sample");
  HelicalityReport r;
  const double vn = l2_norm(v);
  if (vn == 0.0) return r;

  for (double theta : thetas) {
    VectorField3 lhs = compose_S_theta(v, theta, interp);
    const double c = std::cos(theta), s = std::sin(theta);
    VectorField3 rhs = v;
    rhs[0] = c * v[0] + s * v[1];
    rhs[1] = (-s) * v[0] + c * v[1];
    r.residual_group = std::max(r.residual_group, l2_norm(lhs - rhs) / vn);
  }

  ScalarField e1 = d_xi(v[0]) - v[1];
  ScalarField e2 = d_xi(v[1]) + v[0];
  ScalarField e3 = d_xi(v[2]);
  const double a = l2_norm(e1), b = l2_norm(e2), cc = l2_norm(e3);
  r.residual_pde = std::sqrt(a * a + b * b + cc * cc) / vn;
  return r;
}

HelicalityReport helicality_report(const VectorField3& v) {
  const auto thetas = default_theta_samples();
  return helicality_report(v, thetas);
}

ScalarField swirl(const VectorField3& v) {
  const Grid3& g = v.grid();
  ScalarField out(g);
  auto o = out.values();
  auto a = v[0].values();
  auto b = v[1].values();
  auto c = v[2].values();
  for (int k = 0; k < g.nz; ++k) {
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const auto n = g.index(i, j, k);
        o[n] = g.y(j) * a[n] - g.x(i) * b[n] + c[n];
      }
    }
  }
  return out;
}

VectorField3 swirl_part(const ScalarField& eta) {
  const Grid3& g = eta.grid();
  VectorField3 out(g);
  auto e = eta.values();
  for (int k = 0; k < g.nz; ++k) {
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const auto n = g.index(i, j, k);
        const double x = g.x(i), y = g.y(j);
        const double w = e[n] / (1.0 + x * x + y * y);
        out[0].values()[n] = w * y;
        out[1].values()[n] = -w * x;
        out[2].values()[n] = w;
      }
    }
  }
  return out;
}

SwirlDecomposition decompose(const VectorField3& v) {
  SwirlDecomposition d;
  d.eta = swirl(v);
  d.U = v - swirl_part(d.eta);
  d.omega3 = derivative(d.U[1], 0) - derivative(d.U[0], 1);
  return d;
}

ScalarField omega3_from_decomposition(const SwirlDecomposition& d) {
  const Grid3& g = d.eta.grid();
  ScalarField px(g), py(g);
  auto e = d.eta.values();
  for (int k = 0; k < g.nz; ++k) {
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const auto n = g.index(i, j, k);
        const double x = g.x(i), y = g.y(j);
        const double w = e[n] / (1.0 + x * x + y * y);
        px.values()[n] = -x * w;
        py.values()[n] = y * w;
      }
    }
  }
  return d.omega3 + derivative(px, 0) - derivative(py, 1);
}

double vorticity_identity_defect(const VectorField3& v) {
  ScalarField direct = derivative(v[1], 0) - derivative(v[0], 1);
  ScalarField rebuilt = omega3_from_decomposition(decompose(v));
  const double scale = max_abs(direct);
  const double diff = max_abs(direct - rebuilt);
  return scale > 0.0 ? diff / scale : diff;
}

CurlStructure curl_structure(const VectorField3& v) {
  const Grid3& g = v.grid();
  CurlStructure out;
  out.curl = curl(v);
  const ScalarField& w3 = out.curl[2];
  const ScalarField eta = swirl(v);
  const ScalarField ex = derivative(eta, 0);
  const ScalarField ey = derivative(eta, 1);

  out.reconstruction = VectorField3(g);
  auto a = w3.values();
  for (int k = 0; k < g.nz; ++k) {
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const auto n = g.index(i, j, k);
        const double x = g.x(i), y = g.y(j);
        out.reconstruction[0].values()[n] = a[n] * y + ey.values()[n];
        out.reconstruction[1].values()[n] = -a[n] * x - ex.values()[n];
        out.reconstruction[2].values()[n] = a[n];
      }
    }
  }
  out.omega3 = omega3_from_decomposition(decompose(v));
  const double cn = l2_norm(out.curl);
  const double dn = l2_norm(out.curl - out.reconstruction);
  out.relative_defect = cn > 0.0 ? dn / cn : dn;
  return out;
}

}  // namespace helix
