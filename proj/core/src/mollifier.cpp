#include "helix/mollifier.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <map>

#include "helix/errors.hpp"
#include "helix/spectral.hpp"

namespace helix {
namespace {

double bump(double s) {
  const double d = s * s - 1.0;
  return d < 0.0 ? std::exp(1.0 / d) : 0.0;
}

template <class F>
double integrate_unit(F&& f) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 12, 1e-15);
}

double radial_mass() {
  static const double m = integrate_unit([](double s) { return bump(s) * s; });
  return m;
}

double axial_mass() {
  static const double m = integrate_unit([](double s) { return bump(s); });
  return m;
}

ScalarField compose_scalar(const ScalarField& f, double theta, Interp interp) {
  return rotate_planes(shift_z(f, theta), -theta, interp);
}

}  // namespace

double Mollifier::radial_transform(double q) {
  if (q == 0.0) return 1.0;
  return integrate_unit([q](double s) { return bump(s) * std::cyl_bessel_j(0.0, q * s) * s; }) /
         radial_mass();
}

double Mollifier::axial_transform(double q) {
  if (q == 0.0) return 1.0;
  return integrate_unit([q](double s) { return bump(s) * std::cos(q * s); }) / axial_mass();
}

Mollifier::Mollifier(const Grid3& grid, const MollifierConfig& cfg) : grid_(grid), eps_(cfg.epsilon) {
  if (!(cfg.max_epsilon > 0.0 && cfg.max_epsilon <= 1.0)) {
    throw InvalidArgument("mollifier max_epsilon must lie in (0, 1]");
  }
  if (!(eps_ > 0.0 && eps_ <= cfg.max_epsilon)) {
    throw InvalidArgument("mollifier epsilon must lie in (0, " + std::to_string(cfg.max_epsilon) + "]");
  }
  const int nxh = grid.nxh();
  // horizontal factor depends only on (i, j); cache by |k_h|^2 bit pattern
  std::map<double, double> radial_cache;
  std::vector<double> horiz(static_cast<std::size_t>(grid.ny) * nxh);
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < nxh; ++i) {
      const double kh2 = grid.kx(i) * grid.kx(i) + grid.ky(j) * grid.ky(j);
      auto it = radial_cache.find(kh2);
      if (it == radial_cache.end()) {
        it = radial_cache.emplace(kh2, radial_transform(eps_ * std::sqrt(kh2))).first;
      }
      horiz[static_cast<std::size_t>(j) * nxh + i] = it->second;
    }
  }
  std::vector<double> axial(static_cast<std::size_t>(grid.nz));
  for (int k = 0; k < grid.nz; ++k) axial[k] = axial_transform(eps_ * grid.kz(k));

  mult_.resize(grid.spectral_size());
  for_each_mode(grid, [&](int i, int j, int k, std::size_t n) {
    double m = horiz[static_cast<std::size_t>(j) * nxh + i] * axial[k];
    if (std::abs(m) > 1.0) {
      m = std::copysign(1.0, m);
      ++clamped_;
    }
    mult_[n] = m;
  });
  mult_[0] = 1.0;
}

void Mollifier::apply_spectral(ScalarField& f, int power) const {
  if (!(f.grid() == grid_)) throw GridMismatch("mollifier built for a different grid");
  auto c = f.coeffs();
  for (std::size_t n = 0; n < c.size(); ++n) {
    double m = 1.0;
    for (int p = 0; p < power; ++p) m *= mult_[n];
    c[n] *= m;
  }
}

ScalarField Mollifier::apply(const ScalarField& f) const {
  ScalarField s = to_spectral(f);
  apply_spectral(s);
  return f.is_physical() ? to_physical(s) : s;
}

VectorField3 Mollifier::apply(const VectorField3& v) const {
  return {apply(v[0]), apply(v[1]), apply(v[2])};
}

ScalarField mollify(const ScalarField& f, const MollifierConfig& cfg) {
  return Mollifier(f.grid(), cfg).apply(f);
}

VectorField3 mollify(const VectorField3& v, const MollifierConfig& cfg) {
  return Mollifier(v.grid(), cfg).apply(v);
}

CommutationReport verify_symmetry_commutation(const ScalarField& f, const MollifierConfig& cfg,
                                              std::span<const double> thetas, Interp interp) {
  const Mollifier j(f.grid(), cfg);
  CommutationReport r;
  const double fn = l2_norm(f);
  for (double theta : thetas) {
    const ScalarField a = j.apply(compose_scalar(f, theta, interp));
    const ScalarField b = compose_scalar(j.apply(f), theta, interp);
    const double res = fn > 0.0 ? l2_norm(a - b) / fn : 0.0;
    r.per_theta.push_back(res);
    r.max_residual = std::max(r.max_residual, res);
  }
  return r;
}

CommutationReport verify_symmetry_commutation(const VectorField3& v, const MollifierConfig& cfg,
                                              std::span<const double> thetas, Interp interp) {
  const Mollifier j(v.grid(), cfg);
  CommutationReport r;
  const double vn = l2_norm(v);
  const VectorField3 jv = j.apply(v);
  for (double theta : thetas) {
    const VectorField3 a = j.apply(compose_S_theta(v, theta, interp));
    const VectorField3 b = compose_S_theta(jv, theta, interp);
    const double res = vn > 0.0 ? l2_norm(a - b) / vn : 0.0;
    r.per_theta.push_back(res);
    r.max_residual = std::max(r.max_residual, res);
  }
  return r;
}

}  // namespace helix
