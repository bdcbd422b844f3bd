#include "helix/residuals.hpp"

#include <array>
#include <cmath>

#include "helix/errors.hpp"
#include "helix/spectral.hpp"

namespace helix {
namespace {

constexpr std::array<std::array<double, 5>, 5> kFive = {{
    {-25.0, 48.0, -36.0, 16.0, -3.0},
    {-3.0, -10.0, 18.0, -6.0, 1.0},
    {1.0, -8.0, 0.0, 8.0, -1.0},
    {-1.0, 6.0, -18.0, 10.0, 3.0},
    {3.0, -16.0, 36.0, -48.0, 25.0},
}};
constexpr std::array<std::array<double, 3>, 3> kThree = {{
    {-3.0, 4.0, -1.0},
    {-1.0, 0.0, 1.0},
    {1.0, -4.0, 3.0},
}};

// Pointwise product with a function of the horizontal coordinates.
template <class F>
ScalarField weighted(const ScalarField& f, F&& w) {
  const Grid3& g = f.grid();
  ScalarField out(g);
  auto in = f.values();
  auto o = out.values();
  for (int k = 0; k < g.nz; ++k) {
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const auto n = g.index(i, j, k);
        o[n] = w(g.x(i), g.y(j)) * in[n];
      }
    }
  }
  return out;
}

VectorField3 cross(const VectorField3& a, const VectorField3& b) {
  const VectorField3 ap = to_physical(a), bp = to_physical(b);
  VectorField3 out(ap.grid());
  auto a0 = ap[0].values(), a1 = ap[1].values(), a2 = ap[2].values();
  auto b0 = bp[0].values(), b1 = bp[1].values(), b2 = bp[2].values();
  auto c0 = out[0].values(), c1 = out[1].values(), c2 = out[2].values();
  for (std::size_t n = 0; n < c0.size(); ++n) {
    c0[n] = a1[n] * b2[n] - a2[n] * b1[n];
    c1[n] = a2[n] * b0[n] - a0[n] * b2[n];
    c2[n] = a0[n] * b1[n] - a1[n] * b0[n];
  }
  return out;
}

ScalarField dot_grad(const VectorField3& a, const ScalarField& f) {
  ScalarField out = multiply(a[0], derivative(f, 0));
  out += multiply(a[1], derivative(f, 1));
  out += multiply(a[2], derivative(f, 2));
  return out;
}

}  // namespace

double EquationResidualTracker::evaluate(std::size_t first, std::span<const double> weights,
                                         double denom, std::size_t at) const {
  const std::size_t m = weights.size();
  const double h = (window_[first + m - 1].t - window_[first].t) / static_cast<double>(m - 1);
  ScalarField d = (-1.0) * window_[at].rhs;
  for (std::size_t s = 0; s < m; ++s) d.axpy(weights[s] / (denom * h), window_[first + s].q);
  return l2_norm(d) / (window_[at].q_norm + floor_);
}

void EquationResidualTracker::push(double t, const ScalarField& q, const ScalarField& rhs) {
  if (finished_) throw InvalidArgument("residual tracker already finished");
  window_.push_back({t, q, rhs, l2_norm(q)});
  results_.emplace_back();
  const std::size_t m = count_++;
  if (window_.size() > 5) window_.pop_front();
  if (m == 4) {
    for (std::size_t p = 0; p < 3; ++p) results_[p] = evaluate(0, kFive[p], 12.0, p);
  } else if (m > 4) {
    results_[m - 2] = evaluate(0, kFive[2], 12.0, 2);
  }
}

std::vector<std::optional<double>> EquationResidualTracker::finish() {
  if (!finished_) {
    finished_ = true;
    const std::size_t n = count_;
    if (n >= 5) {
      results_[n - 2] = evaluate(0, kFive[3], 12.0, 3);
      results_[n - 1] = evaluate(0, kFive[4], 12.0, 4);
    } else if (n >= 3) {
      results_[0] = evaluate(0, kThree[0], 2.0, 0);
      for (std::size_t p = 1; p + 1 < n; ++p) results_[p] = evaluate(p - 1, kThree[1], 2.0, p);
      results_[n - 1] = evaluate(n - 3, kThree[2], 2.0, n - 1);
    }
    window_.clear();
  }
  return results_;
}

ScalarField swirl_equation_rhs(const VectorField3& u, double nu,
                               const VectorField3* projected_forcing) {
  const ScalarField eta = swirl(u);
  ScalarField rhs = (-1.0) * dot_grad(u, eta);
  if (nu != 0.0) {
    rhs.axpy(nu, laplacian(eta));
    rhs.axpy(2.0 * nu, derivative(u[1], 0) - derivative(u[0], 1));
  }
  if (projected_forcing != nullptr) rhs += swirl(*projected_forcing);
  // grad p is the gradient part of u x omega.
  const VectorField3 ch = to_spectral(cross(u, curl(u)));
  rhs -= swirl(to_physical(ch - leray_project(ch)));
  return rhs;
}

ScalarField omega3_equation_rhs(const VectorField3& u, double nu,
                                const VectorField3* projected_forcing) {
  VectorField3 tendency = cross(u, curl(u));
  if (nu != 0.0) {
    const VectorField3 lap{laplacian(u[0]), laplacian(u[1]), laplacian(u[2])};
    tendency.axpy(nu, lap);
  }
  if (projected_forcing != nullptr) tendency += *projected_forcing;
  // The pressure gradient has no curl; its xi component enters through S.
  const ScalarField s = swirl_equation_rhs(u, nu, projected_forcing);
  const ScalarField sx = weighted(s, [](double x, double y) { return x / (1.0 + x * x + y * y); });
  const ScalarField sy = weighted(s, [](double x, double y) { return y / (1.0 + x * x + y * y); });
  ScalarField rhs = derivative(tendency[1], 0) - derivative(tendency[0], 1);
  rhs += derivative(sx, 0);
  rhs += derivative(sy, 1);
  return rhs;
}

}  // namespace helix
