#pragma once

#include <array>
#include <span>
#include <vector>

#include "helix/field.hpp"
#include "helix/rotation.hpp"

namespace helix {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

using Vec3 = std::array<double, 3>;

/// Symmetry direction (y, -x, 1); |xi|^2 = 1 + x^2 + y^2 >= 1.
Vec3 xi(const Point3& p);

/// Maps z into [-pi, pi).
double wrap_angle(double z);

/// (x cos t + y sin t, -x sin t + y cos t, z + t) with z wrapped.
Point3 apply_S_theta(const Point3& p, double theta);

/// Horizontal block [[c, s], [-s, c]] of the symmetry rotation applied to v.
Vec3 apply_R_theta(const Vec3& v, double theta);

struct HelicalityReport {
  double residual_group = 0.0;  ///< max_theta ||v o S_theta - R_theta v|| / ||v||
  double residual_pde = 0.0;    ///< ||(d_xi v1 - v2, d_xi v2 + v1, d_xi v3)|| / ||v||
};

std::vector<double> default_theta_samples();

/// Helicality defects of a physical field. Throws InvalidArgument on an empty
/// sample list.
HelicalityReport helicality_report(const VectorField3& v, std::span<const double> thetas,
                                   Interp interp = Interp::kSpectralShear);
HelicalityReport helicality_report(const VectorField3& v);

/// d_xi f = y d_x f - x d_y f + d_z f, spectral derivatives then physical weights.
ScalarField d_xi(const ScalarField& f);

/// Component c of xi sampled on the grid.
ScalarField xi_component(const Grid3& g, int c);
/// 1 / |xi|^2 sampled on the grid.
ScalarField inv_xi_sq(const Grid3& g);

/// Pointwise v . xi.
ScalarField swirl(const VectorField3& v);

/// eta xi / |xi|^2.
VectorField3 swirl_part(const ScalarField& eta);

struct SwirlDecomposition {
  ScalarField eta;
  VectorField3 U;
  ScalarField omega3;  ///< d_x U2 - d_y U1
};

SwirlDecomposition decompose(const VectorField3& v);

struct CurlStructure {
  VectorField3 curl;            ///< spectral curl of v
  VectorField3 reconstruction;  ///< omega3 xi + (d_y eta, -d_x eta, 0)
  ScalarField omega3;           ///< third vorticity component rebuilt from the U part
  double relative_defect = 0.0; ///< ||curl - reconstruction|| / ||curl||
};

CurlStructure curl_structure(const VectorField3& v);

/// Rebuilds d_x u2 - d_y u1 from the decomposition:
/// Omega3 + d_x(-x eta / |xi|^2) - d_y(y eta / |xi|^2).
ScalarField omega3_from_decomposition(const SwirlDecomposition& d);

/// ||(d_x v2 - d_y v1) - omega3_from_decomposition|| / ||d_x v2 - d_y v1||.
double vorticity_identity_defect(const VectorField3& v);

}  // namespace helix
