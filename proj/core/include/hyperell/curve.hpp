#pragma once

#include <vector>

#include "hyperell/types.hpp"

namespace hyperell {

// hyperelliptic curve y^2 = f(x), f squarefree of degree d >= 3
struct CurveSpec {
  std::vector<cplx> coeffs;   // ascending degree, coeffs.back() != 0
  int degree = 0;             // d
  int genus = 0;              // floor((d-1)/2)
  std::vector<cplx> branch_x; // finite roots of f, sorted by (Re, Im)
  bool odd_degree = false;    // d == 2g+1, one branch point at infinity

  double coeff_scale = 0;     // max |coeff|
  double branch_diameter = 0; // max pairwise distance of finite branch points
  double clearance = 0;       // 1e-3 * branch_diameter

  cplx f(cplx x) const;
  cplx df(cplx x) const;
};

CurveSpec make_curve(std::vector<cplx> coeffs);

struct SurfacePoint {
  bool at_infinity = false;
  cplx x{};
  cplx y{};
};

// finite point with y^2 = f(x) checked; flag branch points explicitly
SurfacePoint point_on(const CurveSpec& c, cplx x, cplx y, bool allow_branch = false);
SurfacePoint infinity_point(const CurveSpec& c);

bool is_branch_x(const CurveSpec& c, cplx x, double tol_scale = 1.0);
double branch_distance(const CurveSpec& c, cplx x);  // to nearest finite branch x

SurfacePoint hyperelliptic_conjugate(const SurfacePoint& pt);
bool same_point(const SurfacePoint& a, const SurfacePoint& b, double tol);

// deterministic generic point: golden-angle sweep around the branch cloud,
// first candidate with comfortable clearance that is not too close to any
// point in `avoid`; salt selects distinct points
SurfacePoint pick_generic_point(const CurveSpec& c, std::uint64_t salt,
                                const std::vector<SurfacePoint>& avoid = {});

struct Divisor {
  std::vector<std::pair<SurfacePoint, int>> terms;
  int degree() const;
  Divisor& add(const SurfacePoint& pt, int mult);
};

// divisor of dx/y on the odd-degree model: (2g-2) * infinity
Divisor canonical_divisor(const CurveSpec& c);

// unnormalized holomorphic basis w_k = x^{k-1} dx / y, k = 1..g;
// value of the x-part r(x,y) = x^{k-1}/y
cplx omega_value(const CurveSpec& c, int k, cplx x, cplx y);

}  // namespace hyperell
