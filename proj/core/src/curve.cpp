#include "hyperell/curve.hpp"

#include <algorithm>
#include <cmath>

#include "hyperell/errors.hpp"

namespace hyperell {

cplx CurveSpec::f(cplx x) const {
  cplx v = 0;
  for (size_t j = coeffs.size(); j-- > 0;) v = v * x + coeffs[j];
  return v;
}

cplx CurveSpec::df(cplx x) const {
  cplx v = 0;
  for (size_t j = coeffs.size(); j-- > 1;) v = v * x + double(j) * coeffs[j];
  return v;
}

namespace {

std::vector<cplx> polynomial_roots(const std::vector<cplx>& coeffs) {
  const int d = static_cast<int>(coeffs.size()) - 1;
  Mat C = Mat::Zero(d, d);
  for (int i = 1; i < d; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) C(i, d - 1) = -coeffs[i] / coeffs[d];
  Eigen::ComplexEigenSolver<Mat> es(C, false);
  std::vector<cplx> roots(d);
  for (int i = 0; i < d; ++i) roots[i] = es.eigenvalues()[i];
  return roots;
}

}  // namespace

CurveSpec make_curve(std::vector<cplx> coeffs) {
  while (!coeffs.empty() && std::abs(coeffs.back()) == 0.0) coeffs.pop_back();
  if (coeffs.size() < 4) throw DegreeTooSmall("make_curve: degree of f must be >= 3");

  CurveSpec c;
  c.coeffs = coeffs;
  c.degree = static_cast<int>(coeffs.size()) - 1;
  c.genus = (c.degree - 1) / 2;
  c.odd_degree = (c.degree % 2 == 1);
  for (const auto& a : coeffs) c.coeff_scale = std::max(c.coeff_scale, std::abs(a));

  auto roots = polynomial_roots(coeffs);
  // Newton polish; companion eigenvalues are good starting points
  for (auto& r : roots) {
    for (int it = 0; it < 50; ++it) {
      cplx fv = c.f(r), dv = c.df(r);
      if (std::abs(dv) == 0.0) break;
      cplx step = fv / dv;
      r -= step;
      double scale = c.coeff_scale * std::max(1.0, std::pow(std::abs(r), c.degree));
      if (std::abs(c.f(r)) < 1e-15 * scale) break;
    }
    double scale = c.coeff_scale * std::max(1.0, std::pow(std::abs(r), c.degree));
    if (std::abs(c.f(r)) > 1e-12 * scale)
      throw NotSquarefree("make_curve: root refinement failed, f is likely degenerate");
  }

  std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });

  double rmax = 0;
  for (const auto& r : roots) rmax = std::max(rmax, std::abs(r));
  const double sep_tol = 1e-6 * std::max(1.0, rmax);
  for (size_t i = 0; i < roots.size(); ++i)
    for (size_t j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[i] - roots[j]) < sep_tol)
        throw NotSquarefree("make_curve: repeated root of f");

  c.branch_x = roots;
  for (size_t i = 0; i < roots.size(); ++i)
    for (size_t j = i + 1; j < roots.size(); ++j)
      c.branch_diameter = std::max(c.branch_diameter, std::abs(roots[i] - roots[j]));
  if (c.branch_diameter == 0) c.branch_diameter = 1.0;
  c.clearance = 1e-3 * c.branch_diameter;
  return c;
}

bool is_branch_x(const CurveSpec& c, cplx x, double tol_scale) {
  return branch_distance(c, x) < tol_scale * c.clearance;
}

double branch_distance(const CurveSpec& c, cplx x) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& b : c.branch_x) d = std::min(d, std::abs(x - b));
  return d;
}

SurfacePoint point_on(const CurveSpec& c, cplx x, cplx y, bool allow_branch) {
  cplx fx = c.f(x);
  if (std::abs(y * y - fx) > 1e-8 * (1.0 + std::abs(fx)))
    throw InputError("point_on: y^2 != f(x)");
  if (!allow_branch && is_branch_x(c, x))
    throw DegenerateConfiguration("point_on: point too close to a branch point");
  SurfacePoint p;
  p.x = x;
  p.y = y;
  return p;
}

SurfacePoint infinity_point(const CurveSpec& c) {
  if (!c.odd_degree) throw EvenDegreeUnsupported("infinity_point: single point at infinity needs odd degree");
  SurfacePoint p;
  p.at_infinity = true;
  return p;
}

SurfacePoint hyperelliptic_conjugate(const SurfacePoint& pt) {
  if (pt.at_infinity) return pt;  // fixed point of the involution (odd-degree model)
  SurfacePoint q = pt;
  q.y = -q.y;
  return q;
}

bool same_point(const SurfacePoint& a, const SurfacePoint& b, double tol) {
  if (a.at_infinity || b.at_infinity) return a.at_infinity == b.at_infinity;
  return std::abs(a.x - b.x) < tol && std::abs(a.y - b.y) < tol;
}

int Divisor::degree() const {
  int d = 0;
  for (const auto& [pt, m] : terms) d += m;
  return d;
}

Divisor& Divisor::add(const SurfacePoint& pt, int mult) {
  if (mult != 0) terms.push_back({pt, mult});
  return *this;
}

Divisor canonical_divisor(const CurveSpec& c) {
  if (!c.odd_degree) throw EvenDegreeUnsupported("canonical_divisor: odd-degree model required");
  Divisor K;
  // dx/y has a zero of order 2g-2 at the single point over infinity and no
  // other zeros or poles; in the chart x = 1/t^2, y = s/t^{2g+1} its pullback
  // is -2 t^{2g-2} dt / s with s(0) != 0.
  if (c.genus >= 2) K.add(infinity_point(c), 2 * c.genus - 2);
  return K;
}

cplx omega_value(const CurveSpec& c, int k, cplx x, cplx y) {
  if (k < 1 || k > c.genus) throw InputError("omega_value: basis index out of range");
  cplx xp = 1.0;
  for (int j = 1; j < k; ++j) xp *= x;
  return xp / y;
}

SurfacePoint pick_generic_point(const CurveSpec& c, std::uint64_t salt,
                                const std::vector<SurfacePoint>& avoid) {
  cplx m = 0;
  for (const auto& b : c.branch_x) m += b;
  m /= double(c.branch_x.size());
  const double D = c.branch_diameter;
  for (int k = 0; k < 256; ++k) {
    double frac = std::fmod(0.137 * double(salt + 1) + 0.6180339887498949 * double(k), 1.0);
    double r = D * (0.55 + 0.17 * double(k % 5));
    cplx x = m + std::polar(r, 2.0 * kPi * frac);
    if (branch_distance(c, x) < 0.12 * D) continue;
    bool clash = false;
    for (const auto& a : avoid)
      if (!a.at_infinity && std::abs(x - a.x) < 0.05 * D) clash = true;
    if (clash) continue;
    return point_on(c, x, std::sqrt(c.f(x)));
  }
  throw DegenerateConfiguration("pick_generic_point: no clear candidate found");
}

}  // namespace hyperell
