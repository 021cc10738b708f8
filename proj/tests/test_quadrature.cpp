#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "hyperell/curve.hpp"
#include "hyperell/errors.hpp"
#include "hyperell/path.hpp"
#include "hyperell/quadrature.hpp"

using namespace hyperell;

namespace {

CurveSpec lemniscatic() { return make_curve({0, -1, 0, 1}); }    // x^3 - x
CurveSpec genus2() { return make_curve({0, -1, 0, 0, 0, 1}); }  // x^5 - x

double agm(double a, double b) {
  for (int i = 0; i < 64 && std::abs(a - b) > 1e-16 * a; ++i) {
    double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return a;
}

}  // namespace

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
  const GLRule& gl = gl_rule(8);
  CHECK(gl.weights.sum() == doctest::Approx(2.0).epsilon(1e-14));
  for (int k = 0; k <= 15; ++k) {
    double acc = 0;
    for (int i = 0; i < 8; ++i) acc += gl.weights[i] * std::pow(gl.nodes[i], k);
    double expect = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
    CHECK(std::abs(acc - expect) < 1e-13);
  }
}

TEST_CASE("cumulative-integral matrix reproduces antiderivatives at the nodes") {
  const int n = 16;
  const GLRule& gl = gl_rule(n);
  RVec f(n), expect(n);
  for (int i = 0; i < n; ++i) {
    f[i] = std::cos(gl.nodes[i]);
    expect[i] = std::sin(gl.nodes[i]) - std::sin(-1.0);
  }
  RVec got = gl.cumint * f;
  CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("square-root continuation sees branch monodromy") {
  CurveSpec c = lemniscatic();

  // full circle around the single branch point x=0 flips the sheet
  XPath circ;
  circ.append(arc_segment(cplx(0), 0.4, 0.0, 2 * kPi));
  cplx y0 = std::sqrt(c.f(cplx(0.4)));
  ContinuationTrace tr = continue_y(c, SurfacePath{circ, y0}, {});
  CHECK(std::abs(tr.y_end + y0) < 1e-10);

  // a circle in the regular region keeps the sheet
  XPath reg;
  reg.append(arc_segment(cplx(0.5, 0.5), 0.2, 0.0, 2 * kPi));
  cplx y1 = std::sqrt(c.f(cplx(0.7, 0.5)));
  ContinuationTrace tr2 = continue_y(c, SurfacePath{reg, y1}, {});
  CHECK(std::abs(tr2.y_end - y1) < 1e-10);
}

TEST_CASE("lemniscatic period from a two-branch contour matches the AGM value") {
  CurveSpec c = lemniscatic();
  // circle around branch points -1 and 0 only
  XPath circ;
  circ.append(arc_segment(cplx(-0.5), 0.75, 0.0, 2 * kPi));
  cplx x0 = cplx(0.25);
  cplx y0 = std::sqrt(c.f(x0));

  ContinuationTrace tr = continue_y(c, SurfacePath{circ, y0}, {});
  CHECK(std::abs(tr.y_end - y0) < 1e-9);  // two branch points inside, sheet closes

  Form w1 = omega_form(c, 1);
  cplx period = line_integral(c, w1, SurfacePath{circ, y0}, {});
  double varpi = kPi / agm(1.0, std::sqrt(2.0));
  CHECK(std::abs(std::abs(period) - 2 * varpi) < 1e-10);
}

TEST_CASE("rational contour integral around a marked pole") {
  CurveSpec c = lemniscatic();
  Form f;
  f.r = [](cplx x, cplx) { return 1.0 / x; };
  f.x_poles = {cplx(0)};
  XPath circ2;
  circ2.append(arc_segment(cplx(0), 1.3, 0.0, 2 * kPi, true));
  cplx x0 = cplx(1.3);
  cplx yc = std::sqrt(c.f(x0));
  cplx val = line_integral(c, f, SurfacePath{circ2, yc}, {});
  CHECK(std::abs(val - cplx(0, 2 * kPi)) < 1e-10);
}

TEST_CASE("paths running into a pole are rejected") {
  CurveSpec c = lemniscatic();
  Form f;
  f.r = [](cplx x, cplx) { return 1.0 / (x - 0.2); };
  f.x_poles = {cplx(0.2)};
  XPath line;
  line.append(line_segment(cplx(0.2, -0.3), cplx(0.2, 0.4)));
  cplx y0 = std::sqrt(c.f(cplx(0.2, -0.3)));
  CHECK_THROWS_AS(line_integral(c, f, SurfacePath{line, y0}, {}), PoleOnPath);
}

TEST_CASE("integrals to infinity are path-additive") {
  CurveSpec c = genus2();
  cplx xp = cplx(-3), xq = cplx(-7);
  cplx yp = std::sqrt(c.f(xp));
  SurfacePoint p = point_on(c, xp, yp);

  Vec from_p = integral_to_infinity_basis(c, p, {});
  REQUIRE(from_p.size() == 2);

  XPath seg;
  seg.append(line_segment(xp, xq));
  ContinuationTrace tr = continue_y(c, SurfacePath{seg, yp}, {});
  SurfacePoint q = point_on(c, xq, tr.y_end);
  Vec from_q = integral_to_infinity_basis(c, q, {});

  Vec leg(2);
  for (int k = 1; k <= 2; ++k)
    leg[k - 1] = line_integral(c, omega_form(c, k), SurfacePath{seg, yp}, {});

  CHECK((from_p - (leg + from_q)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("node-count refinement is stable") {
  CurveSpec c = genus2();
  cplx xp = cplx(-3);
  SurfacePoint p = point_on(c, xp, std::sqrt(c.f(xp)));
  QuadratureConfig c24;
  c24.nodes = 24;
  QuadratureConfig c40;
  c40.nodes = 40;
  Vec a = integral_to_infinity_basis(c, p, c24);
  Vec b = integral_to_infinity_basis(c, p, c40);
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("infinity integrals require the odd-degree chart") {
  CurveSpec c = make_curve({-1, 0, 0, 0, 1, 0, 1});
  cplx xp = cplx(3);
  SurfacePoint p = point_on(c, xp, std::sqrt(c.f(xp)));
  CHECK_THROWS_AS(integral_to_infinity_basis(c, p, {}), FormSingularAtInfinity);
}
