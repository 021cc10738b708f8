#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "hyperell/abelian.hpp"
#include "hyperell/curve.hpp"
#include "hyperell/errors.hpp"
#include "hyperell/quadrature.hpp"
#include "hyperell/topology.hpp"

using namespace hyperell;

namespace {

SurfacePoint generic_point(const CurveSpec& c, cplx x) {
  bool ok = true;
  cplx y = sqrt_continue(c.f(x), cplx(1.0, 0.3), ok);
  return point_on(c, x, y);
}

double max_abs(const Mat& M) { return M.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("lemniscatic curve has the square period lattice") {
  CurveSpec c = make_curve({0.0, {-1.0, 0.0}, 0.0, {1.0, 0.0}});  // x^3 - x
  QuadratureConfig cfg;
  SurfacePoint p = generic_point(c, cplx(-2.3, 0.7));
  LoopSystem ls = build_homology_basis(c, p, std::nullopt, cfg);
  PeriodData pd = compute_periods(c, ls, cfg);

  CHECK(std::abs(pd.Z(0, 0) - cplx(0.0, 1.0)) < 1e-8);
  // A = (conj(Z) - Z)^{-1} = (-2i)^{-1} = i/2
  CHECK(std::abs(pd.A(0, 0) - cplx(0.0, 0.5)) < 1e-8);
  CHECK(pd.cond_omega1 < 10.0);
  // normalized a period is exactly the identity by construction
  CHECK(std::abs((pd.N * pd.Omega1)(0, 0) - 1.0) < 1e-13);
}

TEST_CASE("period data invariants at genus two") {
  CurveSpec c = make_curve({0.0, {-1.0, 0.0}, 0.0, 0.0, 0.0, {1.0, 0.0}});  // x^5 - x
  QuadratureConfig cfg;
  SurfacePoint p = generic_point(c, cplx(-1.7, 1.1));
  LoopSystem ls = build_homology_basis(c, p, std::nullopt, cfg);
  PeriodData pd = compute_periods(c, ls, cfg);

  CHECK(max_abs(pd.Z - pd.Z.transpose()) < 1e-8 * max_abs(pd.Z));
  Eigen::SelfAdjointEigenSolver<RMat> es(pd.Z.imag());
  CHECK(es.eigenvalues().minCoeff() > 0.0);
  CHECK(max_abs(pd.A.transpose() + pd.A.conjugate()) < 1e-10 * max_abs(pd.A));

  // dual route: the raw periods were integrated afresh, the cached loop
  // signatures were accumulated during basis construction
  for (int nu = 0; nu < 4; ++nu) {
    Vec l1 = ls.gamma_sig[nu].L1.head(2);
    CHECK((pd.P.col(nu) - l1).cwiseAbs().maxCoeff() < 1e-9 * (1.0 + max_abs(pd.P)));
  }
}

TEST_CASE("lattice reduction recognizes lattice vectors and half periods") {
  CurveSpec c = make_curve({0.0, {-1.0, 0.0}, 0.0, 0.0, 0.0, {1.0, 0.0}});
  QuadratureConfig cfg;
  SurfacePoint p = generic_point(c, cplx(-1.7, 1.1));
  LoopSystem ls = build_homology_basis(c, p, std::nullopt, cfg);
  PeriodData pd = compute_periods(c, ls, cfg);
  const Mat& Z = pd.Z;

  for (int j = 0; j < 2; ++j) {
    CHECK(reduce_mod_lattice(Z.col(j), Z).residual < 1e-12);
    Vec ej = Vec::Zero(2);
    ej(j) = 1.0;
    CHECK(reduce_mod_lattice(ej, Z).residual < 1e-12);
  }

  Mat Zi(1, 1);
  Zi(0, 0) = cplx(0.0, 1.0);
  Vec half = Vec::Zero(1);
  half(0) = 0.5;
  CHECK(std::abs(reduce_mod_lattice(half, Zi).residual - 0.5) < 1e-12);
  double res = 0.0;
  CHECK(!is_zero_mod_lattice(half, Zi, 1e-6, &res));
  CHECK(std::abs(res - 0.5) < 1e-12);

  // folded coordinates are invariant under adding lattice vectors
  std::mt19937_64 rng(2026);
  Vec v(2);
  v << cplx(0.31, -0.12), cplx(-0.05, 0.44);
  LatticeReduction base = reduce_mod_lattice(v, Z);
  for (int trial = 0; trial < 12; ++trial) {
    Vec w = v;
    for (int j = 0; j < 2; ++j) {
      int n1 = int(rng() % 11) - 5;
      int n2 = int(rng() % 11) - 5;
      Vec ej = Vec::Zero(2);
      ej(j) = 1.0;
      w += double(n1) * ej + double(n2) * Z.col(j);
    }
    LatticeReduction shifted = reduce_mod_lattice(w, Z);
    CHECK((shifted.coords - base.coords).cwiseAbs().maxCoeff() < 1e-10);
  }
  CHECK_THROWS_AS(reduce_mod_lattice(Vec::Zero(3), Z), LengthMismatch);
}

TEST_CASE("abel jacobi map is additive and antisymmetric") {
  CurveSpec c = make_curve({0.0, {-1.0, 0.0}, 0.0, 0.0, 0.0, {1.0, 0.0}});
  QuadratureConfig cfg;
  SurfacePoint p = generic_point(c, cplx(-1.7, 1.1));
  LoopSystem ls = build_homology_basis(c, p, std::nullopt, cfg);
  PeriodData pd = compute_periods(c, ls, cfg);

  Divisor zero;
  zero.add(p, 1);
  zero.add(p, -1);
  CHECK(abel_jacobi(c, pd, ls, zero, cfg).v.norm() < 1e-14);

  SurfacePoint q1 = generic_point(c, cplx(1.4, 0.9));
  SurfacePoint q2 = generic_point(c, cplx(-0.6, 1.3));

  Divisor d12, d21;
  d12.add(q1, 1);
  d12.add(q2, -1);
  d21.add(q2, 1);
  d21.add(q1, -1);
  Vec s = abel_jacobi(c, pd, ls, d12, cfg).v + abel_jacobi(c, pd, ls, d21, cfg).v;
  double res = 0.0;
  CHECK(is_zero_mod_lattice(s, pd.Z, 1e-9, &res));

  Divisor d1p, d2q;
  d1p.add(q1, 1);
  d1p.add(p, -1);
  d2q.add(q2, 1);
  d2q.add(q1, -1);
  Divisor d2p;
  d2p.add(q2, 1);
  d2p.add(p, -1);
  Vec lhs = abel_jacobi(c, pd, ls, d1p, cfg).v + abel_jacobi(c, pd, ls, d2q, cfg).v;
  Vec rhs = abel_jacobi(c, pd, ls, d2p, cfg).v;
  CHECK(is_zero_mod_lattice(lhs - rhs, pd.Z, 1e-8, &res));

  Divisor bad;
  bad.add(q1, 1);
  CHECK_THROWS_AS(abel_jacobi(c, pd, ls, bad, cfg), InputError);
}

TEST_CASE("branch points are two torsion") {
  QuadratureConfig cfg;

  // genus 1: x^3 - x, branch point (0, 0)
  {
    CurveSpec c = make_curve({0.0, {-1.0, 0.0}, 0.0, {1.0, 0.0}});
    SurfacePoint p = generic_point(c, cplx(-2.3, 0.7));
    LoopSystem ls = build_homology_basis(c, p, std::nullopt, cfg);
    PeriodData pd = compute_periods(c, ls, cfg);
    Divisor d;
    d.add(point_on(c, 0.0, 0.0, true), 1);
    d.add(infinity_point(c), -1);
    Vec u = abel_jacobi(c, pd, ls, d, cfg).v;
    double res = 0.0;
    CHECK(!is_zero_mod_lattice(u, pd.Z, 1e-3, &res));  // a genuine half period
    CHECK(is_zero_mod_lattice(2.0 * u, pd.Z, 1e-7, &res));
  }

  // genus 2: x^5 - x, branch point (i, 0)
  {
    CurveSpec c = make_curve({0.0, {-1.0, 0.0}, 0.0, 0.0, 0.0, {1.0, 0.0}});
    SurfacePoint p = generic_point(c, cplx(-1.7, 1.1));
    LoopSystem ls = build_homology_basis(c, p, std::nullopt, cfg);
    PeriodData pd = compute_periods(c, ls, cfg);
    Divisor d;
    d.add(point_on(c, cplx(0.0, 1.0), 0.0, true), 1);
    d.add(infinity_point(c), -1);
    Vec u = abel_jacobi(c, pd, ls, d, cfg).v;
    double res = 0.0;
    CHECK(!is_zero_mod_lattice(u, pd.Z, 1e-3, &res));
    CHECK(is_zero_mod_lattice(2.0 * u, pd.Z, 1e-7, &res));
  }
}

TEST_CASE("image is stable under deforming the connecting path") {
  CurveSpec c = make_curve({0.0, {-1.0, 0.0}, 0.0, 0.0, 0.0, {1.0, 0.0}});
  QuadratureConfig cfg;
  SurfacePoint p = generic_point(c, cplx(-1.7, 1.1));
  LoopSystem ls = build_homology_basis(c, p, std::nullopt, cfg);
  PeriodData pd = compute_periods(c, ls, cfg);
  // endpoint sheet chosen by continuation along the direct route, so the
  // straight path and the waypoint detour lie in the same homotopy class
  cplx xq = cplx(1.6, 1.8);
  XPath direct_x = route_avoiding_branches(c, p.x, xq);
  cplx yq = continue_y(c, SurfacePath{direct_x, p.y}, cfg).y_end;
  SurfacePoint q = point_on(c, xq, yq);
  SurfacePath direct = path_to_point(c, p, q, cfg);

  cplx w = cplx(0.1, 2.2);
  XPath bent = route_avoiding_branches(c, p.x, w);
  XPath tail = route_avoiding_branches(c, w, xq);
  for (const auto& s : tail.segs) bent.append(s);
  SurfacePath detour{bent, p.y};
  cplx y_end = continue_y(c, detour, cfg).y_end;
  REQUIRE(std::abs(y_end - q.y) < 1e-6 * (1.0 + std::abs(q.y)));

  Vec du(2);
  for (int k = 1; k <= 2; ++k) {
    Form fk = omega_form(c, k);
    du(k - 1) = line_integral(c, fk, direct, cfg) - line_integral(c, fk, detour, cfg);
  }
  CHECK((pd.N * du).cwiseAbs().maxCoeff() < 1e-8);

  // the opposite-sheet point forces the flip gadget; the fiber divisor of
  // x - x_q is principal, so its image must vanish
  SurfacePoint qc = hyperelliptic_conjugate(q);
  SurfacePath flipped = path_to_point(c, p, qc, cfg);
  cplx yf = continue_y(c, flipped, cfg).y_end;
  REQUIRE(std::abs(yf - qc.y) < 1e-6 * (1.0 + std::abs(qc.y)));
  Divisor fiber;
  fiber.add(q, 1);
  fiber.add(qc, 1);
  fiber.add(infinity_point(c), -2);
  double res = 0.0;
  CHECK(is_zero_mod_lattice(abel_jacobi(c, pd, ls, fiber, cfg).v, pd.Z, 1e-8, &res));
}

TEST_CASE("depth two tables match shuffle identities") {
  QuadratureConfig cfg;

  // genus 1: every depth 2 entry is half the square of the period
  {
    CurveSpec c = make_curve({0.0, {-1.0, 0.0}, 0.0, {1.0, 0.0}});
    SurfacePoint p = generic_point(c, cplx(-2.3, 0.7));
    LoopSystem ls = build_homology_basis(c, p, std::nullopt, cfg);
    PeriodData pd = compute_periods(c, ls, cfg);
    IterMatrices im = compute_iter_matrices(c, ls, pd, cfg);
    CHECK(std::abs(im.I1[0](0, 0) - 0.5) < 1e-9);
    cplx tau = pd.Z(0, 0);
    CHECK(std::abs(im.I2[0](0, 0) - 0.5 * tau * tau) < 1e-9);
  }

  // genus 2: the symmetrized table is fixed by the depth 1 periods
  {
    CurveSpec c = make_curve({0.0, {-1.0, 0.0}, 0.0, 0.0, 0.0, {1.0, 0.0}});
    SurfacePoint p = generic_point(c, cplx(-1.7, 1.1));
    LoopSystem ls = build_homology_basis(c, p, std::nullopt, cfg);
    PeriodData pd = compute_periods(c, ls, cfg);
    IterMatrices im = compute_iter_matrices(c, ls, pd, cfg);
    for (int nu = 0; nu < 2; ++nu)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          double del_a = (nu == i ? 1.0 : 0.0) * (nu == j ? 1.0 : 0.0);
          CHECK(std::abs(im.I1[i](nu, j) + im.I1[j](nu, i) - del_a) < 1e-9);
          cplx prod = pd.Z(i, nu) * pd.Z(j, nu);
          CHECK(std::abs(im.I2[i](nu, j) + im.I2[j](nu, i) - prod) < 1e-9);
        }
  }
}
