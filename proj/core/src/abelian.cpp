#include "hyperell/abelian.hpp"

#include <cmath>
#include <limits>

#include "hyperell/errors.hpp"
#include "hyperell/quadrature.hpp"

namespace hyperell {
namespace {

double max_abs(const Mat& M) { return M.cwiseAbs().maxCoeff(); }

// full circle around the branch point nearest to x, reached by a spur from x;
// flips the sheet while keeping the x endpoint fixed
void append_flip(const CurveSpec& c, XPath& xp, cplx x) {
  int bi = 0;
  double best = std::abs(x - c.branch_x[0]);
  for (int i = 1; i < (int)c.branch_x.size(); ++i) {
    double d = std::abs(x - c.branch_x[i]);
    if (d < best) {
      best = d;
      bi = i;
    }
  }
  cplx b = c.branch_x[bi];
  double dbb = std::numeric_limits<double>::infinity();
  for (int i = 0; i < (int)c.branch_x.size(); ++i)
    if (i != bi) dbb = std::min(dbb, std::abs(c.branch_x[i] - b));
  double rg = 0.3 * std::min(dbb, best);
  if (!(rg > 4.0 * c.clearance))
    throw DegenerateConfiguration("no room for a sheet flip near the target point");
  cplx gs = b + rg * (x - b) / best;
  XPath spur = route_avoiding_branches(c, x, gs);
  for (const auto& s : spur.segs) xp.append(s);
  double th0 = std::arg(gs - b);
  xp.append(arc_segment(b, rg, th0, th0 + 2.0 * kPi, true));
  XPath back = spur.reversed();
  for (const auto& s : back.segs) xp.append(s);
}

}  // namespace

SurfacePath path_to_point(const CurveSpec& c, const SurfacePoint& from, const SurfacePoint& to,
                          const QuadratureConfig& cfg) {
  if (from.at_infinity || to.at_infinity)
    throw InputError("path_to_point endpoints must be finite");
  if (is_branch_x(c, from.x) || is_branch_x(c, to.x))
    throw InputError("path_to_point endpoints must stay clear of branch points");
  XPath xp = route_avoiding_branches(c, from.x, to.x);
  cplx y_arr = from.y;
  if (!xp.segs.empty()) y_arr = continue_y(c, SurfacePath{xp, from.y}, cfg).y_end;
  if (std::abs(y_arr - to.y) > std::abs(y_arr + to.y)) append_flip(c, xp, to.x);
  SurfacePath out{xp, from.y};
  cplx y_end = xp.segs.empty() ? from.y : continue_y(c, out, cfg).y_end;
  if (std::abs(y_end - to.y) > 1e-6 * (1.0 + std::abs(to.y)))
    throw DegenerateConfiguration("sheet tracking failed to reach the requested point");
  return out;
}

PeriodData compute_periods(const CurveSpec& c, const LoopSystem& loops,
                           const QuadratureConfig& cfg) {
  const int g = c.genus;
  if ((int)loops.gamma.size() != 2 * g)
    throw InputError("loop system does not match the curve genus");
  PeriodData pd;
  pd.P = Mat(g, 2 * g);
  for (int nu = 0; nu < 2 * g; ++nu)
    for (int k = 0; k < g; ++k)
      pd.P(k, nu) = line_integral(c, omega_form(c, k + 1), loops.gamma[nu], cfg);
  pd.Omega1 = pd.P.leftCols(g);
  pd.Omega2 = pd.P.rightCols(g);

  Eigen::JacobiSVD<Mat> svd(pd.Omega1);
  double smin = svd.singularValues()(g - 1);
  pd.cond_omega1 =
      smin > 0 ? svd.singularValues()(0) / smin : std::numeric_limits<double>::infinity();
  if (!(pd.cond_omega1 < 1e8)) throw SingularABlock("a-period block is numerically singular");

  pd.N = pd.Omega1.partialPivLu().inverse();
  pd.Z = pd.N * pd.Omega2;
  if (max_abs(pd.Z - pd.Z.transpose()) > 1e-8 * max_abs(pd.Z))
    throw NotSymmetric("period matrix is not symmetric");
  RMat Y = pd.Z.imag();
  Eigen::LLT<RMat> llt(Y);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("imaginary part of the period matrix is not positive definite");

  pd.A = (pd.Z.conjugate() - pd.Z).partialPivLu().inverse();
  if (max_abs(pd.A.transpose() + pd.A.conjugate()) > 1e-10 * max_abs(pd.A))
    throw NotSymmetric("A block violates A^T = -conj(A)");
  return pd;
}

LatticeReduction reduce_mod_lattice(const Vec& v, const Mat& Z) {
  const int g = (int)Z.rows();
  if ((int)v.size() != g) throw LengthMismatch("vector length does not match the period matrix");
  RMat B = RMat::Zero(2 * g, 2 * g);
  B.topLeftCorner(g, g).setIdentity();
  B.topRightCorner(g, g) = Z.real();
  B.bottomRightCorner(g, g) = Z.imag();
  RVec rhs(2 * g);
  rhs.head(g) = v.real();
  rhs.tail(g) = v.imag();
  RVec t = B.partialPivLu().solve(rhs);

  LatticeReduction out;
  out.coords = RVec(2 * g);
  out.rounded = IVec(2 * g);
  for (int i = 0; i < 2 * g; ++i) {
    double n = std::floor(t(i) + 0.5);
    out.rounded(i) = (int)n;
    out.coords(i) = t(i) - n;
  }
  Vec res = out.coords.head(g).cast<cplx>() + Z * out.coords.tail(g).cast<cplx>();
  out.residual = res.norm();
  return out;
}

bool is_zero_mod_lattice(const Vec& v, const Mat& Z, double tol, double* residual) {
  LatticeReduction r = reduce_mod_lattice(v, Z);
  if (residual) *residual = r.residual;
  return r.residual < tol;
}

JacobianPoint abel_jacobi(const CurveSpec& c, const PeriodData& pd, const LoopSystem& loops,
                          const Divisor& D, const QuadratureConfig& cfg) {
  if (D.degree() != 0) throw InputError("abel_jacobi needs a degree zero divisor");
  const int g = c.genus;
  Vec acc = Vec::Zero(g);
  for (const auto& [pt, mult] : D.terms) {
    if (mult == 0) continue;
    Vec raw(g);
    if (pt.at_infinity) {
      raw = integral_to_infinity_basis(c, loops.p, cfg);
    } else if (is_branch_x(c, pt.x)) {
      raw = integral_to_branch_basis(c, loops.p, pt.x, cfg);
    } else {
      SurfacePath path = path_to_point(c, loops.p, pt, cfg);
      for (int k = 0; k < g; ++k) raw(k) = line_integral(c, omega_form(c, k + 1), path, cfg);
    }
    acc += cplx(double(mult), 0.0) * (pd.N * raw);
  }
  return JacobianPoint{acc};
}

// cached signatures carry the raw-basis depth-2 integrals; normalization by N
// turns them into the dz basis, so no fresh quadrature is needed here
IterMatrices compute_iter_matrices(const CurveSpec& c, const LoopSystem& loops,
                                   const PeriodData& periods, const QuadratureConfig& cfg) {
  (void)cfg;
  const int g = c.genus;
  if ((int)loops.gamma_sig.size() != 2 * g)
    throw InputError("loop system carries no cached signatures");
  IterMatrices im;
  im.I1.assign(g, Mat::Zero(g, g));
  im.I2.assign(g, Mat::Zero(g, g));
  for (int nu = 0; nu < g; ++nu) {
    Sig sa = normalize_sig(loops.gamma_sig[nu], periods.N);
    Sig sb = normalize_sig(loops.gamma_sig[g + nu], periods.N);
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j) {
        im.I1[i](nu, j) = sa.L2(i, j);
        im.I2[i](nu, j) = sb.L2(i, j);
      }
  }
  return im;
}

}  // namespace hyperell
