#include "hyperell/theta.hpp"

#include <cmath>
#include <random>

#include "hyperell/errors.hpp"

namespace hyperell {
namespace {

double lambda_min(const RMat& Y) {
  Eigen::SelfAdjointEigenSolver<RMat> es(Y);
  return es.eigenvalues().minCoeff();
}

}  // namespace

int theta_truncation_radius(const Mat& Z, double tol) {
  double lmin = lambda_min(Z.imag());
  if (!(lmin > 0))
    throw NotPositiveDefinite("theta: imaginary part of the period matrix must be positive definite");
  double r = std::sqrt(std::max(0.0, -std::log(tol)) / (kPi * lmin));
  int R = (int)std::ceil(r) + 2;
  return std::max(R, 3);
}

cplx theta(const Vec& z, const Mat& Z, int radius) {
  const int g = (int)Z.rows();
  if (Z.cols() != g) throw InputError("theta: period matrix must be square");
  if ((int)z.size() != g) throw LengthMismatch("theta: argument length does not match the matrix");
  const int R = radius > 0 ? radius : theta_truncation_radius(Z, 1e-12);

  RMat Y = Z.imag();
  RVec peak = Y.ldlt().solve(-z.imag());
  IVec n0(g);
  for (int i = 0; i < g; ++i) n0(i) = (int)std::llround(peak(i));

  IVec n = n0.array() - R;
  Vec nz(g);
  cplx acc = 0;
  const cplx pii(0.0, kPi);
  for (;;) {
    for (int i = 0; i < g; ++i) nz(i) = double(n(i));
    cplx quad = (nz.transpose() * Z * nz)(0, 0);
    cplx lin = nz.dot(z);  // Eigen dot conjugates the first factor, which is real here
    acc += std::exp(pii * (quad + 2.0 * lin));
    int d = 0;
    while (d < g && n(d) == n0(d) + R) {
      n(d) = n0(d) - R;
      ++d;
    }
    if (d == g) break;
    ++n(d);
  }
  return acc;
}

Vec riemann_constant(const PeriodData& pd, const IterMatrices& im) {
  const int g = (int)pd.Z.rows();
  if ((int)im.I1.size() != g) throw LengthMismatch("riemann_constant: table size mismatch");
  Vec k1(g), k2(g);
  for (int i = 0; i < g; ++i) {
    cplx tr = 0;
    for (int nu = 0; nu < g; ++nu) tr += im.I1[i](nu, nu);
    k1(i) = 0.5 * pd.Z(i, i) - tr;
    cplx bper = (pd.N * pd.P.col(g + i))(i);
    k2(i) = 0.5 * bper - tr;
  }
  if ((k1 - k2).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + k1.cwiseAbs().maxCoeff()))
    throw Error("riemann_constant: period routes disagree");
  return k1;
}

VanishingCheck verify_riemann_vanishing(const CurveSpec& c, const PeriodData& pd,
                                        const LoopSystem& loops, const IterMatrices& im,
                                        const std::vector<SurfacePoint>& pts,
                                        const QuadratureConfig& cfg, double tol,
                                        std::uint64_t seed) {
  const int g = c.genus;
  if ((int)pts.size() != g - 1)
    throw InputError("verify_riemann_vanishing: need exactly g - 1 points");
  Divisor D;
  for (const auto& q : pts) {
    D.add(q, 1);
    D.add(loops.p, -1);
  }
  Vec u = (g > 1) ? abel_jacobi(c, pd, loops, D, cfg).v : Vec::Zero(g);
  Vec e = u + riemann_constant(pd, im);

  VanishingCheck out;
  out.value = std::abs(theta(e, pd.Z));
  std::mt19937_64 rng(seed);
  double scale = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    RVec t1(g), t2(g);
    for (int i = 0; i < g; ++i) {
      t1(i) = uniform01(rng()) - 0.5;
      t2(i) = uniform01(rng()) - 0.5;
    }
    Vec zp = t1.cast<cplx>() + pd.Z * t2.cast<cplx>();
    scale = std::max(scale, std::abs(theta(zp, pd.Z)));
  }
  out.scale = scale;
  out.ratio = scale > 0 ? out.value / scale : out.value;
  out.pass = out.ratio < tol;
  return out;
}

CanonicalCheck verify_kappa_canonical(const CurveSpec& c, const PeriodData& pd,
                                      const LoopSystem& loops, const IterMatrices& im,
                                      const QuadratureConfig& cfg, double tol) {
  const int g = c.genus;
  Divisor D;
  D.add(loops.p, 2 * g - 2);
  D.add(infinity_point(c), -(2 * g - 2));
  Vec u = abel_jacobi(c, pd, loops, D, cfg).v;
  Vec kap = riemann_constant(pd, im);
  CanonicalCheck out;
  out.pass = is_zero_mod_lattice(u - 2.0 * kap, pd.Z, tol, &out.residual);
  return out;
}

}  // namespace hyperell
