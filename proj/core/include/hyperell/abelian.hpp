#pragma once

#include "hyperell/chen.hpp"
#include "hyperell/topology.hpp"

namespace hyperell {

// Normalized period data of one loop system.  dz = N w turns the a periods
// into the identity; Z is symmetric with positive definite imaginary part
// and A = (conj(Z) - Z)^{-1} satisfies A^T = -conj(A).
struct PeriodData {
  Mat P;       // g x 2g raw periods, P(k, nu) = integral of w_{k+1} over gamma_{nu+1}
  Mat Omega1;  // a block
  Mat Omega2;  // b block
  Mat N;       // Omega1^{-1}
  Mat Z;       // N * Omega2
  Mat A;       // (conj(Z) - Z)^{-1}
  double cond_omega1 = 0.0;
};

PeriodData compute_periods(const CurveSpec& c, const LoopSystem& loops,
                           const QuadratureConfig& cfg);

struct LatticeReduction {
  RVec coords;      // 2g coordinates folded to [-1/2, 1/2)
  IVec rounded;     // integer parts removed per coordinate
  double residual;  // euclidean norm of (I, Z) * coords
};
LatticeReduction reduce_mod_lattice(const Vec& v, const Mat& Z);
bool is_zero_mod_lattice(const Vec& v, const Mat& Z, double tol, double* residual = nullptr);

struct JacobianPoint {
  Vec v;  // definite representative; compare mod (I, Z) Z^{2g}
};

// Abel-Jacobi image of a degree zero divisor, integrated from the loop
// basepoint along recorded sheet-tracked paths; points over infinity go
// through the t = 1/x^2 chart.  The representative is definite, reduction
// happens only in comparisons.
JacobianPoint abel_jacobi(const CurveSpec& c, const PeriodData& pd, const LoopSystem& loops,
                          const Divisor& D, const QuadratureConfig& cfg);

// basepoint-to-point path on the correct sheets, used by abel_jacobi and
// exposed for the verification layer
SurfacePath path_to_point(const CurveSpec& c, const SurfacePoint& from, const SurfacePoint& to,
                          const QuadratureConfig& cfg);

}  // namespace hyperell
