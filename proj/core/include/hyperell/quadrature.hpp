#pragma once

#include <functional>
#include <vector>

#include "hyperell/curve.hpp"
#include "hyperell/path.hpp"
#include "hyperell/types.hpp"

namespace hyperell {

struct QuadratureConfig {
  int nodes = 32;       // Gauss-Legendre points per piece
  int max_depth = 12;   // adaptive bisection depth
  double eps = 1e-10;   // relative agreement between refinement levels
};

// Gauss-Legendre rule on [-1,1] plus the node-to-node cumulative integration
// matrix (exact on polynomials of degree < n)
struct GLRule {
  RVec nodes;
  RVec weights;
  RMat cumint;  // (cumint * v)[i] = integral from -1 to node i of interpolant of v
};
const GLRule& gl_rule(int n);

// one continuation step: pick the square root of fval closest to y_prev;
// ok=false when the two choices are too close to call
cplx sqrt_continue(cplx fval, cplx y_prev, bool& ok);

// breakpoints in [0,1] so that arg f along the segment moves < pi/2 per piece
std::vector<double> initial_breaks(const CurveSpec& c, const Segment& s);

struct ContinuationTrace {
  struct Sample {
    double t;  // global parameter, segment index + local t, scaled to [0,1]
    cplx x, y;
  };
  std::vector<Sample> samples;
  cplx y_end{};
};

// Gauss-Legendre nodes of [t0,t1] on one segment with y continued through
// them from the piece-start value y0; dx already carries the dt jacobian
struct NodeWalk {
  std::vector<cplx> x, dx, y;
  cplx y_end;
  bool ok = true;  // false when some continuation step was ambiguous
};
NodeWalk walk_piece(const CurveSpec& c, const Segment& s, double t0, double t1, cplx y0, int n);

ContinuationTrace continue_y(const CurveSpec& c, const SurfacePath& path, const QuadratureConfig& cfg);

// rational differential r(x,y) dx; conjugate=true integrates conj(r dx)
struct Form {
  std::function<cplx(cplx, cplx)> r;
  std::vector<cplx> x_poles;  // finite poles away from branch points
  bool conjugate = false;
};

Form omega_form(const CurveSpec& c, int k);  // x^{k-1} dx / y, k = 1..g

// normalized differential of the third kind with residue +1/(2 pi i) at q and
// -1/(2 pi i) at qprime, holomorphic elsewhere including infinity:
//   (1/(4 pi i y)) * [ (y + y_q)/(x - x_q) - (y + y_q')/(x - x_q') ] dx
// Both points must be finite non-branch points.
Form third_kind_form(const CurveSpec& c, const SurfacePoint& q, const SurfacePoint& qprime);

cplx line_integral(const CurveSpec& c, const Form& form, const SurfacePath& path,
                   const QuadratureConfig& cfg);

// integrals of the whole basis from a finite point to the branch point over
// infinity (odd-degree model), via the chart x = 1/t^2, y = s/t^{2g+1}
Vec integral_to_infinity_basis(const CurveSpec& c, const SurfacePoint& from,
                               const QuadratureConfig& cfg);
cplx integral_to_infinity(const CurveSpec& c, int k, const SurfacePoint& from,
                          const QuadratureConfig& cfg);

// basis integrals from a finite non-branch point to the branch point at
// x = bx (y = 0), regularized by the substitution x = bx + sigma^2 (xn - bx)
// on the final approach
Vec integral_to_branch_basis(const CurveSpec& c, const SurfacePoint& from, cplx bx,
                             const QuadratureConfig& cfg);

}  // namespace hyperell
