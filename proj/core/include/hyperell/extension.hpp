#pragma once

#include "hyperell/theta.hpp"

namespace hyperell {

// weight (-1,-2) extension data attached to a basepoint p and a second
// point q: v_pp[i] = Z_ii - 2 tr I1^i, and v_pq = v_pp + 2g u(q - p)
struct ExtensionClass {
  Vec v_pp;
  Vec v_pq;
};
ExtensionClass extension_class(const PeriodData& pd, const IterMatrices& im, const Vec& u_qp);

// intersection-form pairing of two 2g-vectors of loop integrals,
//   sum_nu F[nu] G[g+nu] - F[g+nu] G[nu]
cplx pi_pairing(const Vec& F, const Vec& G);

struct PeriodRelationReport {
  Vec vector;       // the combined depth <= 2 period expression, one entry per i
  IVec lattice;     // integer lattice coordinates it reduces by
  double residual;  // lattice residual of the vector
  bool pass;
};
// depth two analogue of the classical period relations: a combination of
// the I1/I2 tables, A and Z lands in the period lattice
PeriodRelationReport verify_higher_period_relation(const PeriodData& pd, const IterMatrices& im,
                                                   double tol = 1e-6);

struct GroupRingReport {
  double max_err;       // worst |group-ring route - direct loop route|
  double max_value;     // largest magnitude either route produced
  double shrink_err;    // worst change when the puncture loop radius halves
  int functionals;      // number of functionals tested
  bool pass;
};
// the surface relation written in the group ring determines every iterated
// integral of length <= 3 along the puncture loop; checks the monomial
// expansion against direct integration, for all depth-2 words and the
// A-weighted depth-3 combinations
GroupRingReport verify_group_ring_relation(const CurveSpec& c, const LoopSystem& loops,
                                           const PeriodData& pd, const QuadratureConfig& cfg,
                                           double tol = 1e-7);

struct MainTheoremReport {
  Vec va, vb, vc;  // extension class, canonical-divisor image, constant form
  double res_ab, res_bc, res_ac;
  bool pass;
};
// three routes to the same Jacobian point: the extension class v_pq, the
// image u(2g q - 2p - K), and 2 kappa_p + 2g u(q - p)
MainTheoremReport verify_main_theorem(const CurveSpec& c, const PeriodData& pd,
                                      const LoopSystem& loops, const IterMatrices& im,
                                      const SurfacePoint& q, const QuadratureConfig& cfg,
                                      double tol = 1e-6);

struct ReciprocityReport {
  Vec pairing;           // pi_pairing of each dz row against the eta periods
  double residual;       // lattice residual against u(q - q')
  double residue_err;    // relative error of the small-circle residue probe
  bool pass;
};
// Riemann's reciprocity between the third kind form with poles q, q' and
// the holomorphic basis; throws PoleOnPath when a homology loop runs too
// close to a pole (reroute by picking different points)
ReciprocityReport verify_third_kind_reciprocity(const CurveSpec& c, const PeriodData& pd,
                                                const LoopSystem& loops, const SurfacePoint& q,
                                                const SurfacePoint& qprime,
                                                const QuadratureConfig& cfg, double tol = 1e-6);

}  // namespace hyperell
