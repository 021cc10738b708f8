#pragma once

#include <cstdint>
#include <vector>

#include "hyperell/abelian.hpp"

namespace hyperell {

// box radius so the dropped tail of the theta sum stays below tol
int theta_truncation_radius(const Mat& Z, double tol = 1e-12);

// Riemann theta, summed over the box |n - n0|_inf <= radius centered on the
// peak index n0 = round(-(Im Z)^{-1} Im z); radius 0 picks the bound above
cplx theta(const Vec& z, const Mat& Z, int radius = 0);

// Riemann's constant at the basepoint of the loop system,
//   kappa[i] = Z_ii / 2 - sum_nu int_{a_nu} dz_i dz_nu,
// computed twice (Z entry vs re-normalized raw b period) and cross-checked
Vec riemann_constant(const PeriodData& pd, const IterMatrices& im);

struct VanishingCheck {
  double value;  // |theta| at the tested argument
  double scale;  // max |theta| over seeded probe arguments
  double ratio;  // value / scale
  bool pass;
};

// theta vanishes at u(q_1 + ... + q_{g-1} - (g-1) p) + kappa_p; `pts` must
// hold exactly g - 1 points
VanishingCheck verify_riemann_vanishing(const CurveSpec& c, const PeriodData& pd,
                                        const LoopSystem& loops, const IterMatrices& im,
                                        const std::vector<SurfacePoint>& pts,
                                        const QuadratureConfig& cfg, double tol = 1e-5,
                                        std::uint64_t seed = 20260823);

struct CanonicalCheck {
  double residual;  // lattice residual of u((2g-2)p - K) - 2 kappa_p
  bool pass;
};

// twice Riemann's constant equals the image of (2g-2)p minus a canonical
// divisor
CanonicalCheck verify_kappa_canonical(const CurveSpec& c, const PeriodData& pd,
                                      const LoopSystem& loops, const IterMatrices& im,
                                      const QuadratureConfig& cfg, double tol = 1e-6);

}  // namespace hyperell
