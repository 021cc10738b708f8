#pragma once

#include <optional>
#include <vector>

#include "hyperell/chen.hpp"
#include "hyperell/words.hpp"

namespace hyperell {

// letter index standing for the puncture loop in relation words
inline constexpr int kDeltaGen = -1;

struct WLetter {
  int idx = 0;   // 0..2g-1 into the canonical loops, or kDeltaGen
  int expo = 1;  // +1 or -1
};
struct Word {
  std::vector<WLetter> letters;
};

// [gamma_1,gamma_{g+1}] ... [gamma_g,gamma_{2g}] delta^{-1}
Word relator_word(int g);

// Canonical homotopy/homology system based at p.
//
// The construction works in a rotated frame in which all branch points and
// the marked points have well separated real parts.  Loop ell_k crosses the
// vertical cut above branch point k on the way out and the cut above branch
// point 0 on the way back (k = 1..m-1); their pairwise intersection numbers
// are counted from the actual strand crossings.  The boundary word of the
// disk at infinity over these letters is rewritten into commutator form,
// which yields gamma words whose intersection matrix must come out exactly
// standard-symplectic; orientation is fixed by swapping the two half bases
// when needed.  All of this is validated numerically: continuation closure
// of every loop, |det| = 1 for the loop intersections, M = J for the gamma
// system, vanishing of the pure holomorphic/antiholomorphic blocks of the
// relator signature, and (when q is present) unit winding of the relator
// path around the puncture.
struct LoopSystem {
  CurveSpec curve;
  SurfacePoint p;
  std::optional<SurfacePoint> q;

  double frame_rot = 0.0;          // rotation angle of the cut frame
  std::vector<SurfacePath> loops;  // ell_1..ell_{m-1}
  std::vector<Sig> loop_sig;       // their raw signatures
  IMat M_loops;                    // intersection numbers of the ray-pair loops
  FreeWord relator;                // effective relator over loop letters

  std::vector<FreeWord> gamma_words;  // a_1..a_g then b_1..b_g over loop letters
  bool halves_swapped = false;        // orientation fix applied to reach M = J
  IMat M;                             // gamma intersections, == standard_symplectic(g)
  std::vector<SurfacePath> gamma;     // materialized canonical loops
  std::vector<Sig> gamma_sig;         // signature products of the gamma words

  SurfacePath delta_loop;  // positively oriented; empty when q is absent
  Sig delta_sig;

  int genus() const { return curve.genus; }
};

LoopSystem build_homology_basis(const CurveSpec& c, const SurfacePoint& p,
                                const std::optional<SurfacePoint>& q,
                                const QuadratureConfig& cfg);

// based puncture loop: connector from p, full circle of the given radius
// around q on q's sheet (with a sheet-adjusting branch circuit spliced into
// the connector when needed), connector reversed.  The radius must stay
// below a quarter of the distance from q to the nearest branch point and to
// p, else RadiusTooLarge.
SurfacePath puncture_loop(const CurveSpec& c, const SurfacePoint& p, const SurfacePoint& q,
                          double radius, const QuadratureConfig& cfg, bool ccw = true);

// signature of a word over the ray-pair letters, from the cached tables
Sig loop_word_sig(const LoopSystem& ls, const FreeWord& w);
// freshly concatenated path of the same word
SurfacePath loop_word_path(const LoopSystem& ls, const FreeWord& w);

// path of a word over the canonical letters gamma_1..gamma_2g and delta;
// fresh path, suitable for direct re-integration
SurfacePath concatenate_word(const LoopSystem& ls, const Word& w);
// signature of the same word from the cached gamma/delta tables
Sig word_sig(const LoopSystem& ls, const Word& w);

}  // namespace hyperell
