#pragma once

#include <vector>

#include "hyperell/quadrature.hpp"
#include "hyperell/types.hpp"

namespace hyperell {

struct LoopSystem;  // topology.hpp
struct PeriodData;  // abelian.hpp

// Iterated integrals of one path against the letter alphabet
// [w_1..w_g, conj w_1..conj w_g] where w_k = x^{k-1} dx / y.  Depth 3 is
// only kept for all-holomorphic words; that is all the verification layer
// consumes and it keeps the tensor small.
struct Sig {
  int gh = 0;            // number of holomorphic letters (= genus)
  Vec L1;                // 2gh
  Mat L2;                // 2gh x 2gh, row = first letter
  std::vector<Mat> L3;   // gh tensors, L3[a](b,c) = int w_a w_b w_c

  static Sig zero(int gh);
};

// Chen concatenation: signature of (path A followed by path B)
Sig chen_mul(const Sig& A, const Sig& B);
// signature of the reversed path
Sig sig_inverse(const Sig& A);

struct PathSig {
  Sig sig;
  cplx y_end{};
};

// adaptive depth-3 signature of a surface path (raw, unnormalized letters)
PathSig signature_of_path(const CurveSpec& c, const SurfacePath& path, const QuadratureConfig& cfg);

// letter substitution w -> N w on the holomorphic block, conj(N) on the
// conjugate block; used to pass to the normalized basis dz = N w
Sig normalize_sig(const Sig& raw, const Mat& N);

struct Letter {
  int idx = 0;        // 0-based form index
  bool conj = false;  // conjugated letter
};
using IterWord = std::vector<Letter>;

// read one word entry (length 1..3) out of a signature table; length-3
// words must be all-holomorphic
cplx sig_value(const Sig& s, const IterWord& w);

// integrate a single word along a path in the dz basis given by N
cplx iterated_integral(const CurveSpec& c, const IterWord& w, const SurfacePath& path,
                       const QuadratureConfig& cfg, const Mat& N);

// value of the word on the concatenated path from the two factor
// signatures; the split sum allows empty parts
cplx concatenation_value(const Sig& a, const Sig& b, const IterWord& w);

// value on the reversed path: (-1)^n times the reversed word
cplx reversal_value(const Sig& a, const IterWord& w);

// value of the word against a product (gamma_{m_1}-1)...(gamma_{m_r}-1):
// order-preserving distribution of letters with every factor taking at
// least one.  Words shorter than the factor count give 0.
cplx eval_on_monomial(const std::vector<Sig>& gen_tables, const std::vector<int>& monomial,
                      const IterWord& w);

// depth-2 tables of the homology generators in the normalized basis:
// I1[i](nu,j) = int_{a_nu} dz_i dz_j, I2[i](nu,j) = int_{b_nu} dz_i dz_j
struct IterMatrices {
  std::vector<Mat> I1, I2;
};
IterMatrices compute_iter_matrices(const CurveSpec& c, const LoopSystem& loops,
                                   const PeriodData& periods, const QuadratureConfig& cfg);

}  // namespace hyperell
