#pragma once

#include <utility>
#include <vector>

#include "hyperell/types.hpp"

namespace hyperell {

// letter of a free-group word: generator index with exponent +1/-1
struct GenPow {
  int gen = 0;
  int pow = 1;
  friend bool operator==(const GenPow&, const GenPow&) = default;
};

using FreeWord = std::vector<GenPow>;

FreeWord free_reduce(FreeWord w);
FreeWord free_inverse(const FreeWord& w);
FreeWord free_mul(const FreeWord& a, const FreeWord& b);
bool is_identity(const FreeWord& w);

// exponent sums per generator (0..ngen-1)
IVec exponent_vector(const FreeWord& w, int ngen);

struct SymplecticWords {
  std::vector<FreeWord> a, b;
};

// Commutator collection for an orientable surface word.  The relator must
// use each of the ngen generators exactly twice, with opposite exponents.
// Returns words a_1..a_s, b_1..b_s (2s = ngen) over the same generators with
//   [a_1,b_1]...[a_s,b_s] = relator
// exactly in the free group.  Throws DegenerateConfiguration if the word is
// not of orientable surface type.
SymplecticWords surface_word_canonicalize(const FreeWord& relator, int ngen);

// Boundary word of the disk at infinity for the vertical-cut loop system on
// an odd-degree curve with m finite branch points: the loop ell_k crosses
// the cut above branch point k and returns through the cut above branch
// point 0 (k = 1..m-1, generator id k-1).  Reads off the double circuit of a
// large circle, so the word uses each generator exactly twice.
FreeWord infinity_relator(int m);

// [a_1,b_1]...[a_g,b_g]
FreeWord commutator_product(const SymplecticWords& sw);

// Integer symplectic normal form: given a nondegenerate antisymmetric
// integer matrix M of even size 2n with unimodular skew form, returns
// unimodular U with U^T M U = J where J[i][n+i] = 1, J[n+i][i] = -1.
// Throws DegenerateConfiguration if M is not equivalent to J over Z.
IMat symplectic_normal_form(IMat M);

IMat standard_symplectic(int g);

}  // namespace hyperell
