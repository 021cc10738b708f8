#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hyperell/errors.hpp"
#include "hyperell/words.hpp"

using namespace hyperell;

namespace {

FreeWord lw(std::initializer_list<GenPow> l) { return free_reduce(FreeWord(l)); }

}  // namespace

TEST_CASE("free reduction, inversion, multiplication") {
  FreeWord w{{0, 2}, {0, -1}, {1, 1}, {1, -1}, {0, -1}};
  CHECK(is_identity(free_reduce(w)));

  FreeWord u{{0, 1}, {1, 2}};
  FreeWord v = free_inverse(u);
  CHECK(is_identity(free_mul(u, v)));
  CHECK(is_identity(free_mul(v, u)));

  CHECK(free_mul(lw({{0, 1}}), lw({{0, 1}})) == lw({{0, 2}}));
  CHECK(free_mul(lw({{0, 1}, {1, 1}}), lw({{1, -1}, {0, 1}})) == lw({{0, 2}}));
}

TEST_CASE("exponent vectors") {
  FreeWord w{{2, 1}, {0, -2}, {2, 3}};
  IVec e = exponent_vector(w, 4);
  CHECK(e(0) == -2);
  CHECK(e(1) == 0);
  CHECK(e(2) == 4);
  CHECK(e(3) == 0);
}

TEST_CASE("infinity relator uses every loop letter twice with opposite signs") {
  for (int m = 3; m <= 11; m += 2) {
    FreeWord r = infinity_relator(m);
    CHECK(static_cast<int>(r.size()) == 2 * (m - 1));
    IVec e = exponent_vector(r, m - 1);
    for (int i = 0; i < m - 1; ++i) CHECK(e(i) == 0);
    std::vector<int> cnt(m - 1, 0);
    for (const GenPow& gp : r) {
      CHECK(std::abs(gp.pow) == 1);
      cnt[gp.gen]++;
    }
    for (int c : cnt) CHECK(c == 2);
  }
  CHECK(infinity_relator(3) ==
        lw({{1, 1}, {0, -1}, {1, -1}, {0, 1}}));  // a single commutator at genus one
}

TEST_CASE("commutator collection reproduces surface words exactly") {
  for (int m = 3; m <= 11; m += 2) {
    FreeWord r = infinity_relator(m);
    SymplecticWords sw = surface_word_canonicalize(r, m - 1);
    CHECK(static_cast<int>(sw.a.size()) == (m - 1) / 2);
    CHECK(is_identity(free_mul(commutator_product(sw), free_inverse(r))));
    for (const auto& list : {sw.a, sw.b})
      for (const FreeWord& w : list)
        for (const GenPow& gp : w) CHECK((gp.gen >= 0 && gp.gen < m - 1));
  }
}

TEST_CASE("commutator collection handles rotated and conjugator-dressed words") {
  // canonical genus-2 word is reproduced as-is
  FreeWord canon = lw({{0, 1}, {1, 1}, {0, -1}, {1, -1}, {2, 1}, {3, 1}, {2, -1}, {3, -1}});
  SymplecticWords sw = surface_word_canonicalize(canon, 4);
  CHECK(static_cast<int>(sw.a.size()) == 2);
  CHECK(is_identity(free_mul(commutator_product(sw), free_inverse(canon))));

  // cyclic rotation (a conjugate word) still collects exactly
  FreeWord rot;
  for (size_t i = 0; i < canon.size(); ++i) rot.push_back(canon[(i + 3) % canon.size()]);
  SymplecticWords swr = surface_word_canonicalize(rot, 4);
  CHECK(is_identity(free_mul(commutator_product(swr), free_inverse(rot))));

  // handles hidden behind conjugators: g0 [g1,g2] g0^-1 g3 [g4,g5] g3^-1
  FreeWord dressed = lw({{0, 1},
                         {1, 1},
                         {2, 1},
                         {1, -1},
                         {2, -1},
                         {0, -1},
                         {3, 1},
                         {4, 1},
                         {5, 1},
                         {4, -1},
                         {5, -1},
                         {3, -1}});
  SymplecticWords swd = surface_word_canonicalize(dressed, 6);
  CHECK(is_identity(free_mul(commutator_product(swd), free_inverse(dressed))));

  // a repeated-sign letter is not an orientable surface word
  CHECK_THROWS_AS(surface_word_canonicalize(lw({{0, 1}, {1, 1}, {0, 1}, {1, -1}}), 2),
                  DegenerateConfiguration);
}

TEST_CASE("integer congruence reduction to the standard symplectic form") {
  std::mt19937_64 rng(20260823ull);
  for (int g : {1, 2, 3}) {
    IMat J = standard_symplectic(g);
    for (int trial = 0; trial < 6; ++trial) {
      IMat M = J;
      const int n = 2 * g;
      for (int op = 0; op < 40; ++op) {
        int kind = static_cast<int>(rng() % 3);
        int s = static_cast<int>(rng() % n);
        int t = static_cast<int>(rng() % n);
        if (s == t) continue;
        if (kind == 0) {
          int cadd = static_cast<int>(rng() % 5) - 2;
          M.col(t) += cadd * M.col(s);
          M.row(t) += cadd * M.row(s);
        } else if (kind == 1) {
          M.col(s).swap(M.col(t));
          M.row(s).swap(M.row(t));
        } else {
          M.col(s) = -M.col(s);
          M.row(s) = -M.row(s);
        }
      }
      IMat U = symplectic_normal_form(M);
      IMat back = U.transpose() * M * U;
      CHECK((back.array() == J.array()).all());
    }
  }
}

TEST_CASE("standard symplectic matrix layout") {
  IMat J = standard_symplectic(2);
  CHECK(J(0, 2) == 1);
  CHECK(J(2, 0) == -1);
  CHECK(J(1, 3) == 1);
  CHECK(J(0, 1) == 0);
}
