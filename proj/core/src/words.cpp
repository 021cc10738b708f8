#include "hyperell/words.hpp"

#include <algorithm>
#include <cstdlib>

#include "hyperell/errors.hpp"

namespace hyperell {

FreeWord free_reduce(FreeWord w) {
  FreeWord out;
  out.reserve(w.size());
  for (const auto& l : w) {
    if (l.pow == 0) continue;
    if (!out.empty() && out.back().gen == l.gen) {
      out.back().pow += l.pow;
      if (out.back().pow == 0) out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

FreeWord free_inverse(const FreeWord& w) {
  FreeWord out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back({it->gen, -it->pow});
  return out;
}

FreeWord free_mul(const FreeWord& a, const FreeWord& b) {
  FreeWord out = a;
  out.insert(out.end(), b.begin(), b.end());
  return free_reduce(std::move(out));
}

bool is_identity(const FreeWord& w) { return free_reduce(w).empty(); }

IVec exponent_vector(const FreeWord& w, int ngen) {
  IVec n = IVec::Zero(ngen);
  for (const auto& l : w) n[l.gen] += l.pow;
  return n;
}

FreeWord infinity_relator(int m) {
  if (m < 3 || m % 2 == 0) throw InputError("infinity_relator: need odd branch count >= 3");
  // Double circuit of a large circle, read against the vertical cuts.  On the
  // first pass the cut above branch point k is crossed on sheet k mod 2, on
  // the second pass on the opposite sheet; pairing consecutive crossings into
  // the loops ell_k (generator id k-1, with ell_0 the identity) gives this word.
  FreeWord w;
  for (int k = m - 1; k >= 2; k -= 2) {
    w.push_back({k - 1, 1});
    w.push_back({k - 2, -1});
  }
  w.push_back({m - 2, -1});
  for (int k = m - 2; k >= 3; k -= 2) {
    w.push_back({k - 1, 1});
    w.push_back({k - 2, -1});
  }
  w.push_back({0, 1});
  return w;
}

SymplecticWords surface_word_canonicalize(const FreeWord& relator, int ngen) {
  std::vector<GenPow> W;
  for (const auto& l : free_reduce(relator)) {
    if (l.gen < 0 || l.gen >= ngen) throw InputError("surface_word_canonicalize: letter out of range");
    const int s = l.pow > 0 ? 1 : -1;
    for (int r = 0; r < std::abs(l.pow); ++r) W.push_back({l.gen, s});
  }
  if (ngen <= 0 || ngen % 2 != 0 || static_cast<int>(W.size()) != 2 * ngen)
    throw DegenerateConfiguration("surface_word_canonicalize: wrong word length");
  {
    std::vector<int> cnt(ngen, 0), sum(ngen, 0);
    for (const auto& l : W) {
      cnt[l.gen]++;
      sum[l.gen] += l.pow;
    }
    for (int i = 0; i < ngen; ++i)
      if (cnt[i] != 2 || sum[i] != 0)
        throw DegenerateConfiguration("surface_word_canonicalize: not an orientable surface word");
  }

  // current generator i as a word over the originals (identity or inverse;
  // the collection formulas below compose everything else directly)
  std::vector<FreeWord> expr(ngen);
  for (int i = 0; i < ngen; ++i) expr[i] = {{i, 1}};
  auto word_of = [&](const std::vector<GenPow>& seg) {
    FreeWord w;
    for (const auto& l : seg) w = free_mul(w, l.pow > 0 ? expr[l.gen] : free_inverse(expr[l.gen]));
    return w;
  };

  SymplecticWords out;
  while (!W.empty()) {
    const int L = static_cast<int>(W.size());
    std::vector<int> partner(L, -1);
    {
      std::vector<int> open(ngen, -1);
      for (int t = 0; t < L; ++t) {
        int& o = open[W[t].gen];
        if (o < 0) {
          o = t;
        } else {
          partner[o] = t;
          partner[t] = o;
        }
      }
    }
    // positions xi < yi < partner(xi) < partner(yi): an interlocked pair
    int xi = -1, yi = -1;
    for (int i = 0; i < L && xi < 0; ++i) {
      if (partner[i] < i) continue;
      for (int j = i + 1; j < partner[i] && xi < 0; ++j)
        if (partner[j] > partner[i]) {
          xi = i;
          yi = j;
        }
    }
    if (xi < 0) throw DegenerateConfiguration("surface_word_canonicalize: word does not interlock");

    for (int t : {xi, yi})
      if (W[t].pow < 0) {
        const int gidx = W[t].gen;
        expr[gidx] = free_inverse(expr[gidx]);
        for (auto& l : W)
          if (l.gen == gidx) l.pow = -l.pow;
      }

    const int px = partner[xi], py = partner[yi];
    auto slice = [&](int b, int e) { return std::vector<GenPow>(W.begin() + b, W.begin() + e); };
    const auto H = slice(0, xi), A = slice(xi + 1, yi), B = slice(yi + 1, px), C = slice(px + 1, py),
               D = slice(py + 1, L);

    // W = H x A y B x^-1 C y^-1 D = H [xA(CBA)^-1, (CBA)(yBA)(CBA)^-1] (CBA) D
    const FreeWord wH = word_of(H), wA = word_of(A), wB = word_of(B), wC = word_of(C);
    const FreeWord wCBA = free_mul(free_mul(wC, wB), wA);
    FreeWord a = free_mul(free_mul(expr[W[xi].gen], wA), free_inverse(wCBA));
    FreeWord b =
        free_mul(wCBA, free_mul(expr[W[yi].gen], free_mul(wB, free_mul(wA, free_inverse(wCBA)))));
    a = free_mul(wH, free_mul(a, free_inverse(wH)));
    b = free_mul(wH, free_mul(b, free_inverse(wH)));
    out.a.push_back(std::move(a));
    out.b.push_back(std::move(b));

    // reassemble and cancel adjacent inverse pairs so interlock search stays exact
    std::vector<GenPow> W2;
    W2.reserve(L - 4);
    for (const auto* seg : {&H, &C, &B, &A, &D})
      for (const auto& l : *seg) {
        if (!W2.empty() && W2.back().gen == l.gen && W2.back().pow == -l.pow)
          W2.pop_back();
        else
          W2.push_back(l);
      }
    W = std::move(W2);
  }

  if (!is_identity(free_mul(commutator_product(out), free_inverse(relator))))
    throw DegenerateConfiguration("surface_word_canonicalize: verification failed");
  return out;
}

FreeWord commutator_product(const SymplecticWords& sw) {
  FreeWord w;
  for (size_t i = 0; i < sw.a.size(); ++i) {
    w = free_mul(w, sw.a[i]);
    w = free_mul(w, sw.b[i]);
    w = free_mul(w, free_inverse(sw.a[i]));
    w = free_mul(w, free_inverse(sw.b[i]));
  }
  return w;
}

IMat standard_symplectic(int g) {
  IMat J = IMat::Zero(2 * g, 2 * g);
  for (int i = 0; i < g; ++i) {
    J(i, g + i) = 1;
    J(g + i, i) = -1;
  }
  return J;
}

namespace {
using LMat = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
}

IMat symplectic_normal_form(IMat M) {
  const int n2 = static_cast<int>(M.rows());
  if (n2 == 0 || n2 % 2 != 0 || M.cols() != n2)
    throw DegenerateConfiguration("symplectic_normal_form: size must be even and square");
  if ((M + M.transpose()).cwiseAbs().maxCoeff() != 0)
    throw DegenerateConfiguration("symplectic_normal_form: matrix not antisymmetric");
  const int n = n2 / 2;

  LMat B = M.cast<long long>();
  LMat U = LMat::Identity(n2, n2);

  // congruence column op: col_d += t*col_s, mirrored on rows to keep B = U^T M U
  auto colop = [&](int d, int s, long long t) {
    if (t == 0 || d == s) return;
    B.col(d) += t * B.col(s);
    B.row(d) += t * B.row(s);
    U.col(d) += t * U.col(s);
  };
  auto swapc = [&](int i, int j) {
    if (i == j) return;
    B.col(i).swap(B.col(j));
    B.row(i).swap(B.row(j));
    U.col(i).swap(U.col(j));
  };
  auto negc = [&](int i) {
    B.col(i) *= -1;
    B.row(i) *= -1;
    U.col(i) *= -1;
  };

  int fixed = 0;
  while (fixed < n2) {
    // locate minimal nonzero entry in the active block
    auto find_min = [&](int& pi, int& pj) {
      long long best = 0;
      pi = pj = -1;
      for (int i = fixed; i < n2; ++i)
        for (int j = fixed; j < n2; ++j) {
          long long v = std::llabs(B(i, j));
          if (v != 0 && (pi < 0 || v < best)) {
            best = v;
            pi = i;
            pj = j;
          }
        }
      return best;
    };

    int pi, pj;
    long long piv = find_min(pi, pj);
    if (piv == 0) throw DegenerateConfiguration("symplectic_normal_form: degenerate form");

    // gcd descent until a unit pivot appears
    for (int guard = 0; piv > 1; ++guard) {
      if (guard > 64 * n2 * n2) throw DegenerateConfiguration("symplectic_normal_form: not unimodular");
      bool changed = false;
      for (int l = fixed; l < n2 && !changed; ++l) {
        if (l == pi || l == pj) continue;
        if (B(pi, l) % B(pi, pj) != 0) {
          colop(l, pj, -(B(pi, l) / B(pi, pj)));
          changed = true;
        } else if (B(pj, l) % B(pj, pi) != 0) {
          colop(l, pi, -(B(pj, l) / B(pj, pi)));
          changed = true;
        }
      }
      if (!changed) throw DegenerateConfiguration("symplectic_normal_form: not unimodular");
      piv = find_min(pi, pj);
    }

    // bring the unit pivot to (fixed, fixed+1) with value +1
    swapc(fixed, pi);
    if (pj == fixed) pj = pi;  // pivot column displaced by the swap
    if (pj != fixed + 1) swapc(fixed + 1, pj);
    if (std::llabs(B(fixed, fixed + 1)) != 1)
      throw DegenerateConfiguration("symplectic_normal_form: lost unit pivot");
    if (B(fixed, fixed + 1) == -1) negc(fixed + 1);

    // clear the active block against the new hyperbolic pair
    for (int l = fixed + 2; l < n2; ++l) {
      colop(l, fixed + 1, -B(fixed, l));
      colop(l, fixed, B(fixed + 1, l));
    }
    fixed += 2;
  }

  // interleaved pairs (0,1)(2,3)... -> layout a_1..a_n, b_1..b_n
  LMat P = LMat::Zero(n2, n2);
  for (int k = 0; k < n; ++k) {
    P(2 * k, k) = 1;
    P(2 * k + 1, n + k) = 1;
  }
  LMat Uf = U * P;

  LMat check = Uf.transpose() * M.cast<long long>() * Uf;
  IMat J = standard_symplectic(n);
  for (int i = 0; i < n2; ++i)
    for (int j = 0; j < n2; ++j)
      if (check(i, j) != J(i, j))
        throw DegenerateConfiguration("symplectic_normal_form: verification failed");
  return Uf.cast<int>();
}

}  // namespace hyperell
