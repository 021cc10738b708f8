#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "hyperell/chen.hpp"
#include "hyperell/curve.hpp"
#include "hyperell/errors.hpp"
#include "hyperell/path.hpp"

using namespace hyperell;

namespace {

CurveSpec genus2() { return make_curve({0, -1, 0, 0, 0, 1}); }  // x^5 - x

Sig random_sig(int gh, std::mt19937_64& rng) {
  auto rc = [&]() { return cplx(uniform01(rng()) - 0.5, uniform01(rng()) - 0.5); };
  Sig s = Sig::zero(gh);
  for (int a = 0; a < 2 * gh; ++a) s.L1(a) = rc();
  for (int a = 0; a < 2 * gh; ++a)
    for (int b = 0; b < 2 * gh; ++b) s.L2(a, b) = rc();
  for (int a = 0; a < gh; ++a)
    for (int b = 0; b < gh; ++b)
      for (int c = 0; c < gh; ++c) s.L3[a](b, c) = rc();
  return s;
}

double sig_dist(const Sig& a, const Sig& b) {
  double m = (a.L1 - b.L1).cwiseAbs().maxCoeff();
  m = std::max(m, (a.L2 - b.L2).cwiseAbs().maxCoeff());
  for (size_t i = 0; i < a.L3.size(); ++i)
    m = std::max(m, (a.L3[i] - b.L3[i]).cwiseAbs().maxCoeff());
  return m;
}

// open test path in the regular region, several corners
SurfacePath test_path(const CurveSpec& c) {
  XPath xp;
  xp.append(line_segment(cplx(-3, 0.5), cplx(-2, 2)));
  xp.append(line_segment(cplx(-2, 2), cplx(2, 2.5)));
  xp.append(arc_segment(cplx(2, 1.5), 1.0, kPi / 2, -kPi / 4));
  cplx y0 = std::sqrt(c.f(cplx(-3, 0.5)));
  return {xp, y0};
}

IterWord word(std::initializer_list<int> idx, std::initializer_list<bool> conj) {
  IterWord w;
  auto it = conj.begin();
  for (int i : idx) w.push_back({i, *it++});
  return w;
}

}  // namespace

TEST_CASE("concatenation product algebra") {
  std::mt19937_64 rng(7u);
  Sig A = random_sig(2, rng), B = random_sig(2, rng), C = random_sig(2, rng);

  Sig ab_c = chen_mul(chen_mul(A, B), C);
  Sig a_bc = chen_mul(A, chen_mul(B, C));
  CHECK(sig_dist(ab_c, a_bc) < 1e-13);

  CHECK(sig_dist(sig_inverse(sig_inverse(A)), A) < 1e-15);

  Sig inv_ab = sig_inverse(chen_mul(A, B));
  Sig binv_ainv = chen_mul(sig_inverse(B), sig_inverse(A));
  CHECK(sig_dist(inv_ab, binv_ainv) < 1e-13);

  Sig z = Sig::zero(2);
  CHECK(sig_dist(chen_mul(A, z), A) < 1e-15);
  CHECK(sig_dist(chen_mul(z, A), A) < 1e-15);
}

TEST_CASE("path signatures satisfy shuffle relations") {
  CurveSpec c = genus2();
  SurfacePath P = test_path(c);
  PathSig ps = signature_of_path(c, P, {});
  const Sig& S = ps.sig;

  // deg 1 * deg 1
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      cplx lhs = S.L1(a) * S.L1(b);
      cplx rhs = S.L2(a, b) + S.L2(b, a);
      CHECK(std::abs(lhs - rhs) < 1e-9);
    }

  // deg 1 * deg 2, holomorphic letters
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int d = 0; d < 2; ++d) {
        cplx lhs = S.L1(a) * S.L2(b, d);
        cplx rhs = S.L3[a](b, d) + S.L3[b](a, d) + S.L3[b](d, a);
        CHECK(std::abs(lhs - rhs) < 1e-9);
      }
}

TEST_CASE("path splitting matches the concatenation product") {
  CurveSpec c = genus2();
  SurfacePath P = test_path(c);

  SurfacePath P1{{}, P.y_start}, P2{{}, 0};
  P1.xpath.append(P.xpath.segs[0]);
  P1.xpath.append(P.xpath.segs[1]);
  ContinuationTrace tr = continue_y(c, P1, {});
  P2.xpath.append(P.xpath.segs[2]);
  P2.y_start = tr.y_end;

  Sig whole = signature_of_path(c, P, {}).sig;
  Sig s1 = signature_of_path(c, P1, {}).sig;
  Sig s2 = signature_of_path(c, P2, {}).sig;
  CHECK(sig_dist(whole, chen_mul(s1, s2)) < 1e-10);

  // concatenation_value agrees entry by entry
  IterWord w3 = word({0, 1, 0}, {false, false, false});
  CHECK(std::abs(concatenation_value(s1, s2, w3) - sig_value(whole, w3)) < 1e-10);
  IterWord w2 = word({1, 0}, {false, true});
  CHECK(std::abs(concatenation_value(s1, s2, w2) - sig_value(whole, w2)) < 1e-10);
}

TEST_CASE("reversal rule and round trips") {
  CurveSpec c = genus2();
  SurfacePath P = test_path(c);
  ContinuationTrace tr = continue_y(c, P, {});
  SurfacePath Prev{P.xpath.reversed(), tr.y_end};

  Sig S = signature_of_path(c, P, {}).sig;
  Sig R = signature_of_path(c, Prev, {}).sig;
  CHECK(sig_dist(R, sig_inverse(S)) < 1e-9);

  IterWord w2 = word({0, 1}, {false, false});
  CHECK(std::abs(sig_value(R, w2) - reversal_value(S, w2)) < 1e-9);
  IterWord w3 = word({1, 1, 0}, {false, false, false});
  CHECK(std::abs(sig_value(R, w3) - reversal_value(S, w3)) < 1e-9);

  // path followed by its reverse carries a trivial signature
  Sig round = chen_mul(S, R);
  CHECK(round.L1.cwiseAbs().maxCoeff() < 1e-11);
  CHECK(round.L2.cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("letter renormalization") {
  std::mt19937_64 rng(11u);
  Sig S = random_sig(2, rng);
  Mat N(2, 2);
  N << cplx(0.7, 0.2), cplx(-0.3, 0.4), cplx(0.1, -1.0), cplx(0.8, 0.05);
  Sig T = normalize_sig(S, N);

  auto lift = [&](const Letter& l) {
    Vec coef = Vec::Zero(4);
    for (int a = 0; a < 2; ++a)
      coef(a + (l.conj ? 2 : 0)) = l.conj ? std::conj(N(l.idx, a)) : N(l.idx, a);
    return coef;
  };
  for (bool c0 : {false, true})
    for (bool c1 : {false, true})
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          Vec u = lift({i, c0}), v = lift({j, c1});
          cplx expect = 0;
          for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) expect += u(a) * v(b) * S.L2(a, b);
          CHECK(std::abs(T.L2(i + (c0 ? 2 : 0), j + (c1 ? 2 : 0)) - expect) < 1e-13);
        }

  cplx e3 = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int d = 0; d < 2; ++d) e3 += N(0, a) * N(1, b) * N(1, d) * S.L3[a](b, d);
  CHECK(std::abs(T.L3[0](1, 1) - e3) < 1e-13);
}

TEST_CASE("values on group-ring monomials follow the splitting rule") {
  std::mt19937_64 rng(23u);
  std::vector<Sig> T{random_sig(2, rng), random_sig(2, rng)};

  IterWord w1 = word({1}, {false});
  IterWord w2 = word({0, 1}, {false, false});
  IterWord w3 = word({0, 1, 1}, {false, false, false});

  CHECK(std::abs(eval_on_monomial(T, {0}, w2) - T[0].L2(0, 1)) < 1e-15);
  CHECK(eval_on_monomial(T, {0, 1}, w1) == cplx(0));
  CHECK(std::abs(eval_on_monomial(T, {0, 1}, w2) - T[0].L1(0) * T[1].L1(1)) < 1e-15);

  cplx expect = T[0].L1(0) * T[1].L2(1, 1) + T[0].L2(0, 1) * T[1].L1(1);
  CHECK(std::abs(eval_on_monomial(T, {0, 1}, w3) - expect) < 1e-14);

  cplx e111 = T[0].L1(0) * T[1].L1(1) * T[0].L1(1);
  CHECK(std::abs(eval_on_monomial(T, {0, 1, 0}, w3) - e111) < 1e-14);
}

TEST_CASE("single word integration against an explicit basis") {
  CurveSpec c = genus2();
  SurfacePath P = test_path(c);
  Mat N = Mat::Identity(2, 2) * cplx(0, 1);  // scale the letters by i
  IterWord w2 = word({0, 1}, {false, false});
  cplx direct = iterated_integral(c, w2, P, {}, N);
  Sig S = signature_of_path(c, P, {}).sig;
  CHECK(std::abs(direct - cplx(-1, 0) * S.L2(0, 1)) < 1e-12);
}
