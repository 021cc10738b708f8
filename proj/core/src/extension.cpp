#include "hyperell/extension.hpp"

#include <cmath>

#include "hyperell/errors.hpp"
#include "hyperell/quadrature.hpp"

namespace hyperell {
namespace {

// the six degree <= 3 monomials of [a, b] - 1 in c = gamma - 1 variables:
// ab - ba + bab - aba + ba^2 - ab^2
struct MonomialTerm {
  std::vector<int> idx;
  double sign;
};

std::vector<MonomialTerm> commutator_monomials(int a, int b) {
  return {
      {{a, b}, 1.0},    {{b, a}, -1.0},   {{b, a, b}, 1.0},
      {{a, b, a}, -1.0}, {{b, a, a}, 1.0}, {{a, b, b}, -1.0},
  };
}

IterWord hol_word(std::initializer_list<int> idx) {
  IterWord w;
  for (int i : idx) w.push_back(Letter{i, false});
  return w;
}

}  // namespace

ExtensionClass extension_class(const PeriodData& pd, const IterMatrices& im, const Vec& u_qp) {
  const int g = (int)pd.Z.rows();
  if ((int)im.I1.size() != g || (int)u_qp.size() != g)
    throw LengthMismatch("extension_class: table or vector size mismatch");
  ExtensionClass ec;
  ec.v_pp = Vec(g);
  for (int i = 0; i < g; ++i) {
    cplx tr = 0;
    for (int nu = 0; nu < g; ++nu) tr += im.I1[i](nu, nu);
    ec.v_pp(i) = pd.Z(i, i) - 2.0 * tr;
  }
  ec.v_pq = ec.v_pp + 2.0 * double(g) * u_qp;
  return ec;
}

cplx pi_pairing(const Vec& F, const Vec& G) {
  if (F.size() != G.size() || F.size() % 2 != 0)
    throw LengthMismatch("pi_pairing: vectors must share an even length");
  const int g = (int)F.size() / 2;
  cplx acc = 0;
  for (int nu = 0; nu < g; ++nu) acc += F(nu) * G(g + nu) - F(g + nu) * G(nu);
  return acc;
}

PeriodRelationReport verify_higher_period_relation(const PeriodData& pd, const IterMatrices& im,
                                                   double tol) {
  const int g = (int)pd.Z.rows();
  const Mat& Z = pd.Z;
  const Mat& A = pd.A;
  Mat ZA = Z * A, AZ = A * Z, ZAZ = Z * A * Z;
  Vec v(g);
  for (int i = 0; i < g; ++i) {
    cplx t1 = 2.0 * (im.I2[i] * A).trace() - 2.0 * (im.I1[i] * A * Z).trace();
    cplx t2 = ZAZ(i, i) - (Z * AZ.diagonal())(i);
    cplx t3 = ZA(i, i) - (Z * A.diagonal())(i);
    cplx t4 = AZ(i, i) - (Z * ZA.diagonal())(i);
    v(i) = t1 + t2 + t3 + t4;
  }
  PeriodRelationReport rep;
  rep.vector = v;
  LatticeReduction lr = reduce_mod_lattice(v, Z);
  rep.lattice = lr.rounded;
  rep.residual = lr.residual;
  rep.pass = lr.residual < tol;
  return rep;
}

GroupRingReport verify_group_ring_relation(const CurveSpec& c, const LoopSystem& loops,
                                           const PeriodData& pd, const QuadratureConfig& cfg,
                                           double tol) {
  const int g = c.genus;
  if (!loops.q || loops.delta_loop.xpath.segs.empty())
    throw InputError("verify_group_ring_relation: loop system carries no puncture");

  std::vector<Sig> tables(2 * g, Sig::zero(g));
  for (int k = 0; k < 2 * g; ++k) tables[k] = normalize_sig(loops.gamma_sig[k], pd.N);
  Sig delta = normalize_sig(loops.delta_sig, pd.N);

  // an independent, smaller puncture loop for the stability half of the check
  double r2 = std::min(branch_distance(c, loops.q->x), std::abs(loops.q->x - loops.p.x)) / 16.0;
  SurfacePath small = puncture_loop(c, loops.p, *loops.q, r2, cfg);
  Sig delta2 = normalize_sig(signature_of_path(c, small, cfg).sig, pd.N);

  // battery: every depth-2 word, then the A-weighted depth-3 combination
  // for each middle letter
  std::vector<std::vector<std::pair<IterWord, cplx>>> battery;
  for (int a = 0; a < g; ++a)
    for (int b = 0; b < g; ++b)
      battery.push_back({{hol_word({a, b}), cplx(1.0, 0.0)}});
  for (int i = 0; i < g; ++i) {
    std::vector<std::pair<IterWord, cplx>> combo;
    for (int j = 0; j < g; ++j)
      for (int k = 0; k < g; ++k) combo.push_back({hol_word({j, i, k}), pd.A(j, k)});
    battery.push_back(combo);
  }

  GroupRingReport rep;
  rep.max_err = 0.0;
  rep.max_value = 0.0;
  rep.shrink_err = 0.0;
  rep.functionals = (int)battery.size();
  for (const auto& functional : battery) {
    cplx ring = 0, direct = 0, direct2 = 0;
    for (const auto& [w, coef] : functional) {
      for (int nu = 0; nu < g; ++nu)
        for (const auto& term : commutator_monomials(nu, g + nu))
          ring += coef * term.sign * eval_on_monomial(tables, term.idx, w);
      direct += coef * sig_value(delta, w);
      direct2 += coef * sig_value(delta2, w);
    }
    rep.max_err = std::max(rep.max_err, std::abs(ring - direct));
    rep.max_value = std::max({rep.max_value, std::abs(ring), std::abs(direct)});
    rep.shrink_err = std::max(rep.shrink_err, std::abs(direct - direct2));
  }
  rep.pass = rep.max_err < tol && rep.shrink_err < tol;
  return rep;
}

MainTheoremReport verify_main_theorem(const CurveSpec& c, const PeriodData& pd,
                                      const LoopSystem& loops, const IterMatrices& im,
                                      const SurfacePoint& q, const QuadratureConfig& cfg,
                                      double tol) {
  const int g = c.genus;
  Divisor dq;
  dq.add(q, 1);
  dq.add(loops.p, -1);
  Vec u_qp = abel_jacobi(c, pd, loops, dq, cfg).v;

  MainTheoremReport rep;
  rep.va = extension_class(pd, im, u_qp).v_pq;

  Divisor big;
  big.add(q, 2 * g);
  big.add(loops.p, -2);
  big.add(infinity_point(c), -(2 * g - 2));
  rep.vb = abel_jacobi(c, pd, loops, big, cfg).v;

  rep.vc = 2.0 * riemann_constant(pd, im) + 2.0 * double(g) * u_qp;

  double ra, rb, rc;
  is_zero_mod_lattice(rep.va - rep.vb, pd.Z, tol, &ra);
  is_zero_mod_lattice(rep.vb - rep.vc, pd.Z, tol, &rb);
  is_zero_mod_lattice(rep.va - rep.vc, pd.Z, tol, &rc);
  rep.res_ab = ra;
  rep.res_bc = rb;
  rep.res_ac = rc;
  rep.pass = ra < tol && rb < tol && rc < tol;
  return rep;
}

ReciprocityReport verify_third_kind_reciprocity(const CurveSpec& c, const PeriodData& pd,
                                                const LoopSystem& loops, const SurfacePoint& q,
                                                const SurfacePoint& qprime,
                                                const QuadratureConfig& cfg, double tol) {
  const int g = c.genus;
  Form eta = third_kind_form(c, q, qprime);
  Vec G(2 * g);
  for (int nu = 0; nu < 2 * g; ++nu) G(nu) = line_integral(c, eta, loops.gamma[nu], cfg);

  Mat NP = pd.N * pd.P;  // rows are the normalized loop periods (I | Z)
  Vec pairing(g);
  for (int i = 0; i < g; ++i) pairing(i) = pi_pairing(NP.row(i).transpose(), G);

  Divisor d;
  d.add(q, 1);
  d.add(qprime, -1);
  Vec u = abel_jacobi(c, pd, loops, d, cfg).v;

  ReciprocityReport rep;
  rep.pairing = pairing;
  is_zero_mod_lattice(pairing - u, pd.Z, tol, &rep.residual);

  // residue probe: a small circle around q on its own sheet integrates to 1
  double rr = std::min(1e-3, 0.25 * branch_distance(c, q.x));
  if (std::abs(q.x - qprime.x) > c.clearance) rr = std::min(rr, 0.25 * std::abs(q.x - qprime.x));
  bool ok = true;
  cplx ys = sqrt_continue(c.f(q.x + rr), q.y, ok);
  XPath circle;
  circle.append(arc_segment(q.x, rr, 0.0, 2.0 * kPi, true));
  cplx w = line_integral(c, eta, SurfacePath{circle, ys}, cfg);
  rep.residue_err = std::abs(w - cplx(1.0, 0.0));
  rep.pass = rep.residual < tol && rep.residue_err < 0.02;
  return rep;
}

}  // namespace hyperell
