#include "hyperell/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hyperell/errors.hpp"

namespace hyperell {

namespace {

cplx wof(cplx x, double rot, cplx center) { return std::exp(cplx(0.0, -rot)) * (x - center); }
cplx xof(cplx w, double rot, cplx center) { return center + std::exp(cplx(0.0, rot)) * w; }

double min_adjacent_gap(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  double gap = std::numeric_limits<double>::infinity();
  for (size_t i = 1; i < v.size(); ++i) gap = std::min(gap, v[i] - v[i - 1]);
  return gap;
}

// rotation angle giving the best-separated real parts for the branch points
// and the marked points
double pick_frame(const CurveSpec& c, const SurfacePoint& p, const SurfacePoint* q, cplx center,
                  int attempt) {
  double best_score = -1.0;
  double best_rot = 0.0;
  for (int t = 0; t < 64; ++t) {
    double rot = kPi * (t + 0.37 * attempt) / 64.0;
    std::vector<double> lon;
    for (const auto& b : c.branch_x) lon.push_back(wof(b, rot, center).real());
    lon.push_back(wof(p.x, rot, center).real());
    if (q) lon.push_back(wof(q->x, rot, center).real());
    double score = min_adjacent_gap(lon);
    if (score > best_score) {
      best_score = score;
      best_rot = rot;
    }
  }
  return best_rot;
}

// all strand coordinates of the loop system in the rotated frame
struct Layout {
  double rot = 0.0;
  cplx center;
  int m = 0;  // finite branch points, = 2g+1
  std::vector<double> xi, h;  // branch longitudes/heights, ascending in xi
  double lp = 0.0, hp = 0.0;
  bool has_q = false;
  double lq = 0.0, hq = 0.0;

  std::vector<double> AE, AW, yx;     // own-ray portal per loop (index k-1)
  std::vector<double> A0E, A0W, y0x;  // shared ray-0 hook per loop
  std::vector<double> Ok, Ik;         // outbound/inbound lanes
  double Ybase = 0.0, dd = 0.0;
  double sigma = 0.0, sigf = 0.0, Y1 = 0.0, Y2 = 0.0;

  double depth(int k, int leg) const { return Ybase - (3.0 * (k - 1) + leg + 1) * dd; }
  double slot(int j, int g2) const { return lp + (j - (2.0 * g2 - 1.0) / 2.0) * sigf; }
};

Layout make_layout(const CurveSpec& c, const SurfacePoint& p, const SurfacePoint* q,
                   int attempt) {
  Layout L;
  L.center = 0.0;
  for (const auto& b : c.branch_x) L.center += b;
  L.center /= double(c.branch_x.size());
  L.rot = pick_frame(c, p, q, L.center, attempt);
  L.m = int(c.branch_x.size());
  const int g2 = L.m - 1;  // 2g loops

  std::vector<std::pair<double, double>> br;  // (longitude, height)
  for (const auto& b : c.branch_x) {
    cplx w = wof(b, L.rot, L.center);
    br.push_back({w.real(), w.imag()});
  }
  std::sort(br.begin(), br.end());
  for (const auto& [a, b] : br) {
    L.xi.push_back(a);
    L.h.push_back(b);
  }
  cplx wp = wof(p.x, L.rot, L.center);
  L.lp = wp.real();
  L.hp = wp.imag();
  if (q) {
    L.has_q = true;
    cplx wq = wof(q->x, L.rot, L.center);
    L.lq = wq.real();
    L.hq = wq.imag();
  }

  const double D = c.branch_diameter;
  double gmin_b = std::numeric_limits<double>::infinity();
  for (int k = 1; k < L.m; ++k) gmin_b = std::min(gmin_b, L.xi[k] - L.xi[k - 1]);
  if (!(gmin_b > 16.0 * c.clearance))
    throw DegenerateConfiguration("loop layout: branch columns too close in this frame");

  // cut margins, one per branch column
  std::vector<double> margin(L.m);
  for (int k = 0; k < L.m; ++k) {
    double gl = (k > 0) ? L.xi[k] - L.xi[k - 1] : std::numeric_limits<double>::infinity();
    double gr = (k + 1 < L.m) ? L.xi[k + 1] - L.xi[k] : std::numeric_limits<double>::infinity();
    double mg = 0.3 * std::min(gl, gr);
    mg = std::min(mg, 0.45 * std::abs(L.lp - L.xi[k]));
    if (L.has_q) mg = std::min(mg, 0.45 * std::abs(L.lq - L.xi[k]));
    if (!(mg > 4.0 * c.clearance))
      throw DegenerateConfiguration("loop layout: margin collapsed at a branch column");
    margin[k] = mg;
  }

  double hmin = *std::min_element(L.h.begin(), L.h.end());
  L.Ybase = std::min(hmin - 0.45 * D, L.hp - 0.12 * D);
  if (L.has_q) L.Ybase = std::min(L.Ybase, L.hq - 0.10 * D);
  L.dd = 0.28 * D / (3.0 * L.m + 3.0) * (1.0 + 0.13 * attempt);

  double gap_p = std::numeric_limits<double>::infinity();
  for (int k = 0; k < L.m; ++k) gap_p = std::min(gap_p, std::abs(L.lp - L.xi[k]));
  if (L.has_q) gap_p = std::min(gap_p, std::abs(L.lp - L.lq));
  L.sigma = std::min(gap_p / (2.0 * (L.m + 2)), 0.02 * gmin_b) * (1.0 - 0.09 * attempt);
  if (!(L.sigma > 1e-6 * D))
    throw DegenerateConfiguration("loop layout: basepoint fan collapsed");
  L.sigf = L.sigma / (2.0 * g2 + 2.0);
  L.Y1 = L.hp - 0.8 * L.sigma;
  L.Y2 = L.hp - 1.6 * L.sigma;

  for (int k = 1; k <= g2; ++k) {
    L.AE.push_back(L.xi[k] + 0.9 * margin[k]);
    L.AW.push_back(L.xi[k] - 0.9 * margin[k]);
    L.yx.push_back(L.h[k] + 0.8 * margin[k]);
    double t = (g2 > 1) ? double(k - 1) / double(g2 - 1) : 0.0;
    L.A0E.push_back(L.xi[0] + margin[0] * (0.35 + 0.55 * t));
    L.A0W.push_back(L.xi[0] - margin[0] * (0.35 + 0.55 * t));
    L.y0x.push_back(L.h[0] + 1.1 * margin[0] * (0.5 + 0.45 * t));
    L.Ok.push_back(L.lp + k * L.sigma);
    L.Ik.push_back(L.lp + k * L.sigma + L.sigma / 3.0);
  }
  return L;
}

// loop ell_k: out through the basepoint fan, lane down, run under the
// branch row, portal over branch k, run back, portal over branch 0, return
// lane, fan in.  All straight segments.
SurfacePath build_loop(const CurveSpec& c, const SurfacePoint& p, const Layout& L, int k) {
  const int g2 = L.m - 1;
  const int i = k - 1;
  const cplx wp = wof(p.x, L.rot, L.center);
  std::vector<cplx> pts;
  pts.push_back(wp);
  pts.push_back({L.slot(2 * (k - 1), g2), L.Y1});
  pts.push_back({L.Ok[i], L.Y2});
  pts.push_back({L.Ok[i], L.depth(k, 0)});
  pts.push_back({L.AE[i], L.depth(k, 0)});
  pts.push_back({L.AE[i], L.yx[i]});
  pts.push_back({L.AW[i], L.yx[i]});
  pts.push_back({L.AW[i], L.depth(k, 1)});
  pts.push_back({L.A0E[i], L.depth(k, 1)});
  pts.push_back({L.A0E[i], L.y0x[i]});
  pts.push_back({L.A0W[i], L.y0x[i]});
  pts.push_back({L.A0W[i], L.depth(k, 2)});
  pts.push_back({L.Ik[i], L.depth(k, 2)});
  pts.push_back({L.Ik[i], L.Y2});
  pts.push_back({L.slot(2 * k - 1, g2), L.Y1});
  pts.push_back(wp);

  XPath xp;
  for (size_t j = 0; j + 1 < pts.size(); ++j)
    xp.append(line_segment(xof(pts[j], L.rot, L.center), xof(pts[j + 1], L.rot, L.center)));
  return SurfacePath{xp, p.y};
}

// y samples of one trace, regrouped per segment with local parameters
struct SegSamples {
  std::vector<double> t;
  std::vector<cplx> y;
};

std::vector<SegSamples> split_trace(const ContinuationTrace& tr, int nsegs) {
  std::vector<SegSamples> out(nsegs);
  for (const auto& s : tr.samples) {
    double u = s.t * nsegs;
    int si = std::min(int(std::floor(u)), nsegs - 1);
    si = std::max(si, 0);
    out[si].t.push_back(u - si);
    out[si].y.push_back(s.y);
  }
  return out;
}

cplx sheet_at(const CurveSpec& c, const SegSamples& ss, double tloc, cplx xc) {
  if (ss.t.empty()) throw DegenerateConfiguration("crossing count: segment without samples");
  size_t best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < ss.t.size(); ++i) {
    double d = std::abs(ss.t[i] - tloc);
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  bool ok = true;
  cplx y = sqrt_continue(c.f(xc), ss.y[best], ok);
  if (!ok) throw DegenerateConfiguration("crossing count: sheet ambiguous at a crossing");
  return y;
}

double cross2(cplx u, cplx v) { return u.real() * v.imag() - u.imag() * v.real(); }

// signed transversal crossing count of two based loops; crossings at the
// shared basepoint do not count (the fan wedges of distinct loops are
// disjoint there)
int signed_crossings(const CurveSpec& c, const SurfacePath& A, const std::vector<SegSamples>& sa,
                     const SurfacePath& B, const std::vector<SegSamples>& sb) {
  const int na = int(A.xpath.segs.size()), nb = int(B.xpath.segs.size());
  int total = 0;
  for (int ia = 0; ia < na; ++ia) {
    const bool a_base = (ia == 0 || ia == na - 1);
    const Segment& s1 = A.xpath.segs[ia];
    const cplx a1 = s1.a, d1 = s1.b - s1.a;
    for (int ib = 0; ib < nb; ++ib) {
      if (a_base && (ib == 0 || ib == nb - 1)) continue;
      const Segment& s2 = B.xpath.segs[ib];
      const cplx a2 = s2.a, d2 = s2.b - s2.a;
      double den = cross2(d1, d2);
      if (std::abs(den) <= 1e-12 * std::abs(d1) * std::abs(d2)) continue;
      double s = cross2(a2 - a1, d2) / den;
      double t = cross2(a2 - a1, d1) / den;
      if (!(s >= 0.0 && s < 1.0 && t >= 0.0 && t < 1.0)) continue;
      cplx xc = a1 + s * d1;
      cplx ya = sheet_at(c, sa[ia], s, xc);
      cplx yb = sheet_at(c, sb[ib], t, xc);
      if (std::abs(ya - yb) < std::abs(ya + yb)) total += (den > 0.0) ? 1 : -1;
    }
  }
  return total;
}

XPath word_xpath_over(const std::vector<SurfacePath>& base, const FreeWord& w) {
  XPath xp;
  for (const auto& l : w) {
    const XPath& u = base[size_t(l.gen)].xpath;
    XPath r = (l.pow < 0) ? u.reversed() : u;
    for (int rep = 0; rep < std::abs(l.pow); ++rep)
      for (const auto& s : r.segs) xp.append(s);
  }
  return xp;
}

Sig word_sig_over(const std::vector<Sig>& tabs, const FreeWord& w, int gh) {
  Sig acc = Sig::zero(gh);
  for (const auto& l : w) {
    Sig f = (l.pow < 0) ? sig_inverse(tabs[size_t(l.gen)]) : tabs[size_t(l.gen)];
    for (int rep = 0; rep < std::abs(l.pow); ++rep) acc = chen_mul(acc, f);
  }
  return acc;
}

double max_abs(const Sig& s) {
  double m = 0.0;
  for (int i = 0; i < s.L1.size(); ++i) m = std::max(m, std::abs(s.L1(i)));
  for (int i = 0; i < s.L2.rows(); ++i)
    for (int j = 0; j < s.L2.cols(); ++j) m = std::max(m, std::abs(s.L2(i, j)));
  for (const auto& T : s.L3)
    for (int i = 0; i < T.rows(); ++i)
      for (int j = 0; j < T.cols(); ++j) m = std::max(m, std::abs(T(i, j)));
  return m;
}

// pure holomorphic and pure antiholomorphic parts of a closed-word
// signature; these are homotopy functionals on the compact surface, so they
// must vanish on the relator
double relator_residual(const Sig& s) {
  const int g = s.gh;
  double r = 0.0;
  for (int i = 0; i < 2 * g; ++i) r = std::max(r, std::abs(s.L1(i)));
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) {
      r = std::max(r, std::abs(s.L2(i, j)));
      r = std::max(r, std::abs(s.L2(g + i, g + j)));
    }
  for (const auto& T : s.L3)
    for (int i = 0; i < T.rows(); ++i)
      for (int j = 0; j < T.cols(); ++j) r = std::max(r, std::abs(T(i, j)));
  return r;
}

LoopSystem build_attempt(const CurveSpec& c, const SurfacePoint& p,
                         const std::optional<SurfacePoint>& q, const QuadratureConfig& cfg,
                         int attempt) {
  const int m = int(c.branch_x.size());
  const int g = c.genus, g2 = 2 * g;
  Layout L = make_layout(c, p, q ? &*q : nullptr, attempt);

  LoopSystem ls;
  ls.curve = c;
  ls.p = p;
  ls.q = q;
  ls.frame_rot = L.rot;

  const double ytol = 1e-6 * (1.0 + std::abs(p.y));
  std::vector<std::vector<SegSamples>> samples;
  for (int k = 1; k <= g2; ++k) {
    SurfacePath lp = build_loop(c, p, L, k);
    ContinuationTrace tr = continue_y(c, lp, cfg);
    if (std::abs(tr.y_end - p.y) > ytol)
      throw DegenerateConfiguration("loop continuation does not close up");
    samples.push_back(split_trace(tr, int(lp.xpath.segs.size())));
    ls.loops.push_back(std::move(lp));
  }
  if (q) {
    for (const auto& lp : ls.loops)
      if (path_distance(lp.xpath, q->x) < 4.0 * c.clearance)
        throw DegenerateConfiguration("loop strand runs through the puncture column");
  }

  ls.M_loops = IMat::Zero(g2, g2);
  for (int i = 0; i < g2; ++i)
    for (int j = i + 1; j < g2; ++j) {
      int v = signed_crossings(c, ls.loops[i], samples[i], ls.loops[j], samples[j]);
      ls.M_loops(i, j) = v;
      ls.M_loops(j, i) = -v;
    }
  double det = ls.M_loops.cast<double>().determinant();
  if (std::llround(std::abs(det)) != 1)
    throw DegenerateConfiguration("loop intersection matrix is not unimodular");

  FreeWord rel = infinity_relator(m);
  SymplecticWords sw = surface_word_canonicalize(rel, g2);
  if (int(sw.a.size()) != g)
    throw DegenerateConfiguration("relator collection lost a commutator pair");

  auto gamma_pairing = [&](const SymplecticWords& w) {
    IMat E(g2, g2);
    for (int i = 0; i < g; ++i) {
      E.col(i) = exponent_vector(w.a[i], g2);
      E.col(g + i) = exponent_vector(w.b[i], g2);
    }
    return IMat(E.transpose() * ls.M_loops * E);
  };
  IMat J = standard_symplectic(g);
  IMat Mg = gamma_pairing(sw);
  FreeWord rel_eff = rel;
  if ((Mg.array() == (-J).array()).all()) {
    SymplecticWords swapped;
    for (int i = 0; i < g; ++i) {
      swapped.a.push_back(sw.b[g - 1 - i]);
      swapped.b.push_back(sw.a[g - 1 - i]);
    }
    sw = std::move(swapped);
    rel_eff = free_inverse(rel);
    Mg = gamma_pairing(sw);
    ls.halves_swapped = true;
  }
  if (!(Mg.array() == J.array()).all())
    throw DegenerateConfiguration("gamma system is not standard symplectic");
  if (!is_identity(free_mul(commutator_product(sw), free_inverse(rel_eff))))
    throw DegenerateConfiguration("gamma words do not multiply to the relator");
  ls.M = Mg;
  ls.relator = rel_eff;
  for (int i = 0; i < g; ++i) ls.gamma_words.push_back(sw.a[i]);
  for (int i = 0; i < g; ++i) ls.gamma_words.push_back(sw.b[i]);

  double sig_scale = 1.0;
  for (int k = 0; k < g2; ++k) {
    PathSig ps = signature_of_path(c, ls.loops[k], cfg);
    if (std::abs(ps.y_end - p.y) > ytol)
      throw DegenerateConfiguration("loop signature continuation does not close up");
    sig_scale = std::max(sig_scale, max_abs(ps.sig));
    ls.loop_sig.push_back(std::move(ps.sig));
  }

  Sig SR = word_sig_over(ls.loop_sig, rel_eff, g);
  if (relator_residual(SR) > 1e-6 * sig_scale * std::max(1.0, sig_scale))
    throw DegenerateConfiguration("relator signature residual too large");

  // fold the diagonal of the period ratio into [-1/2, 1/2) by the pair
  // shears b_nu -> b_nu a_nu^n.  The reduced word of [a, b a^n] equals that
  // of [a, b], so the relator identity and the intersection matrix survive
  // exactly; only the materialized b loops change.
  {
    Mat O1(g, g), O2(g, g);
    for (int nu = 0; nu < g; ++nu) {
      Vec la = word_sig_over(ls.loop_sig, ls.gamma_words[nu], g).L1;
      Vec lb = word_sig_over(ls.loop_sig, ls.gamma_words[g + nu], g).L1;
      O1.col(nu) = la.head(g);
      O2.col(nu) = lb.head(g);
    }
    Mat Zm = O1.partialPivLu().solve(O2);
    for (int nu = 0; nu < g; ++nu) {
      int n = -int(std::floor(Zm(nu, nu).real() + 0.5));
      if (n == 0) continue;
      FreeWord base = (n > 0) ? ls.gamma_words[nu] : free_inverse(ls.gamma_words[nu]);
      FreeWord apow;
      for (int r = 0; r < std::abs(n); ++r) apow = free_mul(apow, base);
      ls.gamma_words[g + nu] = free_mul(ls.gamma_words[g + nu], apow);
    }
    SymplecticWords folded;
    for (int i = 0; i < g; ++i) folded.a.push_back(ls.gamma_words[i]);
    for (int i = 0; i < g; ++i) folded.b.push_back(ls.gamma_words[g + i]);
    if (!is_identity(free_mul(commutator_product(folded), free_inverse(rel_eff))))
      throw DegenerateConfiguration("period folding broke the relator identity");
    if (!(gamma_pairing(folded).array() == J.array()).all())
      throw DegenerateConfiguration("period folding broke the symplectic pairing");
  }

  for (const auto& w : ls.gamma_words) {
    SurfacePath gp{word_xpath_over(ls.loops, w), p.y};
    ContinuationTrace tr = continue_y(c, gp, cfg);
    if (std::abs(tr.y_end - p.y) > ytol)
      throw DegenerateConfiguration("gamma continuation does not close up");
    ls.gamma.push_back(std::move(gp));
    ls.gamma_sig.push_back(word_sig_over(ls.loop_sig, w, g));
  }

  if (q) {
    Form eta = third_kind_form(c, *q, hyperelliptic_conjugate(*q));
    SurfacePath rp{word_xpath_over(ls.loops, rel_eff), p.y};
    cplx W = line_integral(c, eta, rp, cfg);
    // every loop letter appears once with each sign, so the relator path is
    // null-homologous in the twice punctured surface and pairs to zero
    if (std::abs(W) > 1e-5)
      throw DegenerateConfiguration("relator path has nonvanishing puncture pairing");

    double r = std::min(branch_distance(c, q->x), std::abs(q->x - p.x)) / 8.0;
    ls.delta_loop = puncture_loop(c, p, *q, r, cfg, true);
    PathSig ds = signature_of_path(c, ls.delta_loop, cfg);
    if (std::abs(ds.y_end - p.y) > ytol)
      throw DegenerateConfiguration("puncture loop continuation does not close up");
    for (int i = 0; i < ds.sig.L1.size(); ++i)
      if (std::abs(ds.sig.L1(i)) > 1e-6 * sig_scale)
        throw DegenerateConfiguration("puncture loop has nonvanishing basis periods");
    ls.delta_sig = std::move(ds.sig);

    cplx wd = line_integral(c, eta, ls.delta_loop, cfg);
    if (std::abs(wd - cplx(1.0, 0.0)) > 1e-5)
      throw DegenerateConfiguration("puncture loop does not wind once");
  }
  return ls;
}

}  // namespace

Word relator_word(int g) {
  if (g < 1) throw InputError("relator_word: genus must be positive");
  Word w;
  for (int i = 0; i < g; ++i) {
    w.letters.push_back({i, 1});
    w.letters.push_back({g + i, 1});
    w.letters.push_back({i, -1});
    w.letters.push_back({g + i, -1});
  }
  w.letters.push_back({kDeltaGen, -1});
  return w;
}

LoopSystem build_homology_basis(const CurveSpec& c, const SurfacePoint& p,
                                const std::optional<SurfacePoint>& q,
                                const QuadratureConfig& cfg) {
  if (!c.odd_degree)
    throw EvenDegreeUnsupported("build_homology_basis: only the odd-degree model is supported");
  if (p.at_infinity) throw InputError("build_homology_basis: basepoint must be finite");
  if (is_branch_x(c, p.x)) throw InputError("build_homology_basis: basepoint on a branch point");
  if (q) {
    if (q->at_infinity) throw InputError("build_homology_basis: puncture must be finite");
    if (is_branch_x(c, q->x))
      throw InputError("build_homology_basis: puncture on a branch point");
    if (same_point(p, *q, c.clearance))
      throw InputError("build_homology_basis: puncture coincides with the basepoint");
    if (std::abs(q->x - p.x) < 8.0 * c.clearance)
      throw InputError("build_homology_basis: puncture too close to the basepoint column");
  }

  std::string last = "no attempt made";
  for (int attempt = 0; attempt < 8; ++attempt) {
    try {
      return build_attempt(c, p, q, cfg, attempt);
    } catch (const Error& e) {
      last = e.what();
    }
  }
  throw DegenerateConfiguration("build_homology_basis: all layout attempts failed; last: " + last);
}

SurfacePath puncture_loop(const CurveSpec& c, const SurfacePoint& p, const SurfacePoint& q,
                          double radius, const QuadratureConfig& cfg, bool ccw) {
  if (p.at_infinity || q.at_infinity) throw InputError("puncture_loop: points must be finite");
  const double dqb = branch_distance(c, q.x);
  const double dpq = std::abs(q.x - p.x);
  if (!(radius > 0.0) || !(radius < std::min(dqb, dpq) / 4.0))
    throw RadiusTooLarge("puncture_loop: radius must stay below a quarter of the clearance of q");

  // branch point for the sheet-adjusting circuit, with its own clearance
  int bi = 0;
  for (size_t i = 1; i < c.branch_x.size(); ++i)
    if (std::abs(c.branch_x[i] - q.x) < std::abs(c.branch_x[bi] - q.x)) bi = int(i);
  const cplx bstar = c.branch_x[bi];
  double dbb = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < c.branch_x.size(); ++i)
    if (int(i) != bi) dbb = std::min(dbb, std::abs(c.branch_x[i] - bstar));
  const double rg =
      0.3 * std::min({dbb, std::abs(bstar - q.x) - radius, std::abs(bstar - p.x)});
  if (!(rg > 4.0 * c.clearance))
    throw DegenerateConfiguration("puncture_loop: no room for the sheet-adjusting circuit");

  const cplx dir0 = (p.x - q.x) / dpq;
  const double ytol = 1e-6 * (1.0 + std::abs(p.y));
  for (int da = 0; da < 8; ++da) {
    const cplx dir = dir0 * std::exp(cplx(0.0, 0.7 * da));
    const cplx entry = q.x + radius * dir;
    XPath conn = route_avoiding_branches(c, p.x, entry);
    if (path_distance(conn, q.x) < 0.8 * radius) continue;

    ContinuationTrace ct = continue_y(c, SurfacePath{conn, p.y}, cfg);
    XPath radial;
    radial.append(line_segment(q.x, entry));
    ContinuationTrace rq = continue_y(c, SurfacePath{radial, q.y}, cfg);
    const cplx y_want = rq.y_end;
    const bool flip = std::abs(ct.y_end - y_want) > std::abs(ct.y_end + y_want);

    XPath gadget;
    if (flip) {
      const cplx gs = bstar + rg * (entry - bstar) / std::abs(entry - bstar);
      XPath approach = route_avoiding_branches(c, entry, gs);
      for (const auto& s : approach.segs) gadget.append(s);
      const double th0 = std::arg(gs - bstar);
      gadget.append(arc_segment(bstar, rg, th0, th0 + 2.0 * kPi, true));
      for (const auto& s : approach.reversed().segs) gadget.append(s);
    }

    XPath xp = conn;
    const int conn_segs = int(conn.segs.size());
    const int gad_segs = int(gadget.segs.size());
    for (const auto& s : gadget.segs) xp.append(s);
    const double phi0 = std::arg(entry - q.x);
    xp.append(arc_segment(q.x, radius, phi0, phi0 + (ccw ? 2.0 : -2.0) * kPi, true));
    for (const auto& s : gadget.reversed().segs) xp.append(s);
    for (const auto& s : conn.reversed().segs) xp.append(s);

    SurfacePath delta{xp, p.y};
    ContinuationTrace tr = continue_y(c, delta, cfg);
    if (std::abs(tr.y_end - p.y) > ytol) continue;
    // verify the circle really starts on q's sheet
    const int nsegs = int(xp.segs.size());
    const double t_circle = double(conn_segs + gad_segs) / nsegs;
    cplx y_at = tr.samples.front().y;
    double bd = std::numeric_limits<double>::infinity();
    for (const auto& s : tr.samples) {
      double d = std::abs(s.t - t_circle);
      if (d < bd && s.t >= t_circle) {
        bd = d;
        y_at = s.y;
      }
    }
    if (std::abs(y_at - y_want) > std::abs(y_at + y_want)) continue;
    return delta;
  }
  throw DegenerateConfiguration("puncture_loop: could not realize the puncture circle");
}

Sig loop_word_sig(const LoopSystem& ls, const FreeWord& w) {
  return word_sig_over(ls.loop_sig, w, ls.genus());
}

SurfacePath loop_word_path(const LoopSystem& ls, const FreeWord& w) {
  return SurfacePath{word_xpath_over(ls.loops, w), ls.p.y};
}

SurfacePath concatenate_word(const LoopSystem& ls, const Word& w) {
  XPath xp;
  for (const auto& l : w.letters) {
    const SurfacePath* base = nullptr;
    if (l.idx == kDeltaGen) {
      if (ls.delta_loop.xpath.segs.empty())
        throw InputError("concatenate_word: word uses delta but no puncture was marked");
      base = &ls.delta_loop;
    } else if (l.idx >= 0 && l.idx < 2 * ls.genus()) {
      base = &ls.gamma[size_t(l.idx)];
    } else {
      throw InputError("concatenate_word: letter index out of range");
    }
    XPath u = (l.expo < 0) ? base->xpath.reversed() : base->xpath;
    for (int rep = 0; rep < std::abs(l.expo); ++rep)
      for (const auto& s : u.segs) xp.append(s);
  }
  return SurfacePath{xp, ls.p.y};
}

Sig word_sig(const LoopSystem& ls, const Word& w) {
  Sig acc = Sig::zero(ls.genus());
  for (const auto& l : w.letters) {
    const Sig* base = nullptr;
    if (l.idx == kDeltaGen) {
      if (ls.delta_loop.xpath.segs.empty())
        throw InputError("word_sig: word uses delta but no puncture was marked");
      base = &ls.delta_sig;
    } else if (l.idx >= 0 && l.idx < 2 * ls.genus()) {
      base = &ls.gamma_sig[size_t(l.idx)];
    } else {
      throw InputError("word_sig: letter index out of range");
    }
    Sig f = (l.expo < 0) ? sig_inverse(*base) : *base;
    for (int rep = 0; rep < std::abs(l.expo); ++rep) acc = chen_mul(acc, f);
  }
  return acc;
}

}  // namespace hyperell
