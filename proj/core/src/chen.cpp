#include "hyperell/chen.hpp"

#include <functional>
#include <map>
#include <utility>

#include "hyperell/errors.hpp"

namespace hyperell {

Sig Sig::zero(int gh) {
  Sig s;
  s.gh = gh;
  s.L1 = Vec::Zero(2 * gh);
  s.L2 = Mat::Zero(2 * gh, 2 * gh);
  s.L3.assign(gh, Mat::Zero(gh, gh));
  return s;
}

Sig chen_mul(const Sig& A, const Sig& B) {
  const int gh = A.gh;
  if (B.gh != gh) throw LengthMismatch("chen_mul: mismatched alphabets");
  Sig s = Sig::zero(gh);
  s.L1 = A.L1 + B.L1;
  s.L2 = A.L2 + B.L2 + A.L1 * B.L1.transpose();
  for (int a = 0; a < gh; ++a) {
    s.L3[a] = A.L3[a] + B.L3[a] + A.L1(a) * B.L2.topLeftCorner(gh, gh) +
              A.L2.topLeftCorner(gh, gh).row(a).transpose() * B.L1.head(gh).transpose();
  }
  return s;
}

Sig sig_inverse(const Sig& A) {
  const int gh = A.gh;
  Sig s = Sig::zero(gh);
  s.L1 = -A.L1;
  s.L2 = A.L2.transpose();
  for (int a = 0; a < gh; ++a)
    for (int b = 0; b < gh; ++b)
      for (int c = 0; c < gh; ++c) s.L3[a](b, c) = -A.L3[c](b, a);
  return s;
}

namespace {

// complex copies of the rule data so Eigen products stay single-scalar
struct CRule {
  Vec w;
  Mat cum;
};

const CRule& crule(int n) {
  static std::map<int, CRule> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    const GLRule& gl = gl_rule(n);
    CRule r;
    r.w = gl.weights.cast<cplx>();
    r.cum = gl.cumint.cast<cplx>();
    it = cache.emplace(n, std::move(r)).first;
  }
  return it->second;
}

struct SigPiece {
  Sig s;
  cplx y_end;
  bool ok;
};

// depth-3 signature of one parameter piece.  U1/U2 are running prefix
// integrals at the nodes, built with the cumulative-integral matrix, so a
// single walk gives all tensor entries.
SigPiece sig_single(const CurveSpec& c, const Segment& seg, double t0, double t1, cplx y0, int gh,
                    int n) {
  NodeWalk wk = walk_piece(c, seg, t0, t1, y0, n);
  const CRule& r = crule(n);
  const int M = 2 * gh;
  std::vector<Vec> vals(M, Vec(n));
  for (int i = 0; i < n; ++i) {
    cplx p = wk.dx[i] / wk.y[i];
    for (int a = 0; a < gh; ++a) {
      vals[a](i) = p;
      p *= wk.x[i];
    }
  }
  for (int a = 0; a < gh; ++a) vals[gh + a] = vals[a].conjugate();

  SigPiece out{Sig::zero(gh), wk.y_end, wk.ok};
  Sig& s = out.s;
  std::vector<Vec> U1(M);
  for (int a = 0; a < M; ++a) {
    U1[a] = r.cum * vals[a];
    s.L1(a) = r.w.dot(vals[a]);
  }
  for (int a = 0; a < M; ++a)
    for (int b = 0; b < M; ++b) s.L2(a, b) = r.w.dot(U1[a].cwiseProduct(vals[b]));
  for (int a = 0; a < gh; ++a) {
    for (int b = 0; b < gh; ++b) {
      Vec U2 = r.cum * U1[a].cwiseProduct(vals[b]);
      for (int cc = 0; cc < gh; ++cc) s.L3[a](b, cc) = r.w.dot(U2.cwiseProduct(vals[cc]));
    }
  }
  return out;
}

double sig_absmax(const Sig& s) {
  double m = s.L1.cwiseAbs().maxCoeff();
  m = std::max(m, s.L2.cwiseAbs().maxCoeff());
  for (const Mat& t : s.L3) m = std::max(m, t.cwiseAbs().maxCoeff());
  return m;
}

double sig_maxdiff(const Sig& a, const Sig& b) {
  double m = (a.L1 - b.L1).cwiseAbs().maxCoeff();
  m = std::max(m, (a.L2 - b.L2).cwiseAbs().maxCoeff());
  for (size_t i = 0; i < a.L3.size(); ++i)
    m = std::max(m, (a.L3[i] - b.L3[i]).cwiseAbs().maxCoeff());
  return m;
}

// whole-piece tensor vs Chen product of the two halves; Chen's identity is
// exact, so the difference is pure quadrature error
Sig sig_adaptive(const CurveSpec& c, const Segment& seg, double t0, double t1, cplx& y, int gh,
                 const QuadratureConfig& cfg, int depth) {
  SigPiece whole = sig_single(c, seg, t0, t1, y, gh, cfg.nodes);
  const double tm = 0.5 * (t0 + t1);
  SigPiece left = sig_single(c, seg, t0, tm, y, gh, cfg.nodes);
  SigPiece right = sig_single(c, seg, tm, t1, left.y_end, gh, cfg.nodes);
  Sig fine = chen_mul(left.s, right.s);
  const bool allok = whole.ok && left.ok && right.ok;
  if (allok && sig_maxdiff(whole.s, fine) <= cfg.eps * (1.0 + sig_absmax(fine))) {
    y = right.y_end;
    return fine;
  }
  if (depth >= cfg.max_depth) {
    if (!allok) throw ContinuationAmbiguous("signature: sheet tracking ambiguous on a subinterval");
    throw NoConvergence("signature refinement stalled");
  }
  Sig L = sig_adaptive(c, seg, t0, tm, y, gh, cfg, depth + 1);
  Sig R = sig_adaptive(c, seg, tm, t1, y, gh, cfg, depth + 1);
  return chen_mul(L, R);
}

}  // namespace

PathSig signature_of_path(const CurveSpec& c, const SurfacePath& path, const QuadratureConfig& cfg) {
  PathSig out{Sig::zero(c.genus), path.y_start};
  cplx y = path.y_start;
  for (const Segment& seg : path.xpath.segs) {
    std::vector<double> breaks = initial_breaks(c, seg);
    for (size_t i = 0; i + 1 < breaks.size(); ++i)
      out.sig = chen_mul(out.sig, sig_adaptive(c, seg, breaks[i], breaks[i + 1], y, c.genus, cfg, 0));
  }
  out.y_end = y;
  return out;
}

Sig normalize_sig(const Sig& raw, const Mat& N) {
  const int gh = raw.gh;
  if (N.rows() != gh || N.cols() != gh) throw LengthMismatch("normalize_sig: bad basis matrix");
  const Mat Nc = N.conjugate();
  Sig s = Sig::zero(gh);
  s.L1.head(gh) = N * raw.L1.head(gh);
  s.L1.tail(gh) = Nc * raw.L1.tail(gh);
  auto blk = [&](int ri, int ci) { return raw.L2.block(ri * gh, ci * gh, gh, gh); };
  s.L2.topLeftCorner(gh, gh) = N * blk(0, 0) * N.transpose();
  s.L2.topRightCorner(gh, gh) = N * blk(0, 1) * Nc.transpose();
  s.L2.bottomLeftCorner(gh, gh) = Nc * blk(1, 0) * N.transpose();
  s.L2.bottomRightCorner(gh, gh) = Nc * blk(1, 1) * Nc.transpose();
  std::vector<Mat> tmp(gh);
  for (int a = 0; a < gh; ++a) tmp[a] = N * raw.L3[a] * N.transpose();
  for (int i = 0; i < gh; ++i) {
    s.L3[i].setZero();
    for (int a = 0; a < gh; ++a) s.L3[i] += N(i, a) * tmp[a];
  }
  return s;
}

cplx sig_value(const Sig& s, const IterWord& w) {
  const int gh = s.gh;
  auto ix = [&](const Letter& l) {
    if (l.idx < 0 || l.idx >= gh) throw InputError("iterated-integral word: form index out of range");
    return l.idx + (l.conj ? gh : 0);
  };
  switch (w.size()) {
    case 1:
      return s.L1(ix(w[0]));
    case 2:
      return s.L2(ix(w[0]), ix(w[1]));
    case 3:
      if (w[0].conj || w[1].conj || w[2].conj)
        throw InputError("length-3 words with conjugate letters are not tabulated");
      return s.L3[w[0].idx](w[1].idx, w[2].idx);
    default:
      throw InputError("iterated-integral words must have length 1..3");
  }
}

cplx iterated_integral(const CurveSpec& c, const IterWord& w, const SurfacePath& path,
                       const QuadratureConfig& cfg, const Mat& N) {
  PathSig ps = signature_of_path(c, path, cfg);
  return sig_value(normalize_sig(ps.sig, N), w);
}

namespace {

cplx part_value(const Sig& s, const IterWord& w) { return w.empty() ? cplx(1) : sig_value(s, w); }

}  // namespace

cplx concatenation_value(const Sig& a, const Sig& b, const IterWord& w) {
  const int n = static_cast<int>(w.size());
  cplx acc = 0;
  for (int k = 0; k <= n; ++k) {
    IterWord wa(w.begin(), w.begin() + k), wb(w.begin() + k, w.end());
    acc += part_value(a, wa) * part_value(b, wb);
  }
  return acc;
}

cplx reversal_value(const Sig& a, const IterWord& w) {
  IterWord rev(w.rbegin(), w.rend());
  cplx v = sig_value(a, rev);
  return (w.size() % 2 == 1) ? -v : v;
}

cplx eval_on_monomial(const std::vector<Sig>& gen_tables, const std::vector<int>& monomial,
                      const IterWord& w) {
  const int r = static_cast<int>(monomial.size());
  const int n = static_cast<int>(w.size());
  for (int m : monomial)
    if (m < 0 || m >= static_cast<int>(gen_tables.size()))
      throw InputError("monomial refers to an unknown generator");
  if (r == 0) return n == 0 ? cplx(1) : cplx(0);
  if (n < r) return 0;
  // order-preserving distributions, at least one letter per factor
  std::function<cplx(int, int)> rec = [&](int fi, int start) -> cplx {
    const int remaining = r - fi;
    if (remaining == 1) {
      IterWord tail(w.begin() + start, w.end());
      return sig_value(gen_tables[monomial[fi]], tail);
    }
    cplx acc = 0;
    for (int len = 1; len + (remaining - 1) <= n - start; ++len) {
      IterWord head(w.begin() + start, w.begin() + start + len);
      acc += sig_value(gen_tables[monomial[fi]], head) * rec(fi + 1, start + len);
    }
    return acc;
  };
  return rec(0, 0);
}

}  // namespace hyperell
