#include "hyperell/quadrature.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "hyperell/errors.hpp"

namespace hyperell {

const GLRule& gl_rule(int n) {
  static std::map<int, GLRule> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  if (n < 4) throw InputError("gl_rule: need at least 4 nodes");

  // Golub-Welsch: Jacobi matrix for Legendre polynomials
  RMat T = RMat::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    double b = k / std::sqrt(4.0 * k * k - 1.0);
    T(k, k - 1) = b;
    T(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<RMat> es(T);
  GLRule r;
  r.nodes = es.eigenvalues();
  r.weights = RVec(n);
  for (int i = 0; i < n; ++i) {
    double v0 = es.eigenvectors()(0, i);
    r.weights[i] = 2.0 * v0 * v0;
  }

  // Legendre Vandermonde and antiderivative values at the nodes
  RMat P(n, n + 1);
  for (int i = 0; i < n; ++i) {
    double x = r.nodes[i];
    P(i, 0) = 1.0;
    P(i, 1) = x;
    for (int j = 2; j <= n; ++j)
      P(i, j) = ((2.0 * j - 1.0) * x * P(i, j - 1) - (j - 1.0) * P(i, j - 2)) / j;
  }
  RMat Q(n, n);
  for (int i = 0; i < n; ++i) {
    Q(i, 0) = r.nodes[i] + 1.0;
    for (int j = 1; j < n; ++j) Q(i, j) = (P(i, j + 1) - P(i, j - 1)) / (2.0 * j + 1.0);
  }
  r.cumint = Q * P.leftCols(n).partialPivLu().solve(RMat::Identity(n, n));

  auto [pos, inserted] = cache.emplace(n, std::move(r));
  return pos->second;
}

cplx sqrt_continue(cplx fval, cplx y_prev, bool& ok) {
  cplx w = std::sqrt(fval);
  double dp = std::abs(w - y_prev), dm = std::abs(w + y_prev);
  cplx y = (dp <= dm) ? w : -w;
  double lo = std::min(dp, dm), hi = std::max(dp, dm);
  ok = (hi > 1e-12) && (lo < 0.75 * hi);
  return y;
}

std::vector<double> initial_breaks(const CurveSpec& c, const Segment& s) {
  const int M = 96;
  double total = 0;
  cplx fprev = c.f(s.at(0.0));
  double aprev = std::arg(fprev);
  for (int i = 1; i <= M; ++i) {
    cplx fv = c.f(s.at(double(i) / M));
    double a = std::arg(fv);
    double da = a - aprev;
    while (da > kPi) da -= 2 * kPi;
    while (da < -kPi) da += 2 * kPi;
    total += std::abs(da);
    aprev = a;
  }
  int npieces = std::max(1, (int)std::ceil(total / (kPi / 2.0)));
  if (s.kind == Segment::Arc)
    npieces = std::max(npieces, (int)std::ceil(std::abs(s.th1 - s.th0) / (kPi / 3.0)));
  std::vector<double> breaks(npieces + 1);
  for (int i = 0; i <= npieces; ++i) breaks[i] = double(i) / npieces;
  return breaks;
}

NodeWalk walk_piece(const CurveSpec& c, const Segment& s, double t0, double t1, cplx y0, int n) {
  const GLRule& gl = gl_rule(n);
  NodeWalk w;
  w.x.resize(n);
  w.dx.resize(n);
  w.y.resize(n);
  const double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);
  cplx ycur = y0;
  bool ok = true;
  for (int i = 0; i < n; ++i) {
    double t = mid + half * gl.nodes[i];
    w.x[i] = s.at(t);
    w.dx[i] = s.deriv(t) * half;
    bool stepok = true;
    ycur = sqrt_continue(c.f(w.x[i]), ycur, stepok);
    ok = ok && stepok;
    w.y[i] = ycur;
  }
  bool endok = true;
  w.y_end = sqrt_continue(c.f(s.at(t1)), ycur, endok);
  w.ok = ok && endok;
  return w;
}

namespace {

cplx form_node_value(const Form& form, cplx x, cplx y, cplx dx) {
  cplx v = form.r(x, y) * dx;
  return form.conjugate ? std::conj(v) : v;
}

struct ScalarPiece {
  cplx val;
  cplx y_end;
  bool ok;
};

ScalarPiece scalar_single(const CurveSpec& c, const Segment& s, double t0, double t1, cplx y0,
                          const Form& form, int n) {
  NodeWalk w = walk_piece(c, s, t0, t1, y0, n);
  const GLRule& gl = gl_rule(n);
  cplx acc = 0;
  for (int i = 0; i < n; ++i) acc += gl.weights[i] * form_node_value(form, w.x[i], w.y[i], w.dx[i]);
  return {acc, w.y_end, w.ok};
}

cplx scalar_adaptive(const CurveSpec& c, const Segment& s, double t0, double t1, cplx& y,
                     const Form& form, const QuadratureConfig& cfg, int depth) {
  ScalarPiece whole = scalar_single(c, s, t0, t1, y, form, cfg.nodes);
  const double tm = 0.5 * (t0 + t1);
  ScalarPiece left = scalar_single(c, s, t0, tm, y, form, cfg.nodes);
  ScalarPiece right = scalar_single(c, s, tm, t1, left.y_end, form, cfg.nodes);
  cplx fine = left.val + right.val;
  double scale = 1.0 + std::abs(fine);
  if (whole.ok && left.ok && right.ok && std::abs(whole.val - fine) <= cfg.eps * scale) {
    y = right.y_end;
    return fine;
  }
  if (depth >= cfg.max_depth) {
    if (!(whole.ok && left.ok && right.ok))
      throw ContinuationAmbiguous("sheet tracking ambiguous after max subdivision");
    throw NoConvergence("line integral did not converge, last error " +
                        std::to_string(std::abs(whole.val - fine)));
  }
  cplx a = scalar_adaptive(c, s, t0, tm, y, form, cfg, depth + 1);
  cplx b = scalar_adaptive(c, s, tm, t1, y, form, cfg, depth + 1);
  return a + b;
}

}  // namespace

ContinuationTrace continue_y(const CurveSpec& c, const SurfacePath& path, const QuadratureConfig& cfg) {
  ContinuationTrace tr;
  cplx y = path.y_start;
  if (path.xpath.segs.empty()) {
    tr.y_end = y;
    return tr;
  }
  const int nsegs = static_cast<int>(path.xpath.segs.size());
  for (int si = 0; si < nsegs; ++si) {
    const Segment& s = path.xpath.segs[si];
    auto breaks = initial_breaks(c, s);
    for (size_t bi = 0; bi + 1 < breaks.size(); ++bi) {
      double t0 = breaks[bi], t1 = breaks[bi + 1];
      // split until every continuation step is unambiguous
      std::vector<std::pair<double, double>> stack{{t0, t1}};
      int guard = 0;
      while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        NodeWalk w = walk_piece(c, s, a, b, y, cfg.nodes);
        if (!w.ok) {
          if (++guard > (1 << cfg.max_depth))
            throw ContinuationAmbiguous("continue_y: ambiguous sheet after max refinement");
          double m = 0.5 * (a + b);
          stack.push_back({m, b});
          stack.push_back({a, m});
          continue;
        }
        for (int i = 0; i < cfg.nodes; ++i) {
          double local = a + (0.5 + 0.5 * gl_rule(cfg.nodes).nodes[i]) * (b - a);
          tr.samples.push_back({(si + local) / nsegs, w.x[i], w.y[i]});
        }
        y = w.y_end;
      }
    }
  }
  tr.y_end = y;
  return tr;
}

Form omega_form(const CurveSpec& c, int k) {
  if (k < 1 || k > c.genus) throw InputError("omega_form: index out of range");
  Form f;
  f.r = [k](cplx x, cplx y) {
    cplx xp = 1.0;
    for (int j = 1; j < k; ++j) xp *= x;
    return xp / y;
  };
  return f;
}

Form third_kind_form(const CurveSpec& c, const SurfacePoint& q, const SurfacePoint& qprime) {
  if (q.at_infinity || qprime.at_infinity)
    throw InputError("third_kind_form: endpoints must be finite");
  if (is_branch_x(c, q.x) || is_branch_x(c, qprime.x))
    throw InputError("third_kind_form: endpoints must not be branch points");
  if (same_point(q, qprime, c.clearance)) throw InputError("third_kind_form: endpoints coincide");
  const cplx xq = q.x, yq = q.y, xp = qprime.x, yp = qprime.y;
  const cplx pref = 1.0 / (cplx(0.0, 4.0 * kPi));
  Form f;
  f.r = [=](cplx x, cplx y) { return pref / y * ((y + yq) / (x - xq) - (y + yp) / (x - xp)); };
  f.x_poles.push_back(xq);
  if (std::abs(xp - xq) > 0) f.x_poles.push_back(xp);
  return f;
}

cplx line_integral(const CurveSpec& c, const Form& form, const SurfacePath& path,
                   const QuadratureConfig& cfg) {
  // poles must stay off the path; arcs that deliberately encircle a pole are
  // exempt from the clearance test
  for (const auto& pole : form.x_poles) {
    for (const auto& s : path.xpath.segs) {
      if (s.encircling && std::abs(s.center - pole) < 0.5 * s.radius) continue;
      XPath one;
      one.segs.push_back(s);
      double d = path_distance(one, pole);
      double floor_d = s.encircling ? 0.5 * s.radius : c.clearance;
      if (d < floor_d) throw PoleOnPath("line_integral: pole within clearance of the path");
    }
  }

  cplx y = path.y_start;
  cplx acc = 0;
  for (const auto& s : path.xpath.segs) {
    auto breaks = initial_breaks(c, s);
    for (size_t bi = 0; bi + 1 < breaks.size(); ++bi)
      acc += scalar_adaptive(c, s, breaks[bi], breaks[bi + 1], y, form, cfg, 0);
  }
  return acc;
}

namespace {

// chart at infinity: x = 1/t^2, y = s/t^{2g+1}, s^2 = Ft(t) with
// Ft(t) = t^{4g+2} f(1/t^2) expanded in coefficients (even powers only)
std::vector<cplx> infinity_poly(const CurveSpec& c) {
  const int g = c.genus;
  std::vector<cplx> F(4 * g + 3, cplx(0));
  for (int j = 0; j <= c.degree; ++j) F[4 * g + 2 - 2 * j] = c.coeffs[j];
  return F;
}

cplx eval_poly(const std::vector<cplx>& p, cplx t) {
  cplx v = 0;
  for (size_t j = p.size(); j-- > 0;) v = v * t + p[j];
  return v;
}

}  // namespace

Vec integral_to_infinity_basis(const CurveSpec& c, const SurfacePoint& from,
                               const QuadratureConfig& cfg) {
  if (!c.odd_degree)
    throw FormSingularAtInfinity("integral_to_infinity: odd-degree model required");
  if (from.at_infinity) return Vec::Zero(c.genus);
  const int g = c.genus;

  double rb = 0;
  for (const auto& b : c.branch_x) rb = std::max(rb, std::abs(b));
  double Rfar = 8.0 * (rb + 1.0) + 2.0 * std::abs(from.x);
  cplx xfar = (std::abs(from.x) > 1e-12) ? Rfar * from.x / std::abs(from.x) : cplx(Rfar, 0);

  // leg 1: from.x to xfar in the x-plane
  XPath leg = route_avoiding_branches(c, from.x, xfar);
  Vec acc = Vec::Zero(g);
  cplx y = from.y;
  for (int k = 1; k <= g; ++k) {
    cplx yk = from.y;
    Form fk = omega_form(c, k);
    cplx v = 0;
    for (const auto& s : leg.segs) {
      auto breaks = initial_breaks(c, s);
      for (size_t bi = 0; bi + 1 < breaks.size(); ++bi)
        v += scalar_adaptive(c, s, breaks[bi], breaks[bi + 1], yk, fk, cfg, 0);
    }
    acc[k - 1] = v;
    y = yk;  // same continuation for every k; keep the last
  }

  // leg 2: the chart integral from t0 = 1/sqrt(xfar) to 0.
  // pullback of x^{k-1} dx / y is -2 t^{2g-2k} dt / s.
  auto F = infinity_poly(c);
  cplx t0 = 1.0 / std::sqrt(xfar);
  cplx s0 = y;
  for (int j = 0; j < 2 * g + 1; ++j) s0 *= t0;
  {
    cplx Ft0 = eval_poly(F, t0);
    if (std::abs(s0 * s0 - Ft0) > 1e-6 * (1.0 + std::abs(Ft0)))
      throw Error("integral_to_infinity: chart transition inconsistent");
    // snap to the exact square root to stop error accumulation
    bool ok = true;
    s0 = sqrt_continue(Ft0, s0, ok);
  }

  // straight t-line t0 -> 0 carries no branch points of Ft (they satisfy
  // |1/t^2| <= max |branch|), integrate adaptively with s tracked
  const GLRule& gl = gl_rule(cfg.nodes);
  auto chart_single = [&](double a, double b, cplx s_in, Vec& out, cplx& s_out, bool& ok) {
    out = Vec::Zero(g);
    ok = true;
    cplx scur = s_in;
    for (int i = 0; i < cfg.nodes; ++i) {
      double u = 0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[i];
      cplx t = t0 * (1.0 - u);  // u in [0,1], t from t0 to 0
      cplx dt = -t0 * 0.5 * (b - a);
      bool stepok = true;
      scur = sqrt_continue(eval_poly(F, t), scur, stepok);
      ok = ok && stepok;
      cplx tp = 1.0;
      for (int k = g; k >= 1; --k) {
        // exponent 2g-2k, accumulate from k=g (exponent 0) downwards
        out[k - 1] += gl.weights[i] * (-2.0) * tp / scur * dt;
        tp *= t * t;
      }
    }
    bool endok = true;
    s_out = sqrt_continue(eval_poly(F, t0 * (1.0 - b)), scur, endok);
    ok = ok && endok;
  };
  std::function<Vec(double, double, cplx&, int)> chart_adaptive = [&](double a, double b, cplx& s,
                                                                      int depth) -> Vec {
    Vec whole, left, right;
    cplx sw, sl, sr;
    bool okw, okl, okr;
    chart_single(a, b, s, whole, sw, okw);
    double m = 0.5 * (a + b);
    chart_single(a, m, s, left, sl, okl);
    chart_single(m, b, sl, right, sr, okr);
    Vec fine = left + right;
    double scale = 1.0 + fine.cwiseAbs().maxCoeff();
    if (okw && okl && okr && (whole - fine).cwiseAbs().maxCoeff() <= cfg.eps * scale) {
      s = sr;
      return fine;
    }
    if (depth >= cfg.max_depth) throw NoConvergence("integral_to_infinity: chart integral did not converge");
    Vec va = chart_adaptive(a, m, s, depth + 1);
    Vec vb = chart_adaptive(m, b, s, depth + 1);
    return va + vb;
  };

  cplx s = s0;
  acc += chart_adaptive(0.0, 1.0, s, 0);
  return acc;
}

cplx integral_to_infinity(const CurveSpec& c, int k, const SurfacePoint& from,
                          const QuadratureConfig& cfg) {
  if (k < 1 || k > c.genus)
    throw FormSingularAtInfinity("integral_to_infinity: form not regular at infinity");
  return integral_to_infinity_basis(c, from, cfg)[k - 1];
}

Vec integral_to_branch_basis(const CurveSpec& c, const SurfacePoint& from, cplx bx,
                             const QuadratureConfig& cfg) {
  if (from.at_infinity) throw InputError("integral_to_branch: start point must be finite");
  if (is_branch_x(c, from.x)) throw InputError("integral_to_branch: start point is a branch point");
  const int g = c.genus;

  // snap to the stored root and measure the room around it
  int bi = -1;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < (int)c.branch_x.size(); ++i) {
    double d = std::abs(bx - c.branch_x[i]);
    if (d < best) {
      best = d;
      bi = i;
    }
  }
  if (best > c.clearance) throw InputError("integral_to_branch: target is not a branch point");
  bx = c.branch_x[bi];
  double gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < (int)c.branch_x.size(); ++i)
    if (i != bi) gap = std::min(gap, std::abs(c.branch_x[i] - bx));
  double r = 0.4 * std::min(gap, std::abs(from.x - bx));
  cplx dir = (from.x - bx) / std::abs(from.x - bx);
  cplx xn = bx + r * dir;

  // leg 1: regular route to the staging point xn
  XPath leg = route_avoiding_branches(c, from.x, xn);
  Vec acc = Vec::Zero(g);
  cplx yn = from.y;
  for (int k = 1; k <= g; ++k) {
    cplx yk = from.y;
    Form fk = omega_form(c, k);
    cplx v = 0;
    for (const auto& s : leg.segs) {
      auto breaks = initial_breaks(c, s);
      for (size_t bj = 0; bj + 1 < breaks.size(); ++bj)
        v += scalar_adaptive(c, s, breaks[bj], breaks[bj + 1], yk, fk, cfg, 0);
    }
    acc[k - 1] = v;
    yn = yk;
  }

  // leg 2: x = bx + sigma^2 (xn - bx), sigma from 1 to 0.  With f = (x - bx) h
  // and y = sigma u, u^2 = (xn - bx) h(x) stays away from zero on the whole
  // leg, and x^{k-1} dx / y = 2 (xn - bx) x^{k-1} / u dsigma is analytic
  // through the endpoint.
  std::vector<cplx> h(c.coeffs.size() - 1);
  {
    cplx carry = c.coeffs.back();
    for (size_t j = c.coeffs.size() - 1; j-- > 0;) {
      h[j] = carry;
      carry = c.coeffs[j] + bx * carry;
    }
  }
  cplx u0 = yn;
  {
    cplx target = (xn - bx) * eval_poly(h, xn);
    if (std::abs(u0 * u0 - target) > 1e-6 * (1.0 + std::abs(target)))
      throw Error("integral_to_branch: substitution transition inconsistent");
    bool ok = true;
    u0 = sqrt_continue(target, u0, ok);
  }

  const GLRule& gl = gl_rule(cfg.nodes);
  auto leg_single = [&](double a, double b, cplx u_in, Vec& out, cplx& u_out, bool& ok) {
    out = Vec::Zero(g);
    ok = true;
    cplx ucur = u_in;
    for (int i = 0; i < cfg.nodes; ++i) {
      double t = 0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[i];
      cplx sig = 1.0 - t;  // t in [0,1], sigma from 1 to 0
      cplx x = bx + sig * sig * (xn - bx);
      bool stepok = true;
      ucur = sqrt_continue((xn - bx) * eval_poly(h, x), ucur, stepok);
      ok = ok && stepok;
      cplx xp = 1.0;
      cplx common = gl.weights[i] * 2.0 * (xn - bx) / ucur * (-0.5 * (b - a));
      for (int k = 1; k <= g; ++k) {
        out[k - 1] += common * xp;
        xp *= x;
      }
    }
    cplx sigb = 1.0 - b;
    cplx xb = bx + sigb * sigb * (xn - bx);
    bool endok = true;
    u_out = sqrt_continue((xn - bx) * eval_poly(h, xb), ucur, endok);
    ok = ok && endok;
  };
  std::function<Vec(double, double, cplx&, int)> leg_adaptive = [&](double a, double b, cplx& u,
                                                                    int depth) -> Vec {
    Vec whole, left, right;
    cplx uw, ul, ur;
    bool okw, okl, okr;
    leg_single(a, b, u, whole, uw, okw);
    double m = 0.5 * (a + b);
    leg_single(a, m, u, left, ul, okl);
    leg_single(m, b, ul, right, ur, okr);
    Vec fine = left + right;
    double scale = 1.0 + fine.cwiseAbs().maxCoeff();
    if (okw && okl && okr && (whole - fine).cwiseAbs().maxCoeff() <= cfg.eps * scale) {
      u = ur;
      return fine;
    }
    if (depth >= cfg.max_depth)
      throw NoConvergence("integral_to_branch: substituted integral did not converge");
    Vec va = leg_adaptive(a, m, u, depth + 1);
    Vec vb = leg_adaptive(m, b, u, depth + 1);
    return va + vb;
  };

  cplx u = u0;
  acc += leg_adaptive(0.0, 1.0, u, 0);
  return acc;
}

}  // namespace hyperell
