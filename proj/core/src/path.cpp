#include "hyperell/path.hpp"

#include <cmath>

#include "hyperell/errors.hpp"

namespace hyperell {

cplx Segment::at(double t) const {
  if (kind == Line) return a + t * (b - a);
  return center + radius * std::exp(cplx(0, th0 + t * (th1 - th0)));
}

cplx Segment::deriv(double t) const {
  if (kind == Line) return b - a;
  return radius * (th1 - th0) * cplx(0, 1) * std::exp(cplx(0, th0 + t * (th1 - th0)));
}

double Segment::approx_length() const {
  if (kind == Line) return std::abs(b - a);
  return radius * std::abs(th1 - th0);
}

Segment Segment::reversed() const {
  Segment s = *this;
  if (kind == Line) {
    std::swap(s.a, s.b);
  } else {
    std::swap(s.th0, s.th1);
  }
  return s;
}

Segment line_segment(cplx a, cplx b) {
  Segment s;
  s.kind = Segment::Line;
  s.a = a;
  s.b = b;
  return s;
}

Segment arc_segment(cplx center, double radius, double th0, double th1, bool encircling) {
  Segment s;
  s.kind = Segment::Arc;
  s.center = center;
  s.radius = radius;
  s.th0 = th0;
  s.th1 = th1;
  s.encircling = encircling;
  return s;
}

cplx XPath::start() const {
  if (segs.empty()) throw InputError("XPath::start: empty path");
  return segs.front().start();
}

cplx XPath::end() const {
  if (segs.empty()) throw InputError("XPath::end: empty path");
  return segs.back().end();
}

double XPath::approx_length() const {
  double L = 0;
  for (const auto& s : segs) L += s.approx_length();
  return L;
}

void XPath::append(const Segment& s) {
  if (!segs.empty()) {
    double gap = std::abs(segs.back().end() - s.start());
    double scale = 1.0 + std::abs(s.start());
    if (gap > 1e-9 * scale) throw InputError("XPath::append: segment endpoints do not meet");
  }
  if (s.approx_length() > 0) segs.push_back(s);
}

void XPath::append(const XPath& p) {
  for (const auto& s : p.segs) append(s);
}

XPath XPath::reversed() const {
  XPath r;
  for (auto it = segs.rbegin(); it != segs.rend(); ++it) r.segs.push_back(it->reversed());
  return r;
}

namespace {

double seg_point_distance(cplx a, cplx b, cplx p) {
  cplx d = b - a;
  double L2 = std::norm(d);
  if (L2 == 0) return std::abs(p - a);
  double t = ((p - a) * std::conj(d)).real() / L2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

void route_rec(const CurveSpec& c, cplx from, cplx to, int depth, XPath& out) {
  if (depth > 24) throw DegenerateConfiguration("route_avoiding_branches: recursion limit");
  const double corridor = 3.0 * c.clearance;

  // pick the offending branch point nearest to the segment
  int best = -1;
  double best_d = corridor;
  for (size_t i = 0; i < c.branch_x.size(); ++i) {
    double d = seg_point_distance(from, to, c.branch_x[i]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  if (best < 0) {
    out.append(line_segment(from, to));
    return;
  }

  cplx b = c.branch_x[best];
  cplx dir = to - from;
  cplx n = cplx(0, 1) * dir / std::abs(dir);
  double rho = std::max(6.0 * c.clearance, 2.5 * best_d + 3.0 * c.clearance);

  // choose the detour side farther from the remaining branch points
  auto score = [&](cplx cand) {
    double s = std::numeric_limits<double>::infinity();
    for (const auto& w : c.branch_x) s = std::min(s, std::abs(cand - w));
    return s;
  };
  cplx d1 = b + rho * n, d2 = b - rho * n;
  cplx via = (score(d1) >= score(d2)) ? d1 : d2;

  route_rec(c, from, via, depth + 1, out);
  route_rec(c, via, to, depth + 1, out);
}

}  // namespace

XPath route_avoiding_branches(const CurveSpec& c, cplx from, cplx to) {
  XPath p;
  if (std::abs(from - to) == 0.0) {
    return p;  // empty path, caller treats as constant
  }
  route_rec(c, from, to, 0, p);
  return p;
}

double path_distance(const XPath& p, cplx x) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& s : p.segs) {
    int n = (s.kind == Segment::Line) ? 16 : 64;
    cplx prev = s.at(0.0);
    for (int i = 1; i <= n; ++i) {
      cplx cur = s.at(double(i) / n);
      d = std::min(d, seg_point_distance(prev, cur, x));
      prev = cur;
    }
  }
  return d;
}

std::vector<cplx> polyline(const XPath& p, int per_arc) {
  std::vector<cplx> pts;
  for (const auto& s : p.segs) {
    int n = (s.kind == Segment::Line) ? 1 : per_arc;
    if (pts.empty()) pts.push_back(s.start());
    for (int i = 1; i <= n; ++i) pts.push_back(s.at(double(i) / n));
  }
  return pts;
}

}  // namespace hyperell
