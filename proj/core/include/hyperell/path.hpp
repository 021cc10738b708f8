#pragma once

#include <vector>

#include "hyperell/curve.hpp"
#include "hyperell/types.hpp"

namespace hyperell {

// one x-plane piece, parametrized over t in [0,1]
struct Segment {
  enum Kind { Line, Arc } kind = Line;
  // Line: a -> b.  Arc: center + radius*exp(i*th), th from th0 to th1
  // (th1 < th0 traverses clockwise); endpoints derived.
  cplx a{}, b{};
  cplx center{};
  double radius = 0, th0 = 0, th1 = 0;
  // marks arcs that intentionally encircle a branch point or pole closely,
  // exempting them from the global clearance test
  bool encircling = false;

  cplx at(double t) const;
  cplx deriv(double t) const;  // dx/dt
  cplx start() const { return at(0.0); }
  cplx end() const { return at(1.0); }
  double approx_length() const;
  Segment reversed() const;
};

Segment line_segment(cplx a, cplx b);
Segment arc_segment(cplx center, double radius, double th0, double th1, bool encircling = false);

struct XPath {
  std::vector<Segment> segs;
  cplx start() const;
  cplx end() const;
  double approx_length() const;
  void append(const Segment& s);       // checks endpoint continuity
  void append(const XPath& p);
  XPath reversed() const;
};

struct SurfacePath {
  XPath xpath;
  cplx y_start{};
};

// straight route from `from` to `to`, deformed sideways around any branch
// point that comes within the corridor; deterministic
XPath route_avoiding_branches(const CurveSpec& c, cplx from, cplx to);

// minimal distance from the path to a given x (sampled; fine enough for
// clearance checks against points kept away by construction)
double path_distance(const XPath& p, cplx x);

// dense polyline with parameter positions, used for intersections
std::vector<cplx> polyline(const XPath& p, int per_arc = 96);

}  // namespace hyperell
