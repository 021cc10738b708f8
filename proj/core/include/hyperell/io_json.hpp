#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hyperell/curve.hpp"
#include "hyperell/path.hpp"

namespace hyperell {

// minimal ordered JSON value for deterministic report output: keys keep
// insertion order and every double prints as %.17g, so identical runs give
// identical bytes
struct JValue {
  enum Kind { Null, Bool, Num, Str, Arr, Obj };
  Kind kind = Null;
  bool b = false;
  double num = 0.0;
  std::string str;
  std::vector<JValue> arr;
  std::vector<std::pair<std::string, JValue>> obj;

  static JValue boolean(bool v);
  static JValue number(double v);
  static JValue string(std::string v);
  static JValue array();
  static JValue object();
  JValue& set(const std::string& key, JValue v);  // returns the inserted value
  void push(JValue v);
};

std::string to_json(const JValue& v);

JValue jcplx(cplx z);  // [re, im]
JValue jvec(const Vec& v);
JValue jmat(const Mat& m);

// input side: curve description files
struct PointInput {
  cplx x;
  std::optional<cplx> y;  // absent: principal square root sheet
};
struct CurveInput {
  std::vector<cplx> coeffs;  // ascending
  std::optional<PointInput> p, q;
};

// {"f": [...], "points": {"p": ..., "q": ...}}; coefficients and coordinates
// accept numbers, "re" / "re,im" strings, or [re, im] pairs
CurveInput parse_curve_json(const std::string& text);
CurveInput load_curve_file(const std::string& path);

// x-plane path export for external plotting
std::string path_to_json(const SurfacePath& path);

}  // namespace hyperell
