#include "hyperell/io_json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hyperell/errors.hpp"

namespace hyperell {

JValue JValue::boolean(bool v) {
  JValue j;
  j.kind = Bool;
  j.b = v;
  return j;
}
JValue JValue::number(double v) {
  JValue j;
  j.kind = Num;
  j.num = v;
  return j;
}
JValue JValue::string(std::string v) {
  JValue j;
  j.kind = Str;
  j.str = std::move(v);
  return j;
}
JValue JValue::array() {
  JValue j;
  j.kind = Arr;
  return j;
}
JValue JValue::object() {
  JValue j;
  j.kind = Obj;
  return j;
}
JValue& JValue::set(const std::string& key, JValue v) {
  obj.emplace_back(key, std::move(v));
  return obj.back().second;
}
void JValue::push(JValue v) { arr.push_back(std::move(v)); }

namespace {

void escape_to(std::string& out, const std::string& s) {
  out += '"';
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if ((unsigned char)ch < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  out += '"';
}

void emit(std::string& out, const JValue& v) {
  switch (v.kind) {
    case JValue::Null: out += "null"; break;
    case JValue::Bool: out += v.b ? "true" : "false"; break;
    case JValue::Num: {
      if (!std::isfinite(v.num)) throw InputError("to_json: non-finite number");
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v.num);
      out += buf;
      break;
    }
    case JValue::Str: escape_to(out, v.str); break;
    case JValue::Arr: {
      out += '[';
      for (size_t i = 0; i < v.arr.size(); ++i) {
        if (i) out += ',';
        emit(out, v.arr[i]);
      }
      out += ']';
      break;
    }
    case JValue::Obj: {
      out += '{';
      for (size_t i = 0; i < v.obj.size(); ++i) {
        if (i) out += ',';
        escape_to(out, v.obj[i].first);
        out += ':';
        emit(out, v.obj[i].second);
      }
      out += '}';
      break;
    }
  }
}

cplx cplx_from_string(const std::string& s) {
  const char* p = s.c_str();
  char* end = nullptr;
  double re = std::strtod(p, &end);
  if (end == p) throw InputError("could not parse number: " + s);
  while (*end == ' ') ++end;
  double im = 0.0;
  if (*end == ',') {
    const char* q = end + 1;
    im = std::strtod(q, &end);
    if (end == q) throw InputError("could not parse number: " + s);
  }
  while (*end == ' ') ++end;
  if (*end != '\0') throw InputError("trailing characters in number: " + s);
  return {re, im};
}

cplx cplx_from_json(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_string()) return cplx_from_string(j.get<std::string>());
  if (j.is_array() && j.size() == 2) {
    cplx re = cplx_from_json(j[0]);
    cplx im = cplx_from_json(j[1]);
    return {re.real(), im.real()};
  }
  throw InputError("expected a number, \"re,im\" string, or [re, im] pair");
}

PointInput point_from_json(const nlohmann::json& j) {
  PointInput pt;
  if (j.is_object()) {
    if (!j.contains("x")) throw InputError("point object needs an \"x\" entry");
    pt.x = cplx_from_json(j.at("x"));
    if (j.contains("y")) pt.y = cplx_from_json(j.at("y"));
  } else {
    pt.x = cplx_from_json(j);
  }
  return pt;
}

}  // namespace

std::string to_json(const JValue& v) {
  std::string out;
  emit(out, v);
  return out;
}

JValue jcplx(cplx z) {
  JValue a = JValue::array();
  a.push(JValue::number(z.real()));
  a.push(JValue::number(z.imag()));
  return a;
}

JValue jvec(const Vec& v) {
  JValue a = JValue::array();
  for (int i = 0; i < (int)v.size(); ++i) a.push(jcplx(v(i)));
  return a;
}

JValue jmat(const Mat& m) {
  JValue a = JValue::array();
  for (int i = 0; i < (int)m.rows(); ++i) {
    JValue row = JValue::array();
    for (int j = 0; j < (int)m.cols(); ++j) row.push(jcplx(m(i, j)));
    a.push(std::move(row));
  }
  return a;
}

CurveInput parse_curve_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw InputError(std::string("curve file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("f") || !j.at("f").is_array())
    throw InputError("curve file needs an \"f\" coefficient array");
  CurveInput in;
  for (const auto& el : j.at("f")) in.coeffs.push_back(cplx_from_json(el));
  if (j.contains("points")) {
    const auto& pts = j.at("points");
    if (!pts.is_object()) throw InputError("\"points\" must be an object");
    if (pts.contains("p")) in.p = point_from_json(pts.at("p"));
    if (pts.contains("q")) in.q = point_from_json(pts.at("q"));
  }
  return in;
}

CurveInput load_curve_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open curve file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_curve_json(ss.str());
}

std::string path_to_json(const SurfacePath& path) {
  JValue root = JValue::object();
  JValue segs = JValue::array();
  for (const auto& s : path.xpath.segs) {
    JValue seg = JValue::object();
    if (s.kind == Segment::Line) {
      seg.set("type", JValue::string("line"));
      seg.set("from", jcplx(s.a));
      seg.set("to", jcplx(s.b));
    } else {
      seg.set("type", JValue::string("arc"));
      seg.set("center", jcplx(s.center));
      seg.set("radius", JValue::number(s.radius));
      seg.set("angle0", JValue::number(s.th0));
      seg.set("angle1", JValue::number(s.th1));
    }
    segs.push(std::move(seg));
  }
  root.set("segments", std::move(segs));
  root.set("sheet_start", jcplx(path.y_start));
  return to_json(root);
}

}  // namespace hyperell
