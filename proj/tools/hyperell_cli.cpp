// hyperell: periods, Abel-Jacobi maps, Riemann theta and extension-class
// verification for odd-degree hyperelliptic curves y^2 = f(x).
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hyperell/abelian.hpp"
#include "hyperell/curve.hpp"
#include "hyperell/errors.hpp"
#include "hyperell/extension.hpp"
#include "hyperell/io_json.hpp"
#include "hyperell/quadrature.hpp"
#include "hyperell/theta.hpp"
#include "hyperell/topology.hpp"

using namespace hyperell;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Opts {
  std::string curve_file;
  std::string p_str, q_str;
  double tol = 0.0;  // 0: per-check defaults
  int nodes = 32;
  int max_depth = 12;
  double eps = 1e-10;
  std::uint64_t seed = 20260823;
  std::string out;
  bool json = false;
  bool timings = false;
  std::string which = "all";
};

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double lap() {
    auto t1 = std::chrono::steady_clock::now();
    double s = std::chrono::duration<double>(t1 - t0).count();
    t0 = t1;
    return s;
  }
};

struct ReportBuilder {
  JValue root = JValue::object();
  JValue checks = JValue::array();
  JValue phases = JValue::array();
  bool all_pass = true;

  ReportBuilder(const Opts& o, const CurveSpec& c) {
    root.set("version", JValue::string(kVersion));
    root.set("seed", JValue::number(double(o.seed)));
    JValue f = JValue::array();
    for (const auto& co : c.coeffs) f.push(jcplx(co));
    root.set("f", std::move(f));
    root.set("genus", JValue::number(double(c.genus)));
  }

  void add_check(const std::string& name, bool pass, double residual,
                 std::vector<std::pair<std::string, JValue>> extra = {}) {
    JValue frag = JValue::object();
    frag.set("name", JValue::string(name));
    frag.set("pass", JValue::boolean(pass));
    frag.set("residual", JValue::number(residual));
    for (auto& [k, v] : extra) frag.set(k, std::move(v));
    checks.push(std::move(frag));
    all_pass = all_pass && pass;
  }

  void add_phase(const std::string& name, double seconds) {
    JValue ph = JValue::object();
    ph.set("name", JValue::string(name));
    ph.set("seconds", JValue::number(seconds));
    phases.push(std::move(ph));
  }

  std::string finish(const Opts& o) {
    root.set("checks", std::move(checks));
    root.set("pass", JValue::boolean(all_pass));
    if (o.timings) root.set("timings", std::move(phases));
    std::string s = to_json(root);
    s += '\n';
    return s;
  }
};

cplx parse_cplx_flag(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos) return {std::stod(s), 0.0};
  return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
}

SurfacePoint resolve_point(const CurveSpec& c, const std::string& flag,
                           const std::optional<PointInput>& file_pt, std::uint64_t salt,
                           const std::vector<SurfacePoint>& avoid) {
  if (!flag.empty()) {
    cplx x = parse_cplx_flag(flag);
    return point_on(c, x, std::sqrt(c.f(x)));
  }
  if (file_pt) {
    cplx y = file_pt->y ? *file_pt->y : std::sqrt(c.f(file_pt->x));
    return point_on(c, file_pt->x, y);
  }
  return pick_generic_point(c, salt, avoid);
}

struct Workspace {
  CurveSpec c;
  QuadratureConfig cfg;
  SurfacePoint p;
  std::optional<SurfacePoint> q;
  LoopSystem ls;
  PeriodData pd;
  IterMatrices im;
};

Workspace build_workspace(const Opts& o, bool need_q, ReportBuilder** rb_out, Timer& timer,
                          std::vector<std::unique_ptr<ReportBuilder>>& holder) {
  if (o.curve_file.empty()) throw InputError("--curve is required");
  CurveInput in = load_curve_file(o.curve_file);
  Workspace w{make_curve(in.coeffs),
              QuadratureConfig{o.nodes, o.max_depth, o.eps},
              {},
              std::nullopt,
              {},
              {},
              {}};
  holder.push_back(std::make_unique<ReportBuilder>(o, w.c));
  *rb_out = holder.back().get();
  w.p = resolve_point(w.c, o.p_str, in.p, o.seed, {});
  if (need_q || !o.q_str.empty() || in.q) {
    w.q = resolve_point(w.c, o.q_str, in.q, o.seed + 1, {w.p});
  }
  (*rb_out)->add_phase("input", timer.lap());
  w.ls = build_homology_basis(w.c, w.p, w.q, w.cfg);
  (*rb_out)->add_phase("homology_basis", timer.lap());
  w.pd = compute_periods(w.c, w.ls, w.cfg);
  w.im = compute_iter_matrices(w.c, w.ls, w.pd, w.cfg);
  (*rb_out)->add_phase("periods", timer.lap());
  return w;
}

double max_abs(const Mat& M) { return M.cwiseAbs().maxCoeff(); }

void periods_fragments(const Workspace& w, ReportBuilder& rb) {
  rb.root.set("Z", jmat(w.pd.Z));
  rb.root.set("A", jmat(w.pd.A));
  rb.root.set("cond_omega1", JValue::number(w.pd.cond_omega1));
  double sym = max_abs(w.pd.Z - w.pd.Z.transpose());
  rb.add_check("Z_symmetric", sym < 1e-8 * max_abs(w.pd.Z), sym);
  Eigen::SelfAdjointEigenSolver<RMat> es(w.pd.Z.imag());
  double lmin = es.eigenvalues().minCoeff();
  rb.add_check("ImZ_positive_definite", lmin > 0.0, lmin);
  double askew = max_abs(w.pd.A.transpose() + w.pd.A.conjugate());
  rb.add_check("A_antihermitian", askew < 1e-10 * max_abs(w.pd.A), askew);
  Mat NP = w.pd.N * w.pd.P;
  double worst = 0.0;
  for (int i = 0; i < w.c.genus; ++i)
    for (int j = 0; j < w.c.genus; ++j)
      worst = std::max(worst,
                       std::abs(pi_pairing(NP.row(i).transpose(), NP.row(j).transpose())));
  rb.add_check("holomorphic_pairing_zero", worst < 1e-8, worst);
}

void kappa_fragments(const Workspace& w, const Opts& o, ReportBuilder& rb) {
  Vec kap = riemann_constant(w.pd, w.im);
  rb.root.set("kappa", jvec(kap));
  double tol_can = o.tol > 0 ? o.tol : 1e-6;
  CanonicalCheck can = verify_kappa_canonical(w.c, w.pd, w.ls, w.im, w.cfg, tol_can);
  rb.add_check("kappa_canonical", can.pass, can.residual);

  std::vector<SurfacePoint> pts;
  std::vector<SurfacePoint> avoid = {w.p};
  for (int j = 0; j < w.c.genus - 1; ++j) {
    pts.push_back(pick_generic_point(w.c, o.seed + 17 + j, avoid));
    avoid.push_back(pts.back());
  }
  VanishingCheck van = verify_riemann_vanishing(w.c, w.pd, w.ls, w.im, pts, w.cfg,
                                                o.tol > 0 ? o.tol : 1e-5, o.seed);
  rb.add_check("theta_vanishing", van.pass, van.ratio,
               {{"theta_value", JValue::number(van.value)},
                {"theta_scale", JValue::number(van.scale)}});
}

void extension_fragments(Workspace& w, const Opts& o, ReportBuilder& rb) {
  if (!w.q) throw InputError("extension requires a second point q (--q or curve file)");
  Divisor d;
  d.add(*w.q, 1);
  d.add(w.p, -1);
  Vec u_qp = abel_jacobi(w.c, w.pd, w.ls, d, w.cfg).v;
  ExtensionClass ec = extension_class(w.pd, w.im, u_qp);
  rb.root.set("u_qp", jvec(u_qp));
  rb.root.set("v_pp", jvec(ec.v_pp));
  rb.root.set("v_pq", jvec(ec.v_pq));
  double ident = (ec.v_pq - ec.v_pp - 2.0 * double(w.c.genus) * u_qp).cwiseAbs().maxCoeff();
  rb.add_check("extension_identity", ident < 1e-12, ident);
  (void)o;
}

void verify_fragments(Workspace& w, const Opts& o, ReportBuilder& rb, Timer& timer) {
  const std::string& which = o.which;
  auto want = [&](const char* name) { return which == "all" || which == name; };

  if (want("period-relation")) {
    PeriodRelationReport rep =
        verify_higher_period_relation(w.pd, w.im, o.tol > 0 ? o.tol : 1e-6);
    JValue lat = JValue::array();
    for (int i = 0; i < (int)rep.lattice.size(); ++i)
      lat.push(JValue::number(double(rep.lattice(i))));
    rb.add_check("higher_period_relation", rep.pass, rep.residual,
                 {{"lattice_coords", std::move(lat)}});
    rb.add_phase("period_relation", timer.lap());
  }
  if (want("group-ring")) {
    if (!w.q) throw InputError("group-ring check requires a second point q");
    GroupRingReport rep = verify_group_ring_relation(w.c, w.ls, w.pd, w.cfg,
                                                     o.tol > 0 ? o.tol : 1e-7);
    rb.add_check("group_ring_relation", rep.pass, rep.max_err,
                 {{"shrink_err", JValue::number(rep.shrink_err)},
                  {"functionals", JValue::number(double(rep.functionals))}});
    rb.add_phase("group_ring", timer.lap());
  }
  if (want("theta")) {
    kappa_fragments(w, o, rb);
    rb.add_phase("theta", timer.lap());
  }
  if (want("main")) {
    if (!w.q) throw InputError("main-theorem check requires a second point q");
    MainTheoremReport rep =
        verify_main_theorem(w.c, w.pd, w.ls, w.im, *w.q, w.cfg, o.tol > 0 ? o.tol : 1e-6);
    double worst = std::max({rep.res_ab, rep.res_bc, rep.res_ac});
    rb.add_check("main_theorem", rep.pass, worst,
                 {{"res_ab", JValue::number(rep.res_ab)},
                  {"res_bc", JValue::number(rep.res_bc)},
                  {"res_ac", JValue::number(rep.res_ac)},
                  {"v_pq", jvec(rep.va)}});
    rb.add_phase("main_theorem", timer.lap());
  }
  if (want("reciprocity")) {
    SurfacePoint q2 = w.q ? *w.q : pick_generic_point(w.c, o.seed + 1, {w.p});
    SurfacePoint q3 = pick_generic_point(w.c, o.seed + 2, {w.p, q2});
    ReciprocityReport rep = verify_third_kind_reciprocity(w.c, w.pd, w.ls, q2, q3, w.cfg,
                                                          o.tol > 0 ? o.tol : 1e-6);
    rb.add_check("third_kind_reciprocity", rep.pass, rep.residual,
                 {{"residue_err", JValue::number(rep.residue_err)}});
    rb.add_phase("reciprocity", timer.lap());
  }
}

void write_output(const std::string& text, const Opts& o, bool pass) {
  if (!o.out.empty()) {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw InputError("cannot write output file: " + o.out);
    f << text;
  }
  if (o.json || o.out.empty()) std::cout << text;
  if (!o.json) std::cerr << (pass ? "PASS" : "FAIL") << "\n";
}

int dispatch(const std::string& cmd, const Opts& o) {
  Timer timer;
  std::vector<std::unique_ptr<ReportBuilder>> holder;
  ReportBuilder* rb = nullptr;
  bool need_q = (cmd == "extension") ||
                (cmd == "verify" && (o.which == "all" || o.which == "group-ring" ||
                                     o.which == "main")) ||
                cmd == "report";
  Workspace w = build_workspace(o, need_q, &rb, timer, holder);

  if (cmd == "periods") {
    periods_fragments(w, *rb);
  } else if (cmd == "kappa") {
    kappa_fragments(w, o, *rb);
  } else if (cmd == "extension") {
    periods_fragments(w, *rb);
    extension_fragments(w, o, *rb);
  } else if (cmd == "verify") {
    verify_fragments(w, o, *rb, timer);
  } else if (cmd == "report") {
    periods_fragments(w, *rb);
    extension_fragments(w, o, *rb);
    verify_fragments(w, o, *rb, timer);
  }
  rb->add_phase("total", timer.lap());
  bool pass = rb->all_pass;
  write_output(rb->finish(o), o, pass);
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"periods, theta functions and extension classes of odd-degree hyperelliptic curves"};
  app.set_version_flag("--version", kVersion);
  Opts o;
  app.add_option("--curve", o.curve_file, "curve description JSON file");
  app.add_option("--p", o.p_str, "basepoint x as re,im (sheet: principal sqrt)");
  app.add_option("--q", o.q_str, "second point x as re,im");
  app.add_option("--tol", o.tol, "override the per-check pass tolerance");
  app.add_option("--nodes", o.nodes, "Gauss-Legendre nodes per panel");
  app.add_option("--max-depth", o.max_depth, "adaptive bisection depth limit");
  app.add_option("--eps", o.eps, "adaptive quadrature tolerance");
  app.add_option("--seed", o.seed, "seed for random-trial checks");
  app.add_option("--out", o.out, "write the JSON report to this file");
  app.add_flag("--json", o.json, "print the JSON report to stdout");
  app.add_flag("--timings", o.timings, "include wall-clock timings in the report");

  app.require_subcommand(1);
  app.fallthrough();  // let global flags appear after the subcommand name
  auto* sub_periods = app.add_subcommand("periods", "period matrix and invariants");
  auto* sub_kappa = app.add_subcommand("kappa", "Riemann constant and theta checks");
  auto* sub_ext = app.add_subcommand("extension", "extension class v_pp, v_pq");
  auto* sub_verify = app.add_subcommand("verify", "run verification checks");
  sub_verify->add_option("--which", o.which,
                         "all|main|period-relation|group-ring|theta|reciprocity");
  auto* sub_report = app.add_subcommand("report", "full report: periods + extension + verify");

  CLI11_PARSE(app, argc, argv);

  std::string cmd;
  if (sub_periods->parsed()) cmd = "periods";
  if (sub_kappa->parsed()) cmd = "kappa";
  if (sub_ext->parsed()) cmd = "extension";
  if (sub_verify->parsed()) cmd = "verify";
  if (sub_report->parsed()) cmd = "report";

  try {
    return dispatch(cmd, o);
  } catch (const NotSquarefree& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const DegreeTooSmall& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const EvenDegreeUnsupported& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const RadiusTooLarge& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const LengthMismatch& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
