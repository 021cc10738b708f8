#include <benchmark/benchmark.h>

#include <complex>

#include "hyperell/abelian.hpp"
#include "hyperell/chen.hpp"
#include "hyperell/curve.hpp"
#include "hyperell/path.hpp"
#include "hyperell/quadrature.hpp"
#include "hyperell/theta.hpp"
#include "hyperell/topology.hpp"

using namespace hyperell;

namespace {

CurveSpec genus2() { return make_curve({0, -1, 0, 0, 0, 1}); }

SurfacePath sample_path(const CurveSpec& c) {
  XPath xp;
  xp.append(line_segment(cplx(-3, 0.5), cplx(-2, 2)));
  xp.append(line_segment(cplx(-2, 2), cplx(2, 2.5)));
  xp.append(arc_segment(cplx(2, 1.5), 1.0, kPi / 2, -kPi / 4));
  return {xp, std::sqrt(c.f(cplx(-3, 0.5)))};
}

}  // namespace

static void BM_Continuation(benchmark::State& state) {
  CurveSpec c = genus2();
  SurfacePath p = sample_path(c);
  for (auto _ : state) {
    ContinuationTrace tr = continue_y(c, p, {});
    benchmark::DoNotOptimize(tr.y_end);
  }
}
BENCHMARK(BM_Continuation);

static void BM_LineIntegral(benchmark::State& state) {
  CurveSpec c = genus2();
  SurfacePath p = sample_path(c);
  Form w1 = omega_form(c, 1);
  for (auto _ : state) {
    cplx v = line_integral(c, w1, p, {});
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_LineIntegral);

static void BM_PathSignature(benchmark::State& state) {
  CurveSpec c = genus2();
  SurfacePath p = sample_path(c);
  for (auto _ : state) {
    PathSig s = signature_of_path(c, p, {});
    benchmark::DoNotOptimize(s.sig.L1);
  }
}
BENCHMARK(BM_PathSignature);

static void BM_PeriodMatrix(benchmark::State& state) {
  CurveSpec c = genus2();
  SurfacePoint p = pick_generic_point(c, 0);
  for (auto _ : state) {
    LoopSystem ls = build_homology_basis(c, p, std::nullopt, {});
    PeriodData pd = compute_periods(c, ls, {});
    benchmark::DoNotOptimize(pd.Z);
  }
}
BENCHMARK(BM_PeriodMatrix);

// theta evaluation cost grows with the truncation radius; sweep it
static void BM_Theta(benchmark::State& state) {
  CurveSpec c = genus2();
  SurfacePoint p = pick_generic_point(c, 0);
  LoopSystem ls = build_homology_basis(c, p, std::nullopt, {});
  PeriodData pd = compute_periods(c, ls, {});
  Vec z(2);
  z << cplx(0.31, 0.17), cplx(-0.22, 0.08);
  const int radius = (int)state.range(0);
  for (auto _ : state) {
    cplx v = theta(z, pd.Z, radius);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_Theta)->Arg(3)->Arg(5)->Arg(8);

BENCHMARK_MAIN();
