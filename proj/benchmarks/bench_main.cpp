#include <benchmark/benchmark.h>

#include "fbms/closed_form.hpp"
#include "fbms/heat.hpp"
#include "fbms/spectral.hpp"

using namespace fbms;

namespace {

ImmersedSurface catenoid(int res) {
  return ImmersedSurface(builtin_surface(BuiltinKind::critical_catenoid, res), AmbientSpace::unit_ball());
}

void BM_AssembleAreaForm(benchmark::State& state) {
  const auto im = catenoid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_area_form(im));
  state.counters["vertices"] = im.surface().num_vertices();
}
BENCHMARK(BM_AssembleAreaForm)->Arg(16)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_AssembleEnergyForm(benchmark::State& state) {
  const auto im = catenoid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_energy_form(im));
  state.counters["dofs"] = 3 * im.surface().num_vertices();
}
BENCHMARK(BM_AssembleEnergyForm)->Arg(16)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_LanczosAreaSpectrum(benchmark::State& state) {
  const auto form = assemble_area_form(catenoid(static_cast<int>(state.range(0))));
  SolveOptions o;
  o.k = 10;
  o.force_lanczos = true;
  for (auto _ : state) benchmark::DoNotOptimize(solve_spectrum(form, o));
  state.counters["dim"] = form.reduced_dim();
}
BENCHMARK(BM_LanczosAreaSpectrum)->Arg(24)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_DenseAreaSpectrum(benchmark::State& state) {
  const auto form = assemble_area_form(catenoid(static_cast<int>(state.range(0))));
  SolveOptions o;
  o.k = 10;
  for (auto _ : state) benchmark::DoNotOptimize(solve_spectrum(form, o));
  state.counters["dim"] = form.reduced_dim();
}
BENCHMARK(BM_DenseAreaSpectrum)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

// One grid time: two dense matrix exponentials (scalar and bundle generators).
void BM_KernelDominationOneTime(benchmark::State& state) {
  const ImmersedSurface im(builtin_surface(BuiltinKind::flat_disk, static_cast<int>(state.range(0))),
                           AmbientSpace::unit_ball());
  for (auto _ : state) benchmark::DoNotOptimize(kernel_domination_check(im, {0.5}));
  state.counters["bundle_dofs"] = 3 * im.surface().num_vertices();
}
BENCHMARK(BM_KernelDominationOneTime)->Arg(4)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_GoldenSection(benchmark::State& state) {
  ClosedFormInput in;
  in.area = 3.14159;
  in.rho = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(index_bound_closed_form(in));
}
BENCHMARK(BM_GoldenSection);

}  // namespace

BENCHMARK_MAIN();
