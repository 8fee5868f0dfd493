#include <benchmark/benchmark.h>

#include <surftrap/analysis.hpp>
#include <surftrap/fieldkernel.hpp>
#include <surftrap/geometry.hpp>
#include <surftrap/rfdynamics.hpp>

using namespace surftrap;

namespace {

const Rect kPatch{51.8e-6, 201.8e-6, -2500e-6, 2500e-6};
const Point3 kAt{100e-6, 10e-6, 30e-6};

void bm_patch_potential(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(patch_potential(kPatch, kAt));
}
BENCHMARK(bm_patch_potential);

void bm_patch_field(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(patch_field(kPatch, kAt));
}
BENCHMARK(bm_patch_field);

void bm_patch_jacobian(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(patch_field_jacobian(kPatch, kAt));
}
BENCHMARK(bm_patch_jacobian);

void bm_layout_field_reference(benchmark::State& state) {
  const TrapLayout layout = build_reference_layout();
  const Drive drive = build_reference_drive();
  for (auto _ : state)
    benchmark::DoNotOptimize(layout_field(layout, drive, kAt));
}
BENCHMARK(bm_layout_field_reference);

void bm_layout_field_with_aperture(benchmark::State& state) {
  TrapLayout layout = build_reference_layout();
  add_aperture(layout, Aperture::square(126.8e-6, 0.0, 30e-6));
  const Drive drive = build_reference_drive();
  for (auto _ : state)
    benchmark::DoNotOptimize(layout_field(layout, drive, kAt));
}
BENCHMARK(bm_layout_field_with_aperture);

void bm_find_radial_null(benchmark::State& state) {
  const TrapLayout layout = build_reference_layout();
  const Drive drive = build_reference_drive();
  for (auto _ : state)
    benchmark::DoNotOptimize(find_radial_null(layout, drive));
}
BENCHMARK(bm_find_radial_null);

void bm_pseudopotential_at(benchmark::State& state) {
  const TrapLayout layout = build_reference_layout();
  const Drive drive = build_reference_drive();
  const IonSpecies yb = IonSpecies::yb172();
  for (auto _ : state)
    benchmark::DoNotOptimize(pseudopotential_at(layout, drive, yb, kAt));
}
BENCHMARK(bm_pseudopotential_at);

}  // namespace

BENCHMARK_MAIN();
