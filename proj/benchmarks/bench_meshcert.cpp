#include <benchmark/benchmark.h>

#include <meshcert/fields.hpp>
#include <meshcert/functionals.hpp>
#include <meshcert/interpolation.hpp>
#include <meshcert/mesh.hpp>

#include <random>

using namespace meshcert;

namespace {

std::vector<Vec> random_points(int d, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec> pts;
  pts.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    Vec p(d);
    for (int j = 0; j < d; ++j) p(j) = u(rng);
    pts.push_back(p);
  }
  return pts;
}

void BM_Delaunay(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const auto pts = random_points(d, n, 42);
  for (auto _ : state) benchmark::DoNotOptimize(delaunay(pts));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_Delaunay)->Args({2, 200})->Args({2, 1000})->Args({3, 200})->Args({4, 100})
    ->Unit(benchmark::kMillisecond);

void BM_CoxeterPatch(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(coxeter_a_tilde(d, 2, 1.0));
}
BENCHMARK(BM_CoxeterPatch)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_RoughnessFunctional(benchmark::State& state) {
  const Mesh mesh = coxeter_a_tilde(3, static_cast<int>(state.range(0)), 1.0);
  const auto quad = simplex_quadrature(3, 6);
  const auto f = random_trig_vector(3, 7);
  const auto field = ambient_field(f.value);
  for (auto _ : state)
    benchmark::DoNotOptimize(roughness_functional(mesh, field, quad));
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(mesh.simplices.size()));
}
BENCHMARK(BM_RoughnessFunctional)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_QuadratureBuild(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int degree = static_cast<int>(state.range(1));
  for (auto _ : state)
    benchmark::DoNotOptimize(simplex_quadrature(d, degree));
}
BENCHMARK(BM_QuadratureBuild)->Args({3, 6})->Args({4, 10})->Args({6, 8});

void BM_SchemeBuild(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(build_scheme(d, k));
}
BENCHMARK(BM_SchemeBuild)->Args({2, 4})->Args({3, 3})->Args({3, 6});

void BM_LebesgueEstimate(benchmark::State& state) {
  auto scheme = build_scheme(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(lebesgue_constant(scheme, 32));
  state.SetLabel("density 32");
}
BENCHMARK(BM_LebesgueEstimate)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_Protection(benchmark::State& state) {
  const Mesh mesh = delaunay(random_points(3, static_cast<int>(state.range(0)), 9));
  for (auto _ : state) benchmark::DoNotOptimize(protection(mesh));
}
BENCHMARK(BM_Protection)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
