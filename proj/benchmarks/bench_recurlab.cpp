#include <random>
#include <vector>

#include "benchmark/benchmark.h"
#include "recurlab/classify.hpp"
#include "recurlab/families.hpp"
#include "recurlab/literals.hpp"
#include "recurlab/orbit.hpp"

using namespace recur;

namespace {

IndexWindow bernoulli(std::uint64_t h, double p) {
  std::mt19937_64 rng(h);
  std::bernoulli_distribution coin(p);
  std::vector<std::uint64_t> e;
  for (std::uint64_t n = 0; n <= h; ++n) {
    if (coin(rng)) e.push_back(n);
  }
  return IndexWindow(std::move(e), h);
}

}  // namespace

static void bm_density_report(benchmark::State& state) {
  const auto h = static_cast<std::uint64_t>(state.range(0));
  const auto w = bernoulli(h, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(density_report(w, h / 10));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_density_report)->RangeMultiplier(10)->Range(1000, 1000000)->Complexity();

static void bm_sliding_window(benchmark::State& state) {
  const auto h = static_cast<std::uint64_t>(state.range(0));
  const auto w = bernoulli(h, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(sliding_window_max(w, h / 100));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_sliding_window)->RangeMultiplier(10)->Range(1000, 1000000)->Complexity();

static void bm_syndetic(benchmark::State& state) {
  const auto w = bernoulli(static_cast<std::uint64_t>(state.range(0)), 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(syndetic_certificate(w));
}
BENCHMARK(bm_syndetic)->Arg(100000);

static void bm_ip_star_probe(benchmark::State& state) {
  const auto w = IndexWindow::residue(4, 0, static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ip_star_probe(w));
}
BENCHMARK(bm_ip_star_probe)->Arg(10000)->Arg(100000);

// Exact orbit of e_k under the block cycle; the walk stops at the period.
static void bm_orbit_blockcycle(benchmark::State& state) {
  const auto op = parse_operator("blockcycle");
  const auto x = parse_vector("vec(sparse: 1000:1)", op->space());
  for (auto _ : state) benchmark::DoNotOptimize(orbit_distances(*op, x, {0}, static_cast<std::uint64_t>(state.range(0))));
}
BENCHMARK(bm_orbit_blockcycle)->Arg(10000);

static void bm_orbit_rotation(benchmark::State& state) {
  const auto op = parse_operator("matrix([[cos(1), -sin(1)], [sin(1), cos(1)]])");
  const auto x = parse_vector("vec(sparse: 1:1)", op->space());
  for (auto _ : state) benchmark::DoNotOptimize(orbit_distances(*op, x, {0}, static_cast<std::uint64_t>(state.range(0))));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_orbit_rotation)->RangeMultiplier(10)->Range(1000, 100000)->Complexity();

static void bm_orbit_rowrotation(benchmark::State& state) {
  const auto op = parse_operator("rowrotation");
  const auto x = parse_vector("rowvec(special)", op->space());
  for (auto _ : state) benchmark::DoNotOptimize(orbit_distances(*op, x, {1}, static_cast<std::uint64_t>(state.range(0))));
}
BENCHMARK(bm_orbit_rowrotation)->Arg(1024)->Arg(4096);

static void bm_classify_rotation(benchmark::State& state) {
  const auto op = parse_operator("matrix([[cos(1), -sin(1)], [sin(1), cos(1)]])");
  const auto x = parse_vector("vec(sparse: 1:1)", op->space());
  const std::vector<Rational> eps{Rational(1, 2), Rational(1, 10)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(classify(return_sets(*op, x, eps, {0}, static_cast<std::uint64_t>(state.range(0))), {}));
  }
}
BENCHMARK(bm_classify_rotation)->Arg(10000);

BENCHMARK_MAIN();
