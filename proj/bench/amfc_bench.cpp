#include "amfc/adding_machine.hpp"
#include "amfc/render.hpp"
#include "amfc/transition_matrix.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace amfc;

namespace {

const ProbabilitySequence& probs()
{
  static const ProbabilitySequence p(3, {0.75, 2.0 / 3.0}, ConstantTail{0.75});
  return p;
}

RenderConfig render_config(unsigned pixels)
{
  RenderConfig c;
  c.window = default_window(probs(), Coordinates::E);
  c.pixels_x = c.pixels_y = pixels;
  c.max_levels = kRenderBudget;
  return c;
}

void BM_Render(benchmark::State& state)
{
  const auto c = render_config(unsigned(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(render(c, probs()));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_RenderSerial(benchmark::State& state)
{
  const auto c = render_config(unsigned(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(render_serial(c, probs()));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_GreenGrid(benchmark::State& state)
{
  const auto c = render_config(unsigned(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(green_grid(c, probs(), kRenderBudget));
}

void BM_GreenGridSerial(benchmark::State& state)
{
  const auto c = render_config(unsigned(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(green_grid_serial(c, probs(), kRenderBudget));
}

void BM_Hitting(benchmark::State& state)
{
  const auto p = ProbabilitySequence::constant(2, 0.5);
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_hitting(2, p, std::size_t(state.range(0)), 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_HittingSerial(benchmark::State& state)
{
  const auto p = ProbabilitySequence::constant(2, 0.5);
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_hitting_serial(2, p, std::size_t(state.range(0)), 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

std::vector<Complex> test_vector(std::size_t n)
{
  std::vector<Complex> v(n);
  for (std::size_t k = 0; k < n; ++k)
    v[k] = Complex(std::sin(double(k)), std::cos(double(k)));
  return v;
}

void BM_Apply(benchmark::State& state)
{
  const auto op = build_truncated(probs(), std::size_t(state.range(0)));
  const auto v = test_vector(op.size());
  for (auto _ : state)
    benchmark::DoNotOptimize(op.apply(v));
}

void BM_ApplySerial(benchmark::State& state)
{
  const auto op = build_truncated(probs(), std::size_t(state.range(0)));
  const auto v = test_vector(op.size());
  for (auto _ : state)
    benchmark::DoNotOptimize(op.apply_serial(v));
}

} // namespace

BENCHMARK(BM_Render)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RenderSerial)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GreenGrid)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GreenGridSerial)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Hitting)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HittingSerial)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Apply)->Arg(59049)->Arg(531441)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ApplySerial)->Arg(59049)->Arg(531441)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
