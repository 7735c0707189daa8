/*
 * Copyright (c) 2026, The seedgraph Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Serial reference kernels against their OpenMP counterparts.
//   ./bench_kernels --benchmark_filter=spmv

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "seedgraph/clustered.hpp"
#include "seedgraph/kernels.hpp"
#include "seedgraph/labelprop.hpp"
#include "seedgraph/simgraph.hpp"

using namespace seedgraph;

namespace {

std::vector<float> floats(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<float> u(-1, 1);
  std::vector<float> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

const ClusteredData& corpus() {
  static const ClusteredData data = [] {
    ClusteredSpec spec;
    spec.n_real = 4000;
    return generate_clustered(spec);
  }();
  return data;
}

const NormalizedAdjacency& adjacency() {
  static const NormalizedAdjacency w = row_normalize(build_similarity_graph(corpus().real, 0.5, 15));
  return w;
}

template <Exec E>
void dot_rows(benchmark::State& state) {
  const std::size_t dim = 64, rows = static_cast<std::size_t>(state.range(0));
  const auto q = floats(dim);
  const auto m = floats(dim * rows);
  std::vector<double> out(rows);
  for (auto _ : state) {
    kernels::dot_rows(q, m, dim, out, E);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(rows));
}

void dot_rows_ilp(benchmark::State& state) {
  const std::size_t dim = 64, rows = static_cast<std::size_t>(state.range(0));
  const auto q = floats(dim);
  const auto m = floats(dim * rows);
  std::vector<double> out(rows);
  for (auto _ : state) {
    kernels::dot_rows_ilp(q, m, dim, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(rows));
}

template <Exec E>
void spmv(benchmark::State& state) {
  const auto& w = adjacency();
  std::vector<double> x(w.size(), 0.5), y(w.size());
  for (auto _ : state) {
    kernels::spmv(w.w, x, y, E);
    benchmark::DoNotOptimize(y.data());
  }
}

template <Exec E>
void similarity_graph(benchmark::State& state) {
  for (auto _ : state) {
    auto g = build_similarity_graph(corpus().real, 0.5, 15, nullptr, E);
    benchmark::DoNotOptimize(g.adjacency.data());
  }
}

template <Exec E>
void propagation(benchmark::State& state) {
  const auto& w = adjacency();
  std::vector<double> y0(w.size(), 0.0);
  std::vector<char> clamped(w.size(), 0);
  for (std::size_t i = 0; i < w.size(); i += 50) {
    y0[i] = corpus().real.record(i).truth == Label::positive ? 1.0 : -1.0;
    clamped[i] = 1;
  }
  for (auto _ : state) {
    auto r = propagate(w, y0, clamped, 50, 1e-6, E);
    benchmark::DoNotOptimize(r.scores.data());
  }
}

}  // namespace

BENCHMARK(dot_rows_ilp)->Arg(1 << 14);
BENCHMARK(dot_rows<Exec::serial>)->Arg(1 << 14);
BENCHMARK(dot_rows<Exec::parallel>)->Arg(1 << 14);
BENCHMARK(spmv<Exec::serial>);
BENCHMARK(spmv<Exec::parallel>);
BENCHMARK(propagation<Exec::serial>)->Unit(benchmark::kMillisecond);
BENCHMARK(propagation<Exec::parallel>)->Unit(benchmark::kMillisecond);
BENCHMARK(similarity_graph<Exec::serial>)->Unit(benchmark::kMillisecond);
BENCHMARK(similarity_graph<Exec::parallel>)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
