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

#pragma once

// Data-parallel inner loops. Every OpenMP kernel has a serial counterpart in
// `kernels::serial` that the tests use as the reference; both produce
// bit-identical results because each output element is computed by the same
// fixed-order arithmetic regardless of the thread that owns it.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace seedgraph {

enum class Exec { serial, parallel };

/// Compressed sparse rows with unit-free weights.
struct CsrMatrix {
  std::size_t rows = 0;
  std::vector<std::size_t> offsets;  // rows + 1 entries
  std::vector<std::uint32_t> columns;
  std::vector<double> values;
};

namespace kernels {

/// sum_i a[i]*b[i], accumulated in double from i = 0 upwards.
double dot(const float* a, const float* b, std::size_t dim) noexcept;

/// out[j] = dot(query, rows[j]) for every row of a row-major matrix.
void dot_rows(std::span<const float> query, std::span<const float> matrix, std::size_t dim,
              std::span<double> out, Exec exec = Exec::parallel);

/// Single-threaded dot_rows that keeps several independent accumulators in
/// flight. Used inside kernels that already parallelize an outer loop.
void dot_rows_ilp(std::span<const float> query, std::span<const float> matrix, std::size_t dim,
                  std::span<double> out) noexcept;

/// y = A x.
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y,
          Exec exec = Exec::parallel);

/// max_i |a[i] - b[i]|.
double max_abs_diff(std::span<const double> a, std::span<const double> b,
                    Exec exec = Exec::parallel);

namespace serial {
void dot_rows(std::span<const float> query, std::span<const float> matrix, std::size_t dim,
              std::span<double> out);
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
}  // namespace serial

namespace omp {
void dot_rows(std::span<const float> query, std::span<const float> matrix, std::size_t dim,
              std::span<double> out);
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
}  // namespace omp

/// Threads OpenMP will use for parallel kernels.
int thread_count();
void set_thread_count(int n);

}  // namespace kernels
}  // namespace seedgraph
