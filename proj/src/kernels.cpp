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

#include "seedgraph/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cassert>
#include <cmath>

namespace seedgraph::kernels {

double dot(const float* a, const float* b, std::size_t dim) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return acc;
}

void dot_rows_ilp(std::span<const float> query, std::span<const float> matrix, std::size_t dim,
                  std::span<double> out) noexcept {
  const std::size_t n = out.size();
  const float* q = query.data();
  const float* m = matrix.data();
  std::size_t j = 0;
  // Four rows at a time; each accumulator still sums its own row in index order.
  for (; j + 4 <= n; j += 4) {
    const float* r0 = m + (j + 0) * dim;
    const float* r1 = m + (j + 1) * dim;
    const float* r2 = m + (j + 2) * dim;
    const float* r3 = m + (j + 3) * dim;
    double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double qi = q[i];
      a0 += qi * static_cast<double>(r0[i]);
      a1 += qi * static_cast<double>(r1[i]);
      a2 += qi * static_cast<double>(r2[i]);
      a3 += qi * static_cast<double>(r3[i]);
    }
    out[j + 0] = a0;
    out[j + 1] = a1;
    out[j + 2] = a2;
    out[j + 3] = a3;
  }
  for (; j < n; ++j) out[j] = dot(q, m + j * dim, dim);
}

namespace serial {

void dot_rows(std::span<const float> query, std::span<const float> matrix, std::size_t dim,
              std::span<double> out) {
  assert(query.size() == dim && matrix.size() == out.size() * dim);
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = dot(query.data(), matrix.data() + j * dim, dim);
  }
}

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  for (std::size_t r = 0; r < a.rows; ++r) {
    double acc = 0.0;
    for (std::size_t k = a.offsets[r]; k < a.offsets[r + 1]; ++k) {
      acc += a.values[k] * x[a.columns[k]];
    }
    y[r] = acc;
  }
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace serial

namespace omp {

void dot_rows(std::span<const float> query, std::span<const float> matrix, std::size_t dim,
              std::span<double> out) {
  assert(query.size() == dim && matrix.size() == out.size() * dim);
  constexpr std::ptrdiff_t kChunk = 256;
  const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t begin = 0; begin < n; begin += kChunk) {
    const auto len = static_cast<std::size_t>(std::min(kChunk, n - begin));
    const auto b = static_cast<std::size_t>(begin);
    dot_rows_ilp(query, matrix.subspan(b * dim, len * dim), dim, out.subspan(b, len));
  }
}

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  const auto rows = static_cast<std::ptrdiff_t>(a.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    double acc = 0.0;
    for (std::size_t k = a.offsets[r]; k < a.offsets[r + 1]; ++k) {
      acc += a.values[k] * x[a.columns[k]];
    }
    y[r] = acc;
  }
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  const auto n = static_cast<std::ptrdiff_t>(a.size());
#pragma omp parallel for reduction(max : m) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace omp

void dot_rows(std::span<const float> query, std::span<const float> matrix, std::size_t dim,
              std::span<double> out, Exec exec) {
  exec == Exec::parallel ? omp::dot_rows(query, matrix, dim, out)
                         : serial::dot_rows(query, matrix, dim, out);
}

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y, Exec exec) {
  exec == Exec::parallel ? omp::spmv(a, x, y) : serial::spmv(a, x, y);
}

double max_abs_diff(std::span<const double> a, std::span<const double> b, Exec exec) {
  return exec == Exec::parallel ? omp::max_abs_diff(a, b) : serial::max_abs_diff(a, b);
}

int thread_count() { return omp_get_max_threads(); }
void set_thread_count(int n) { omp_set_num_threads(std::max(1, n)); }

}  // namespace seedgraph::kernels
