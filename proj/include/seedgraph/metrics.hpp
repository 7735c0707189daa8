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

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "seedgraph/dataset.hpp"
#include "seedgraph/runlog.hpp"

namespace seedgraph {

/// Cumulative discovery metrics after one oracle round, over real data only.
struct EvalPoint {
  std::size_t iteration = 0;
  std::size_t queried_cum = 0;
  double query_ratio = 0.0;
  double precision_cum = 0.0;
  double recall_cum = 0.0;
  double f1_cum = 0.0;

  bool operator==(const EvalPoint&) const = default;
};

double f1_score(double precision, double recall);

/// One point per batch. Ids not in `pool` (synthetic seeds) are ignored;
/// every pool id that was queried must carry a truth label.
std::vector<EvalPoint> evaluate(const RunLog& run, const Corpus& pool);

enum class ReportFormat { csv, json };
ReportFormat parse_report_format(const std::string& text);

void write_report(std::ostream& out, std::span<const EvalPoint> points, ReportFormat format);
void emit_report(std::span<const EvalPoint> points, const std::string& path, ReportFormat format);
std::string report_string(std::span<const EvalPoint> points, ReportFormat format);

/// Expected curve of uniform sampling: precision is the base rate at every
/// ratio (including 0) and recall equals the ratio.
std::vector<EvalPoint> random_baseline_curve(double base_rate, std::size_t pool_size,
                                             std::span<const double> ratios);

/// Recall at `ratio` along a curve, interpolating linearly from the origin
/// and holding the last value past the final point.
double recall_at(std::span<const EvalPoint> curve, double ratio);

}  // namespace seedgraph
