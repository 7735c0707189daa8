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

#include "seedgraph/metrics.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "seedgraph/error.hpp"

namespace seedgraph {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

double f1_score(double precision, double recall) {
  const double s = precision + recall;
  return s == 0.0 ? 0.0 : 2.0 * precision * recall / s;
}

std::vector<EvalPoint> evaluate(const RunLog& run, const Corpus& pool) {
  std::vector<EvalPoint> points;
  if (run.batches.empty()) return points;
  const std::size_t total_pos = pool.count_positive();
  if (!pool.all_labeled()) {
    for (const auto& r : pool.records()) {
      if (!r.truth) throw DatasetError("evaluation needs truth labels; '" + r.id + "' has none");
    }
  }
  std::unordered_set<std::string> seen;
  std::size_t tp = 0;
  for (const auto& b : run.batches) {
    for (const auto& id : b.ids) {
      const auto pos = pool.find(id);
      if (!pos || !seen.insert(id).second) continue;
      if (*pool.record(*pos).truth == Label::positive) ++tp;
    }
    EvalPoint p;
    p.iteration = b.iteration;
    p.queried_cum = seen.size();
    p.query_ratio = static_cast<double>(seen.size()) / static_cast<double>(pool.size());
    p.precision_cum = seen.empty() ? 0.0 : static_cast<double>(tp) / static_cast<double>(seen.size());
    p.recall_cum = total_pos == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(total_pos);
    p.f1_cum = f1_score(p.precision_cum, p.recall_cum);
    points.push_back(p);
  }
  return points;
}

ReportFormat parse_report_format(const std::string& text) {
  if (text == "csv") return ReportFormat::csv;
  if (text == "json") return ReportFormat::json;
  throw InvalidArgument("unknown report format '" + text + "' (expected csv or json)");
}

void write_report(std::ostream& out, std::span<const EvalPoint> points, ReportFormat format) {
  if (format == ReportFormat::csv) {
    out << "iteration,queried_cum,query_ratio,precision_cum,recall_cum,f1_cum\n";
    for (const auto& p : points) {
      out << p.iteration << ',' << p.queried_cum << ',' << fmt(p.query_ratio) << ','
          << fmt(p.precision_cum) << ',' << fmt(p.recall_cum) << ',' << fmt(p.f1_cum) << '\n';
    }
    return;
  }
  out << '[';
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    out << (i ? ",\n " : "\n ") << "{\"iteration\": " << p.iteration
        << ", \"queried_cum\": " << p.queried_cum << ", \"query_ratio\": " << fmt(p.query_ratio)
        << ", \"precision_cum\": " << fmt(p.precision_cum) << ", \"recall_cum\": " << fmt(p.recall_cum)
        << ", \"f1_cum\": " << fmt(p.f1_cum) << '}';
  }
  out << (points.empty() ? "]\n" : "\n]\n");
}

std::string report_string(std::span<const EvalPoint> points, ReportFormat format) {
  std::ostringstream os;
  write_report(os, points, format);
  return os.str();
}

void emit_report(std::span<const EvalPoint> points, const std::string& path, ReportFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write report to '" + path + "'");
  write_report(out, points, format);
  if (!out.flush()) throw Error("write failed for '" + path + "'");
}

std::vector<EvalPoint> random_baseline_curve(double base_rate, std::size_t pool_size,
                                             std::span<const double> ratios) {
  if (!(base_rate >= 0.0 && base_rate <= 1.0)) throw InvalidArgument("base rate must lie in [0, 1]");
  std::vector<EvalPoint> out;
  std::size_t i = 0;
  for (double r : ratios) {
    if (!(r >= 0.0 && r <= 1.0)) throw InvalidArgument("query ratio must lie in [0, 1]");
    EvalPoint p;
    p.iteration = i++;
    p.query_ratio = r;
    p.queried_cum = static_cast<std::size_t>(r * static_cast<double>(pool_size) + 0.5);
    p.precision_cum = base_rate;
    p.recall_cum = r;
    p.f1_cum = f1_score(base_rate, r);
    out.push_back(p);
  }
  return out;
}

double recall_at(std::span<const EvalPoint> curve, double ratio) {
  double x0 = 0.0, y0 = 0.0;
  for (const auto& p : curve) {
    if (ratio <= p.query_ratio) {
      if (p.query_ratio == x0) return p.recall_cum;
      return y0 + (p.recall_cum - y0) * (ratio - x0) / (p.query_ratio - x0);
    }
    x0 = p.query_ratio;
    y0 = p.recall_cum;
  }
  return y0;
}

}  // namespace seedgraph
