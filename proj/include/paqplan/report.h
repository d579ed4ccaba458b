// Copyright 2026 The paqplan Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PAQPLAN_REPORT_H_
#define PAQPLAN_REPORT_H_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "paqplan/plan.h"

namespace paq {

using Knobs = std::vector<std::pair<std::string, std::string>>;

struct ReportOptions {
  // Adds an elapsed-seconds column; such bodies are no longer reproducible.
  bool wall_clock_column = false;
};

// Lines starting with '#' carry the knobs and timing; every other line is
// part of the tab-separated body: a header, one row per history record and
// a final summary row.
std::string format_plan_report(const Knobs& knobs, const PlanResult& result,
                               std::optional<double> test_error, const ReportOptions& options = {});

// Drops the '#' lines.
std::string report_body(std::string_view report);

// Models that reached max_iterations per hour of wall time.
double models_per_hour(std::size_t completed, double wall_seconds);

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

// Line chart with one polyline per series.
std::string render_svg(const std::vector<Series>& series, const std::string& title,
                       const std::string& x_label, const std::string& y_label, bool log_x);

void write_text_file(const std::string& path, std::string_view text);

}  // namespace paq

#endif  // PAQPLAN_REPORT_H_
