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

#include "paqplan/report.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "paqplan/error.h"

namespace paq {

namespace {

std::size_t completed_models(const History& history) {
  return static_cast<std::size_t>(std::count_if(history.begin(), history.end(), [](const auto& r) {
    return r.status == ModelStatus::kFinished;
  }));
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

double models_per_hour(std::size_t completed, double wall_seconds) {
  if (wall_seconds <= 0.0) return 0.0;
  return 3600.0 * static_cast<double>(completed) / wall_seconds;
}

std::string format_plan_report(const Knobs& knobs, const PlanResult& result,
                               std::optional<double> test_error, const ReportOptions& options) {
  const std::size_t completed = completed_models(result.history);
  std::ostringstream out;
  out << "# paqplan plan report\n";
  for (const auto& [key, value] : knobs) out << "# " << key << '=' << value << '\n';
  out << "# wall_seconds=" << format_double(result.wall_seconds) << '\n';
  out << "# models_per_hour=" << format_double(models_per_hour(completed, result.wall_seconds))
      << '\n';

  out << "model_id\tfamily\tconfig\titerations\tval_error\tstatus\tcumulative_scans\tround";
  if (options.wall_clock_column) out << "\telapsed_seconds";
  out << '\n';
  for (std::size_t i = 0; i < result.history.size(); ++i) {
    const HistoryRecord& r = result.history[i];
    out << r.model_id << '\t' << r.config.family << '\t' << r.config.to_string() << '\t'
        << r.iterations_used << '\t' << (r.val_error ? format_double(*r.val_error) : "NA") << '\t'
        << status_name(r.status) << '\t' << result.cumulative_scans.at(i) << '\t'
        << result.rounds.at(i);
    if (options.wall_clock_column) {
      out << '\t'
          << (i < result.elapsed_seconds.size() ? format_double(result.elapsed_seconds[i]) : "NA");
    }
    out << '\n';
  }

  const ModelState& b = result.best;
  out << "summary\tbest_model=" << b.id << "\tbest_config=" << b.config.to_string()
      << "\tbest_val_error=" << (b.val_error ? format_double(*b.val_error) : "NA")
      << "\ttest_error=" << (test_error ? format_double(*test_error) : "NA")
      << "\tscans=" << result.scans_used << "\tshared_passes=" << result.shared_passes
      << "\tcompleted=" << completed << "\tbest_unfinished=" << (result.best_unfinished ? 1 : 0)
      << '\n';
  return out.str();
}

std::string report_body(std::string_view report) {
  std::string out;
  std::size_t pos = 0;
  while (pos < report.size()) {
    std::size_t end = report.find('\n', pos);
    if (end == std::string_view::npos) end = report.size();
    const std::string_view line = report.substr(pos, end - pos);
    if (line.empty() || line.front() != '#') {
      out.append(line);
      out += '\n';
    }
    pos = end + 1;
  }
  return out;
}

std::string render_svg(const std::vector<Series>& series, const std::string& title,
                       const std::string& x_label, const std::string& y_label, bool log_x) {
  constexpr double kWidth = 640, kHeight = 420, kLeft = 70, kRight = 150, kTop = 40, kBottom = 50;
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  auto tx = [&](double x) { return log_x ? std::log10(x) : x; };

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const Series& s : series) {
    for (auto [x, y] : s.points) {
      if (!std::isfinite(y) || (log_x && x <= 0)) continue;
      x0 = std::min(x0, tx(x));
      x1 = std::max(x1, tx(x));
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (tx(x) - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return kTop + (1.0 - (y - y0) / (y1 - y0)) * ph; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\">" << escape_xml(title)
      << "</text>\n";
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0;
    const double fy = y0 + (y1 - y0) * i / 4.0;
    const double xv = log_x ? std::pow(10.0, fx) : fx;
    out << "<text x=\"" << kLeft + pw * i / 4.0 << "\" y=\"" << kTop + ph + 16
        << "\" text-anchor=\"middle\">" << format_double(std::round(xv * 1000) / 1000)
        << "</text>\n";
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(fy) + 4 << "\" text-anchor=\"end\">"
        << format_double(std::round(fy * 10000) / 10000) << "</text>\n";
  }
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 10
      << "\" text-anchor=\"middle\">" << escape_xml(x_label) << "</text>\n";
  out << "<text x=\"15\" y=\"" << kTop + ph / 2 << "\" transform=\"rotate(-90 15 "
      << kTop + ph / 2 << ")\" text-anchor=\"middle\">" << escape_xml(y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kColors[k % std::size(kColors)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (auto [x, y] : series[k].points) {
      if (!std::isfinite(y) || (log_x && x <= 0)) continue;
      out << px(x) << ',' << py(y) << ' ';
    }
    out << "\"/>\n";
    const double ly = kTop + 14 + 18 * static_cast<double>(k);
    out << "<line x1=\"" << kWidth - kRight + 10 << "\" y1=\"" << ly - 4 << "\" x2=\""
        << kWidth - kRight + 30 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << kWidth - kRight + 35 << "\" y=\"" << ly << "\">"
        << escape_xml(series[k].name) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

}  // namespace paq
