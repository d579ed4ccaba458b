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

#include "paqplan/data.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "paqplan/error.h"

namespace paq {

void Dataset::partition(std::size_t count) {
  if (count == 0) throw Error(ErrorCode::kInvalidArgument, "partition count must be >= 1");
  const std::size_t n = rows();
  count = std::max<std::size_t>(1, std::min(count, std::max<std::size_t>(n, 1)));
  partitions.clear();
  std::size_t begin = 0;
  for (std::size_t p = 0; p < count; ++p) {
    const std::size_t end = n * (p + 1) / count;
    partitions.push_back({begin, end});
    begin = end;
  }
}

Dataset make_dataset(Matrix X, Vector y) {
  if (X.rows() != y.size()) {
    throw Error(ErrorCode::kInvalidArgument, "feature rows and labels differ in length");
  }
  Dataset ds;
  ds.X = std::move(X);
  ds.y = std::move(y);
  ds.partition(1);
  return ds;
}

Dataset select_rows(const Dataset& ds, std::span<const std::size_t> rows) {
  Dataset out;
  out.X.resize(static_cast<Eigen::Index>(rows.size()), ds.X.cols());
  out.y.resize(static_cast<Eigen::Index>(rows.size()));
  out.source_rows.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(rows[i]);
    out.X.row(static_cast<Eigen::Index>(i)) = ds.X.row(r);
    out.y(static_cast<Eigen::Index>(i)) = ds.y(r);
    out.source_rows.push_back(ds.source_rows.empty() ? rows[i] : ds.source_rows[rows[i]]);
  }
  out.partition(1);
  return out;
}

DataSplit split(const Dataset& ds, SplitRatios ratios, std::uint64_t seed) {
  const double total = ratios.train + ratios.validation + ratios.test;
  if (ratios.train < 0 || ratios.validation < 0 || ratios.test < 0 ||
      std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidArgument, "split ratios must be non-negative and sum to 1");
  }
  const std::size_t n = ds.rows();
  if (n < 10) throw Error(ErrorCode::kTooSmall, "need at least 10 rows to split");

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);

  const auto floor_of = [n](double r) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * r + 1e-9));
  };
  const std::size_t n_val = floor_of(ratios.validation);
  const std::size_t n_test = floor_of(ratios.test);
  const std::size_t n_train = n - n_val - n_test;

  std::span<const std::size_t> all(perm);
  DataSplit out;
  out.train = select_rows(ds, all.subspan(0, n_train));
  out.validation = select_rows(ds, all.subspan(n_train, n_val));
  out.test = select_rows(ds, all.subspan(n_train + n_val, n_test));
  return out;
}

Dataset synth(std::size_t n, std::size_t d, std::uint64_t seed, double noise_rate) {
  if (n < 1 || d < 1) throw Error(ErrorCode::kInvalidArgument, "synth needs n, d >= 1");
  if (!(noise_rate >= 0.0 && noise_rate < 0.5)) {
    throw Error(ErrorCode::kInvalidArgument, "noise rate must lie in [0, 0.5)");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Vector hidden(static_cast<Eigen::Index>(d));
  for (auto& v : hidden) v = normal(rng);

  Matrix X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) X(i, j) = normal(rng);
  }
  const Vector margin = X * hidden;
  Vector y(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    double label = margin(i) >= 0.0 ? 1.0 : 0.0;
    if (unit(rng) < noise_rate) label = 1.0 - label;
    y(i) = label;
  }
  return make_dataset(std::move(X), std::move(y));
}

Dataset downsample(const Dataset& ds, double proportion, std::uint64_t seed) {
  if (!(proportion > 0.0) || proportion > 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "downsample proportion must lie in (0, 1]");
  }
  const std::size_t n = ds.rows();
  const auto keep = static_cast<std::size_t>(std::llround(static_cast<double>(n) * proportion));
  if (keep < 1) throw Error(ErrorCode::kInvalidArgument, "downsample would keep no rows");
  if (keep >= n) return ds;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  perm.resize(keep);
  std::sort(perm.begin(), perm.end());
  return select_rows(ds, perm);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool parse_number(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<std::string_view> split_on(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    fn(trim(text.substr(start, end - start)), line_no);
    start = end + 1;
  }
}

double coerce_label(double label) { return label == -1.0 ? 0.0 : label; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Matrix to_matrix(const std::vector<std::vector<double>>& rows, std::size_t width) {
  Matrix X(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          j < rows[i].size() ? rows[i][j] : 0.0;
    }
  }
  return X;
}

}  // namespace

Dataset parse_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::vector<double> labels;
  std::size_t width = 0;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    if (line.empty() || line.front() == '#') return;
    const auto fields = split_on(line, ',');
    if (fields.size() < 2) {
      throw Error(ErrorCode::kParse,
                  "line " + std::to_string(line_no) + ": need features and a label", line_no);
    }
    if (rows.empty()) {
      width = fields.size() - 1;
    } else if (fields.size() - 1 != width) {
      throw Error(ErrorCode::kParse,
                  "line " + std::to_string(line_no) + ": expected " +
                      std::to_string(width + 1) + " columns, found " +
                      std::to_string(fields.size()),
                  line_no);
    }
    std::vector<double> row(width);
    for (std::size_t j = 0; j < width; ++j) {
      if (!parse_number(fields[j], row[j])) {
        throw Error(ErrorCode::kParse,
                    "line " + std::to_string(line_no) + ": bad number '" +
                        std::string(trim(fields[j])) + "'",
                    line_no);
      }
    }
    double label = 0.0;
    if (!parse_number(fields.back(), label)) {
      throw Error(ErrorCode::kParse,
                  "line " + std::to_string(line_no) + ": bad label", line_no);
    }
    rows.push_back(std::move(row));
    labels.push_back(coerce_label(label));
  });
  Vector y = Eigen::Map<Vector>(labels.data(), static_cast<Eigen::Index>(labels.size()));
  return make_dataset(to_matrix(rows, width), std::move(y));
}

Dataset parse_libsvm(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::vector<double> labels;
  std::size_t width = 0;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    if (line.empty() || line.front() == '#') return;
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = trim(line.substr(0, hash));
    std::vector<std::string_view> tokens;
    for (std::string_view tok : split_on(line, ' ')) {
      for (std::string_view t : split_on(tok, '\t')) {
        if (!trim(t).empty()) tokens.push_back(trim(t));
      }
    }
    double label = 0.0;
    if (tokens.empty() || !parse_number(tokens.front(), label)) {
      throw Error(ErrorCode::kParse,
                  "line " + std::to_string(line_no) + ": bad label", line_no);
    }
    std::vector<double> row;
    long previous = 0;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const auto colon = tokens[t].find(':');
      long index = 0;
      double value = 0.0;
      bool ok = colon != std::string_view::npos;
      if (ok) {
        std::string_view idx = tokens[t].substr(0, colon);
        auto [ptr, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), index);
        ok = ec == std::errc() && ptr == idx.data() + idx.size() && index >= 1 &&
             parse_number(tokens[t].substr(colon + 1), value);
      }
      if (!ok || index <= previous) {
        throw Error(ErrorCode::kParse,
                    "line " + std::to_string(line_no) + ": bad feature '" +
                        std::string(tokens[t]) + "'",
                    line_no);
      }
      previous = index;
      row.resize(static_cast<std::size_t>(index), 0.0);
      row[static_cast<std::size_t>(index) - 1] = value;
    }
    width = std::max(width, row.size());
    rows.push_back(std::move(row));
    labels.push_back(coerce_label(label));
  });
  Vector y = Eigen::Map<Vector>(labels.data(), static_cast<Eigen::Index>(labels.size()));
  return make_dataset(to_matrix(rows, width), std::move(y));
}

Dataset load_csv(const std::string& path) { return parse_csv(read_file(path)); }
Dataset load_libsvm(const std::string& path) { return parse_libsvm(read_file(path)); }

Dataset load_dataset(const std::string& path) {
  const auto dot = path.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  if (ext == ".svm" || ext == ".libsvm") return load_libsvm(path);
  return load_csv(path);
}

namespace {

void append_double(std::string& out, double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, end);
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << body;
}

}  // namespace

void write_csv(const Dataset& ds, const std::string& path) {
  std::string body;
  for (Eigen::Index i = 0; i < ds.X.rows(); ++i) {
    for (Eigen::Index j = 0; j < ds.X.cols(); ++j) {
      append_double(body, ds.X(i, j));
      body += ',';
    }
    append_double(body, ds.y(i));
    body += '\n';
  }
  write_file(path, body);
}

void write_libsvm(const Dataset& ds, const std::string& path) {
  std::string body;
  for (Eigen::Index i = 0; i < ds.X.rows(); ++i) {
    append_double(body, ds.y(i));
    for (Eigen::Index j = 0; j < ds.X.cols(); ++j) {
      // The last column is always written so the width survives a reload.
      if (ds.X(i, j) == 0.0 && !std::signbit(ds.X(i, j)) && j + 1 != ds.X.cols()) {
        continue;
      }
      body += ' ';
      body += std::to_string(j + 1);
      body += ':';
      append_double(body, ds.X(i, j));
    }
    body += '\n';
  }
  write_file(path, body);
}

Table parse_table(std::string_view text) {
  Table table;
  std::vector<std::vector<double>> rows;
  bool header = true;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    if (line.empty() || line.front() == '#') return;
    const auto fields = split_on(line, ',');
    if (header) {
      for (std::string_view f : fields) table.columns.emplace_back(trim(f));
      header = false;
      return;
    }
    if (fields.size() != table.columns.size()) {
      throw Error(ErrorCode::kParse,
                  "line " + std::to_string(line_no) + ": expected " +
                      std::to_string(table.columns.size()) + " columns",
                  line_no);
    }
    std::vector<double> row(fields.size());
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (!parse_number(fields[j], row[j])) {
        throw Error(ErrorCode::kParse,
                    "line " + std::to_string(line_no) + ": bad number", line_no);
      }
    }
    rows.push_back(std::move(row));
  });
  if (header) throw Error(ErrorCode::kParse, "table has no header row");
  table.values = to_matrix(rows, table.columns.size());
  return table;
}

Table load_table(const std::string& path) { return parse_table(read_file(path)); }

}  // namespace paq
