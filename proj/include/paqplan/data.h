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

#ifndef PAQPLAN_DATA_H_
#define PAQPLAN_DATA_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace paq {

// Feature matrices are dense and row-major: one example per row.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

struct RowRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
  bool operator==(const RowRange&) const = default;
};

struct Dataset {
  Matrix X;
  Vector y;  // {0,1} for training data; class ids allowed for evaluation-only data
  std::vector<RowRange> partitions;
  // Row indices in the dataset this one was derived from; empty for originals.
  std::vector<std::size_t> source_rows;

  std::size_t rows() const { return static_cast<std::size_t>(X.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(X.cols()); }

  // Splits [0, rows) into `count` contiguous ranges of near-equal size.
  void partition(std::size_t count);
};

Dataset make_dataset(Matrix X, Vector y);

struct DataSplit {
  Dataset train;
  Dataset validation;
  Dataset test;
};

struct SplitRatios {
  double train = 0.7;
  double validation = 0.2;
  double test = 0.1;
};

// Seeded shuffle, then floor-rounded validation/test sizes with the remainder
// going to train. Requires at least 10 rows.
DataSplit split(const Dataset& ds, SplitRatios ratios, std::uint64_t seed);

// Standard-normal rows labelled by a hidden hyperplane through the origin,
// with each label flipped independently with probability `noise_rate`.
Dataset synth(std::size_t n, std::size_t d, std::uint64_t seed, double noise_rate);

Dataset select_rows(const Dataset& ds, std::span<const std::size_t> rows);

// Uniform subsample without replacement of round(n * proportion) rows,
// kept in their original order.
Dataset downsample(const Dataset& ds, double proportion, std::uint64_t seed);

// Comma-separated doubles, final column is the label.
Dataset parse_csv(std::string_view text);
Dataset load_csv(const std::string& path);
void write_csv(const Dataset& ds, const std::string& path);

// `label idx:value ...` with 1-based indices; absent features are zero and a
// label of -1 maps to 0.
Dataset parse_libsvm(std::string_view text);
Dataset load_libsvm(const std::string& path);
void write_libsvm(const Dataset& ds, const std::string& path);

// Loads by extension: `.svm`/`.libsvm` as libsvm, anything else as CSV.
Dataset load_dataset(const std::string& path);

// Numeric table with a header row naming its columns.
struct Table {
  std::vector<std::string> columns;
  Matrix values;
};

Table parse_table(std::string_view text);
Table load_table(const std::string& path);

}  // namespace paq

#endif  // PAQPLAN_DATA_H_
