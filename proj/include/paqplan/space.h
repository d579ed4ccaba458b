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

#ifndef PAQPLAN_SPACE_H_
#define PAQPLAN_SPACE_H_

#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace paq {

using Rng = std::mt19937_64;

enum class ParamKind { kContinuous, kCategorical };
enum class Scale { kLinear, kLog10 };

// One hyperparameter dimension. Continuous parameters live on [lo, hi] and are
// searched on their declared scale (the exponent for log10 parameters).
// A parameter with `family` set is only active when that family is chosen.
struct ParamSpec {
  std::string name;
  ParamKind kind = ParamKind::kContinuous;
  double lo = 0.0;
  double hi = 1.0;
  Scale scale = Scale::kLinear;
  std::vector<std::string> choices;
  std::optional<std::string> family;

  static ParamSpec continuous(std::string name, double lo, double hi,
                              Scale scale = Scale::kLinear);
  static ParamSpec categorical(std::string name,
                               std::vector<std::string> choices);
  ParamSpec when_family(std::string family_label) const;

  // Throws Error(kInvalidSpace) when the invariants do not hold.
  void validate() const;

  double scaled_lo() const;
  double scaled_hi() const;
  double to_scaled(double value) const;
  double from_scaled(double scaled) const;
  bool is_continuous() const { return kind == ParamKind::kContinuous; }
};

using ParamValue = std::variant<double, std::string>;

// A point in a search space: the chosen family plus the values of exactly the
// parameters active for that family, in declaration order.
struct Configuration {
  std::string family;
  std::vector<std::pair<std::string, ParamValue>> values;

  const ParamValue* find(std::string_view name) const;
  double real(std::string_view name, double fallback) const;
  std::string label(std::string_view name, std::string fallback) const;
  std::string to_string() const;

  bool operator==(const Configuration&) const = default;
};

std::string format_double(double value);

class SearchSpace {
 public:
  SearchSpace() = default;
  explicit SearchSpace(std::vector<ParamSpec> params,
                       std::optional<ParamSpec> family_param = std::nullopt,
                       std::string default_family = "logistic");

  const std::vector<ParamSpec>& params() const { return params_; }
  const std::optional<ParamSpec>& family_param() const { return family_param_; }
  bool empty() const { return params_.empty() && !family_param_; }

  // Family labels in declaration order; the default family when the space
  // has no family parameter.
  std::vector<std::string> families() const;
  std::vector<const ParamSpec*> active_params(std::string_view family) const;
  std::vector<const ParamSpec*> active_continuous(std::string_view family) const;
  bool has_categorical(std::string_view family) const;

  // Throws Error(kInvalidArgument) unless `config` holds exactly the active
  // parameters of its family with in-range values.
  void validate(const Configuration& config) const;
  bool contains(const Configuration& config) const;

  void require_nonempty() const;

 private:
  std::vector<ParamSpec> params_;
  std::optional<ParamSpec> family_param_;
  std::string default_family_ = "logistic";
};

// Cartesian grid with floor(budget^(1/D)) points per continuous dimension.
// Rows are ordered with the first declared dimension varying slowest.
std::vector<Configuration> grid_points(const SearchSpace& space,
                                       std::size_t budget);

Configuration sample_uniform(const SearchSpace& space, Rng& rng);

struct ClipResult {
  Configuration config;
  bool penalized = false;
};

// `raw` is on the declared scale, one entry per active continuous parameter.
ClipResult clip(const SearchSpace& space, std::span<const double> raw,
                std::string_view family);

// Declarative JSON space documents; see data/spaces/README.md for the schema.
SearchSpace parse_space(std::string_view json_text);
SearchSpace load_space(const std::string& path);
std::string space_to_json(const SearchSpace& space);

}  // namespace paq

#endif  // PAQPLAN_SPACE_H_
