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

#include "paqplan/space.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "paqplan/error.h"

namespace paq {

using nlohmann::json;

ParamSpec ParamSpec::continuous(std::string name, double lo, double hi,
                                Scale scale) {
  ParamSpec p;
  p.name = std::move(name);
  p.kind = ParamKind::kContinuous;
  p.lo = lo;
  p.hi = hi;
  p.scale = scale;
  p.validate();
  return p;
}

ParamSpec ParamSpec::categorical(std::string name,
                                 std::vector<std::string> choices) {
  ParamSpec p;
  p.name = std::move(name);
  p.kind = ParamKind::kCategorical;
  p.choices = std::move(choices);
  p.validate();
  return p;
}

ParamSpec ParamSpec::when_family(std::string family_label) const {
  ParamSpec p = *this;
  p.family = std::move(family_label);
  return p;
}

void ParamSpec::validate() const {
  if (name.empty()) throw Error(ErrorCode::kInvalidSpace, "parameter without a name");
  if (kind == ParamKind::kContinuous) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
      throw Error(ErrorCode::kInvalidSpace,
                  "parameter '" + name + "' needs finite bounds with lo < hi");
    }
    if (scale == Scale::kLog10 && !(lo > 0.0)) {
      throw Error(ErrorCode::kInvalidSpace,
                  "log-scale parameter '" + name + "' needs lo > 0");
    }
  } else {
    if (choices.empty()) {
      throw Error(ErrorCode::kInvalidSpace,
                  "categorical parameter '" + name + "' has no choices");
    }
    std::set<std::string> seen(choices.begin(), choices.end());
    if (seen.size() != choices.size()) {
      throw Error(ErrorCode::kInvalidSpace,
                  "categorical parameter '" + name + "' repeats a choice");
    }
  }
}

double ParamSpec::scaled_lo() const { return to_scaled(lo); }
double ParamSpec::scaled_hi() const { return to_scaled(hi); }

double ParamSpec::to_scaled(double value) const {
  return scale == Scale::kLog10 ? std::log10(value) : value;
}

double ParamSpec::from_scaled(double scaled) const {
  return scale == Scale::kLog10 ? std::pow(10.0, scaled) : scaled;
}

const ParamValue* Configuration::find(std::string_view name) const {
  for (const auto& [key, value] : values) {
    if (key == name) return &value;
  }
  return nullptr;
}

double Configuration::real(std::string_view name, double fallback) const {
  const ParamValue* v = find(name);
  if (v == nullptr) return fallback;
  if (const double* d = std::get_if<double>(v)) return *d;
  throw Error(ErrorCode::kInvalidArgument,
              "parameter '" + std::string(name) + "' is not continuous");
}

std::string Configuration::label(std::string_view name,
                                 std::string fallback) const {
  const ParamValue* v = find(name);
  if (v == nullptr) return fallback;
  if (const std::string* s = std::get_if<std::string>(v)) return *s;
  throw Error(ErrorCode::kInvalidArgument,
              "parameter '" + std::string(name) + "' is not categorical");
}

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

std::string Configuration::to_string() const {
  std::string out = "family=" + family;
  for (const auto& [key, value] : values) {
    out += ';';
    out += key;
    out += '=';
    if (const double* d = std::get_if<double>(&value)) {
      out += format_double(*d);
    } else {
      out += std::get<std::string>(value);
    }
  }
  return out;
}

SearchSpace::SearchSpace(std::vector<ParamSpec> params,
                         std::optional<ParamSpec> family_param,
                         std::string default_family)
    : params_(std::move(params)),
      family_param_(std::move(family_param)),
      default_family_(std::move(default_family)) {
  if (family_param_) {
    family_param_->validate();
    if (family_param_->kind != ParamKind::kCategorical) {
      throw Error(ErrorCode::kInvalidSpace, "family parameter must be categorical");
    }
  }
  const std::vector<std::string> fams = families();
  for (const ParamSpec& p : params_) {
    p.validate();
    if (p.family && std::find(fams.begin(), fams.end(), *p.family) == fams.end()) {
      throw Error(ErrorCode::kInvalidSpace,
                  "parameter '" + p.name + "' references unknown family '" +
                      *p.family + "'");
    }
  }
  for (const std::string& f : fams) {
    std::set<std::string> names;
    for (const ParamSpec* p : active_params(f)) {
      if (!names.insert(p->name).second) {
        throw Error(ErrorCode::kInvalidSpace,
                    "duplicate parameter '" + p->name + "' in family '" + f + "'");
      }
    }
  }
}

std::vector<std::string> SearchSpace::families() const {
  if (family_param_) return family_param_->choices;
  return {default_family_};
}

std::vector<const ParamSpec*> SearchSpace::active_params(
    std::string_view family) const {
  std::vector<const ParamSpec*> out;
  for (const ParamSpec& p : params_) {
    if (!p.family || *p.family == family) out.push_back(&p);
  }
  return out;
}

std::vector<const ParamSpec*> SearchSpace::active_continuous(
    std::string_view family) const {
  std::vector<const ParamSpec*> out;
  for (const ParamSpec* p : active_params(family)) {
    if (p->is_continuous()) out.push_back(p);
  }
  return out;
}

bool SearchSpace::has_categorical(std::string_view family) const {
  for (const ParamSpec* p : active_params(family)) {
    if (!p->is_continuous()) return true;
  }
  return false;
}

void SearchSpace::require_nonempty() const {
  if (empty()) throw Error(ErrorCode::kInvalidSpace, "search space has no parameters");
}

void SearchSpace::validate(const Configuration& config) const {
  const std::vector<std::string> fams = families();
  if (std::find(fams.begin(), fams.end(), config.family) == fams.end()) {
    throw Error(ErrorCode::kInvalidArgument, "unknown family '" + config.family + "'");
  }
  const auto active = active_params(config.family);
  if (active.size() != config.values.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "configuration does not match the active parameters of '" +
                    config.family + "'");
  }
  for (std::size_t i = 0; i < active.size(); ++i) {
    const ParamSpec& p = *active[i];
    const auto& [key, value] = config.values[i];
    if (key != p.name) {
      throw Error(ErrorCode::kInvalidArgument,
                  "expected parameter '" + p.name + "', found '" + key + "'");
    }
    if (p.is_continuous()) {
      const double* d = std::get_if<double>(&value);
      if (d == nullptr || !(*d >= p.lo && *d <= p.hi)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "value of '" + p.name + "' outside its bounds");
      }
    } else {
      const std::string* s = std::get_if<std::string>(&value);
      if (s == nullptr ||
          std::find(p.choices.begin(), p.choices.end(), *s) == p.choices.end()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "value of '" + p.name + "' is not a declared choice");
      }
    }
  }
}

bool SearchSpace::contains(const Configuration& config) const {
  try {
    validate(config);
    return true;
  } catch (const Error&) {
    return false;
  }
}

namespace {

// Largest m with m^dims <= budget.
std::size_t points_per_dim(std::size_t budget, std::size_t dims) {
  auto fits = [&](std::size_t m) {
    double total = 1.0;
    for (std::size_t i = 0; i < dims; ++i) total *= static_cast<double>(m);
    return total <= static_cast<double>(budget);
  };
  auto m = static_cast<std::size_t>(
      std::floor(std::pow(static_cast<double>(budget), 1.0 / static_cast<double>(dims))));
  m = std::max<std::size_t>(m, 1);
  while (fits(m + 1)) ++m;
  while (m > 1 && !fits(m)) --m;
  return m;
}

std::vector<ParamValue> axis_values(const ParamSpec& p, std::size_t m) {
  std::vector<ParamValue> axis;
  if (!p.is_continuous()) {
    for (const std::string& c : p.choices) axis.emplace_back(c);
    return axis;
  }
  if (m == 1) {
    axis.emplace_back(p.lo);
    return axis;
  }
  const double a = p.scaled_lo();
  const double b = p.scaled_hi();
  for (std::size_t i = 0; i < m; ++i) {
    if (i == 0) {
      axis.emplace_back(p.lo);
    } else if (i + 1 == m) {
      axis.emplace_back(p.hi);
    } else {
      const double s = a + (b - a) * static_cast<double>(i) / static_cast<double>(m - 1);
      axis.emplace_back(std::clamp(p.from_scaled(s), p.lo, p.hi));
    }
  }
  return axis;
}

}  // namespace

std::vector<Configuration> grid_points(const SearchSpace& space,
                                       std::size_t budget) {
  space.require_nonempty();
  if (budget < 1) throw Error(ErrorCode::kInvalidArgument, "grid budget must be >= 1");
  const std::vector<std::string> fams = space.families();
  const std::size_t per_family = budget / fams.size();
  if (per_family == 0) {
    throw Error(ErrorCode::kInfeasibleGrid,
                "budget smaller than the number of model families");
  }

  std::vector<Configuration> grid;
  for (const std::string& family : fams) {
    const auto active = space.active_params(family);
    std::size_t combos = 1;
    std::size_t dims = 0;
    for (const ParamSpec* p : active) {
      if (p->is_continuous()) {
        ++dims;
      } else {
        combos *= p->choices.size();
      }
    }
    if (per_family < combos) {
      throw Error(ErrorCode::kInfeasibleGrid,
                  "budget smaller than the number of categorical combinations");
    }
    const std::size_t m = dims == 0 ? 1 : points_per_dim(per_family / combos, dims);

    std::vector<std::vector<ParamValue>> axes;
    for (const ParamSpec* p : active) axes.push_back(axis_values(*p, m));

    std::size_t total = 1;
    for (const auto& axis : axes) total *= axis.size();
    for (std::size_t flat = 0; flat < total; ++flat) {
      // Row-major: the last dimension varies fastest.
      std::vector<std::size_t> idx(axes.size());
      std::size_t rem = flat;
      for (std::size_t d = axes.size(); d-- > 0;) {
        idx[d] = rem % axes[d].size();
        rem /= axes[d].size();
      }
      Configuration c;
      c.family = family;
      for (std::size_t d = 0; d < axes.size(); ++d) {
        c.values.emplace_back(active[d]->name, axes[d][idx[d]]);
      }
      grid.push_back(std::move(c));
    }
  }
  return grid;
}

Configuration sample_uniform(const SearchSpace& space, Rng& rng) {
  space.require_nonempty();
  const std::vector<std::string> fams = space.families();
  Configuration c;
  if (fams.size() == 1) {
    c.family = fams.front();
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, fams.size() - 1);
    c.family = fams[pick(rng)];
  }
  for (const ParamSpec* p : space.active_params(c.family)) {
    if (p->is_continuous()) {
      std::uniform_real_distribution<double> u(p->scaled_lo(), p->scaled_hi());
      c.values.emplace_back(p->name, std::clamp(p->from_scaled(u(rng)), p->lo, p->hi));
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, p->choices.size() - 1);
      c.values.emplace_back(p->name, p->choices[pick(rng)]);
    }
  }
  return c;
}

ClipResult clip(const SearchSpace& space, std::span<const double> raw,
                std::string_view family) {
  const auto active = space.active_params(family);
  if (space.has_categorical(family)) {
    throw Error(ErrorCode::kInvalidArgument,
                "clip needs a continuous-only family branch");
  }
  if (raw.size() != active.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "clip expects " + std::to_string(active.size()) +
                    " coordinates, got " + std::to_string(raw.size()));
  }
  ClipResult out;
  out.config.family = std::string(family);
  for (std::size_t i = 0; i < active.size(); ++i) {
    const ParamSpec& p = *active[i];
    const double a = p.scaled_lo();
    const double b = p.scaled_hi();
    double s = raw[i];
    if (!(s >= a)) {
      s = a;
      out.penalized = true;
    } else if (s > b) {
      s = b;
      out.penalized = true;
    }
    double value;
    if (s == a) {
      value = p.lo;
    } else if (s == b) {
      value = p.hi;
    } else {
      value = std::clamp(p.from_scaled(s), p.lo, p.hi);
    }
    out.config.values.emplace_back(p.name, value);
  }
  return out;
}

namespace {

ParamSpec param_from_json(const json& j) {
  ParamSpec p;
  p.name = j.at("name").get<std::string>();
  const std::string kind = j.value("kind", std::string("continuous"));
  if (kind == "continuous") {
    p.kind = ParamKind::kContinuous;
    p.lo = j.at("lo").get<double>();
    p.hi = j.at("hi").get<double>();
    const std::string scale = j.value("scale", std::string("linear"));
    if (scale == "linear") {
      p.scale = Scale::kLinear;
    } else if (scale == "log10") {
      p.scale = Scale::kLog10;
    } else {
      throw Error(ErrorCode::kInvalidSpace, "unknown scale '" + scale + "'");
    }
  } else if (kind == "categorical") {
    p.kind = ParamKind::kCategorical;
    p.choices = j.at("choices").get<std::vector<std::string>>();
  } else {
    throw Error(ErrorCode::kInvalidSpace, "unknown parameter kind '" + kind + "'");
  }
  if (j.contains("family")) p.family = j.at("family").get<std::string>();
  p.validate();
  return p;
}

json param_to_json(const ParamSpec& p) {
  json j;
  j["name"] = p.name;
  if (p.is_continuous()) {
    j["kind"] = "continuous";
    j["lo"] = p.lo;
    j["hi"] = p.hi;
    j["scale"] = p.scale == Scale::kLog10 ? "log10" : "linear";
  } else {
    j["kind"] = "categorical";
    j["choices"] = p.choices;
  }
  if (p.family) j["family"] = *p.family;
  return j;
}

}  // namespace

SearchSpace parse_space(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("space document: ") + e.what());
  }
  try {
    std::optional<ParamSpec> family;
    if (doc.contains("family")) {
      json f = doc.at("family");
      if (!f.contains("name")) f["name"] = "family";
      f["kind"] = "categorical";
      family = param_from_json(f);
    }
    std::vector<ParamSpec> params;
    for (const json& j : doc.value("params", json::array())) {
      params.push_back(param_from_json(j));
    }
    return SearchSpace(std::move(params), std::move(family),
                       doc.value("default_family", std::string("logistic")));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidSpace, std::string("space document: ") + e.what());
  }
}

SearchSpace load_space(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open space file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_space(buf.str());
}

std::string space_to_json(const SearchSpace& space) {
  json doc;
  if (space.family_param()) {
    doc["family"] = {{"name", space.family_param()->name},
                     {"choices", space.family_param()->choices}};
  } else {
    doc["default_family"] = space.families().front();
  }
  doc["params"] = json::array();
  for (const ParamSpec& p : space.params()) doc["params"].push_back(param_to_json(p));
  return doc.dump(2);
}

}  // namespace paq
