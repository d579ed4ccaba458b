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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "paqplan/error.h"
#include "paqplan/search.h"

namespace paq {

namespace {

// Parzen estimator over one continuous parameter in declared-scale
// coordinates: a Gaussian per observation plus a uniform prior over [a, b].
struct Parzen {
  std::vector<double> centers;
  double bandwidth = 1.0;
  double a = 0.0;
  double b = 1.0;

  double weight() const { return 1.0 / static_cast<double>(centers.size() + 1); }

  double log_pdf(double x) const {
    const double w = weight();
    double p = w / (b - a);
    for (double c : centers) {
      const double z = (x - c) / bandwidth;
      p += w * std::exp(-0.5 * z * z) / (bandwidth * std::sqrt(2.0 * std::numbers::pi));
    }
    return std::log(p);
  }

  double sample(Rng& rng) const {
    std::uniform_int_distribution<std::size_t> pick(0, centers.size());
    const std::size_t k = pick(rng);
    double x;
    if (k == centers.size()) {
      x = std::uniform_real_distribution<double>(a, b)(rng);
    } else {
      x = std::normal_distribution<double>(centers[k], bandwidth)(rng);
    }
    return std::clamp(x, a, b);
  }
};

Parzen fit_parzen(const ParamSpec& p, std::vector<double> points) {
  Parzen out;
  out.a = p.scaled_lo();
  out.b = p.scaled_hi();
  const double range = out.b - out.a;
  out.centers = std::move(points);
  const double m = static_cast<double>(out.centers.size());
  double sd = 0.0;
  if (out.centers.size() > 1) {
    double mean = 0.0;
    for (double c : out.centers) mean += c / m;
    for (double c : out.centers) sd += (c - mean) * (c - mean);
    sd = std::sqrt(sd / (m - 1.0));
  }
  const double silverman = out.centers.empty() ? range : 1.06 * sd * std::pow(m, -0.2);
  out.bandwidth = std::max(silverman, 0.01 * range);
  return out;
}

// Smoothed frequency table over the choices of a categorical parameter.
struct Frequencies {
  std::vector<std::string> choices;
  std::vector<double> prob;

  double log_pmf(const std::string& label) const {
    for (std::size_t i = 0; i < choices.size(); ++i) {
      if (choices[i] == label) return std::log(prob[i]);
    }
    return -std::numeric_limits<double>::infinity();
  }

  const std::string& sample(Rng& rng) const {
    std::discrete_distribution<std::size_t> pick(prob.begin(), prob.end());
    return choices[pick(rng)];
  }
};

Frequencies fit_frequencies(std::vector<std::string> choices,
                            const std::vector<std::string>& seen) {
  Frequencies out;
  out.prob.assign(choices.size(), 1.0);
  for (const std::string& s : seen) {
    for (std::size_t i = 0; i < choices.size(); ++i) {
      if (choices[i] == s) out.prob[i] += 1.0;
    }
  }
  const double total = static_cast<double>(choices.size() + seen.size());
  for (double& v : out.prob) v /= total;
  out.choices = std::move(choices);
  return out;
}

struct Density {
  Frequencies family;
  // Per family, per active parameter: exactly one of the two is used.
  std::vector<std::vector<Parzen>> continuous;
  std::vector<std::vector<Frequencies>> categorical;
};

Density fit_density(const SearchSpace& space, const std::vector<std::string>& families,
                    const std::vector<const HistoryRecord*>& obs) {
  Density d;
  std::vector<std::string> seen_families;
  for (const HistoryRecord* r : obs) seen_families.push_back(r->config.family);
  d.family = fit_frequencies(families, seen_families);
  for (const std::string& fam : families) {
    std::vector<Parzen> cont;
    std::vector<Frequencies> cat;
    for (const ParamSpec* p : space.active_params(fam)) {
      std::vector<double> points;
      std::vector<std::string> labels;
      for (const HistoryRecord* r : obs) {
        if (r->config.family != fam) continue;
        const ParamValue* v = r->config.find(p->name);
        if (!v) continue;
        if (p->is_continuous() && std::holds_alternative<double>(*v)) {
          points.push_back(p->to_scaled(std::get<double>(*v)));
        } else if (!p->is_continuous() && std::holds_alternative<std::string>(*v)) {
          labels.push_back(std::get<std::string>(*v));
        }
      }
      if (p->is_continuous()) {
        cont.push_back(fit_parzen(*p, std::move(points)));
        cat.emplace_back();
      } else {
        cont.emplace_back();
        cat.push_back(fit_frequencies(p->choices, labels));
      }
    }
    d.continuous.push_back(std::move(cont));
    d.categorical.push_back(std::move(cat));
  }
  return d;
}

}  // namespace

TpeStrategy::TpeStrategy(const SearchSpace& space, std::uint64_t seed, TpeSettings settings)
    : space_(space), rng_(seed), settings_(settings) {
  space_.require_nonempty();
  if (!(settings_.gamma > 0.0 && settings_.gamma < 1.0) || settings_.n_candidates == 0) {
    throw Error(ErrorCode::kInvalidArgument, "tpe needs 0 < gamma < 1 and n_candidates >= 1");
  }
}

std::vector<Configuration> TpeStrategy::propose(std::size_t free_slots, const History& history) {
  std::vector<HistoryRecord> observations;
  for (HistoryRecord& r : latest_per_model(history)) {
    if (r.val_error && std::isfinite(*r.val_error)) observations.push_back(std::move(r));
  }
  std::vector<Configuration> out;
  out.reserve(free_slots);
  for (std::size_t i = 0; i < free_slots; ++i) out.push_back(propose_one(observations));
  return out;
}

Configuration TpeStrategy::propose_one(const std::vector<HistoryRecord>& observations) {
  if (observations.size() < std::max<std::size_t>(settings_.n_startup, 2)) {
    return sample_uniform(space_, rng_);
  }
  std::vector<const HistoryRecord*> sorted;
  for (const HistoryRecord& r : observations) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(), [](const HistoryRecord* a, const HistoryRecord* b) {
    return *a->val_error < *b->val_error;
  });
  const std::size_t n_good = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(settings_.gamma * static_cast<double>(sorted.size()))));
  if (n_good >= sorted.size()) return sample_uniform(space_, rng_);
  const std::vector<const HistoryRecord*> good(sorted.begin(), sorted.begin() + n_good);
  const std::vector<const HistoryRecord*> bad(sorted.begin() + n_good, sorted.end());

  const std::vector<std::string> families = space_.families();
  const Density l = fit_density(space_, families, good);
  const Density g = fit_density(space_, families, bad);

  Configuration best;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < settings_.n_candidates; ++k) {
    Configuration c;
    double score = 0.0;
    std::size_t f = 0;
    if (families.size() > 1) {
      c.family = l.family.sample(rng_);
      while (families[f] != c.family) ++f;
      score += l.family.log_pmf(c.family) - g.family.log_pmf(c.family);
    } else {
      c.family = families.front();
    }
    const auto active = space_.active_params(c.family);
    for (std::size_t i = 0; i < active.size(); ++i) {
      const ParamSpec& p = *active[i];
      if (p.is_continuous()) {
        const double s = l.continuous[f][i].sample(rng_);
        score += l.continuous[f][i].log_pdf(s) - g.continuous[f][i].log_pdf(s);
        c.values.emplace_back(p.name, std::clamp(p.from_scaled(s), p.lo, p.hi));
      } else {
        const std::string& label = l.categorical[f][i].sample(rng_);
        score += l.categorical[f][i].log_pmf(label) - g.categorical[f][i].log_pmf(label);
        c.values.emplace_back(p.name, label);
      }
    }
    if (k == 0 || score > best_score) {
      best_score = score;
      best = std::move(c);
    }
  }
  return best;
}

}  // namespace paq
