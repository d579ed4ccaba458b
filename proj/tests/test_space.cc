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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "paqplan/error.h"
#include "paqplan/space.h"

namespace paq {
namespace {

SearchSpace lr_reg() {
  return SearchSpace({ParamSpec::continuous("lr", 1e-3, 1e1, Scale::kLog10),
                      ParamSpec::continuous("reg", 1e-4, 1e2, Scale::kLog10)});
}

SearchSpace four_d() {
  return SearchSpace({ParamSpec::continuous("lr", 1e-3, 1e1, Scale::kLog10),
                      ParamSpec::continuous("reg", 1e-4, 1e2, Scale::kLog10),
                      ParamSpec::continuous("proj", 1, 10),
                      ParamSpec::continuous("noise", 1e-4, 1e2, Scale::kLog10)});
}

SearchSpace two_families() {
  return SearchSpace({ParamSpec::continuous("lr", 1e-4, 1, Scale::kLog10),
                      ParamSpec::categorical("dist", {"gaussian", "cauchy"}).when_family("linear_svm"),
                      ParamSpec::continuous("proj", 1, 4).when_family("linear_svm")},
                     ParamSpec::categorical("family", {"logistic", "linear_svm"}));
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no paq::Error thrown";
  return ErrorCode::kIo;
}

// Random valid space: 1-4 continuous parameters, optionally a categorical one
// and a family split.
SearchSpace random_space(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dims(1, 4);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::bernoulli_distribution coin(0.5);
  std::vector<ParamSpec> params;
  const int n = dims(rng);
  for (int i = 0; i < n; ++i) {
    double a = u(rng), b = u(rng);
    if (a == b) b = a + 1;
    if (a > b) std::swap(a, b);
    if (coin(rng)) {
      params.push_back(ParamSpec::continuous("p" + std::to_string(i), std::pow(10.0, a),
                                             std::pow(10.0, b), Scale::kLog10));
    } else {
      params.push_back(ParamSpec::continuous("p" + std::to_string(i), a, b));
    }
  }
  if (coin(rng)) params.push_back(ParamSpec::categorical("c", {"x", "y", "z"}));
  if (coin(rng)) {
    params.push_back(ParamSpec::continuous("only_svm", 0, 1).when_family("linear_svm"));
    return SearchSpace(params, ParamSpec::categorical("family", {"logistic", "linear_svm"}));
  }
  return SearchSpace(params);
}

TEST(ParamSpec, RejectsBrokenBounds) {
  EXPECT_EQ(code_of([] { ParamSpec::continuous("x", 1, 1).validate(); }), ErrorCode::kInvalidSpace);
  EXPECT_EQ(code_of([] { ParamSpec::continuous("x", 0, 1, Scale::kLog10).validate(); }),
            ErrorCode::kInvalidSpace);
  EXPECT_EQ(code_of([] { ParamSpec::categorical("c", {}).validate(); }), ErrorCode::kInvalidSpace);
  EXPECT_EQ(code_of([] { ParamSpec::categorical("c", {"a", "a"}).validate(); }),
            ErrorCode::kInvalidSpace);
}

TEST(SearchSpace, RejectsDuplicateNamesAndUnknownFamilies) {
  EXPECT_EQ(code_of([] {
              SearchSpace({ParamSpec::continuous("x", 0, 1), ParamSpec::continuous("x", 0, 2)});
            }),
            ErrorCode::kInvalidSpace);
  EXPECT_EQ(code_of([] {
              SearchSpace({ParamSpec::continuous("x", 0, 1).when_family("tree")},
                          ParamSpec::categorical("family", {"logistic"}));
            }),
            ErrorCode::kInvalidSpace);
}

TEST(Grid, FourCornersOnLogScale) {
  const auto grid = grid_points(lr_reg(), 4);
  ASSERT_EQ(grid.size(), 4u);
  const double expect[4][2] = {{1e-3, 1e-4}, {1e-3, 1e2}, {1e1, 1e-4}, {1e1, 1e2}};
  for (int i = 0; i < 4; ++i) {
    EXPECT_DOUBLE_EQ(grid[i].real("lr", 0), expect[i][0]);
    EXPECT_DOUBLE_EQ(grid[i].real("reg", 0), expect[i][1]);
  }
}

TEST(Grid, MidpointIsExponentMidpoint) {
  const auto grid = grid_points(lr_reg(), 9);
  ASSERT_EQ(grid.size(), 9u);
  EXPECT_NEAR(grid[4].real("lr", 0), 1e-1, 1e-15);
  EXPECT_NEAR(grid[4].real("reg", 0), 1e-1, 1e-15);
}

TEST(Grid, FourDimensionalBudgets) {
  const SearchSpace s = four_d();
  for (std::size_t n = 2; n <= 5; ++n) {
    const std::size_t budget = n * n * n * n;
    const auto grid = grid_points(s, budget);
    EXPECT_EQ(grid.size(), budget);
    std::set<double> lrs;
    for (const auto& c : grid) lrs.insert(c.real("lr", 0));
    EXPECT_EQ(lrs.size(), n);
    // One less than a perfect power drops to the next grid down.
    EXPECT_EQ(grid_points(s, budget - 1).size(), (n - 1) * (n - 1) * (n - 1) * (n - 1));
  }
}

TEST(Grid, BudgetOneGivesLowCorner) {
  const auto grid = grid_points(lr_reg(), 1);
  ASSERT_EQ(grid.size(), 1u);
  EXPECT_DOUBLE_EQ(grid[0].real("lr", 0), 1e-3);
  EXPECT_DOUBLE_EQ(grid[0].real("reg", 0), 1e-4);
}

TEST(Grid, LastDimensionVariesFastest) {
  const auto grid = grid_points(lr_reg(), 9);
  EXPECT_EQ(grid[0].real("lr", 0), grid[1].real("lr", 0));
  EXPECT_NE(grid[0].real("reg", 0), grid[1].real("reg", 0));
}

TEST(Grid, Errors) {
  EXPECT_EQ(code_of([] { grid_points(SearchSpace(), 4); }), ErrorCode::kInvalidSpace);
  const SearchSpace cats({ParamSpec::categorical("a", {"x", "y"}),
                          ParamSpec::categorical("b", {"u", "v", "w"})});
  EXPECT_EQ(code_of([&] { grid_points(cats, 5); }), ErrorCode::kInfeasibleGrid);
  EXPECT_EQ(grid_points(cats, 6).size(), 6u);
  EXPECT_EQ(code_of([] { grid_points(lr_reg(), 0); }), ErrorCode::kInvalidArgument);
}

TEST(Grid, PropertySizeWithinBudgetAndValid) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> budgets(1, 700);
  for (int trial = 0; trial < 300; ++trial) {
    const SearchSpace s = random_space(rng);
    const std::size_t b = budgets(rng);
    std::vector<Configuration> grid;
    try {
      grid = grid_points(s, b);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInfeasibleGrid);
      continue;
    }
    EXPECT_LE(grid.size(), b);
    EXPECT_FALSE(grid.empty());
    for (const auto& c : grid) EXPECT_TRUE(s.contains(c)) << c.to_string();
    EXPECT_EQ(grid, grid_points(s, b));
  }
}

TEST(Sample, SameSeedSameSequence) {
  const SearchSpace s = two_families();
  Rng a(5), b(5);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sample_uniform(s, a), sample_uniform(s, b));
}

TEST(Sample, LogScaleExponentMean) {
  const SearchSpace s = lr_reg();
  Rng rng(99);
  double sum = 0;
  for (int i = 0; i < 10000; ++i) sum += std::log10(sample_uniform(s, rng).real("lr", 0));
  EXPECT_NEAR(sum / 10000, -1.0, 0.1);
}

TEST(Sample, FamiliesDrawnUniformly) {
  const SearchSpace s = two_families();
  Rng rng(3);
  int svm = 0;
  for (int i = 0; i < 4000; ++i) {
    const Configuration c = sample_uniform(s, rng);
    if (c.family == "linear_svm") {
      ++svm;
      EXPECT_NE(c.find("dist"), nullptr);
    } else {
      EXPECT_EQ(c.find("dist"), nullptr);
    }
  }
  EXPECT_NEAR(svm / 4000.0, 0.5, 0.03);
}

TEST(Sample, PropertyAlwaysValid) {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 200; ++trial) {
    const SearchSpace s = random_space(gen);
    Rng rng(trial);
    for (int i = 0; i < 20; ++i) EXPECT_TRUE(s.contains(sample_uniform(s, rng)));
  }
}

TEST(Clip, ClampsAndFlags) {
  const SearchSpace s = lr_reg();
  const double out[] = {5.0, -1.0};
  ClipResult r = clip(s, out, "logistic");
  EXPECT_TRUE(r.penalized);
  EXPECT_DOUBLE_EQ(r.config.real("lr", 0), 10.0);
  EXPECT_NEAR(r.config.real("reg", 0), 0.1, 1e-15);

  const double inside[] = {-2.0, 0.0};
  r = clip(s, inside, "logistic");
  EXPECT_FALSE(r.penalized);
  EXPECT_NEAR(r.config.real("lr", 0), 1e-2, 1e-16);

  const double edge[] = {1.0, -4.0};
  r = clip(s, edge, "logistic");
  EXPECT_FALSE(r.penalized);
  EXPECT_DOUBLE_EQ(r.config.real("lr", 0), 10.0);
  EXPECT_DOUBLE_EQ(r.config.real("reg", 0), 1e-4);
}

TEST(Clip, Errors) {
  const double one[] = {0.0};
  EXPECT_EQ(code_of([&] { clip(lr_reg(), one, "logistic"); }), ErrorCode::kInvalidArgument);
  const double two[] = {0.0, 0.0};
  EXPECT_EQ(code_of([&] { clip(two_families(), two, "linear_svm"); }),
            ErrorCode::kInvalidArgument);
}

TEST(Clip, PropertyResultAlwaysValid) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> wide(0.0, 10.0);
  const SearchSpace s = four_d();
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> raw(4);
    bool outside = false;
    const auto active = s.active_continuous("logistic");
    for (std::size_t j = 0; j < 4; ++j) {
      raw[j] = wide(rng);
      outside |= raw[j] < active[j]->scaled_lo() || raw[j] > active[j]->scaled_hi();
    }
    const ClipResult r = clip(s, raw, "logistic");
    EXPECT_TRUE(s.contains(r.config));
    EXPECT_EQ(r.penalized, outside);
  }
}

TEST(Validate, ChecksActiveParameters) {
  const SearchSpace s = two_families();
  Configuration c{"logistic", {{"lr", 0.01}}};
  EXPECT_TRUE(s.contains(c));
  c.values.emplace_back("proj", 2.0);
  EXPECT_FALSE(s.contains(c));
  Configuration out{"logistic", {{"lr", 5.0}}};
  EXPECT_FALSE(s.contains(out));
  EXPECT_EQ(code_of([&] { s.validate(out); }), ErrorCode::kInvalidArgument);
}

TEST(SpaceJson, RoundTrip) {
  for (const SearchSpace& s : {lr_reg(), four_d(), two_families()}) {
    const std::string text = space_to_json(s);
    EXPECT_EQ(space_to_json(parse_space(text)), text);
    EXPECT_EQ(grid_points(parse_space(text), 36), grid_points(s, 36));
  }
}

TEST(SpaceJson, Errors) {
  EXPECT_EQ(code_of([] { parse_space("{not json"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { parse_space(R"({"params":[{"name":"x","lo":2,"hi":1}]})"); }),
            ErrorCode::kInvalidSpace);
  EXPECT_EQ(code_of([] { load_space("/nonexistent/space.json"); }), ErrorCode::kIo);
}

TEST(Configuration, FormatsDoublesExactly) {
  const double v = 0.1 + 0.2;
  Configuration c{"logistic", {{"lr", v}}};
  const std::string s = c.to_string();
  EXPECT_EQ(std::stod(s.substr(s.find("lr=") + 3)), v);
}

}  // namespace
}  // namespace paq
