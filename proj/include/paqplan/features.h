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

#ifndef PAQPLAN_FEATURES_H_
#define PAQPLAN_FEATURES_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "paqplan/data.h"

namespace paq {

enum class ProjectionDistribution { kGaussian, kCauchy };

ProjectionDistribution parse_distribution(std::string_view name);
std::string_view distribution_name(ProjectionDistribution dist);

// Random cosine features: z(x)_j = sqrt(2/D) cos(g_j . x + b_j). Gaussian
// projections approximate the RBF kernel exp(-scale^2 |x - x'|^2 / 2),
// Cauchy projections the Laplacian kernel exp(-scale |x - x'|_1).
struct FeatureMap {
  enum class Kind { kIdentity, kRandomCosine };

  Kind kind = Kind::kIdentity;
  Eigen::MatrixXd projection;  // d_in x D
  Vector offsets;              // D, uniform on [0, 2 pi)
  ProjectionDistribution distribution = ProjectionDistribution::kGaussian;
  double scale = 1.0;
  double skew = 0.0;  // location shift applied to every projection entry
  std::uint64_t seed = 0;

  static FeatureMap identity();
  static FeatureMap random_cosine(std::size_t input_dim, std::size_t output_dim,
                                  ProjectionDistribution distribution, double scale,
                                  double skew, std::uint64_t seed);

  std::size_t output_dim(std::size_t input_dim) const;
};

Matrix random_features(const Matrix& X, const FeatureMap& map);

// Identity maps return X unchanged.
Matrix apply_feature_map(const Matrix& X, const FeatureMap& map);

}  // namespace paq

#endif  // PAQPLAN_FEATURES_H_
