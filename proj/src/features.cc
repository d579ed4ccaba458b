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

#include "paqplan/features.h"

#include <cmath>
#include <numbers>
#include <random>

#include "paqplan/error.h"

namespace paq {

ProjectionDistribution parse_distribution(std::string_view name) {
  if (name == "gaussian") return ProjectionDistribution::kGaussian;
  if (name == "cauchy") return ProjectionDistribution::kCauchy;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown projection distribution '" + std::string(name) + "'");
}

std::string_view distribution_name(ProjectionDistribution dist) {
  return dist == ProjectionDistribution::kGaussian ? "gaussian" : "cauchy";
}

FeatureMap FeatureMap::identity() { return FeatureMap{}; }

FeatureMap FeatureMap::random_cosine(std::size_t input_dim, std::size_t output_dim,
                                     ProjectionDistribution distribution, double scale,
                                     double skew, std::uint64_t seed) {
  if (output_dim == 0) {
    throw Error(ErrorCode::kInvalidArgument, "random feature dimension must be >= 1");
  }
  if (input_dim == 0) throw Error(ErrorCode::kInvalidArgument, "input dimension must be >= 1");
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw Error(ErrorCode::kInvalidArgument, "random feature scale must be positive");
  }
  FeatureMap map;
  map.kind = Kind::kRandomCosine;
  map.distribution = distribution;
  map.scale = scale;
  map.skew = skew;
  map.seed = seed;

  std::mt19937_64 rng(seed);
  const auto d_in = static_cast<Eigen::Index>(input_dim);
  const auto d_out = static_cast<Eigen::Index>(output_dim);
  map.projection.resize(d_in, d_out);
  if (distribution == ProjectionDistribution::kGaussian) {
    std::normal_distribution<double> draw(skew, scale);
    for (Eigen::Index j = 0; j < d_out; ++j) {
      for (Eigen::Index i = 0; i < d_in; ++i) map.projection(i, j) = draw(rng);
    }
  } else {
    std::cauchy_distribution<double> draw(skew, scale);
    for (Eigen::Index j = 0; j < d_out; ++j) {
      for (Eigen::Index i = 0; i < d_in; ++i) map.projection(i, j) = draw(rng);
    }
  }
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  map.offsets.resize(d_out);
  for (Eigen::Index j = 0; j < d_out; ++j) map.offsets(j) = phase(rng);
  return map;
}

std::size_t FeatureMap::output_dim(std::size_t input_dim) const {
  return kind == Kind::kIdentity ? input_dim : static_cast<std::size_t>(projection.cols());
}

Matrix random_features(const Matrix& X, const FeatureMap& map) {
  if (map.kind != FeatureMap::Kind::kRandomCosine) {
    throw Error(ErrorCode::kInvalidArgument, "random_features needs a random cosine map");
  }
  if (map.projection.cols() < 1) {
    throw Error(ErrorCode::kInvalidArgument, "random feature dimension must be >= 1");
  }
  if (X.cols() != map.projection.rows()) {
    throw Error(ErrorCode::kInvalidArgument, "feature map input dimension mismatch");
  }
  const double norm = std::sqrt(2.0 / static_cast<double>(map.projection.cols()));
  Matrix Z = X * map.projection;
  Z.rowwise() += map.offsets.transpose();
  Z = Z.array().cos() * norm;
  return Z;
}

Matrix apply_feature_map(const Matrix& X, const FeatureMap& map) {
  if (map.kind == FeatureMap::Kind::kIdentity) return X;
  return random_features(X, map);
}

}  // namespace paq
