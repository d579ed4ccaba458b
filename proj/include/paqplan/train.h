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

#ifndef PAQPLAN_TRAIN_H_
#define PAQPLAN_TRAIN_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "paqplan/data.h"
#include "paqplan/features.h"
#include "paqplan/space.h"

namespace paq {

// Configuration keys understood by the trainers.
namespace keys {
inline constexpr std::string_view kLearningRate = "lr";
inline constexpr std::string_view kRegularization = "reg";
inline constexpr std::string_view kProjection = "proj";   // D = round(proj * d_in)
inline constexpr std::string_view kNoise = "noise";       // projection scale
inline constexpr std::string_view kDistribution = "dist"; // gaussian | cauchy
inline constexpr std::string_view kSkew = "skew";
}  // namespace keys

inline constexpr double kDefaultLearningRate = 1e-3;

enum class ModelFamily { kLogistic, kLinearSvm };

ModelFamily parse_family(std::string_view name);
std::string_view family_name(ModelFamily family);

double sigma(double z);

// Per-example loops: sum_i (sigma(w.x_i) - y_i) x_i + lambda w.
Vector logistic_gradient(const Vector& w, const Matrix& X, const Vector& y, double lambda);

// X^T (sigma(X W) - Y) + W diag(lambda), as two dense matrix products.
Eigen::MatrixXd batched_gradient(const Eigen::MatrixXd& W, const Matrix& X, const Vector& y,
                                 double lambda);
Eigen::MatrixXd batched_gradient(const Eigen::MatrixXd& W, const Matrix& X, const Vector& y,
                                 std::span<const double> lambdas);

// Labels are {0,1} and mapped to -1/+1 internally:
// lambda w - sum_{i : y_i w.x_i < 1} y_i x_i.
Vector hinge_subgradient(const Vector& w, const Matrix& X, const Vector& y, double lambda);
Eigen::MatrixXd batched_hinge_subgradient(const Eigen::MatrixXd& W, const Matrix& X,
                                          const Vector& y, std::span<const double> lambdas);

// The data term of the family's gradient (no regularization) over a block of
// rows; the shape is d x k whatever the block length.
Eigen::MatrixXd gradient_data_term(ModelFamily family, const Eigen::MatrixXd& W,
                                   const Eigen::Ref<const Matrix>& X,
                                   const Eigen::Ref<const Vector>& y);

enum class GradientKernel {
  kMatrix,  // shared scan, two matrix products per iteration
  kNaive,   // one loop over the data per model
};

// Same contract as batched_gradient / batched_hinge_subgradient, computed
// model by model with per-example loops.
Eigen::MatrixXd naive_batched_gradient(ModelFamily family, const Eigen::MatrixXd& W,
                                       const Matrix& X, const Vector& y,
                                       std::span<const double> lambdas);

struct ModelState {
  std::size_t id = 0;
  ModelFamily family = ModelFamily::kLogistic;
  Configuration config;
  Vector weights;
  std::size_t iterations_used = 0;
  std::optional<double> val_error;
  bool diverged = false;
};

// Training data behind a pass counter. `passes` counts physical reads of the
// matrix, `model_passes` the model-iterations those reads served.
class TrainingSource {
 public:
  explicit TrainingSource(const Dataset& data) : data_(&data) {}

  const Dataset& read(std::size_t models) {
    ++passes_;
    model_passes_ += models;
    return *data_;
  }
  const Dataset& peek() const { return *data_; }
  std::uint64_t passes() const { return passes_; }
  std::uint64_t model_passes() const { return model_passes_; }

 private:
  const Dataset* data_;
  std::uint64_t passes_ = 0;
  std::uint64_t model_passes_ = 0;
};

struct TrainOptions {
  GradientKernel kernel = GradientKernel::kMatrix;
  bool minibatch = false;
  double minibatch_fraction = 0.1;  // of each partition, contiguous
};

// k models sharing one family and feature space; column j of `W` mirrors
// members[j].weights between iterations.
struct ModelBatch {
  Eigen::MatrixXd W;
  std::vector<ModelState> members;

  static ModelBatch assemble(std::vector<ModelState> members);
  void scatter();  // copies columns back into member weights
};

// Runs `iters` gradient steps for every member, reading the training data
// once per step, then records each member's validation error. Members whose
// weights stop being finite are frozen with val_error 1.0.
void train_partial(ModelBatch& batch, TrainingSource& train, const Dataset& validation,
                   std::size_t iters, const TrainOptions& options = {});

// Misclassification rate; predicts 1 when w.x >= 0 for both families.
double evaluate(const ModelState& model, const Dataset& split);
double evaluate(ModelFamily family, const Vector& weights, const Dataset& split);

struct FeatureSpec {
  bool random = false;
  double projection_factor = 1.0;
  double scale = 1.0;
  double skew = 0.0;
  ProjectionDistribution distribution = ProjectionDistribution::kGaussian;

  static FeatureSpec from_config(const Configuration& config);
  std::string key() const;
  std::size_t output_dim(std::size_t input_dim) const;
};

struct TrainerOptions {
  TrainOptions train;
  std::uint64_t feature_seed = 17;
  // Expanded feature spaces train on base_rows * d_in / D rows (at least this
  // many, at most base_rows).
  std::size_t min_expanded_rows = 1000;
};

// Builds models from configurations and trains groups of them on a split,
// expanding features per configuration and caching the expansions that are
// still in use.
class ModelTrainer {
 public:
  ModelTrainer(const DataSplit& split, TrainerOptions options = {});
  ~ModelTrainer();
  ModelTrainer(const ModelTrainer&) = delete;
  ModelTrainer& operator=(const ModelTrainer&) = delete;

  ModelState create(const Configuration& config, std::size_t id) const;

  // Trains every model for `iters` iterations, batching models that share a
  // family and feature space. Models keep their input order.
  void train(std::vector<ModelState>& models, std::size_t iters);

  double test_error(const ModelState& model);

  std::uint64_t passes() const { return passes_; }
  std::uint64_t model_passes() const { return model_passes_; }
  const DataSplit& split() const { return *split_; }

 private:
  struct Expansion;
  Expansion& expansion_for(const FeatureSpec& spec);

  const DataSplit* split_;
  TrainerOptions options_;
  std::map<std::string, std::unique_ptr<Expansion>> cache_;
  std::uint64_t passes_ = 0;
  std::uint64_t model_passes_ = 0;
  std::uint64_t clock_ = 0;
};

}  // namespace paq

#endif  // PAQPLAN_TRAIN_H_
