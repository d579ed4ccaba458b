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

#include "paqplan/train.h"

#include <algorithm>
#include <cmath>

#include "paqplan/error.h"

namespace paq {

ModelFamily parse_family(std::string_view name) {
  if (name == "logistic") return ModelFamily::kLogistic;
  if (name == "linear_svm" || name == "svm") return ModelFamily::kLinearSvm;
  throw Error(ErrorCode::kInvalidArgument, "unknown model family '" + std::string(name) + "'");
}

std::string_view family_name(ModelFamily family) {
  return family == ModelFamily::kLogistic ? "logistic" : "linear_svm";
}

double sigma(double z) { return 1.0 / (1.0 + std::exp(-z)); }

namespace {

void check_shapes(Eigen::Index w_rows, const Matrix& X, const Vector& y) {
  if (w_rows != X.cols()) {
    throw Error(ErrorCode::kInvalidArgument,
                "weights have " + std::to_string(w_rows) + " rows, data has " +
                    std::to_string(X.cols()) + " features");
  }
  if (y.size() != X.rows()) {
    throw Error(ErrorCode::kInvalidArgument, "labels and data rows differ in length");
  }
}

void check_lambda(double lambda) {
  if (!(lambda >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "regularization must be non-negative");
  }
}

Vector lambda_vector(std::span<const double> lambdas, Eigen::Index k) {
  if (static_cast<Eigen::Index>(lambdas.size()) != k) {
    throw Error(ErrorCode::kInvalidArgument, "need one regularization value per model");
  }
  Vector out(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    check_lambda(lambdas[static_cast<std::size_t>(j)]);
    out(j) = lambdas[static_cast<std::size_t>(j)];
  }
  return out;
}

double signed_label(double y) { return y > 0.5 ? 1.0 : -1.0; }

}  // namespace

Vector logistic_gradient(const Vector& w, const Matrix& X, const Vector& y, double lambda) {
  check_shapes(w.size(), X, y);
  check_lambda(lambda);
  Vector g = Vector::Zero(w.size());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double residual = sigma(X.row(i).dot(w)) - y(i);
    g.noalias() += residual * X.row(i).transpose();
  }
  g += lambda * w;
  return g;
}

Vector hinge_subgradient(const Vector& w, const Matrix& X, const Vector& y, double lambda) {
  check_shapes(w.size(), X, y);
  check_lambda(lambda);
  Vector g = Vector::Zero(w.size());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double s = signed_label(y(i));
    if (s * X.row(i).dot(w) < 1.0) g.noalias() -= s * X.row(i).transpose();
  }
  g += lambda * w;
  return g;
}

Eigen::MatrixXd gradient_data_term(ModelFamily family, const Eigen::MatrixXd& W,
                                   const Eigen::Ref<const Matrix>& X,
                                   const Eigen::Ref<const Vector>& y) {
  // Row blocks small enough to stay in cache between the two products, so
  // each block of X is read from memory once per iteration.
  constexpr Eigen::Index kBlock = 64;
  const Eigen::Index n = X.rows();
  const Eigen::Index k = W.cols();
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(W.rows(), k);
  Eigen::MatrixXd scores(std::min(kBlock, n), k);
  for (Eigen::Index r = 0; r < n; r += kBlock) {
    const Eigen::Index len = std::min(kBlock, n - r);
    const auto Xb = X.middleRows(r, len);
    auto S = scores.topRows(len);
    S.noalias() = Xb * W;
    for (Eigen::Index j = 0; j < k; ++j) {
      for (Eigen::Index i = 0; i < len; ++i) {
        if (family == ModelFamily::kLogistic) {
          S(i, j) = sigma(S(i, j)) - y(r + i);
        } else {
          const double s = signed_label(y(r + i));
          S(i, j) = s * S(i, j) < 1.0 ? -s : 0.0;
        }
      }
    }
    G.noalias() += Xb.transpose() * S;
  }
  return G;
}

Eigen::MatrixXd batched_gradient(const Eigen::MatrixXd& W, const Matrix& X, const Vector& y,
                                 std::span<const double> lambdas) {
  check_shapes(W.rows(), X, y);
  const Vector lambda = lambda_vector(lambdas, W.cols());
  Eigen::MatrixXd G = gradient_data_term(ModelFamily::kLogistic, W, X, y);
  G += W * lambda.asDiagonal();
  return G;
}

Eigen::MatrixXd batched_gradient(const Eigen::MatrixXd& W, const Matrix& X, const Vector& y,
                                 double lambda) {
  const std::vector<double> lambdas(static_cast<std::size_t>(W.cols()), lambda);
  return batched_gradient(W, X, y, lambdas);
}

Eigen::MatrixXd batched_hinge_subgradient(const Eigen::MatrixXd& W, const Matrix& X,
                                          const Vector& y, std::span<const double> lambdas) {
  check_shapes(W.rows(), X, y);
  const Vector lambda = lambda_vector(lambdas, W.cols());
  Eigen::MatrixXd G = gradient_data_term(ModelFamily::kLinearSvm, W, X, y);
  G += W * lambda.asDiagonal();
  return G;
}

Eigen::MatrixXd naive_batched_gradient(ModelFamily family, const Eigen::MatrixXd& W,
                                       const Matrix& X, const Vector& y,
                                       std::span<const double> lambdas) {
  check_shapes(W.rows(), X, y);
  const Vector lambda = lambda_vector(lambdas, W.cols());
  Eigen::MatrixXd G(W.rows(), W.cols());
  for (Eigen::Index j = 0; j < W.cols(); ++j) {
    const Vector w = W.col(j);
    G.col(j) = family == ModelFamily::kLogistic ? logistic_gradient(w, X, y, lambda(j))
                                                : hinge_subgradient(w, X, y, lambda(j));
  }
  return G;
}

ModelBatch ModelBatch::assemble(std::vector<ModelState> members) {
  if (members.empty()) throw Error(ErrorCode::kInvalidArgument, "empty model batch");
  ModelBatch batch;
  const Eigen::Index d = members.front().weights.size();
  batch.W.resize(d, static_cast<Eigen::Index>(members.size()));
  for (std::size_t j = 0; j < members.size(); ++j) {
    if (members[j].weights.size() != d || members[j].family != members.front().family) {
      throw Error(ErrorCode::kInvalidArgument,
                  "batch members must share a family and feature space");
    }
    batch.W.col(static_cast<Eigen::Index>(j)) = members[j].weights;
  }
  batch.members = std::move(members);
  return batch;
}

void ModelBatch::scatter() {
  for (std::size_t j = 0; j < members.size(); ++j) {
    members[j].weights = W.col(static_cast<Eigen::Index>(j));
  }
}

namespace {

std::vector<double> validation_errors(const Eigen::MatrixXd& W, const Dataset& split) {
  if (split.rows() == 0) throw Error(ErrorCode::kInvalidArgument, "empty evaluation split");
  if (static_cast<Eigen::Index>(split.cols()) != W.rows()) {
    throw Error(ErrorCode::kInvalidArgument, "model and split dimensions differ");
  }
  const Eigen::MatrixXd scores = split.X * W;
  std::vector<double> errors(static_cast<std::size_t>(W.cols()));
  for (Eigen::Index j = 0; j < W.cols(); ++j) {
    std::size_t wrong = 0;
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
      const double predicted = scores(i, j) >= 0.0 ? 1.0 : 0.0;
      if (predicted != split.y(i)) ++wrong;
    }
    errors[static_cast<std::size_t>(j)] =
        static_cast<double>(wrong) / static_cast<double>(split.rows());
  }
  return errors;
}

}  // namespace

double evaluate(ModelFamily, const Vector& weights, const Dataset& split) {
  Eigen::MatrixXd W = weights;
  return validation_errors(W, split).front();
}

double evaluate(const ModelState& model, const Dataset& split) {
  return evaluate(model.family, model.weights, split);
}

void train_partial(ModelBatch& batch, TrainingSource& train, const Dataset& validation,
                   std::size_t iters, const TrainOptions& options) {
  if (iters < 1) throw Error(ErrorCode::kInvalidArgument, "train_partial needs iters >= 1");
  if (batch.members.empty()) throw Error(ErrorCode::kInvalidArgument, "empty model batch");
  const ModelFamily family = batch.members.front().family;
  const std::size_t k = batch.members.size();
  if (static_cast<Eigen::Index>(train.peek().cols()) != batch.W.rows()) {
    throw Error(ErrorCode::kInvalidArgument, "model and training data dimensions differ");
  }

  std::vector<double> etas(k);
  std::vector<double> lambdas(k);
  for (std::size_t j = 0; j < k; ++j) {
    const Configuration& c = batch.members[j].config;
    etas[j] = c.real(keys::kLearningRate, kDefaultLearningRate);
    lambdas[j] = c.real(keys::kRegularization, 0.0);
  }
  const Vector lambda = lambda_vector(lambdas, static_cast<Eigen::Index>(k));
  const std::size_t start_step = batch.members.front().iterations_used;

  for (std::size_t t = 0; t < iters; ++t) {
    const Dataset& data = train.read(k);
    Eigen::MatrixXd G;
    if (options.minibatch) {
      G = Eigen::MatrixXd::Zero(batch.W.rows(), batch.W.cols());
      const std::vector<RowRange> parts =
          data.partitions.empty() ? std::vector<RowRange>{{0, data.rows()}} : data.partitions;
      for (const RowRange& part : parts) {
        if (part.size() == 0) continue;
        const auto len = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil(options.minibatch_fraction *
                                                  static_cast<double>(part.size()))));
        const std::size_t blocks = (part.size() + len - 1) / len;
        const std::size_t begin = part.begin + ((start_step + t) % blocks) * len;
        const std::size_t count = std::min(len, part.end - begin);
        G += gradient_data_term(
            family, batch.W,
            data.X.middleRows(static_cast<Eigen::Index>(begin), static_cast<Eigen::Index>(count)),
            data.y.segment(static_cast<Eigen::Index>(begin), static_cast<Eigen::Index>(count)));
      }
      G += batch.W * lambda.asDiagonal();
    } else if (options.kernel == GradientKernel::kNaive) {
      G = naive_batched_gradient(family, batch.W, data.X, data.y, lambdas);
    } else if (family == ModelFamily::kLogistic) {
      G = batched_gradient(batch.W, data.X, data.y, lambdas);
    } else {
      G = batched_hinge_subgradient(batch.W, data.X, data.y, lambdas);
    }

    for (std::size_t j = 0; j < k; ++j) {
      ModelState& m = batch.members[j];
      if (m.diverged) continue;
      const auto col = static_cast<Eigen::Index>(j);
      Vector next = batch.W.col(col) - etas[j] * G.col(col);
      if (!next.allFinite()) {
        m.diverged = true;
        continue;
      }
      batch.W.col(col) = next;
    }
  }

  batch.scatter();
  const std::vector<double> errors = validation_errors(batch.W, validation);
  for (std::size_t j = 0; j < k; ++j) {
    ModelState& m = batch.members[j];
    m.iterations_used += iters;
    m.val_error = m.diverged ? 1.0 : errors[j];
  }
}

FeatureSpec FeatureSpec::from_config(const Configuration& config) {
  FeatureSpec spec;
  if (config.find(keys::kProjection) == nullptr) return spec;
  spec.random = true;
  spec.projection_factor = config.real(keys::kProjection, 1.0);
  spec.scale = config.real(keys::kNoise, 1.0);
  spec.skew = config.real(keys::kSkew, 0.0);
  spec.distribution = parse_distribution(config.label(keys::kDistribution, "gaussian"));
  return spec;
}

std::string FeatureSpec::key() const {
  if (!random) return "identity";
  return std::string(distribution_name(distribution)) + ":" + format_double(projection_factor) +
         ":" + format_double(scale) + ":" + format_double(skew);
}

std::size_t FeatureSpec::output_dim(std::size_t input_dim) const {
  if (!random) return input_dim;
  const double D = std::round(projection_factor * static_cast<double>(input_dim));
  return static_cast<std::size_t>(std::max(1.0, D));
}

struct ModelTrainer::Expansion {
  FeatureMap map;
  Dataset owned_train;
  Dataset owned_validation;
  const Dataset* train = nullptr;
  const Dataset* validation = nullptr;
  std::optional<Dataset> test;
  std::unique_ptr<TrainingSource> source;
  std::uint64_t last_used = 0;
};

ModelTrainer::ModelTrainer(const DataSplit& split, TrainerOptions options)
    : split_(&split), options_(options) {
  if (split.train.rows() == 0 || split.validation.rows() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "trainer needs non-empty train and validation splits");
  }
}

ModelTrainer::~ModelTrainer() = default;

ModelState ModelTrainer::create(const Configuration& config, std::size_t id) const {
  ModelState m;
  m.id = id;
  m.family = parse_family(config.family);
  m.config = config;
  const FeatureSpec spec = FeatureSpec::from_config(config);
  m.weights = Vector::Zero(static_cast<Eigen::Index>(spec.output_dim(split_->train.cols())));
  return m;
}

ModelTrainer::Expansion& ModelTrainer::expansion_for(const FeatureSpec& spec) {
  const std::string key = spec.key();
  auto it = cache_.find(key);
  if (it != cache_.end()) return *it->second;

  auto exp = std::make_unique<Expansion>();
  const std::size_t d_in = split_->train.cols();
  if (!spec.random) {
    exp->train = &split_->train;
    exp->validation = &split_->validation;
  } else {
    const std::size_t D = spec.output_dim(d_in);
    exp->map = FeatureMap::random_cosine(d_in, D, spec.distribution, spec.scale, spec.skew,
                                         options_.feature_seed);
    const std::size_t base = split_->train.rows();
    std::size_t rows = static_cast<std::size_t>(
        std::llround(static_cast<double>(base) * static_cast<double>(d_in) /
                     static_cast<double>(D)));
    rows = std::min(base, std::max(rows, options_.min_expanded_rows));
    Dataset sampled = rows < base ? downsample(split_->train,
                                               static_cast<double>(rows) /
                                                   static_cast<double>(base),
                                               options_.feature_seed)
                                  : split_->train;
    exp->owned_train = make_dataset(random_features(sampled.X, exp->map), sampled.y);
    exp->owned_train.source_rows = sampled.source_rows;
    exp->owned_validation = make_dataset(random_features(split_->validation.X, exp->map),
                                         split_->validation.y);
    exp->train = &exp->owned_train;
    exp->validation = &exp->owned_validation;
  }
  exp->source = std::make_unique<TrainingSource>(*exp->train);
  auto& ref = *exp;
  cache_.emplace(key, std::move(exp));
  return ref;
}

void ModelTrainer::train(std::vector<ModelState>& models, std::size_t iters) {
  const std::uint64_t now = ++clock_;

  // Group by family and feature space, keeping first-appearance order.
  std::vector<std::pair<std::string, std::vector<std::size_t>>> groups;
  for (std::size_t i = 0; i < models.size(); ++i) {
    const std::string key = std::string(family_name(models[i].family)) + "|" +
                            FeatureSpec::from_config(models[i].config).key();
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const auto& g) { return g.first == key; });
    if (it == groups.end()) {
      groups.push_back({key, {i}});
    } else {
      it->second.push_back(i);
    }
  }

  for (const auto& [key, indices] : groups) {
    Expansion& exp = expansion_for(FeatureSpec::from_config(models[indices.front()].config));
    exp.last_used = now;
    std::vector<ModelState> members;
    members.reserve(indices.size());
    for (std::size_t i : indices) members.push_back(std::move(models[i]));
    ModelBatch batch = ModelBatch::assemble(std::move(members));
    const std::uint64_t before = exp.source->passes();
    const std::uint64_t before_models = exp.source->model_passes();
    train_partial(batch, *exp.source, *exp.validation, iters, options_.train);
    passes_ += exp.source->passes() - before;
    model_passes_ += exp.source->model_passes() - before_models;
    for (std::size_t j = 0; j < indices.size(); ++j) {
      models[indices[j]] = std::move(batch.members[j]);
    }
  }

  // Keep the expansions used now plus a few recent ones.
  constexpr std::size_t kSpare = 8;
  while (cache_.size() > groups.size() + kSpare) {
    auto oldest = std::min_element(cache_.begin(), cache_.end(), [](const auto& a, const auto& b) {
      return a.second->last_used < b.second->last_used;
    });
    if (oldest->second->last_used == now) break;
    cache_.erase(oldest);
  }
}

double ModelTrainer::test_error(const ModelState& model) {
  const FeatureSpec spec = FeatureSpec::from_config(model.config);
  if (!spec.random) return evaluate(model, split_->test);
  Expansion& exp = expansion_for(spec);
  if (!exp.test) {
    exp.test = make_dataset(random_features(split_->test.X, exp.map), split_->test.y);
  }
  return evaluate(model, *exp.test);
}

}  // namespace paq
