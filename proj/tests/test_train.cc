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

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.h"
#include "paqplan/error.h"
#include "paqplan/features.h"
#include "paqplan/train.h"

namespace paq {
namespace {

double rel_error(const Vector& got, const Vector& want) {
  return (got - want).lpNorm<Eigen::Infinity>() / std::max(1.0, want.lpNorm<Eigen::Infinity>());
}

ModelState model_with(double lr, double reg, Eigen::Index d, std::size_t id = 0,
                      ModelFamily family = ModelFamily::kLogistic) {
  ModelState m;
  m.id = id;
  m.family = family;
  m.config.family = std::string(family_name(family));
  m.config.values = {{"lr", lr}, {"reg", reg}};
  m.weights = Vector::Zero(d);
  return m;
}

TEST(Sigma, Basics) {
  EXPECT_EQ(sigma(0.0), 0.5);
  EXPECT_NEAR(sigma(800.0), 1.0, 1e-300);
  EXPECT_NEAR(sigma(-800.0), 0.0, 1e-300);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0, 10);
  for (int i = 0; i < 1000; ++i) {
    const double z = g(rng);
    EXPECT_NEAR(sigma(z) + sigma(-z), 1.0, 1e-15);
  }
}

TEST(LogisticGradient, HandExample) {
  Matrix X(2, 2);
  X << 1, 0, 0, 1;
  const Vector y = (Vector(2) << 1, 0).finished();
  const Vector g = logistic_gradient(Vector::Zero(2), X, y, 0.0);
  EXPECT_DOUBLE_EQ(g(0), -0.5);
  EXPECT_DOUBLE_EQ(g(1), 0.5);
}

TEST(LogisticGradient, EmptyDataLeavesRegularizer) {
  const Vector w = (Vector(3) << 1, -2, 3).finished();
  EXPECT_EQ(logistic_gradient(w, Matrix(0, 3), Vector(0), 0.5), 0.5 * w);
}

TEST(LogisticGradient, MatchesFiniteDifferences) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> n_of(1, 200), d_of(1, 20);
  std::uniform_real_distribution<double> lam(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = n_of(rng), d = d_of(rng);
    const Matrix X = oracle::random_matrix(rng, n, d);
    const Vector y = oracle::random_labels(rng, n);
    const Vector w = oracle::random_vector(rng, d, 0.5);
    const double lambda = lam(rng);
    const Vector fd = oracle::central_difference(
        [&](const Vector& v) { return oracle::logistic_loss(v, X, y, lambda); }, w, 1e-5);
    EXPECT_LE(rel_error(logistic_gradient(w, X, y, lambda), fd), 1e-6) << "trial " << trial;
  }
}

TEST(HingeSubgradient, AllActiveAtZero) {
  std::mt19937_64 rng(3);
  const Matrix X = oracle::random_matrix(rng, 30, 4);
  const Vector y = oracle::random_labels(rng, 30);
  Vector expect = Vector::Zero(4);
  for (Eigen::Index i = 0; i < 30; ++i) expect -= (2 * y(i) - 1) * X.row(i).transpose();
  EXPECT_LE((hinge_subgradient(Vector::Zero(4), X, y, 0.3) - expect).norm(), 1e-12);
}

TEST(HingeSubgradient, NoActiveConstraints) {
  Matrix X(2, 1);
  X << 1, -1;
  const Vector y = (Vector(2) << 1, 0).finished();
  const Vector w = Vector::Constant(1, 5.0);
  EXPECT_EQ(hinge_subgradient(w, X, y, 0.25), 0.25 * w);
}

TEST(HingeSubgradient, MatchesFiniteDifferencesOffKinks) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> n_of(1, 200), d_of(1, 20);
  std::uniform_real_distribution<double> lam(0.0, 2.0);
  int checked = 0;
  while (checked < 100) {
    const int n = n_of(rng), d = d_of(rng);
    const Matrix X = oracle::random_matrix(rng, n, d);
    const Vector y = oracle::random_labels(rng, n);
    const Vector w = oracle::random_vector(rng, d, 0.5);
    if (oracle::hinge_kink_distance(w, X, y) < 1e-3) continue;
    const double lambda = lam(rng);
    const Vector fd = oracle::central_difference(
        [&](const Vector& v) { return oracle::hinge_loss(v, X, y, lambda); }, w, 1e-5);
    EXPECT_LE(rel_error(hinge_subgradient(w, X, y, lambda), fd), 1e-6);
    ++checked;
  }
}

TEST(BatchedGradient, ColumnsMatchSingleModel) {
  std::mt19937_64 rng(5);
  for (int k : {1, 2, 5, 10, 20}) {
    const Matrix X = oracle::random_matrix(rng, 200, 20);
    const Vector y = oracle::random_labels(rng, 200);
    const Eigen::MatrixXd W = oracle::random_matrix(rng, 20, k, 0.3);
    std::vector<double> lambdas(k);
    for (int j = 0; j < k; ++j) lambdas[j] = 0.1 * j;
    const Eigen::MatrixXd G = batched_gradient(W, X, y, lambdas);
    const Eigen::MatrixXd H = batched_hinge_subgradient(W, X, y, lambdas);
    ASSERT_EQ(G.rows(), 20);
    ASSERT_EQ(G.cols(), k);
    for (int j = 0; j < k; ++j) {
      const Vector w = W.col(j);
      EXPECT_LE((G.col(j) - logistic_gradient(w, X, y, lambdas[j])).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_LE((H.col(j) - hinge_subgradient(w, X, y, lambdas[j])).cwiseAbs().maxCoeff(), 1e-10);
    }
    EXPECT_LE((naive_batched_gradient(ModelFamily::kLogistic, W, X, y, lambdas) - G)
                  .cwiseAbs()
                  .maxCoeff(),
              1e-10);
  }
}

TEST(BatchedGradient, ShapeErrors) {
  const Matrix X = Matrix::Zero(4, 3);
  const Vector y = Vector::Zero(4);
  EXPECT_THROW(logistic_gradient(Vector::Zero(2), X, y, 0), Error);
  EXPECT_THROW(logistic_gradient(Vector::Zero(3), X, Vector::Zero(3), 0), Error);
  EXPECT_THROW(batched_gradient(Eigen::MatrixXd::Zero(2, 2), X, y, 0.0), Error);
  EXPECT_THROW(hinge_subgradient(Vector::Zero(3), X, y, -1.0), Error);
}

TEST(TrainPartial, OneScanPerIterationRegardlessOfK) {
  const Dataset train = synth(300, 5, 1, 0.1);
  const Dataset val = synth(100, 5, 2, 0.1);
  for (std::size_t k : {1u, 3u, 10u}) {
    std::vector<ModelState> ms;
    for (std::size_t j = 0; j < k; ++j) ms.push_back(model_with(1e-3 * (j + 1), 0.0, 5, j));
    ModelBatch batch = ModelBatch::assemble(ms);
    TrainingSource source(train);
    train_partial(batch, source, val, 7);
    EXPECT_EQ(source.passes(), 7u);
    EXPECT_EQ(source.model_passes(), 7u * k);
    for (std::size_t j = 0; j < k; ++j) {
      EXPECT_EQ(batch.members[j].iterations_used, 7u);
      ASSERT_TRUE(batch.members[j].val_error.has_value());
      EXPECT_EQ(batch.members[j].weights, batch.W.col(static_cast<Eigen::Index>(j)));
    }
  }
}

TEST(TrainPartial, BatchedMatchesSequentialTrajectories) {
  const Dataset train = synth(500, 8, 3, 0.1);
  const Dataset val = synth(100, 8, 4, 0.1);
  std::vector<ModelState> ms;
  for (std::size_t j = 0; j < 10; ++j) ms.push_back(model_with(1e-3 * (j + 1), 0.01 * j, 8, j));
  ModelBatch batch = ModelBatch::assemble(ms);
  TrainingSource shared(train);
  train_partial(batch, shared, val, 20);
  for (std::size_t j = 0; j < 10; ++j) {
    ModelBatch single = ModelBatch::assemble({ms[j]});
    TrainingSource own(train);
    train_partial(single, own, val, 20);
    EXPECT_LE((single.W.col(0) - batch.W.col(static_cast<Eigen::Index>(j))).cwiseAbs().maxCoeff(),
              1e-10);
    EXPECT_EQ(single.members[0].val_error, batch.members[j].val_error);
  }
}

TEST(TrainPartial, NaiveKernelMatchesMatrixKernel) {
  const Dataset train = synth(400, 6, 5, 0.1);
  const Dataset val = synth(100, 6, 6, 0.1);
  for (ModelFamily fam : {ModelFamily::kLogistic, ModelFamily::kLinearSvm}) {
    std::vector<ModelState> ms;
    for (std::size_t j = 0; j < 4; ++j) ms.push_back(model_with(1e-3 * (j + 1), 0.1, 6, j, fam));
    ModelBatch a = ModelBatch::assemble(ms), b = ModelBatch::assemble(ms);
    TrainingSource sa(train), sb(train);
    TrainOptions naive;
    naive.kernel = GradientKernel::kNaive;
    train_partial(a, sa, val, 10);
    train_partial(b, sb, val, 10, naive);
    EXPECT_LE((a.W - b.W).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(TrainPartial, SeparableDataReachesLowTrainingError) {
  const Dataset train = synth(2000, 10, 7, 0.0);
  ModelBatch batch = ModelBatch::assemble({model_with(1e-2, 0.0, 10)});
  TrainingSource source(train);
  train_partial(batch, source, train, 100);
  EXPECT_LE(evaluate(batch.members[0], train), 0.01);
}

TEST(TrainPartial, DivergedMemberIsFrozen) {
  Dataset train = synth(200, 4, 8, 0.1);
  train.X *= 1e200;
  const Dataset val = synth(50, 4, 9, 0.1);
  ModelBatch batch = ModelBatch::assemble({model_with(1e300, 0.0, 4, 0), model_with(0.0, 0.0, 4, 1)});
  TrainingSource source(train);
  train_partial(batch, source, val, 3);
  EXPECT_TRUE(batch.members[0].diverged);
  EXPECT_EQ(batch.members[0].val_error, 1.0);
  EXPECT_TRUE(batch.members[0].weights.allFinite());
  EXPECT_FALSE(batch.members[1].diverged);
  EXPECT_EQ(batch.members[0].iterations_used, 3u);
}

TEST(TrainPartial, MinibatchModeStillOneReadPerIteration) {
  Dataset train = synth(1000, 5, 10, 0.1);
  train.partition(4);
  ModelBatch batch = ModelBatch::assemble({model_with(1e-2, 0.0, 5)});
  TrainingSource source(train);
  TrainOptions opts;
  opts.minibatch = true;
  train_partial(batch, source, train, 12, opts);
  EXPECT_EQ(source.passes(), 12u);
  EXPECT_LT(*batch.members[0].val_error, 0.3);
}

TEST(TrainPartial, Errors) {
  const Dataset train = synth(50, 3, 1, 0.1);
  ModelBatch batch = ModelBatch::assemble({model_with(1e-3, 0.0, 3)});
  TrainingSource source(train);
  EXPECT_THROW(train_partial(batch, source, train, 0), Error);
  ModelBatch wrong = ModelBatch::assemble({model_with(1e-3, 0.0, 4)});
  EXPECT_THROW(train_partial(wrong, source, train, 1), Error);
  EXPECT_THROW(ModelBatch::assemble({}), Error);
  EXPECT_THROW(ModelBatch::assemble({model_with(1, 0, 3), model_with(1, 0, 4)}), Error);
}

TEST(Evaluate, CountsMistakes) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix X = oracle::random_matrix(rng, 40, 3);
    const Vector y = oracle::random_labels(rng, 40);
    const Vector w = oracle::random_vector(rng, 3);
    const Dataset ds = make_dataset(X, y);
    int wrong = 0;
    for (int i = 0; i < 40; ++i) {
      const bool positive = 1.0 / (1.0 + std::exp(-X.row(i).dot(w))) >= 0.5;
      wrong += positive != (y(i) == 1.0);
    }
    EXPECT_DOUBLE_EQ(evaluate(ModelFamily::kLogistic, w, ds), wrong / 40.0);
    EXPECT_DOUBLE_EQ(evaluate(ModelFamily::kLinearSvm, w, ds), wrong / 40.0);
  }
}

TEST(Evaluate, ZeroModelAndPerfectSeparator) {
  Matrix X(4, 1);
  X << 1, 2, -1, -2;
  const Vector y = (Vector(4) << 1, 1, 0, 0).finished();
  const Dataset ds = make_dataset(X, y);
  EXPECT_EQ(evaluate(ModelFamily::kLogistic, Vector::Zero(1), ds), 0.5);
  EXPECT_EQ(evaluate(ModelFamily::kLogistic, Vector::Constant(1, 1.0), ds), 0.0);
  EXPECT_THROW(evaluate(ModelFamily::kLogistic, Vector::Zero(1), make_dataset(Matrix(0, 1), Vector(0))),
               Error);
}

double kernel_rms(ProjectionDistribution dist, std::size_t D, std::uint64_t seed,
                  const std::vector<std::pair<Vector, Vector>>& pairs, double sigma_value) {
  const FeatureMap map = FeatureMap::random_cosine(5, D, dist, sigma_value, 0.0, seed);
  double sum = 0;
  for (const auto& [a, b] : pairs) {
    Matrix X(2, 5);
    X.row(0) = a.transpose();
    X.row(1) = b.transpose();
    const Matrix Z = random_features(X, map);
    const double approx = Z.row(0).dot(Z.row(1));
    const double exact = dist == ProjectionDistribution::kGaussian
                             ? oracle::rbf_kernel(a, b, sigma_value)
                             : oracle::laplacian_kernel(a, b, sigma_value);
    sum += (approx - exact) * (approx - exact);
  }
  return std::sqrt(sum / static_cast<double>(pairs.size()));
}

std::vector<std::pair<Vector, Vector>> unit_pairs(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<Vector, Vector>> out;
  for (std::size_t i = 0; i < count; ++i) {
    Vector a = oracle::random_vector(rng, 5), b = oracle::random_vector(rng, 5);
    out.emplace_back(a.normalized(), b.normalized());
  }
  return out;
}

TEST(RandomFeatures, ShapeAndDeterminism) {
  std::mt19937_64 rng(1);
  const Matrix X = oracle::random_matrix(rng, 7, 5);
  const FeatureMap map = FeatureMap::random_cosine(5, 33, ProjectionDistribution::kCauchy, 2, 0.5, 4);
  const Matrix Z = random_features(X, map);
  EXPECT_EQ(Z.rows(), 7);
  EXPECT_EQ(Z.cols(), 33);
  EXPECT_EQ(Z, random_features(X, FeatureMap::random_cosine(5, 33, ProjectionDistribution::kCauchy, 2, 0.5, 4)));
  EXPECT_LE(Z.cwiseAbs().maxCoeff(), std::sqrt(2.0 / 33) + 1e-15);
  EXPECT_EQ(apply_feature_map(X, FeatureMap::identity()), X);
  EXPECT_THROW(FeatureMap::random_cosine(5, 0, ProjectionDistribution::kGaussian, 1, 0, 1), Error);
}

TEST(RandomFeatures, ApproximatesKernels) {
  const auto pairs = unit_pairs(20, 99);
  EXPECT_LE(kernel_rms(ProjectionDistribution::kGaussian, 10000, 3, pairs, 1.0), 0.025);
  EXPECT_LE(kernel_rms(ProjectionDistribution::kCauchy, 10000, 3, pairs, 0.5), 0.025);
  // Error shrinks with D.
  double small = 0, large = 0;
  for (std::uint64_t s = 0; s < 4; ++s) {
    small += kernel_rms(ProjectionDistribution::kGaussian, 250, s, pairs, 1.0);
    large += kernel_rms(ProjectionDistribution::kGaussian, 4000, s, pairs, 1.0);
  }
  EXPECT_LT(large, 0.5 * small);
}

TEST(FeatureSpec, FromConfig) {
  Configuration c{"logistic", {{"lr", 0.1}}};
  EXPECT_FALSE(FeatureSpec::from_config(c).random);
  EXPECT_EQ(FeatureSpec::from_config(c).output_dim(7), 7u);
  c.values.emplace_back("proj", 2.5);
  c.values.emplace_back("noise", 0.3);
  c.values.emplace_back("dist", std::string("cauchy"));
  const FeatureSpec s = FeatureSpec::from_config(c);
  EXPECT_TRUE(s.random);
  EXPECT_EQ(s.output_dim(10), 25u);
  EXPECT_EQ(s.distribution, ProjectionDistribution::kCauchy);
  EXPECT_NE(s.key(), FeatureSpec{}.key());
}

TEST(ModelTrainer, GroupsByFeatureSpaceAndCountsScans) {
  const DataSplit data = split(synth(3000, 6, 2, 0.1), {}, 2);
  ModelTrainer trainer(data);
  std::vector<ModelState> ms;
  ms.push_back(trainer.create({"logistic", {{"lr", 1e-3}, {"reg", 0.0}}}, 0));
  ms.push_back(trainer.create({"linear_svm", {{"lr", 1e-3}, {"reg", 0.0}}}, 1));
  ms.push_back(trainer.create({"logistic", {{"lr", 2e-3}, {"reg", 0.1}}}, 2));
  ms.push_back(trainer.create({"logistic", {{"lr", 1e-3}, {"reg", 0.0}, {"proj", 2.0}, {"noise", 0.5}}}, 3));
  EXPECT_EQ(ms[3].weights.size(), 12);
  trainer.train(ms, 5);
  // Three groups: identity logistic, identity svm, expanded logistic.
  EXPECT_EQ(trainer.passes(), 15u);
  EXPECT_EQ(trainer.model_passes(), 20u);
  for (std::size_t i = 0; i < ms.size(); ++i) {
    EXPECT_EQ(ms[i].id, i);
    EXPECT_EQ(ms[i].iterations_used, 5u);
    EXPECT_TRUE(ms[i].val_error.has_value());
  }
  const double t = trainer.test_error(ms[3]);
  EXPECT_GE(t, 0.0);
  EXPECT_LE(t, 1.0);
}

TEST(ModelTrainer, ExpansionDownsamplesRows) {
  const DataSplit data = split(synth(4000, 5, 2, 0.1), {}, 2);
  TrainerOptions opts;
  opts.min_expanded_rows = 100;
  ModelTrainer trainer(data, opts);
  // D = 20, so 2800 * 5 / 20 = 700 rows are trained on.
  std::vector<ModelState> ms{trainer.create({"logistic", {{"proj", 4.0}, {"noise", 1.0}}}, 0)};
  trainer.train(ms, 1);
  EXPECT_EQ(trainer.passes(), 1u);
  EXPECT_EQ(ms[0].weights.size(), 20);
}

TEST(Families, ParseAndName) {
  EXPECT_EQ(parse_family("logistic"), ModelFamily::kLogistic);
  EXPECT_EQ(parse_family("svm"), ModelFamily::kLinearSvm);
  EXPECT_EQ(family_name(ModelFamily::kLinearSvm), "linear_svm");
  EXPECT_THROW(parse_family("tree"), Error);
}

}  // namespace
}  // namespace paq
