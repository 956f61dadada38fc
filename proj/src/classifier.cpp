/*
 * Copyright 2026 The autovis Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "autovis/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "autovis/error.hpp"
#include "autovis/simd/kernels.hpp"

namespace autovis::classifier {

void LinearModel::validate() const {
  if (weights.empty()) fail(ErrorKind::kShape, "model has no weights");
  if (feat_mean.size() != weights.size() || feat_std.size() != weights.size()) {
    fail(ErrorKind::kShape, "model standardisation statistics do not match weight length");
  }
  for (double s : feat_std) {
    if (!(s > 0.0)) fail(ErrorKind::kShape, "model feature std must be positive");
  }
  if (layout && layout->total != weights.size()) {
    fail(ErrorKind::kShape, "model feature layout does not match weight length");
  }
}

namespace {

int sign_of(int label) { return label > 0 ? 1 : -1; }

void check_rows(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels) {
  if (rows.empty()) fail(ErrorKind::kShape, "empty training set");
  if (rows.size() != labels.size()) fail(ErrorKind::kShape, "row and label counts differ");
  const std::size_t dim = rows.front().size();
  if (dim == 0) fail(ErrorKind::kShape, "feature rows are empty");
  for (const auto& r : rows) {
    if (r.size() != dim) fail(ErrorKind::kShape, "feature rows have different dimensions");
  }
}

double objective_standardized(const std::vector<std::vector<double>>& xs,
                              const std::vector<int>& ys, std::span<const double> w, double b,
                              double lambda) {
  const auto& k = simd::active_kernels();
  double hinge = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double margin = ys[i] * (k.dot(w.data(), xs[i].data(), w.size()) + b);
    hinge += std::max(0.0, 1.0 - margin);
  }
  double norm2 = 0.0;
  for (double v : w) norm2 += v * v;
  return 0.5 * lambda * norm2 + hinge / static_cast<double>(xs.size());
}

// Fisher-Yates driven directly by mt19937_64 so the permutation does not
// depend on the standard library's distribution implementations.
void shuffle(std::vector<std::size_t>& order, std::mt19937_64& rng) {
  for (std::size_t i = order.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
}

}  // namespace

TrainResult svm_train_traced(const std::vector<std::vector<double>>& rows,
                             const std::vector<int>& labels, const TrainConfig& cfg) {
  check_rows(rows, labels);
  if (!(cfg.lambda > 0.0)) fail(ErrorKind::kDomain, "lambda must be positive");
  if (cfg.epochs < 1) fail(ErrorKind::kDomain, "epochs must be at least 1");
  const bool has_pos = std::any_of(labels.begin(), labels.end(), [](int l) { return l > 0; });
  const bool has_neg = std::any_of(labels.begin(), labels.end(), [](int l) { return l <= 0; });
  if (!has_pos || !has_neg) fail(ErrorKind::kSingleClass, "single-class training set");

  const std::size_t n = rows.size();
  const std::size_t dim = rows.front().size();
  LinearModel model;
  model.lambda = cfg.lambda;
  model.epochs = cfg.epochs;
  model.seed = cfg.seed;
  model.feat_mean.assign(dim, 0.0);
  model.feat_std.assign(dim, 0.0);
  for (const auto& r : rows)
    for (std::size_t j = 0; j < dim; ++j) model.feat_mean[j] += r[j];
  for (double& m : model.feat_mean) m /= static_cast<double>(n);
  for (const auto& r : rows)
    for (std::size_t j = 0; j < dim; ++j) {
      const double d = r[j] - model.feat_mean[j];
      model.feat_std[j] += d * d;
    }
  for (double& s : model.feat_std) {
    s = std::sqrt(s / static_cast<double>(n));
    if (!(s > 0.0)) s = 1.0;
  }

  std::vector<std::vector<double>> xs(n, std::vector<double>(dim));
  std::vector<int> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < dim; ++j) xs[i][j] = (rows[i][j] - model.feat_mean[j]) / model.feat_std[j];
    ys[i] = sign_of(labels[i]);
  }

  const auto& k = simd::active_kernels();
  // Pegasos iterate (w, b) with the usual projection onto |w| <= 1/sqrt(lambda);
  // the unregularised bias is clipped to the same radius. The model is the
  // running mean of all iterates, which is what the per-epoch trace measures.
  std::vector<double> w(dim, 0.0), w_avg(dim, 0.0);
  double b = 0.0, b_avg = 0.0;
  const double radius = 1.0 / std::sqrt(cfg.lambda);
  TrainResult result;
  result.objective.push_back(objective_standardized(xs, ys, w_avg, b_avg, cfg.lambda));

  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> order(n);
  std::uint64_t t = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    shuffle(order, rng);
    for (std::size_t idx : order) {
      ++t;
      const double eta = 1.0 / (cfg.lambda * static_cast<double>(t));
      const auto& x = xs[idx];
      const double margin = ys[idx] * (k.dot(w.data(), x.data(), dim) + b);
      const double shrink = 1.0 - eta * cfg.lambda;
      for (double& v : w) v *= shrink;
      if (margin < 1.0) {
        const double step = eta * ys[idx];
        for (std::size_t j = 0; j < dim; ++j) w[j] += step * x[j];
        b += step;
      }
      const double norm = std::sqrt(k.dot(w.data(), w.data(), dim));
      if (norm > radius) {
        const double scale = radius / norm;
        for (double& v : w) v *= scale;
      }
      b = std::clamp(b, -radius, radius);

      const double a = 1.0 / static_cast<double>(t);
      for (std::size_t j = 0; j < dim; ++j) w_avg[j] += a * (w[j] - w_avg[j]);
      b_avg += a * (b - b_avg);
    }
    result.objective.push_back(objective_standardized(xs, ys, w_avg, b_avg, cfg.lambda));
  }
  model.weights = std::move(w_avg);
  model.bias = b_avg;
  result.model = std::move(model);
  return result;
}

LinearModel svm_train(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
                      const TrainConfig& cfg) {
  return svm_train_traced(rows, labels, cfg).model;
}

double svm_score(const LinearModel& model, std::span<const double> x) {
  if (x.size() != model.dim()) {
    fail(ErrorKind::kShape, "feature length " + std::to_string(x.size()) +
                                " does not match model dimension " + std::to_string(model.dim()));
  }
  std::vector<double> z(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) z[j] = (x[j] - model.feat_mean[j]) / model.feat_std[j];
  return simd::active_kernels().dot(model.weights.data(), z.data(), z.size()) + model.bias;
}

bool svm_predict(const LinearModel& model, std::span<const double> x) {
  return svm_score(model, x) > 0.0;
}

double svm_objective(const LinearModel& model, const std::vector<std::vector<double>>& rows,
                     const std::vector<int>& labels) {
  check_rows(rows, labels);
  std::vector<std::vector<double>> xs(rows.size(), std::vector<double>(model.dim()));
  std::vector<int> ys(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != model.dim()) fail(ErrorKind::kShape, "row dimension mismatch");
    for (std::size_t j = 0; j < model.dim(); ++j) {
      xs[i][j] = (rows[i][j] - model.feat_mean[j]) / model.feat_std[j];
    }
    ys[i] = sign_of(labels[i]);
  }
  return objective_standardized(xs, ys, model.weights, model.bias, model.lambda);
}

}  // namespace autovis::classifier
