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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "autovis/features.hpp"

namespace autovis::classifier {

/// Linear SVM on standardised features: score = w . ((x - mean) / std) + b.
struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  std::vector<double> feat_mean;
  std::vector<double> feat_std;
  double lambda = 1e-4;
  int epochs = 30;
  std::uint64_t seed = 42;
  std::optional<features::FeatureLayout> layout;

  std::size_t dim() const { return weights.size(); }
  void validate() const;

  friend bool operator==(const LinearModel&, const LinearModel&) = default;
};

struct TrainConfig {
  double lambda = 1e-4;
  int epochs = 30;
  std::uint64_t seed = 42;
};

struct TrainResult {
  LinearModel model;
  /// Full-set objective lambda/2 |w|^2 + mean hinge; entry 0 is the
  /// untrained model (w = 0, b = 0), then one entry per epoch.
  std::vector<double> objective;
};

/// Labels: > 0 is the positive (car) class, anything else negative.
TrainResult svm_train_traced(const std::vector<std::vector<double>>& rows,
                             const std::vector<int>& labels, const TrainConfig& cfg = {});

LinearModel svm_train(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
                      const TrainConfig& cfg = {});

double svm_score(const LinearModel& model, std::span<const double> x);
bool svm_predict(const LinearModel& model, std::span<const double> x);

/// Objective of `model` on raw (unstandardised) rows.
double svm_objective(const LinearModel& model, const std::vector<std::vector<double>>& rows,
                     const std::vector<int>& labels);

}  // namespace autovis::classifier
