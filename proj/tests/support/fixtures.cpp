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

#include "fixtures.hpp"

#include "autovis/features.hpp"

namespace autovis::testing {

TrainingSet vehicle_training_set(std::uint64_t seed, int n) {
  Rng rng(seed);
  TrainingSet set;
  for (int i = 0; i < n; ++i) {
    const bool car = i % 2 == 0;
    const Raster patch = car ? car_patch(rng) : background_patch(rng);
    set.rows.push_back(features::extract_features(patch).values);
    set.labels.push_back(car ? 1 : 0);
  }
  return set;
}

classifier::LinearModel vehicle_model(std::uint64_t seed, int n) {
  const auto set = vehicle_training_set(seed, n);
  auto model = classifier::svm_train(set.rows, set.labels, {1e-4, 30, seed});
  model.layout = features::make_layout({}, 3);
  return model;
}

std::vector<CarFrame> vehicle_frames(std::uint64_t seed, int n) {
  Rng rng(seed);
  std::vector<CarFrame> frames;
  for (int i = 0; i < n; ++i) frames.push_back(car_frame(rng, i % 3));
  return frames;
}

}  // namespace autovis::testing
