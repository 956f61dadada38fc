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
#include <vector>

#include "autovis/classifier.hpp"
#include "synth.hpp"

// Shared end-to-end fixtures built on the synthetic scenes.
namespace autovis::testing {

struct TrainingSet {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;  // 1 car, 0 background
};

/// Half car patches, half road background patches, interleaved.
TrainingSet vehicle_training_set(std::uint64_t seed, int n = 400);

classifier::LinearModel vehicle_model(std::uint64_t seed, int n = 400);

/// Frames with 0, 1 or 2 cars, cycling.
std::vector<CarFrame> vehicle_frames(std::uint64_t seed, int n = 20);

}  // namespace autovis::testing
