// Copyright 2026 The gvfnav Authors
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

// Bounded position disturbances, reproducible from a seed.

#ifndef GVFNAV_DISTURBANCE_H_
#define GVFNAV_DISTURBANCE_H_

#include <cstdint>
#include <random>
#include <string_view>

#include "gvfnav/geometry.h"

namespace gvfnav {

enum class NoiseKind { kNone, kUniformDisk, kClippedGaussian };

std::string_view ToString(NoiseKind kind);
// "none", "uniform_disk", "clipped_gaussian"; ConfigurationError otherwise.
NoiseKind ParseNoiseKind(std::string_view text);

struct NoiseModel {
  NoiseKind kind = NoiseKind::kNone;
  double bound = 0.0;  // D, m; every draw has norm <= D
  double sigma = 0.0;  // per-axis std dev for clipped_gaussian; 0 means D/2

  void Validate() const;
  // Accuracy figure reported alongside each measurement: D, or 0 for none.
  double accuracy() const { return kind == NoiseKind::kNone ? 0.0 : bound; }
};

// Uniform double in [0, 1) from the top 53 bits of one engine output. Unlike
// std::uniform_real_distribution this is identical across standard
// libraries.
double UnitUniform(std::mt19937_64& engine);

class DisturbanceSource {
 public:
  DisturbanceSource(NoiseModel model, std::uint64_t seed);

  // Draws the next disturbance. Kind none consumes no randomness.
  Vec2 Next();

  const NoiseModel& model() const { return model_; }
  // Keeps the engine position, so a mid-run change stays reproducible.
  void set_model(const NoiseModel& model);

 private:
  NoiseModel model_;
  std::mt19937_64 engine_;
};

}  // namespace gvfnav

#endif  // GVFNAV_DISTURBANCE_H_
