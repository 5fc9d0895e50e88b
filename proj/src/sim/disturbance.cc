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

#include "gvfnav/disturbance.h"

#include <cmath>
#include <numbers>
#include <string>

#include "gvfnav/errors.h"

namespace gvfnav {
namespace {

// Scales d into the closed disk of radius `bound`.
Vec2 ClipToDisk(Vec2 d, double bound) {
  double norm = d.norm();
  if (norm <= bound) return d;
  d *= bound / norm;
  // Rounding of the rescale can overshoot by an ulp; shrink until inside.
  while (d.norm() > bound) d *= 1.0 - 1e-15;
  return d;
}

}  // namespace

std::string_view ToString(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kNone:
      return "none";
    case NoiseKind::kUniformDisk:
      return "uniform_disk";
    case NoiseKind::kClippedGaussian:
      return "clipped_gaussian";
  }
  return "none";
}

NoiseKind ParseNoiseKind(std::string_view text) {
  if (text == "none") return NoiseKind::kNone;
  if (text == "uniform_disk") return NoiseKind::kUniformDisk;
  if (text == "clipped_gaussian") return NoiseKind::kClippedGaussian;
  throw ConfigurationError("unknown noise kind '" + std::string(text) + "'");
}

void NoiseModel::Validate() const {
  if (!std::isfinite(bound) || bound < 0.0) {
    throw InvalidArgumentError("noise bound must be finite and >= 0");
  }
  if (!std::isfinite(sigma) || sigma < 0.0) {
    throw InvalidArgumentError("noise sigma must be finite and >= 0");
  }
}

double UnitUniform(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

DisturbanceSource::DisturbanceSource(NoiseModel model, std::uint64_t seed)
    : model_(model), engine_(seed) {
  model_.Validate();
}

void DisturbanceSource::set_model(const NoiseModel& model) {
  model.Validate();
  model_ = model;
}

Vec2 DisturbanceSource::Next() {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const double bound = model_.bound;
  switch (model_.kind) {
    case NoiseKind::kNone:
      return Vec2::Zero();
    case NoiseKind::kUniformDisk: {
      const double r = bound * std::sqrt(UnitUniform(engine_));
      const double a = kTwoPi * UnitUniform(engine_);
      return ClipToDisk({r * std::cos(a), r * std::sin(a)}, bound);
    }
    case NoiseKind::kClippedGaussian: {
      const double sigma = model_.sigma > 0.0 ? model_.sigma : 0.5 * bound;
      // Box-Muller; 1 - u keeps the logarithm finite.
      const double r =
          sigma * std::sqrt(-2.0 * std::log(1.0 - UnitUniform(engine_)));
      const double a = kTwoPi * UnitUniform(engine_);
      return ClipToDisk({r * std::cos(a), r * std::sin(a)}, bound);
    }
  }
  return Vec2::Zero();
}

}  // namespace gvfnav
