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

#include "gvfnav/path_distance.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gvfnav/errors.h"

namespace gvfnav {

PathDistanceIndex::PathDistanceIndex(std::shared_ptr<const ParametricPath> path,
                                     int samples_per_segment)
    : path_(std::move(path)), samples_per_segment_(samples_per_segment) {
  if (path_ == nullptr) throw InvalidArgumentError("path is null");
  if (samples_per_segment_ < 2) {
    throw InvalidArgumentError("need at least 2 samples per segment");
  }
  const double end = path_->ParameterEnd();
  const auto intervals = static_cast<size_t>(
      std::ceil(end - 1e-12) * samples_per_segment_);
  step_ = end / static_cast<double>(intervals);
  samples_.reserve(intervals + 1);
  for (size_t j = 0; j <= intervals; ++j) {
    samples_.push_back(
        path_->Evaluate(j == intervals ? end : static_cast<double>(j) * step_));
  }
}

PathDistance PathDistanceIndex::Query(const Vec2& p) const {
  size_t best = 0;
  double best_sq = std::numeric_limits<double>::infinity();
  for (size_t j = 0; j < samples_.size(); ++j) {
    const double d_sq = (samples_[j] - p).squaredNorm();
    if (d_sq < best_sq) {
      best_sq = d_sq;
      best = j;
    }
  }
  const double end = path_->ParameterEnd();
  const double w_best =
      best + 1 == samples_.size() ? end : static_cast<double>(best) * step_;
  PathDistance result{std::sqrt(best_sq), w_best, samples_[best]};

  // Golden-section search for min |p - f(w)|^2 on the bracket around the
  // best sample.
  constexpr double kInvPhi = 0.6180339887498949;
  double a = std::max(0.0, w_best - step_);
  double b = std::min(end, w_best + step_);
  const auto cost = [&](double w) { return (path_->Evaluate(w) - p).squaredNorm(); };
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = cost(c);
  double fd = cost(d);
  for (int iter = 0; iter < 80 && b - a > 1e-13 * std::max(1.0, end); ++iter) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = cost(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = cost(d);
    }
  }
  const double w_refined = 0.5 * (a + b);
  const Vec2 q = path_->Evaluate(w_refined);
  const double refined = (q - p).norm();
  if (refined < result.distance) result = {refined, w_refined, q};
  return result;
}

}  // namespace gvfnav
