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

// Distance from a point to a parametric path.

#ifndef GVFNAV_PATH_DISTANCE_H_
#define GVFNAV_PATH_DISTANCE_H_

#include <memory>
#include <vector>

#include "gvfnav/bezier.h"

namespace gvfnav {

inline constexpr int kDefaultPathSamplesPerSegment = 4096;

struct PathDistance {
  double distance = 0.0;
  double w = 0.0;          // parameter of the closest point found
  Vec2 closest = Vec2::Zero();
};

// Dense table of f(w) over [0, ParameterEnd()] with `samples_per_segment`
// intervals per unit of w. A query takes the nearest sample and refines it by
// golden-section search over the two adjacent intervals; it never reports
// more than the nearest sample.
class PathDistanceIndex {
 public:
  explicit PathDistanceIndex(std::shared_ptr<const ParametricPath> path,
                             int samples_per_segment =
                                 kDefaultPathSamplesPerSegment);

  PathDistance Query(const Vec2& p) const;
  double Distance(const Vec2& p) const { return Query(p).distance; }

  int samples_per_segment() const { return samples_per_segment_; }
  const ParametricPath& path() const { return *path_; }

 private:
  std::shared_ptr<const ParametricPath> path_;
  int samples_per_segment_;
  double step_;
  std::vector<Vec2> samples_;
};

}  // namespace gvfnav

#endif  // GVFNAV_PATH_DISTANCE_H_
