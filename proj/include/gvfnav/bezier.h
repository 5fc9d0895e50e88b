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

// Bezier segments and piecewise Bezier splines with C0/C1/C2 joints.
//
// A spline with N segments is parameterized over w in [0, N]; segment i
// covers [i, i+1] with inner coordinate u = w - i. Joint continuity is
// enforced through the control-point recurrences
//
//   beta_0^{i+1} = beta_n^i
//   beta_1^{i+1} = 2 beta_n^i - beta_{n-1}^i                      (C1)
//   beta_2^{i+1} = 4 beta_n^i - 4 beta_{n-1}^i + beta_{n-2}^i     (C2)
//
// which leave, for C^p continuity, points beta_{p+1} .. beta_n of every
// non-initial segment free for the user to place.

#ifndef GVFNAV_BEZIER_H_
#define GVFNAV_BEZIER_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gvfnav/geometry.h"

namespace gvfnav {

inline constexpr int kMaxBezierDegree = 20;

// Tangent norms at or below this are treated as degenerate (m per unit w).
inline constexpr double kDegenerateTangentEpsilon = 1e-9;

// Relative tolerance used when checking joint continuity.
inline constexpr double kJointTolerance = 1e-9;

// Row n of Pascal's triangle, for 0 <= n <= kMaxBezierDegree.
std::span<const double> BinomialRow(int n);

// Bernstein basis b_{k,n}(u) for all k, written into `out` (size n+1).
void BernsteinBasis(int n, double u, std::span<double> out);

// Any C2 planar curve parameterized over [0, ParameterEnd()].
class ParametricPath {
 public:
  virtual ~ParametricPath() = default;

  virtual double ParameterEnd() const = 0;
  virtual Vec2 Evaluate(double w) const = 0;
  // d^order f / dw^order. Orders 1 and 2 must be supported.
  virtual Vec2 Derivative(double w, int order) const = 0;
};

// Signed curvature of a planar curve from its first two derivatives.
// Throws DegenerateTangentError when ||d1|| <= kDegenerateTangentEpsilon.
double SignedCurvature(const Vec2& d1, const Vec2& d2);

// Signed curvature of `path` at w.
double Curvature(const ParametricPath& path, double w);

class BezierSegment {
 public:
  // Requires 2..kMaxBezierDegree+1 finite points.
  explicit BezierSegment(std::vector<Vec2> points);

  int degree() const { return static_cast<int>(points_.size()) - 1; }
  std::span<const Vec2> points() const { return points_; }
  const Vec2& point(int k) const { return points_.at(k); }

  // Position at u in [0, 1]; DomainError otherwise.
  Vec2 Evaluate(double u) const;

  // Hodograph derivative of the given order (1 <= order) at u in [0, 1].
  // Orders above the degree are identically zero.
  Vec2 Derivative(double u, int order) const;

  // Same polynomials without the [0, 1] domain check. Used to extend the
  // first/last segment of a path beyond its nominal domain.
  Vec2 EvaluatePolynomial(double u) const;
  Vec2 DerivativePolynomial(double u, int order) const;

  friend bool operator==(const BezierSegment& a, const BezierSegment& b) {
    return a.points_ == b.points_;
  }

 private:
  std::vector<Vec2> points_;
};

enum class Continuity { kC0 = 0, kC1 = 1, kC2 = 2 };

std::string_view ToString(Continuity continuity);
// Accepts "C0", "C1", "C2" (case-insensitive). ConfigurationError otherwise.
Continuity ParseContinuity(std::string_view text);
inline int Order(Continuity continuity) { return static_cast<int>(continuity); }

// Smallest segment degree that leaves at least p free shaping points per
// non-initial segment under C^p continuity.
int MinimumDegree(Continuity continuity);

enum class PointRole {
  kEndpoint,          // beta_0 of the first segment or beta_n of any segment
  kFreeControl,       // interior point the user may place
  kContinuityLocked,  // fixed by the joint recurrences
};

std::string_view ToString(PointRole role);

// Address of a control point inside a spline.
struct PointIndex {
  int segment = 0;
  int index = 0;

  friend bool operator==(const PointIndex&, const PointIndex&) = default;
};

struct FreePointIndex {
  PointIndex point;
  PointRole role = PointRole::kFreeControl;
  // Position in the configurable-point enumeration (beta^s_k); -1 for
  // locked points and for beta_0^{i+1}, which aliases beta_n^i.
  int global_index = -1;
};

// One joint that fails a continuity condition.
struct JointDefect {
  int joint = 0;   // joint between segment `joint` and `joint + 1`
  int order = 0;   // 0 = position, 1 = first derivative, 2 = second
  double residual = 0.0;
};

// Checks the C0..C^p conditions of every joint with relative tolerance
// `tolerance` (scaled by max(1, largest coordinate magnitude)).
std::vector<JointDefect> CheckContinuity(std::span<const BezierSegment> segments,
                                         Continuity continuity,
                                         double tolerance = kJointTolerance);

class BezierSpline final : public ParametricPath {
 public:
  // Validates the segments (same degree, at least one segment, joints satisfy
  // `continuity`). Throws ValidationError on a defect and ConfigurationError
  // when the degree is too low for the requested continuity.
  static BezierSpline Create(std::vector<BezierSegment> segments,
                             Continuity continuity);

  int num_segments() const { return static_cast<int>(segments_.size()); }
  int degree() const { return segments_.front().degree(); }
  Continuity continuity() const { return continuity_; }
  const std::vector<BezierSegment>& segments() const { return segments_; }
  const BezierSegment& segment(int i) const { return segments_.at(i); }
  const Vec2& point(const PointIndex& index) const;

  double ParameterEnd() const override { return num_segments(); }

  // f_s(w) for w in [0, N]. The segment is i = floor(w), clamped to N-1 at
  // w = N.
  Vec2 Evaluate(double w) const override;
  Vec2 Derivative(double w, int order) const override;

  // Signed curvature. Requires degree >= 3.
  double Curvature(double w) const;

  // Maps w to (segment, inner coordinate). DomainError outside [0, N].
  int Locate(double w, double* inner) const;

  // Role of every stored point, segment-major.
  std::vector<FreePointIndex> PointRoles() const;
  // Only the user-configurable points, in beta^s_k order.
  std::vector<FreePointIndex> ConfigurablePoints() const;
  PointRole RoleOf(const PointIndex& index) const;

  // True when the end of the last segment joins its start with the declared
  // continuity, so that w can wrap from N back to 0 smoothly.
  bool IsClosed(double tolerance = kJointTolerance) const;

  friend bool operator==(const BezierSpline& a, const BezierSpline& b) {
    return a.continuity_ == b.continuity_ && a.segments_ == b.segments_;
  }

 private:
  BezierSpline(std::vector<BezierSegment> segments, Continuity continuity)
      : segments_(std::move(segments)), continuity_(continuity) {}

  std::vector<BezierSegment> segments_;
  Continuity continuity_;
};

// A spline evaluated at any real w: periodically when the spline is closed,
// otherwise by continuing the first and last segment polynomials past the
// ends. Used by pure-field integration, where w is unconstrained.
class UnboundedSplinePath final : public ParametricPath {
 public:
  explicit UnboundedSplinePath(BezierSpline spline);

  const BezierSpline& spline() const { return spline_; }
  bool periodic() const { return periodic_; }

  double ParameterEnd() const override { return spline_.ParameterEnd(); }
  Vec2 Evaluate(double w) const override;
  Vec2 Derivative(double w, int order) const override;

  // w folded into [0, N) for periodic paths; unchanged otherwise.
  double Canonical(double w) const;

 private:
  int Locate(double w, double* inner) const;

  BezierSpline spline_;
  bool periodic_;
};

PointRole RoleOf(const PointIndex& index, int degree, Continuity continuity);

// Number of configurable points of an N-segment spline: (n+1) + (N-1)(n-p).
int ConfigurablePointCount(int num_segments, int degree, Continuity continuity);

// Overwrites beta_0, and the C1/C2 locked points, of every non-initial
// segment from the preceding segment. Free points are left untouched, so
// the operation is idempotent. ConfigurationError when the degree is too low
// for `continuity` or segments disagree in degree.
BezierSpline EnforceContinuity(std::vector<BezierSegment> draft,
                               Continuity continuity);

// Builds a spline from the beta^s_k enumeration of configurable points.
BezierSpline SplineFromConfigurablePoints(std::span<const Vec2> points,
                                          int num_segments, int degree,
                                          Continuity continuity);
std::vector<Vec2> ConfigurablePointValues(const BezierSpline& spline);

// Returns a copy of `spline` with the point at `index` moved and the locked
// points recomputed. Writing beta_0^{i+1} moves the shared joint beta_n^i.
// InvalidArgumentError for continuity-locked points.
BezierSpline MovePoint(const BezierSpline& spline, const PointIndex& index,
                       const Vec2& position);

struct PointMove {
  PointIndex index;
  Vec2 position;
};

// Applies all moves, then recomputes the locked points once.
BezierSpline MovePoints(const BezierSpline& spline,
                        std::span<const PointMove> moves);

// Convex hull in counter-clockwise order without collinear vertices.
// Degenerate inputs return a single point or the two extreme points.
std::vector<Vec2> ConvexHull(std::span<const Vec2> points);
inline std::vector<Vec2> ConvexHull(const BezierSegment& segment) {
  return ConvexHull(segment.points());
}

}  // namespace gvfnav

#endif  // GVFNAV_BEZIER_H_
