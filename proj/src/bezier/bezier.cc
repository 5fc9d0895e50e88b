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

#include "gvfnav/bezier.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <string>

#include "gvfnav/errors.h"

namespace gvfnav {
namespace {

using BinomialTable =
    std::array<std::array<double, kMaxBezierDegree + 1>, kMaxBezierDegree + 1>;

const BinomialTable& Binomials() {
  static const BinomialTable table = [] {
    BinomialTable t{};
    for (int n = 0; n <= kMaxBezierDegree; ++n) {
      t[n][0] = 1.0;
      for (int k = 1; k <= n; ++k) {
        t[n][k] = t[n - 1][k - 1] + (k < n ? t[n - 1][k] : 0.0);
      }
    }
    return t;
  }();
  return table;
}

std::string Describe(double value) { return std::to_string(value); }

// Sum_k points[k] b_{k,n}(u) for arbitrary real u.
Vec2 BernsteinSum(std::span<const Vec2> points, double u) {
  const int n = static_cast<int>(points.size()) - 1;
  std::array<double, kMaxBezierDegree + 1> basis{};
  BernsteinBasis(n, u, std::span<double>(basis.data(), n + 1));
  Vec2 sum = Vec2::Zero();
  for (int k = 0; k <= n; ++k) sum += basis[k] * points[k];
  return sum;
}

void CheckUnitInterval(double u) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw DomainError("segment parameter " + Describe(u) +
                      " outside [0, 1]");
  }
}

}  // namespace

std::span<const double> BinomialRow(int n) {
  if (n < 0 || n > kMaxBezierDegree) {
    throw InvalidArgumentError("binomial row out of range: " +
                               std::to_string(n));
  }
  return std::span<const double>(Binomials()[n].data(), n + 1);
}

void BernsteinBasis(int n, double u, std::span<double> out) {
  const auto binomial = BinomialRow(n);
  const double s = 1.0 - u;
  // out[k] = C(n,k) u^k s^(n-k), built from ascending powers of u and
  // descending powers of s.
  double u_pow = 1.0;
  for (int k = 0; k <= n; ++k) {
    out[k] = binomial[k] * u_pow;
    u_pow *= u;
  }
  double s_pow = 1.0;
  for (int k = n; k >= 0; --k) {
    out[k] *= s_pow;
    s_pow *= s;
  }
}

double SignedCurvature(const Vec2& d1, const Vec2& d2) {
  const double speed_sq = d1.squaredNorm();
  if (!(std::sqrt(speed_sq) > kDegenerateTangentEpsilon)) {
    throw DegenerateTangentError("tangent norm " +
                                 Describe(std::sqrt(speed_sq)) +
                                 " too small for curvature");
  }
  return Cross(d1, d2) / (speed_sq * std::sqrt(speed_sq));
}

double Curvature(const ParametricPath& path, double w) {
  return SignedCurvature(path.Derivative(w, 1), path.Derivative(w, 2));
}

// --- BezierSegment ---------------------------------------------------------

BezierSegment::BezierSegment(std::vector<Vec2> points)
    : points_(std::move(points)) {
  if (points_.size() < 2 ||
      points_.size() > static_cast<size_t>(kMaxBezierDegree) + 1) {
    throw ConfigurationError("a Bezier segment needs between 2 and " +
                             std::to_string(kMaxBezierDegree + 1) +
                             " points, got " + std::to_string(points_.size()));
  }
  for (const auto& p : points_) {
    if (!IsFinite(p)) throw ConfigurationError("non-finite control point");
  }
}

Vec2 BezierSegment::Evaluate(double u) const {
  CheckUnitInterval(u);
  return EvaluatePolynomial(u);
}

Vec2 BezierSegment::Derivative(double u, int order) const {
  CheckUnitInterval(u);
  return DerivativePolynomial(u, order);
}

Vec2 BezierSegment::EvaluatePolynomial(double u) const {
  return BernsteinSum(points_, u);
}

Vec2 BezierSegment::DerivativePolynomial(double u, int order) const {
  if (order < 1) {
    throw InvalidArgumentError("derivative order must be >= 1");
  }
  const int n = degree();
  if (order > n) return Vec2::Zero();
  // Forward differences Delta^order beta_k, k = 0..n-order.
  std::array<Vec2, kMaxBezierDegree + 1> diff;
  for (int k = 0; k <= n; ++k) diff[k] = points_[k];
  for (int r = 0; r < order; ++r) {
    for (int k = 0; k < n - r; ++k) diff[k] = diff[k + 1] - diff[k];
  }
  double factor = 1.0;
  for (int r = 0; r < order; ++r) factor *= n - r;
  return factor * BernsteinSum(std::span<const Vec2>(diff.data(), n - order + 1), u);
}

// --- Continuity --------------------------------------------------------------

std::string_view ToString(Continuity continuity) {
  switch (continuity) {
    case Continuity::kC0:
      return "C0";
    case Continuity::kC1:
      return "C1";
    case Continuity::kC2:
      return "C2";
  }
  return "C?";
}

Continuity ParseContinuity(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  if (upper == "C0") return Continuity::kC0;
  if (upper == "C1") return Continuity::kC1;
  if (upper == "C2") return Continuity::kC2;
  throw ConfigurationError("unknown continuity class '" + std::string(text) +
                           "'");
}

int MinimumDegree(Continuity continuity) { return 2 * Order(continuity) + 1; }

std::string_view ToString(PointRole role) {
  switch (role) {
    case PointRole::kEndpoint:
      return "endpoint";
    case PointRole::kFreeControl:
      return "free_control";
    case PointRole::kContinuityLocked:
      return "continuity_locked";
  }
  return "unknown";
}

PointRole RoleOf(const PointIndex& index, int degree, Continuity continuity) {
  if (index.index == 0 || index.index == degree) return PointRole::kEndpoint;
  if (index.segment > 0 && index.index <= Order(continuity)) {
    return PointRole::kContinuityLocked;
  }
  return PointRole::kFreeControl;
}

int ConfigurablePointCount(int num_segments, int degree,
                           Continuity continuity) {
  return (degree + 1) + (num_segments - 1) * (degree - Order(continuity));
}

std::vector<JointDefect> CheckContinuity(std::span<const BezierSegment> segments,
                                         Continuity continuity,
                                         double tolerance) {
  std::vector<JointDefect> defects;
  double scale = 1.0;
  for (const auto& segment : segments) {
    for (const auto& p : segment.points()) {
      scale = std::max(scale, p.cwiseAbs().maxCoeff());
    }
  }
  for (size_t i = 0; i + 1 < segments.size(); ++i) {
    const auto& left = segments[i];
    const auto& right = segments[i + 1];
    for (int order = 0; order <= Order(continuity); ++order) {
      const Vec2 a = order == 0 ? left.EvaluatePolynomial(1.0)
                                : left.DerivativePolynomial(1.0, order);
      const Vec2 b = order == 0 ? right.EvaluatePolynomial(0.0)
                                : right.DerivativePolynomial(0.0, order);
      // Derivatives carry factors up to n(n-1); scale the tolerance to match.
      const int n = left.degree();
      const double order_scale = order == 0 ? 1.0 : (order == 1 ? n : n * (n - 1));
      const double residual = (a - b).norm();
      if (residual > tolerance * scale * order_scale) {
        defects.push_back({static_cast<int>(i), order, residual});
      }
    }
  }
  return defects;
}

// --- BezierSpline ------------------------------------------------------------

namespace {

void CheckShape(std::span<const BezierSegment> segments, Continuity continuity) {
  if (segments.empty()) {
    throw ConfigurationError("a spline needs at least one segment");
  }
  const int degree = segments.front().degree();
  for (const auto& segment : segments) {
    if (segment.degree() != degree) {
      throw ConfigurationError("all spline segments must share one degree");
    }
  }
  if (segments.size() > 1 && degree < MinimumDegree(continuity)) {
    throw ConfigurationError(
        std::string(ToString(continuity)) + " continuity needs degree >= " +
        std::to_string(MinimumDegree(continuity)) + ", got " +
        std::to_string(degree));
  }
}

}  // namespace

BezierSpline BezierSpline::Create(std::vector<BezierSegment> segments,
                                  Continuity continuity) {
  CheckShape(segments, continuity);
  const auto defects = CheckContinuity(segments, continuity);
  if (!defects.empty()) {
    std::vector<FieldIssue> issues;
    for (const auto& d : defects) {
      issues.push_back(
          {"/segments/" + std::to_string(d.joint + 1),
           "joint " + std::to_string(d.joint) + " violates C" +
               std::to_string(d.order) + " (residual " + Describe(d.residual) +
               ")"});
    }
    throw ValidationError(std::move(issues));
  }
  return BezierSpline(std::move(segments), continuity);
}

const Vec2& BezierSpline::point(const PointIndex& index) const {
  if (index.segment < 0 || index.segment >= num_segments() ||
      index.index < 0 || index.index > degree()) {
    throw InvalidArgumentError("point index out of range");
  }
  return segments_[index.segment].point(index.index);
}

int BezierSpline::Locate(double w, double* inner) const {
  const double end = ParameterEnd();
  if (!(w >= 0.0 && w <= end)) {
    throw DomainError("path parameter " + Describe(w) + " outside [0, " +
                      Describe(end) + "]");
  }
  int i = static_cast<int>(std::floor(w));
  if (i >= num_segments()) i = num_segments() - 1;
  *inner = std::clamp(w - i, 0.0, 1.0);
  return i;
}

Vec2 BezierSpline::Evaluate(double w) const {
  double u = 0.0;
  const int i = Locate(w, &u);
  return segments_[i].EvaluatePolynomial(u);
}

Vec2 BezierSpline::Derivative(double w, int order) const {
  double u = 0.0;
  const int i = Locate(w, &u);
  return segments_[i].DerivativePolynomial(u, order);
}

double BezierSpline::Curvature(double w) const {
  if (degree() < 3) {
    throw ConfigurationError("curvature needs segments of degree >= 3");
  }
  return SignedCurvature(Derivative(w, 1), Derivative(w, 2));
}

PointRole BezierSpline::RoleOf(const PointIndex& index) const {
  point(index);  // range check
  return gvfnav::RoleOf(index, degree(), continuity_);
}

std::vector<FreePointIndex> BezierSpline::PointRoles() const {
  std::vector<FreePointIndex> roles;
  const int n = degree();
  const int p = Order(continuity_);
  for (int i = 0; i < num_segments(); ++i) {
    for (int k = 0; k <= n; ++k) {
      FreePointIndex entry{{i, k}, gvfnav::RoleOf({i, k}, n, continuity_), -1};
      if (i == 0) {
        entry.global_index = k;
      } else if (k > p) {
        entry.global_index = (n + 1) + (i - 1) * (n - p) + (k - p - 1);
      }
      roles.push_back(entry);
    }
  }
  return roles;
}

std::vector<FreePointIndex> BezierSpline::ConfigurablePoints() const {
  std::vector<FreePointIndex> out;
  for (const auto& entry : PointRoles()) {
    if (entry.global_index >= 0) out.push_back(entry);
  }
  return out;
}

bool BezierSpline::IsClosed(double tolerance) const {
  const std::vector<BezierSegment> wrap = {segments_.back(), segments_.front()};
  return CheckContinuity(wrap, continuity_, tolerance).empty();
}

// --- Construction helpers ----------------------------------------------------

BezierSpline EnforceContinuity(std::vector<BezierSegment> draft,
                               Continuity continuity) {
  CheckShape(draft, continuity);
  const int n = draft.front().degree();
  for (size_t i = 0; i + 1 < draft.size(); ++i) {
    const auto prev = draft[i].points();
    std::vector<Vec2> next(draft[i + 1].points().begin(),
                           draft[i + 1].points().end());
    next[0] = prev[n];
    if (Order(continuity) >= 1) next[1] = 2.0 * prev[n] - prev[n - 1];
    if (Order(continuity) >= 2) {
      next[2] = 4.0 * prev[n] - 4.0 * prev[n - 1] + prev[n - 2];
    }
    draft[i + 1] = BezierSegment(std::move(next));
  }
  return BezierSpline::Create(std::move(draft), continuity);
}

BezierSpline SplineFromConfigurablePoints(std::span<const Vec2> points,
                                          int num_segments, int degree,
                                          Continuity continuity) {
  if (num_segments < 1) throw ConfigurationError("need at least one segment");
  if (degree < 1 || degree > kMaxBezierDegree) {
    throw ConfigurationError("unsupported degree " + std::to_string(degree));
  }
  const int expected = ConfigurablePointCount(num_segments, degree, continuity);
  if (static_cast<int>(points.size()) != expected) {
    throw ConfigurationError(
        "expected " + std::to_string(expected) + " configurable points for " +
        std::to_string(num_segments) + " segments of degree " +
        std::to_string(degree) + " with " + std::string(ToString(continuity)) +
        ", got " + std::to_string(points.size()));
  }
  const int p = Order(continuity);
  std::vector<BezierSegment> draft;
  size_t cursor = 0;
  for (int i = 0; i < num_segments; ++i) {
    std::vector<Vec2> seg(degree + 1, Vec2::Zero());
    for (int k = (i == 0 ? 0 : p + 1); k <= degree; ++k) {
      seg[k] = points[cursor++];
    }
    draft.emplace_back(std::move(seg));
  }
  return EnforceContinuity(std::move(draft), continuity);
}

std::vector<Vec2> ConfigurablePointValues(const BezierSpline& spline) {
  std::vector<Vec2> values;
  for (const auto& entry : spline.ConfigurablePoints()) {
    values.push_back(spline.point(entry.point));
  }
  return values;
}

BezierSpline MovePoints(const BezierSpline& spline,
                        std::span<const PointMove> moves) {
  std::vector<std::vector<Vec2>> points;
  for (const auto& segment : spline.segments()) {
    points.emplace_back(segment.points().begin(), segment.points().end());
  }
  const int n = spline.degree();
  for (const auto& move : moves) {
    const PointRole role = spline.RoleOf(move.index);
    if (role == PointRole::kContinuityLocked) {
      throw InvalidArgumentError(
          "point (" + std::to_string(move.index.segment) + ", " +
          std::to_string(move.index.index) + ") is fixed by the " +
          std::string(ToString(spline.continuity())) +
          " joint recurrence with segment " +
          std::to_string(move.index.segment - 1) +
          "; move that segment's last points instead");
    }
    if (!IsFinite(move.position)) {
      throw InvalidArgumentError("non-finite point position");
    }
    PointIndex target = move.index;
    if (target.segment > 0 && target.index == 0) {
      target = {target.segment - 1, n};
    }
    points[target.segment][target.index] = move.position;
  }
  std::vector<BezierSegment> draft;
  for (auto& seg : points) draft.emplace_back(std::move(seg));
  return EnforceContinuity(std::move(draft), spline.continuity());
}

BezierSpline MovePoint(const BezierSpline& spline, const PointIndex& index,
                       const Vec2& position) {
  const PointMove move{index, position};
  return MovePoints(spline, std::span<const PointMove>(&move, 1));
}

// --- UnboundedSplinePath -----------------------------------------------------

UnboundedSplinePath::UnboundedSplinePath(BezierSpline spline)
    : spline_(std::move(spline)), periodic_(spline_.IsClosed()) {}

double UnboundedSplinePath::Canonical(double w) const {
  if (!periodic_) return w;
  const double end = ParameterEnd();
  double folded = std::fmod(w, end);
  if (folded < 0.0) folded += end;
  if (folded >= end) folded = 0.0;
  return folded;
}

int UnboundedSplinePath::Locate(double w, double* inner) const {
  if (!std::isfinite(w)) throw DomainError("non-finite path parameter");
  const double c = Canonical(w);
  const int last = spline_.num_segments() - 1;
  int i = static_cast<int>(std::floor(c));
  i = std::clamp(i, 0, last);
  *inner = c - i;
  return i;
}

Vec2 UnboundedSplinePath::Evaluate(double w) const {
  double u = 0.0;
  const int i = Locate(w, &u);
  return spline_.segment(i).EvaluatePolynomial(u);
}

Vec2 UnboundedSplinePath::Derivative(double w, int order) const {
  double u = 0.0;
  const int i = Locate(w, &u);
  return spline_.segment(i).DerivativePolynomial(u, order);
}

// --- Convex hull -------------------------------------------------------------

std::vector<Vec2> ConvexHull(std::span<const Vec2> input) {
  std::vector<Vec2> pts(input.begin(), input.end());
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 2) return pts;

  // Andrew's monotone chain; drops collinear points.
  std::vector<Vec2> hull(2 * pts.size());
  size_t k = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && Cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) {
      --k;
    }
    hull[k++] = pts[i];
  }
  for (size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower &&
           Cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) {
      --k;
    }
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() == 1 || (hull.size() == 2 && hull[0] == hull[1])) {
    hull.resize(1);
  }
  return hull;
}

}  // namespace gvfnav
