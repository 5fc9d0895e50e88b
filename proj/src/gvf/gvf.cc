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

#include "gvfnav/gvf.h"

#include <cmath>
#include <string>

#include "gvfnav/errors.h"

namespace gvfnav {

void GuidanceGains::Validate() const {
  if (!(k1 > 0.0) || !(k2 > 0.0) || !(k_theta > 0.0) || !std::isfinite(k1) ||
      !std::isfinite(k2) || !std::isfinite(k_theta)) {
    throw InvalidArgumentError("guidance gains k1, k2, k_theta must be > 0");
  }
  if (direction != 1 && direction != -1) {
    throw InvalidArgumentError("direction must be +1 or -1");
  }
}

PathSample SamplePath(const ParametricPath& path, double w) {
  return {w, path.Evaluate(w), path.Derivative(w, 1), path.Derivative(w, 2)};
}

ErrorVector Surfaces(const Vec2& p, const PathSample& sample) {
  return {p.x() - sample.f.x(), p.y() - sample.f.y()};
}

ErrorVector Surfaces(const AugmentedState& xi, const ParametricPath& path) {
  const Vec2 f = path.Evaluate(xi.w);
  return {xi.p.x() - f.x(), xi.p.y() - f.y()};
}

Vec3 AugmentedVector(const Vec2& p, const PathSample& sample,
                     const GuidanceGains& gains) {
  const ErrorVector e = Surfaces(p, sample);
  const double s = gains.direction;
  const double c1 = gains.k1 * e.phi1;
  const double c2 = gains.k2 * e.phi2;
  return {s * sample.d1.x() - c1, s * sample.d1.y() - c2,
          s + c1 * sample.d1.x() + c2 * sample.d1.y()};
}

FieldEval AugmentedField(const Vec2& p, const PathSample& sample,
                         const GuidanceGains& gains) {
  FieldEval out;
  out.chi = AugmentedVector(p, sample, gains);
  out.chi_p = out.chi.head<2>();
  out.chi_p_norm = out.chi_p.norm();
  if (!(out.chi_p_norm > kFieldEpsilon)) {
    throw DegenerateFieldError(
        "planar field projection vanished at p = (" + std::to_string(p.x()) +
        ", " + std::to_string(p.y()) + "), w = " + std::to_string(sample.w));
  }
  out.chi_p_hat = out.chi_p / out.chi_p_norm;
  return out;
}

FieldEval AugmentedField(const AugmentedState& xi, const ParametricPath& path,
                         const GuidanceGains& gains) {
  return AugmentedField(xi.p, SamplePath(path, xi.w), gains);
}

double WDot(double v, const FieldEval& field) {
  if (!(field.chi_p_norm > kFieldEpsilon)) {
    throw DegenerateFieldError("planar field projection vanished");
  }
  return v * field.chi.z() / field.chi_p_norm;
}

Mat23 FieldJacobian(const PathSample& sample, const GuidanceGains& gains) {
  const double s = gains.direction;
  Mat23 j;
  j << -gains.k1, 0.0, s * sample.d2.x() + gains.k1 * sample.d1.x(),  //
      0.0, -gains.k2, s * sample.d2.y() + gains.k2 * sample.d1.y();
  return j;
}

Mat23 FieldJacobian(const AugmentedState& xi, const ParametricPath& path,
                    const GuidanceGains& gains) {
  return FieldJacobian(SamplePath(path, xi.w), gains);
}

double ThetaDDot(const FieldEval& field, const Mat23& jacobian,
                 const Vec3& xi_dot) {
  if (!(field.chi_p_norm > kFieldEpsilon)) {
    throw DegenerateFieldError("planar field projection vanished");
  }
  const Vec2 chi_p_rate = jacobian * xi_dot;
  return RotateCcw90(field.chi_p_hat).dot(chi_p_rate) / field.chi_p_norm;
}

double ThetaDDot(const AugmentedState& xi, const ParametricPath& path,
                 const GuidanceGains& gains, const Vec3& xi_dot) {
  const PathSample sample = SamplePath(path, xi.w);
  return ThetaDDot(AugmentedField(xi.p, sample, gains),
                   FieldJacobian(sample, gains), xi_dot);
}

double HeadingControl(const Vec2& heading_hat, const FieldEval& field,
                      double theta_d_dot, const GuidanceGains& gains) {
  return theta_d_dot -
         gains.k_theta * heading_hat.dot(RotateCcw90(field.chi_p_hat));
}

double LyapunovValue(const ErrorVector& e, const GuidanceGains& gains) {
  return 0.5 * (gains.k1 * e.phi1 * e.phi1 + gains.k2 * e.phi2 * e.phi2);
}

Mat2 QMatrix(const Vec2& d1, const GuidanceGains& gains) {
  Mat2 ntn;
  ntn << 1.0 + d1.x() * d1.x(), d1.x() * d1.y(),  //
      d1.x() * d1.y(), 1.0 + d1.y() * d1.y();
  const Eigen::DiagonalMatrix<double, 2> k(gains.k1, gains.k2);
  return k * ntn * k;
}

QEigenvalues QMatrixEigenvalues(const Vec2& d1, const GuidanceGains& gains) {
  if (gains.k1 == gains.k2) {
    const double k_sq = gains.k1 * gains.k1;
    return {k_sq, k_sq * (d1.squaredNorm() + 1.0)};
  }
  const Mat2 q = QMatrix(d1, gains);
  const double mean = 0.5 * (q(0, 0) + q(1, 1));
  const double half_gap = 0.5 * (q(0, 0) - q(1, 1));
  const double radius = std::hypot(half_gap, q(0, 1));
  // lambda_min = det / lambda_max avoids cancellation when det is small.
  const double lambda_max = mean + radius;
  const double det = q(0, 0) * q(1, 1) - q(0, 1) * q(1, 0);
  return {det / lambda_max, lambda_max};
}

QEigenvalues QMatrixEigenvalues(const ParametricPath& path, double w,
                                const GuidanceGains& gains) {
  return QMatrixEigenvalues(path.Derivative(w, 1), gains);
}

double DisturbanceErrorBoundFromLambda(double sup_d, double lambda_min) {
  if (!(sup_d >= 0.0)) throw InvalidArgumentError("sup_d must be >= 0");
  if (!(lambda_min > 0.0)) throw InvalidArgumentError("lambda_min must be > 0");
  return sup_d / std::sqrt(lambda_min);
}

double DisturbanceErrorBound(double sup_d, const GuidanceGains& gains) {
  if (gains.k1 != gains.k2) {
    throw InvalidArgumentError(
        "the w-independent bound needs k1 = k2; use the per-sample lambda_min");
  }
  return DisturbanceErrorBoundFromLambda(sup_d, gains.k1 * gains.k1);
}

}  // namespace gvfnav
