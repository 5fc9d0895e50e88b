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

// Singularity-free guiding vector field in the augmented space (p_x, p_y, w).
//
// With surfaces phi_j = p_j - f_j(w), the field is
//
//   chi = s * (f1', f2', 1) + (-k1 phi1, -k2 phi2, k1 phi1 f1' + k2 phi2 f2')
//
// where s = +1 or -1 selects the travel direction. The third component never
// vanishes together with the planar part, so chi has no zeros.

#ifndef GVFNAV_GVF_H_
#define GVFNAV_GVF_H_

#include <Eigen/Core>

#include "gvfnav/bezier.h"

namespace gvfnav {

// ||chi_p|| at or below this is reported as a degenerate projection.
inline constexpr double kFieldEpsilon = 1e-9;

using Mat23 = Eigen::Matrix<double, 2, 3>;

struct AugmentedState {
  Vec2 p = Vec2::Zero();
  double w = 0.0;
};

struct GuidanceGains {
  double k1 = 0.5;
  double k2 = 0.5;
  double k_theta = 1.0;
  // +1 follows increasing w, -1 reverses the propagation term.
  int direction = 1;

  // InvalidArgumentError unless k1, k2, k_theta > 0 and direction is +-1.
  void Validate() const;
  double k_min() const { return k1 < k2 ? k1 : k2; }
  double k_max() const { return k1 < k2 ? k2 : k1; }
};

struct ErrorVector {
  double phi1 = 0.0;
  double phi2 = 0.0;

  Vec2 AsVector() const { return {phi1, phi2}; }
  double Norm() const { return AsVector().norm(); }
};

struct FieldEval {
  Vec3 chi = Vec3::Zero();
  Vec2 chi_p = Vec2::Zero();
  Vec2 chi_p_hat = Vec2::Zero();
  double chi_p_norm = 0.0;
};

// f, f', f'' at one w, so that field, Jacobian and curvature share a single
// path evaluation.
struct PathSample {
  double w = 0.0;
  Vec2 f = Vec2::Zero();
  Vec2 d1 = Vec2::Zero();
  Vec2 d2 = Vec2::Zero();
};

PathSample SamplePath(const ParametricPath& path, double w);

ErrorVector Surfaces(const AugmentedState& xi, const ParametricPath& path);
ErrorVector Surfaces(const Vec2& p, const PathSample& sample);

// The raw 3-vector chi; defined everywhere.
Vec3 AugmentedVector(const Vec2& p, const PathSample& sample,
                     const GuidanceGains& gains);

// chi with its planar projection. DegenerateFieldError when
// ||chi_p|| <= kFieldEpsilon.
FieldEval AugmentedField(const AugmentedState& xi, const ParametricPath& path,
                         const GuidanceGains& gains);
FieldEval AugmentedField(const Vec2& p, const PathSample& sample,
                         const GuidanceGains& gains);

// dw/dt = v chi3 / ||chi_p||.
double WDot(double v, const FieldEval& field);

// d chi_p / d xi as a 2x3 matrix, columns (p_x, p_y, w).
Mat23 FieldJacobian(const AugmentedState& xi, const ParametricPath& path,
                    const GuidanceGains& gains);
Mat23 FieldJacobian(const PathSample& sample, const GuidanceGains& gains);

// Angular rate of chi_p_hat along the motion xi_dot = (p_x', p_y', w'):
// (E chi_p_hat)^T (J xi_dot) / ||chi_p||, so that
// d chi_p_hat / dt = theta_d_dot * E chi_p_hat.
double ThetaDDot(const AugmentedState& xi, const ParametricPath& path,
                 const GuidanceGains& gains, const Vec3& xi_dot);
double ThetaDDot(const FieldEval& field, const Mat23& jacobian,
                 const Vec3& xi_dot);

// u_theta = theta_d_dot - k_theta * h_hat^T E chi_p_hat.
double HeadingControl(const Vec2& heading_hat, const FieldEval& field,
                      double theta_d_dot, const GuidanceGains& gains);

// V = (k1 phi1^2 + k2 phi2^2) / 2.
double LyapunovValue(const ErrorVector& e, const GuidanceGains& gains);

struct QEigenvalues {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

// Q = K N^T N K with N = (grad phi1, grad phi2) evaluated for tangent `d1`.
Mat2 QMatrix(const Vec2& d1, const GuidanceGains& gains);

// Closed form k^2 and k^2 (||f'||^2 + 1) for k1 = k2; the exact 2x2
// symmetric eigenvalues otherwise.
QEigenvalues QMatrixEigenvalues(const Vec2& d1, const GuidanceGains& gains);
QEigenvalues QMatrixEigenvalues(const ParametricPath& path, double w,
                                const GuidanceGains& gains);

// sup_d / sqrt(lambda_min). The gains overload needs k1 = k2, where
// lambda_min = k1^2 independently of w; InvalidArgumentError otherwise.
double DisturbanceErrorBound(double sup_d, const GuidanceGains& gains);
double DisturbanceErrorBoundFromLambda(double sup_d, double lambda_min);

}  // namespace gvfnav

#endif  // GVFNAV_GVF_H_
