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

// Classical fixed-step fourth-order Runge-Kutta.

#ifndef GVFNAV_INTEGRATOR_H_
#define GVFNAV_INTEGRATOR_H_

namespace gvfnav {

// One step of x' = f(t, x). State must support State + State and
// double * State; the derivative function returns a State.
template <typename State, typename Derivative>
State Rk4Step(const State& x, double t, double dt, Derivative&& f) {
  const double half = 0.5 * dt;
  const State k1 = f(t, x);
  const State k2 = f(t + half, State(x + half * k1));
  const State k3 = f(t + half, State(x + half * k2));
  const State k4 = f(t + dt, State(x + dt * k3));
  return State(x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

}  // namespace gvfnav

#endif  // GVFNAV_INTEGRATOR_H_
