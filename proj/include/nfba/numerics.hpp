// Copyright 2026 The nfba Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <vector>

#include "nfba/array_config.hpp"

namespace nfba {

/// Point (C(t), S(t)) on the Cornu spiral, with
/// C(x) = int_0^x cos(t^2) dt and S(x) = int_0^x sin(t^2) dt.
struct CornuPoint {
  double c = 0.0;
  double s = 0.0;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct CornuFrame {
  Vec2 tangent;
  Vec2 normal;
  double curvature = 0.0;
  double radius = 0.0;  // +infinity at t = 0
};

/// Composite quantities of the Fresnel-approximated correlation:
/// s = d(1 - theta^2) / (2r), delta = N sqrt(pi s),
/// w = sqrt(pi s) (l / (N s) - N / 2).
struct SpreadParams {
  double s_param = 0.0;
  double delta = 0.0;
  double w = 0.0;
};

/// Fresnel integrals in the unnormalized convention. Maclaurin series for
/// |x| <= 1.8, continued fraction for the complementary error function above.
/// Throws std::domain_error for non-finite x.
CornuPoint fresnel(double x);

/// Tangent, normal, curvature 2t and radius 1/(2t) of the spiral at t.
CornuFrame cornu_frame(double t);

/// Center of the osculating circle F(t) + R(t) N(t). `radius_override`
/// replaces R(t); it exists to reproduce figure captions that use 1/t.
/// Throws std::domain_error for t <= 0.
Vec2 osculating_center(double t, std::optional<double> radius_override = std::nullopt);

/// Throws std::domain_error when r <= 0, |theta| >= 1 or N s >= 1.
SpreadParams spread_params(double theta, double r, int l, const ArrayConfig& cfg);

/// |f(theta + 2l/N)^H a(theta, r)|^2 from exact per-element distances.
double rho_exact(double theta, double r, int l, const ArrayConfig& cfg);

/// Fresnel-integral approximation of rho_exact. Even in l by construction.
double rho_fresnel(double theta, double r, int l, const ArrayConfig& cfg);

/// Same, parameterized directly by s; used by range demapping.
double rho_fresnel_s(double s_param, int l, int n_antennas);

/// 1 / (w^2 (w + delta)^2). Throws std::domain_error unless w > 0.
double rho_upper_bound(double theta, double r, int l, const ArrayConfig& cfg);
double rho_upper_bound(double w, double delta);

/// L(delta, eps) = floor(sqrt(a (a + 2 / (pi eps)))) with a = delta^2 / (2 pi).
int spread_half_width(double delta, double epsilon);

/// Same floor expression given a = delta^2 / (2 pi) directly.
int half_width_from_ratio(double a, double epsilon);

/// a-coefficient K(theta) = N^2 d (1 - theta^2) / 4, so that
/// delta^2 / (2 pi) = K(theta) / r.
double spread_coefficient(double theta, const ArrayConfig& cfg);

/// L(delta(theta, r), eps) evaluated as half_width_from_ratio(K(theta) * (1 / r)).
int half_width_at(double theta, double r, double epsilon, const ArrayConfig& cfg);

/// 1 / (w (w + delta)) at l = N/2, i.e. 4 s / (pi (1 - N^2 s^2)). The subspace
/// guarantee needs this below epsilon.
double subspace_validity_bound(double s_param, int n_antennas);

/// 1-based DFT indices ((center - 1 + l) mod N) + 1 for l = -L..L.
std::vector<int> circular_window(int center, int half_width, int n_antennas);

/// Window of DFT columns spanning the epsilon-approximated signal subspace
/// around `center` for a user at range r. Emits a one-time warning on stderr
/// when the validity bound is not below epsilon.
std::vector<int> epsilon_subspace(int center, double r, double epsilon, const ArrayConfig& cfg);

}  // namespace nfba
