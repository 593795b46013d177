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

#include <doctest.h>

#include <cmath>
#include <random>

#include "nfba/channel.hpp"
#include "nfba/numerics.hpp"
#include "oracles.hpp"

using namespace nfba;

namespace {
const ArrayConfig kCfg{};

int scan_nearest(double theta, int n) {
  int best = 1;
  for (int m = 2; m <= n; ++m) {
    const double gm = (2.0 * m - n - 1.0) / n;
    const double gb = (2.0 * best - n - 1.0) / n;
    if (std::abs(theta - gm) < std::abs(theta - gb)) best = m;
  }
  return best;
}
}  // namespace

TEST_CASE("array constants") {
  CHECK(kCfg.rayleigh_distance() == doctest::Approx(348.35).epsilon(1e-4));
  CHECK(std::abs(kCfg.noise_dbm() - (-84.70581)) < 1e-3);
  CHECK(kCfg.wavelength() == doctest::Approx(0.0107142857));
  CHECK(kCfg.grid_angle(128) == -1.0 / 256.0);
  CHECK(kCfg.grid_angle(1) == -255.0 / 256.0);
  ArrayConfig bad = kCfg;
  bad.r_min = 90.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("steering vectors") {
  const ComplexVector a = steering_vector(0.3, 12.0, kCfg);
  CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-12));
  const ComplexVector far = steering_vector(0.3, kFarField, kCfg);
  CHECK(far.norm() == doctest::Approx(1.0).epsilon(1e-12));
  // Far-field phase progression is linear in the element offset.
  const Complex step = far[1] / far[0];
  for (int n = 1; n < 255; ++n) CHECK(std::abs(far[n + 1] / far[n] - step) < 1e-9);
  CHECK_THROWS_AS(steering_vector(0.0, 0.0, kCfg), std::domain_error);
  CHECK_THROWS_AS(steering_vector(1.5, 10.0, kCfg), std::domain_error);
}

TEST_CASE("channel norm") {
  for (double r : {4.0, 10.0, 80.0}) {
    const ComplexVector h = channel(UePosition::from_phi(0.2, r), kCfg);
    const double expected = std::sqrt(256.0) * kCfg.wavelength() / (4.0 * kPi * r);
    CHECK(h.norm() == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("dft codebook") {
  const DftCodebook dft(kCfg);
  CHECK(dft.size() == 256);
  const ComplexMatrix g = dft.matrix().adjoint() * dft.matrix();
  CHECK((g - ComplexMatrix::Identity(256, 256)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((dft.column(77) - dft_column(77, kCfg)).norm() < 1e-15);
  CHECK((dft.column(77) - steering_vector(kCfg.grid_angle(77), kFarField, kCfg)).norm() < 1e-12);
  CHECK_THROWS_AS(dft_column(0, kCfg), std::out_of_range);
  CHECK_THROWS_AS(dft_column(257, kCfg), std::out_of_range);

  std::mt19937_64 gen(1);
  std::normal_distribution<double> nd;
  ComplexVector x(256);
  for (auto& v : x) v = Complex(nd(gen), nd(gen));
  CHECK(dft.analyze(x).norm() == doctest::Approx(x.norm()).epsilon(1e-12));
  CHECK((dft.synthesize(dft.analyze(x)) - x).norm() < 1e-10 * x.norm());

  const ComplexVector h = channel(UePosition::from_phi(-0.4, 7.0), kCfg);
  CHECK(dft.analyze(h).norm() == doctest::Approx(h.norm()).epsilon(1e-12));
}

TEST_CASE("correlation convention agrees with DFT projections") {
  for (int m : {20, 128, 201}) {
    const double theta = kCfg.grid_angle(m);
    const ComplexVector a = steering_vector(theta, 9.0, kCfg);
    for (int l : {-130, -5, 0, 3, 140}) {
      int idx = (m - 1 + l) % 256;
      if (idx < 0) idx += 256;
      const double direct = std::norm(inner(dft_column(idx + 1, kCfg), a));
      CHECK(rho_exact(theta, 9.0, l, kCfg) == doctest::Approx(direct).epsilon(1e-9));
    }
  }
}

TEST_CASE("nearest grid index") {
  CHECK(nearest_grid_index(kCfg.grid_angle(77), kCfg) == 77);
  // Midpoint between columns 192 and 193 ties to the lower index.
  CHECK(nearest_grid_index(0.5, kCfg) == 192);
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    const double t = u(gen);
    CHECK(nearest_grid_index(t, kCfg) == scan_nearest(t, 256));
  }
}

TEST_CASE("measurement") {
  const DftCodebook dft(kCfg);
  const ComplexVector h = channel(UePosition::from_phi(0.1, 20.0), kCfg);
  KeyedRng rng(1, 0, StreamTag::kDftNoise);
  const ComplexVector y0 = measure(h, 4.0, 0.0, dft, rng);
  CHECK((y0 - 2.0 * dft.analyze(h)).norm() < 1e-15);

  KeyedRng a(5, 3, StreamTag::kDftNoise), b(5, 3, StreamTag::kDftNoise);
  const ComplexVector ya = measure(h, 1.0, 1e-9, dft, a);
  const ComplexVector yb = measure(h, 1.0, 1e-9, dft, b);
  CHECK(ya == yb);

  KeyedRng noise(9, 0, StreamTag::kDftNoise);
  double sum = 0.0, re2 = 0.0;
  const int draws = 100000;
  for (int k = 0; k < draws / 1000; ++k) {
    const ComplexVector z = complex_noise(1000, 2.5, noise);
    for (const auto& v : z) {
      sum += std::norm(v);
      re2 += v.real() * v.real();
    }
  }
  CHECK(std::abs(sum / draws - 2.5) < 0.02 * 2.5);
  CHECK(std::abs(re2 / draws - 1.25) < 0.02 * 1.25);
}

TEST_CASE("keyed rng streams") {
  KeyedRng a(1, 2, StreamTag::kUser), b(1, 2, StreamTag::kUser), c(1, 3, StreamTag::kUser);
  for (int k = 0; k < 10; ++k) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }
  KeyedRng u(4);
  double mean = 0.0;
  for (int k = 0; k < 20000; ++k) {
    const double v = u.uniform();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
    mean += v;
  }
  CHECK(std::abs(mean / 20000.0 - 0.5) < 0.01);
  for (int k = 0; k < 1000; ++k) CHECK(u.below(7) < 7u);
}

TEST_CASE("polar codebook") {
  const PolarCodebook pc(kCfg, 1.2, 16);
  CHECK(pc.size() == 4096);
  for (int k = 0; k < pc.size(); k += 97) {
    CHECK(pc.column(k).norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  const int k0 = pc.index_of(40, 0);
  CHECK(pc.codeword(k0).angle_index == 40);
  CHECK(std::isinf(pc.codeword(k0).range));
  CHECK((pc.column(k0) - dft_column(40, kCfg)).norm() < 1e-12);

  const int k3 = pc.index_of(128, 3);
  const double theta = kCfg.grid_angle(128);
  const double expected = 256.0 * 256.0 * kCfg.spacing() * kCfg.spacing() * (1.0 - theta * theta) /
                          (2.0 * kCfg.wavelength() * 1.2 * 1.2 * 3.0);
  CHECK(pc.codeword(k3).range == doctest::Approx(expected).epsilon(1e-12));

  // Same-angle adjacent-ring coherence within the simulated sector.
  double worst = 0.0;
  for (int m = 1; m <= 256; ++m) {
    if (std::abs(kCfg.grid_angle(m)) > std::sin(kPi / 3.0)) continue;
    for (int q = 0; q + 1 < 16; ++q) {
      const double c = std::abs(inner(pc.column(pc.index_of(m, q)), pc.column(pc.index_of(m, q + 1))));
      worst = std::max(worst, c);
    }
  }
  MESSAGE("max adjacent-ring coherence " << worst);
  CHECK(worst < 0.80);

  const auto corr = pc.correlate(channel(UePosition::from_theta(theta, pc.codeword(k3).range), kCfg));
  CHECK(corr.size() == 4096u);
  int best = 0;
  for (int k = 1; k < 4096; ++k) {
    if (std::abs(corr[k]) > std::abs(corr[best])) best = k;
  }
  CHECK(best == k3);
}
