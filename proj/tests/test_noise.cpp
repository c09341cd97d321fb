/* Copyright 2026 The qdmem Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include <cmath>

#include "doctest.h"
#include "qdmem/errors.hpp"
#include "qdmem/noise.hpp"

using namespace qdmem;

namespace {

// Scan of a Lorentzian efficiency curve A c^2 / (x^2 + c^2).
DetuningScan lorentzian_scan(double A, double c, double limit, std::size_t n) {
  DetuningScan s;
  s.detunings = clustered_detunings(limit, n, c);
  for (double x : s.detunings) {
    s.eta_s.push_back(A * c * c / (x * x + c * c));
    s.eta_tot.push_back(0.5 * A * c * c / (x * x + c * c));
  }
  s.errors.assign(s.detunings.size(), "");
  return s;
}

}  // namespace

TEST_CASE("Lorentzian average matches the closed-form convolution") {
  // Lorentzian (half width c) against a unit Lorentzian of half width b
  // evaluated at 0 gives A c / (b + c).
  const double A = 0.6, c = 1.0;
  const auto scan = lorentzian_scan(A, c, 4000.0, 4001);
  for (double fwhm : {0.5, 1.0, 2.0, 6.0}) {
    const auto r = wandering_average(scan, fwhm);
    const double b = 0.5 * fwhm;
    CHECK(r.eta_s == doctest::Approx(A * c / (b + c)).epsilon(1e-3));
    CHECK(r.eta_tot == doctest::Approx(0.5 * A * c / (b + c)).epsilon(1e-3));
    CHECK(r.kernel_mass == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("zero width returns the on-resonance value") {
  const auto scan = lorentzian_scan(0.4, 1.0, 50.0, 101);
  const auto r = wandering_average(scan, 0.0);
  CHECK(r.eta_s == doctest::Approx(0.4));
  CHECK_THROWS_AS(wandering_average(scan, -1.0), Error);
}

TEST_CASE("averaging a peaked curve is non-increasing in the width") {
  const auto scan = lorentzian_scan(0.4, 1.0, 200.0, 801);
  double prev = 1.0;
  for (double w : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    const double v = wandering_average(scan, w).eta_s;
    CHECK(v <= prev + 1e-12);
    prev = v;
  }
}

TEST_CASE("narrow scans report a truncation bound") {
  DetuningScan s;
  s.detunings = {-1.0, 0.0, 1.0};
  s.eta_s = {0.3, 0.4, 0.3};
  s.eta_tot = {0.1, 0.2, 0.1};
  s.errors.assign(3, "");
  const auto r = wandering_average(s, 10.0);
  CHECK(r.truncation_bound > 0.0);
  CHECK_FALSE(r.warning.empty());
  s.eta_s[1] = NAN;
  CHECK_THROWS_AS(wandering_average(s, 1.0), Error);
}

TEST_CASE("scan limit rule") {
  CHECK(wandering_scan_limit(1.0, 1.0) == 50.0);
  CHECK(wandering_scan_limit(1.0, 6.0) == 120.0);
  const auto x = clustered_detunings(50.0, 20, 1.0);
  CHECK(x.size() == 21);
  CHECK(x.front() == doctest::Approx(-50.0));
  CHECK(x[10] == 0.0);
  CHECK_THROWS_AS(clustered_detunings(0.0, 11, 1.0), Error);
}

TEST_CASE("phase diffusion obeys <dphi^2> = D tau") {
  SimGrid g(2, 201, 10.0);
  const double D = 0.7;
  const int n = 4000;
  const auto msd = phase_msd(D, g, n, 99);
  for (std::size_t m : {50u, 100u, 200u}) {
    const double expect = D * g.tau(m);
    // Var[phi^2] = 2 (D tau)^2 for a Gaussian phase
    const double sigma = std::sqrt(2.0 / n) * expect;
    CHECK(std::abs(msd[m] - expect) < 3.0 * sigma);
  }
  CHECK(msd[0] == 0.0);
}

TEST_CASE("trajectories are reproducible and independent of each other") {
  SimGrid g(2, 101, 10.0);
  CHECK(phase_trajectory(1.0, g, 5, 3) == phase_trajectory(1.0, g, 5, 3));
  CHECK(phase_trajectory(1.0, g, 5, 3) != phase_trajectory(1.0, g, 5, 4));
  CHECK(phase_trajectory(1.0, g, 5, 3) != phase_trajectory(1.0, g, 6, 3));
  const auto zero = phase_trajectory(0.0, g, 5, 3);
  for (double v : zero) CHECK(v == 0.0);
  CHECK_THROWS_AS(phase_trajectory(-1.0, g, 1, 1), Error);
}

TEST_CASE("dephasing ensemble: baseline, determinism and worker independence") {
  SimGrid g(80, 100, 10.0);
  const auto s = lookup_scheme("D2-clock-config4", 75);
  const auto pulse = ControlPulse::gaussian(g, 1.5, 0.8, 40.0);
  const auto base = evaluate(s, pulse, make_waveform(WaveformKind::sharp_exponential, 1, 0, g), g);
  const auto e0 = dephasing_monte_carlo(s, pulse, g, 1.0, 0.0, 5, 1, 1);
  CHECK(e0.eta_s_mean == doctest::Approx(base.eta_s).epsilon(1e-12));
  CHECK(e0.eta_tot_mean == doctest::Approx(base.eta_tot).epsilon(1e-12));
  CHECK(e0.eta_s_std == doctest::Approx(0.0));
  const auto a = dephasing_monte_carlo(s, pulse, g, 1.0, 1.0, 12, 42, 1);
  const auto b = dephasing_monte_carlo(s, pulse, g, 1.0, 1.0, 12, 42, 3);
  CHECK(a.eta_s == b.eta_s);
  CHECK(a.eta_tot_mean == b.eta_tot_mean);
  CHECK(a.eta_s_std > 0.0);
  CHECK(a.eta_s_mean < base.eta_s);
  CHECK_THROWS_AS(dephasing_monte_carlo(s, pulse, g, 1.0, 1.0, 0, 1, 1), Error);
}

TEST_CASE("detuning scan of a fixed pulse") {
  SimGrid g(80, 100, 10.0);
  const auto s = lookup_scheme("D2-clock-config4", 75);
  const auto pulse = ControlPulse::gaussian(g, 1.5, 0.8, 40.0);
  const auto ph = make_waveform(WaveformKind::sharp_exponential, 1, 0, g);
  const std::vector<double> x{-100.0 * s.gamma, 0.0, 1e4 * s.gamma};
  const auto scan = scan_detuning(s, pulse, ph, g, x, 2);
  CHECK(scan.eta_s[1] == doctest::Approx(evaluate(s, pulse, ph, g).eta_s));
  CHECK(scan.eta_s[2] < 1e-2);
  CHECK(scan.eta_s[0] < scan.eta_s[1]);
  CHECK(scan.errors[1].empty());
  CHECK_THROWS_AS(scan_detuning(s, pulse, ph, g, {1.0, 0.0}, 1), Error);
}
