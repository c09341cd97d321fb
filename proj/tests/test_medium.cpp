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
#include <sstream>

#include "doctest.h"
#include "qdmem/errors.hpp"
#include "qdmem/grid.hpp"
#include "qdmem/medium.hpp"

using namespace qdmem;

TEST_CASE("unit conversion round trip") {
  CHECK(units::mhz(1000.0) == doctest::Approx(2.0 * M_PI));
  CHECK(units::to_mhz(units::mhz(156.95)) == doctest::Approx(156.95));
}

TEST_CASE("D2 stretch dipole moments") {
  const auto s = lookup_scheme("D2-stretch-config1", 75);
  CHECK(s.mu_1g == doctest::Approx(0.6455).epsilon(1e-4));
  CHECK(s.mu_1s == doctest::Approx(std::sqrt(1.0 / 20.0)));
  CHECK(s.mu_2s == doctest::Approx(-0.5));
  CHECK(s.gamma == doctest::Approx(2 * M_PI * 3.035e-3));
  CHECK(s.delta_e == doctest::Approx(2 * M_PI * 0.15695));
}

TEST_CASE("D1 moments carry the reduced-moment factor") {
  const auto s = lookup_scheme("D1-clock-config2", 75);
  CHECK(std::abs(s.mu_1g) == doctest::Approx(0.5));
  CHECK(s.d * s.mu_1g * s.mu_1g == doctest::Approx(18.75));
  const auto* e = Rb87Catalog::instance().find("D1-clock-config2");
  REQUIRE(e != nullptr);
  CHECK(e->line_factor == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(s.gamma == doctest::Approx(M_PI * 5.75e-3));
  CHECK(std::abs(s.delta_e) == doctest::Approx(2 * M_PI * 0.8145));
}

TEST_CASE("every D1 entry scales its raw line moments by the same factor") {
  for (const auto& e : Rb87Catalog::instance().entries()) {
    const auto s = lookup_scheme(e.label, 1.0);
    const double f = e.line == "D1" ? kD1Factor : 1.0;
    CHECK(s.mu_1g == doctest::Approx(e.raw_1g * f));
    CHECK(s.mu_2s == doctest::Approx(e.raw_2s * f));
    CHECK(std::abs(s.mu_1g) <= 1.0);
  }
}

TEST_CASE("three-level entries decouple the second excited state") {
  CHECK(lookup_scheme("ideal-3L", 75).three_level());
  CHECK(lookup_scheme("D1-clock-config3", 75).three_level());
  CHECK_FALSE(lookup_scheme("4L-", 75).three_level());
  const auto m = lookup_scheme("4L-", 75);
  CHECK(m.mu_2g == 1.0);
  CHECK(m.mu_2s == -1.0);
}

TEST_CASE("unknown labels list the valid ones") {
  try {
    lookup_scheme("D3-foo", 75);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::catalog);
    CHECK(std::string(e.what()).find("D2-clock-config4") != std::string::npos);
  }
  CHECK_THROWS_AS(lookup_scheme("ideal-3L", -1.0), Error);
}

TEST_CASE("catalog CSV exports one row per entry") {
  const std::string csv = Rb87Catalog::instance().export_csv();
  std::istringstream is(csv);
  std::string line;
  int rows = -1;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == static_cast<int>(Rb87Catalog::instance().entries().size()));
  CHECK(csv.find("0.6454972244") != std::string::npos);
}

TEST_CASE("scheme validation") {
  LevelScheme s;
  s.mu_1g = 1.5;
  CHECK_THROWS_AS(s.validate(), Error);
  s.mu_1g = 1.0;
  s.gamma = 0.0;
  CHECK_THROWS_AS(s.validate(), Error);
}

TEST_CASE("control power and energy") {
  // 52.47 W/m^2 per (Omega/gamma)^2 per waist^2
  CHECK(rabi_to_peak_power(43.1, 350e-6) == doctest::Approx(52.47 * 350e-6 * 350e-6 * 43.1 * 43.1));
  CHECK(rabi_to_peak_power(0.0, 1e-3) == 0.0);
  CHECK_THROWS_AS(rabi_to_peak_power(-1.0, 1e-3), Error);
  CHECK_THROWS_AS(rabi_to_peak_power(1.0, 0.0), Error);

  SimGrid g(2, 2001, 10.0);
  std::vector<double> flat(g.n_t(), 10.0);
  // constant 10 gamma for 10 ns
  CHECK(pulse_energy(ControlPulse(flat), g, 1e-3) ==
        doctest::Approx(52.47 * 1e-6 * 100.0 * 10.0 * 1e-9));
  CHECK_THROWS_AS(pulse_energy(ControlPulse(flat), SimGrid(2, 11, 1.0), 1e-3), Error);
}
