// Copyright (c) 2026 The fluxqp Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fluxqp/constants.hpp"
#include "fluxqp/errors.hpp"
#include "fluxqp/quasiparticle.hpp"

namespace qp = fluxqp::quasiparticle;
namespace constants = fluxqp::constants;
using fluxqp::ConfigError;

namespace {

// Time spent in the even state, integrated over the whole trace.
double even_time_s(const qp::TelegraphTrace& trace) {
  double total = 0.0;
  double t_prev = 0.0;
  qp::Parity p = trace.start;
  for (double t : trace.switch_times_s) {
    if (p == qp::Parity::even) total += t - t_prev;
    t_prev = t;
    p = (p == qp::Parity::even) ? qp::Parity::odd : qp::Parity::even;
  }
  if (p == qp::Parity::even) total += trace.duration_s - t_prev;
  return total;
}

}  // namespace

TEST_SUITE("quasiparticle") {

TEST_CASE("tunneling energy change is antisymmetric in the exchange") {
  const double d = qp::tunneling_energy_change(0.01, 0.08, 49.0, 50.0);
  CHECK(d == doctest::Approx(0.07 + 1.0).epsilon(1e-12));
  CHECK(qp::tunneling_energy_change(0.08, 0.01, 50.0, 49.0) ==
        doctest::Approx(-d).epsilon(1e-12));
  CHECK(qp::tunneling_energy_change(0.3, 0.3, 50.0, 50.0) == 0.0);
  CHECK_THROWS_AS(qp::tunneling_energy_change(0.0, 0.0, -1.0, 50.0),
                  ConfigError);
}

TEST_CASE("detailed balance ratio has the right fixed points") {
  CHECK(qp::rate_ratio(0.0, 0.05) == 1.0);
  // delta_E equal to the thermal energy suppresses the forward rate by 1/e.
  const double t_k = 0.1;
  CHECK(qp::rate_ratio(constants::thermal_ghz(t_k), t_k) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  // Forward and backward ratios are exact reciprocals.
  const double r = qp::rate_ratio(0.37, 0.05);
  CHECK(r * qp::rate_ratio(-0.37, 0.05) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(qp::rate_ratio(0.1, 0.0), ConfigError);
  CHECK_THROWS_AS(qp::rate_ratio(0.1, -1.0), ConfigError);
}

TEST_CASE("base rate matches E_c h / e^2 R and scales as 1/R") {
  CHECK(qp::base_rate_hz(4.02, 1.0e4) ==
        doctest::Approx(1.0377e10).epsilon(1e-3));
  CHECK(qp::base_rate_hz(4.02, 2.0e4) ==
        doctest::Approx(qp::base_rate_hz(4.02, 1.0e4) / 2.0).epsilon(1e-12));
  CHECK_THROWS_AS(qp::base_rate_hz(0.0, 1.0e4), ConfigError);
  CHECK_THROWS_AS(qp::base_rate_hz(4.02, 0.0), ConfigError);
}

TEST_CASE("directional rates saturate downhill and obey detailed balance") {
  const double g0 = 1.0e10;
  const double t_k = 0.05;
  CHECK(qp::tunneling_rate_hz(g0, 0.0, t_k) == g0);
  CHECK(qp::tunneling_rate_hz(g0, -2.0, t_k) == g0);  // downhill saturates
  const double up = qp::tunneling_rate_hz(g0, 0.8, t_k);
  const double down = qp::tunneling_rate_hz(g0, -0.8, t_k);
  CHECK(up < g0);
  CHECK(up / down == doctest::Approx(qp::rate_ratio(0.8, t_k)).epsilon(1e-12));
  CHECK(qp::tunneling_rate_hz(g0, constants::thermal_ghz(t_k), t_k) ==
        doctest::Approx(g0 * std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("telegraph simulation is deterministic and well-formed") {
  const auto a = qp::simulate_telegraph(3.0, 1.0, 100.0, 5);
  const auto b = qp::simulate_telegraph(3.0, 1.0, 100.0, 5);
  const auto c = qp::simulate_telegraph(3.0, 1.0, 100.0, 6);
  CHECK(a.switch_times_s == b.switch_times_s);
  CHECK(a.switch_times_s != c.switch_times_s);
  REQUIRE(a.switch_count() > 0);
  CHECK(a.switch_times_s.front() > 0.0);
  CHECK(a.switch_times_s.back() < a.duration_s);
  for (std::size_t i = 1; i < a.switch_times_s.size(); ++i) {
    CHECK(a.switch_times_s[i] > a.switch_times_s[i - 1]);
  }
  // Parity lookups alternate across switches.
  CHECK(a.at(0.0) == qp::Parity::even);
  CHECK(a.at(0.5 * (a.switch_times_s[0] + a.switch_times_s[1])) ==
        qp::Parity::odd);
  CHECK_THROWS_AS(a.at(-1.0), std::out_of_range);
  CHECK_THROWS_AS(a.at(100.5), std::out_of_range);

  CHECK_THROWS_AS(qp::simulate_telegraph(0.0, 0.0, 10.0, 1), ConfigError);
  CHECK_THROWS_AS(qp::simulate_telegraph(-1.0, 1.0, 10.0, 1), ConfigError);
  CHECK_THROWS_AS(qp::simulate_telegraph(1.0, 1.0, 0.0, 1), ConfigError);
}

TEST_CASE("a zero backward rate makes the odd state absorbing") {
  const auto trace = qp::simulate_telegraph(5.0, 0.0, 1000.0, 17);
  CHECK(trace.switch_count() == 1);
  CHECK(trace.at(trace.switch_times_s[0] + 1.0) == qp::Parity::odd);
  CHECK(trace.at(1000.0) == qp::Parity::odd);
  // Starting in the absorbing state, nothing ever happens.
  const auto stuck =
      qp::simulate_telegraph(5.0, 0.0, 1000.0, 17, qp::Parity::odd);
  CHECK(stuck.switch_count() == 0);
  CHECK(even_time_s(stuck) == 0.0);
}

TEST_CASE("occupancy converges to the stationary distribution") {
  // Stationary even fraction r_oe / (r_eo + r_oe) = 1/4; the correlation
  // time is 0.25 s, so over 2e4 s the time average is tight.
  const auto trace = qp::simulate_telegraph(3.0, 1.0, 2.0e4, 1001);
  const double frac = even_time_s(trace) / trace.duration_s;
  CHECK(std::abs(frac - 0.25) < 0.01);
}

TEST_CASE("symmetric switching events arrive as a Poisson stream") {
  // With equal rates r the exit rate is r in both states, so the switch
  // count over T is Poisson(r T): mean 10000, sigma 100.
  const auto trace = qp::simulate_telegraph(2.0, 2.0, 5000.0, 1002);
  const auto n = static_cast<double>(trace.switch_count());
  CHECK(std::abs(n - 10000.0) < 300.0);
}

TEST_CASE("probe occupancies are window averages of the trace") {
  const auto trace = qp::simulate_telegraph(50.0, 50.0, 200.0, 23);
  std::vector<double> probes;
  for (int k = 1; k <= 10; ++k) probes.push_back(10.0 * k);
  const auto occ = qp::parity_at_probes(trace, probes, 5.0, 0.1);
  REQUIRE(occ.size() == probes.size());
  for (const auto& o : occ) {
    CHECK(o.even_fraction + o.odd_fraction == doctest::Approx(1.0).epsilon(1e-12));
    // ~250 switches per 5 s window: both parities near the stationary half.
    CHECK(o.even_fraction > 0.35);
    CHECK(o.even_fraction < 0.65);
    CHECK(o.both_visible);
  }
  CHECK_THROWS_AS(qp::parity_at_probes(trace, {198.0}, 5.0), std::out_of_range);
  CHECK_THROWS_AS(qp::parity_at_probes(trace, {-1.0}, 5.0), std::out_of_range);
  CHECK_THROWS_AS(qp::parity_at_probes(trace, probes, 0.0), ConfigError);
}

TEST_CASE("short probe windows see a single parity") {
  // Switch probability within a 10 ms window at 0.5 Hz exit rate is ~0.5%,
  // so almost every probe reports one pure parity.
  const auto trace = qp::simulate_telegraph(0.5, 0.5, 1.0e4, 29);
  std::vector<double> probes;
  for (int k = 0; k < 990; ++k) probes.push_back(10.0 * k + 1.0);
  const auto occ = qp::parity_at_probes(trace, probes, 0.01, 0.1);
  int pure = 0;
  for (const auto& o : occ) {
    if (!o.both_visible) ++pure;
  }
  CHECK(static_cast<double>(pure) / static_cast<double>(occ.size()) > 0.9);
}

TEST_CASE("window sampler matches the stationary chain across gaps") {
  // Long windows (10 s, tau_c = 0.25 s) self-average: the mean even
  // fraction over 500 probes sits on the stationary 3/4.
  const auto windows = qp::sample_probe_windows(1.0, 3.0, 500, 10.0, 10.0, 31);
  REQUIRE(windows.size() == 500);
  double mean_even = 0.0;
  int even_starts = 0;
  for (const auto& w : windows) {
    CHECK(w.even_fraction + w.odd_fraction == doctest::Approx(1.0).epsilon(1e-12));
    mean_even += w.even_fraction;
    if (w.start == qp::Parity::even) ++even_starts;
  }
  mean_even /= static_cast<double>(windows.size());
  CHECK(std::abs(mean_even - 0.75) < 0.02);
  // Start parities also equilibrate across the 10 s gaps.
  CHECK(even_starts > 500 * 0.75 - 3.0 * std::sqrt(500 * 0.75 * 0.25));
  CHECK(even_starts < 500 * 0.75 + 3.0 * std::sqrt(500 * 0.75 * 0.25));
}

TEST_CASE("window sampler is deterministic and validates its inputs") {
  const auto a = qp::sample_probe_windows(250.0, 250.0, 200, 3.0, 0.02, 7);
  const auto b = qp::sample_probe_windows(250.0, 250.0, 200, 3.0, 0.02, 7);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].even_fraction == b[i].even_fraction);
    CHECK(a[i].start == b[i].start);
  }
  // ~5 switches per 20 ms window at 250 Hz: both parities usually visible.
  int both = 0;
  for (const auto& w : a) {
    if (w.both_visible) ++both;
  }
  CHECK(static_cast<double>(both) / static_cast<double>(a.size()) > 0.7);

  CHECK_THROWS_AS(qp::sample_probe_windows(250.0, 250.0, 0, 3.0, 0.02, 7),
                  ConfigError);
  CHECK_THROWS_AS(qp::sample_probe_windows(250.0, 250.0, 10, 0.3, 0.5, 7),
                  ConfigError);
  CHECK_THROWS_AS(qp::sample_probe_windows(250.0, 250.0, 10, 3.0, 0.0, 7),
                  ConfigError);
}

TEST_CASE("short sampled windows are single-parity") {
  const auto windows = qp::sample_probe_windows(0.5, 0.5, 1000, 3.0, 0.01, 41);
  int pure = 0;
  for (const auto& w : windows) {
    if (!w.both_visible) ++pure;
  }
  CHECK(static_cast<double>(pure) / static_cast<double>(windows.size()) > 0.9);
}

TEST_CASE("the u-junction cycle dominates parity switching") {
  fluxqp::circuit::CircuitParams params;
  fluxqp::circuit::BasisSpec basis;
  basis.n_charge = 4;
  basis.n_harm = 10;
  const auto dom = qp::path_dominance(params, basis);
  CHECK(dom.u_junction_dominant);
  CHECK(dom.rate_product_u > dom.rate_product_alpha);
  // Island 2 costs only circuit energy; island 3 adds the 1 GHz gap
  // difference on top of a similar circuit cost.
  CHECK(dom.delta_e_island2_ghz > 0.0);
  CHECK(dom.delta_e_island2_ghz < 0.2);
  CHECK(dom.delta_e_island3_ghz > 0.95);
  CHECK(dom.delta_e_island3_ghz < 1.2);
  // The cycle product is exp(-|delta_E| / k_B T) exactly.
  CHECK(dom.rate_product_u ==
        doctest::Approx(qp::rate_ratio(std::abs(dom.delta_e_island2_ghz),
                                       params.temperature_k))
            .epsilon(1e-12));
  CHECK(dom.rate_product_u <= 1.0);
  CHECK(dom.rate_product_alpha <= 1.0);
}

}  // TEST_SUITE
