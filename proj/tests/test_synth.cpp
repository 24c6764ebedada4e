// Copyright (c) 2026 The fluxqp Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "fluxqp/errors.hpp"
#include "fluxqp/noise.hpp"
#include "fluxqp/synth.hpp"

namespace synth = fluxqp::synth;
namespace noise = fluxqp::noise;
using fluxqp::ConfigError;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  }
  return v;
}

fluxqp::rabi::BranchCurve flat_branch(const std::vector<double>& bias,
                                      double freq_ghz, const char* id) {
  fluxqp::rabi::BranchCurve c;
  c.id = id;
  c.epsilon_ghz = bias;
  c.freq_ghz.assign(bias.size(), freq_ghz);
  return c;
}

int argmax_row(const Eigen::MatrixXd& m, int row) {
  int best = 0;
  for (int j = 1; j < m.cols(); ++j) {
    if (m(row, j) > m(row, best)) best = j;
  }
  return best;
}

}  // namespace

TEST_SUITE("synth") {

TEST_CASE("cosine map obeys the two-parity algebra") {
  const auto map = synth::make_cosine_map(4.526, 0.018);
  CHECK(map.frequency_at(0.0) == doctest::Approx(4.526 + 0.009).epsilon(1e-12));
  CHECK(map.frequency_at(1.0) == doctest::Approx(4.526 - 0.009).epsilon(1e-12));
  CHECK(map.frequency_at(0.5) == doctest::Approx(4.526).epsilon(1e-12));
  for (int k = 0; k <= 40; ++k) {
    const double q = 0.1 * k - 2.0;
    // 2e periodicity, charge symmetry, and the constant parity midpoint.
    CHECK(map.frequency_at(q + 2.0) ==
          doctest::Approx(map.frequency_at(q)).epsilon(1e-12));
    CHECK(map.frequency_at(-q) ==
          doctest::Approx(map.frequency_at(q)).epsilon(1e-12));
    CHECK(0.5 * (map.frequency_at(q) + map.frequency_at(q + 1.0)) ==
          doctest::Approx(4.526).epsilon(1e-12));
  }
  CHECK_THROWS_AS(synth::make_cosine_map(0.0, 0.018), ConfigError);
  CHECK_THROWS_AS(synth::make_cosine_map(4.526, 0.0), ConfigError);
}

TEST_CASE("noiseless spectrogram peaks on the branch to half a bin") {
  const auto bias = linspace(0.0, 2.0, 21);
  fluxqp::rabi::BranchCurve curve;
  curve.id = "w20";
  curve.epsilon_ghz = bias;
  for (double b : bias) curve.freq_ghz.push_back(4.45 + 0.05 * b);
  const auto axis = linspace(4.30, 4.70, 401);  // 1 MHz bins
  const auto spec = synth::synth_spectrogram({{curve, 1.0}}, axis, 2e-3, 0.0, 1);
  REQUIRE(spec.amplitude.rows() == 21);
  REQUIRE(spec.amplitude.cols() == 401);
  const double step = axis[1] - axis[0];
  for (int i = 0; i < 21; ++i) {
    const int j = argmax_row(spec.amplitude, i);
    CHECK(std::abs(axis[static_cast<std::size_t>(j)] -
                   curve.freq_ghz[static_cast<std::size_t>(i)]) <=
          0.5 * step + 1e-12);
  }
}

TEST_CASE("well separated branches give two local maxima per column") {
  const auto bias = linspace(0.0, 1.0, 11);
  const auto a = flat_branch(bias, 4.500, "w20");
  const auto b = flat_branch(bias, 4.520, "w20_second");  // 10 linewidths away
  const auto axis = linspace(4.48, 4.54, 301);
  const auto spec =
      synth::synth_spectrogram({{a, 1.0}, {b, 0.5}}, axis, 2e-3, 0.0, 1);
  for (int i = 0; i < 11; ++i) {
    int n_max = 0;
    for (int j = 1; j + 1 < spec.amplitude.cols(); ++j) {
      if (spec.amplitude(i, j) > spec.amplitude(i, j - 1) &&
          spec.amplitude(i, j) > spec.amplitude(i, j + 1)) {
        ++n_max;
      }
    }
    CHECK(n_max == 2);
    // The half-weight branch shows at roughly half the amplitude.
    const int ja = 100;  // bin at 4.500
    const int jb = 200;  // bin at 4.520
    CHECK(axis[ja] == doctest::Approx(4.500).epsilon(1e-12));
    CHECK(spec.amplitude(i, jb) / spec.amplitude(i, ja) ==
          doctest::Approx(0.5).epsilon(0.02));
  }
}

TEST_CASE("amplitude noise level is recovered by the scaled MAD") {
  const auto bias = linspace(0.0, 1.0, 21);
  const auto curve = flat_branch(bias, 4.98, "w20");
  const auto axis = linspace(4.20, 5.00, 801);
  const double sigma = 0.25;
  const auto spec = synth::synth_spectrogram({{curve, 1.0}}, axis, 1e-3, sigma, 7);
  std::vector<double> cells;
  cells.reserve(static_cast<std::size_t>(spec.amplitude.size()));
  for (int i = 0; i < spec.amplitude.rows(); ++i) {
    for (int j = 0; j < spec.amplitude.cols(); ++j) {
      cells.push_back(spec.amplitude(i, j));
    }
  }
  auto median_of = [](std::vector<double> v) {
    const auto mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid),
                     v.end());
    return v[mid];
  };
  const double med = median_of(cells);
  for (double& c : cells) c = std::abs(c - med);
  const double mad = median_of(cells);
  CHECK(mad / 0.6745 == doctest::Approx(sigma).epsilon(0.05));
}

TEST_CASE("spectrogram synthesis is deterministic in the seed") {
  const auto bias = linspace(0.0, 1.0, 5);
  const auto curve = flat_branch(bias, 4.5, "w10");
  const auto axis = linspace(4.45, 4.55, 101);
  const auto s1 = synth::synth_spectrogram({{curve, 1.0}}, axis, 2e-3, 0.3, 11);
  const auto s2 = synth::synth_spectrogram({{curve, 1.0}}, axis, 2e-3, 0.3, 11);
  const auto s3 = synth::synth_spectrogram({{curve, 1.0}}, axis, 2e-3, 0.3, 12);
  CHECK((s1.amplitude - s2.amplitude).cwiseAbs().maxCoeff() == 0.0);
  CHECK((s1.amplitude - s3.amplitude).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("spectrogram synthesis validates its inputs") {
  const auto bias = linspace(0.0, 1.0, 5);
  const auto curve = flat_branch(bias, 4.5, "w10");
  const auto axis = linspace(4.4, 4.6, 51);
  CHECK_THROWS_AS(synth::synth_spectrogram({}, axis, 2e-3, 0.0, 1), ConfigError);
  CHECK_THROWS_AS(synth::synth_spectrogram({{curve, 1.0}}, axis, 0.0, 0.0, 1),
                  ConfigError);
  CHECK_THROWS_AS(synth::synth_spectrogram({{curve, 1.0}}, axis, 2e-3, -0.1, 1),
                  ConfigError);
  CHECK_THROWS_AS(synth::synth_spectrogram({{curve, 1.0}}, {4.5}, 2e-3, 0.0, 1),
                  ConfigError);
  auto other = flat_branch(linspace(0.0, 2.0, 5), 4.5, "w20");
  CHECK_THROWS_AS(
      synth::synth_spectrogram({{curve, 1.0}, {other, 1.0}}, axis, 2e-3, 0.0, 1),
      ConfigError);
}

TEST_CASE("trace stack carries consistent shapes and ground truth") {
  const auto map = synth::make_cosine_map(4.526, 0.018);
  synth::TraceStackConfig config;
  config.n_traces = 600;
  const auto stack = synth::synth_trace_stack(map, config, 4242);

  REQUIRE(stack.time_s.size() == 600);
  REQUIRE(stack.q_true_e.size() == 600);
  REQUIRE(stack.parity_start.size() == 600);
  REQUIRE(stack.even_fraction.size() == 600);
  REQUIRE(stack.amplitude.rows() == 600);
  // Auto axis: mid +- (width_max/2 + margin) at the configured step.
  REQUIRE(stack.freq_ghz.size() == 151);
  CHECK(stack.freq_ghz.front() == doctest::Approx(4.511).epsilon(1e-12));
  CHECK(stack.freq_ghz.back() == doctest::Approx(4.541).epsilon(1e-12));
  CHECK(stack.amplitude.cols() == 151);
  CHECK(stack.time_s[0] == 0.0);
  CHECK(stack.time_s[599] == doctest::Approx(599 * 3.0).epsilon(1e-12));

  for (std::size_t k = 0; k < 600; ++k) {
    CHECK((stack.parity_start[k] == 0 || stack.parity_start[k] == 1));
    CHECK(stack.even_fraction[k] >= 0.0);
    CHECK(stack.even_fraction[k] <= 1.0);
    const bool expect_even = stack.even_fraction[k] > 0.1;
    CHECK(static_cast<bool>(stack.even_visible[k]) == expect_even);
    // Ground-truth round trip: invert the model width at the true charge.
    const double w = std::abs(map.frequency_at(stack.q_true_e[k]) -
                              map.frequency_at(stack.q_true_e[k] + 1.0));
    const double q_back = noise::invert_split_to_charge(
        w, map.width_max_ghz, noise::InversionMode::cosine);
    CHECK(std::abs(q_back - noise::fold_to_half_e(stack.q_true_e[k])) < 0.01);
  }

  const auto again = synth::synth_trace_stack(map, config, 4242);
  CHECK((stack.amplitude - again.amplitude).cwiseAbs().maxCoeff() == 0.0);
  CHECK(stack.q_true_e == again.q_true_e);
  const auto other = synth::synth_trace_stack(map, config, 4243);
  CHECK((stack.amplitude - other.amplitude).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("a drift-free noiseless stack is a constant doubly split line") {
  const auto map = synth::make_cosine_map(4.526, 0.018);
  synth::TraceStackConfig config;
  config.n_traces = 100;
  config.s1hz_e2_per_hz = 0.0;  // no charge drift
  config.noise_sigma = 0.0;     // no amplitude noise
  const auto stack = synth::synth_trace_stack(map, config, 9);
  const double f_even = map.frequency_at(0.15);
  const double f_odd = map.frequency_at(1.15);
  for (std::size_t k = 0; k < 100; ++k) {
    CHECK(stack.q_true_e[k] == 0.15);  // exactly: the zero series
    if (stack.even_visible[k] && stack.odd_visible[k]) {
      const int j = argmax_row(stack.amplitude, static_cast<int>(k));
      const double f = stack.freq_ghz[static_cast<std::size_t>(j)];
      CHECK(std::min(std::abs(f - f_even), std::abs(f - f_odd)) < 1.5e-4);
    }
  }
}

TEST_CASE("slow parity switching leaves one visible peak per trace") {
  const auto map = synth::make_cosine_map(4.526, 0.018);
  synth::TraceStackConfig config;
  config.n_traces = 300;
  config.rate_even_to_odd_hz = 0.002;
  config.rate_odd_to_even_hz = 0.002;
  const auto stack = synth::synth_trace_stack(map, config, 77);
  int single = 0;
  for (std::size_t k = 0; k < 300; ++k) {
    if (stack.even_visible[k] + stack.odd_visible[k] == 1) ++single;
  }
  CHECK(static_cast<double>(single) / 300.0 > 0.9);
}

TEST_CASE("trace stack synthesis validates its inputs") {
  const auto map = synth::make_cosine_map(4.526, 0.018);
  synth::TraceStackConfig config;
  config.n_traces = 1;
  CHECK_THROWS_AS(synth::synth_trace_stack(map, config, 1), ConfigError);
  config.n_traces = 10;
  config.interval_s = 0.01;  // shorter than the 20 ms window
  CHECK_THROWS_AS(synth::synth_trace_stack(map, config, 1), ConfigError);
  config = {};
  config.linewidth_ghz = 0.0;
  CHECK_THROWS_AS(synth::synth_trace_stack(map, config, 1), ConfigError);
  config = {};
  config.noise_sigma = -1.0;
  CHECK_THROWS_AS(synth::synth_trace_stack(map, config, 1), ConfigError);
  config = {};
  config.freq_step_ghz = 0.0;
  CHECK_THROWS_AS(synth::synth_trace_stack(map, config, 1), ConfigError);
}

TEST_CASE("circuit lookup map is symmetric, periodic, and cosine-like") {
  fluxqp::circuit::CircuitParams params;
  fluxqp::circuit::BasisSpec basis;
  basis.n_charge = 4;
  basis.n_harm = 10;
  basis.n_fock = 6;
  basis.n_levels_kept = 12;
  const auto map = fluxqp::synth::make_circuit_map(
      params, basis, fluxqp::circuit::FluxBias{0.5}, 9);
  CHECK(map.mode == synth::ChargeFreqMap::Mode::circuit_lookup);
  REQUIRE(map.q_grid_e.size() == 9);
  REQUIRE(map.freq_ghz.size() == 9);
  CHECK(map.width_max_ghz > 0.0);
  CHECK(map.frequency_at(0.0) == doctest::Approx(map.freq_ghz.front()).epsilon(1e-12));
  CHECK(map.frequency_at(1.0) == doctest::Approx(map.freq_ghz.back()).epsilon(1e-12));
  CHECK(map.mid_ghz ==
        doctest::Approx(0.5 * (map.freq_ghz.front() + map.freq_ghz.back()))
            .epsilon(1e-12));
  for (int k = 0; k <= 20; ++k) {
    const double q = 0.1 * k - 1.0;
    CHECK(map.frequency_at(q + 2.0) ==
          doctest::Approx(map.frequency_at(q)).epsilon(1e-12));
    CHECK(map.frequency_at(-q) ==
          doctest::Approx(map.frequency_at(q)).epsilon(1e-12));
  }
  // The tabulated dispersion tracks the cosine of the same mid and width
  // closely (the circuit dispersion is cosine-like, not exactly cosine).
  const auto cosine = synth::make_cosine_map(map.mid_ghz, map.width_max_ghz);
  for (int k = 0; k <= 10; ++k) {
    const double q = 0.1 * k;
    CHECK(std::abs(map.frequency_at(q) - cosine.frequency_at(q)) <
          0.05 * map.width_max_ghz);
  }
  CHECK_THROWS_AS(fluxqp::synth::make_circuit_map(
                      params, basis, fluxqp::circuit::FluxBias{0.5}, 2),
                  ConfigError);
}

}  // TEST_SUITE
