// Copyright (c) 2026 The fluxqp Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "fluxqp/errors.hpp"
#include "fluxqp/noise.hpp"
#include "fluxqp/rng.hpp"
#include "fluxqp/synth.hpp"

namespace noise = fluxqp::noise;
using fluxqp::ConfigError;

namespace {

constexpr double kPi = 3.14159265358979323846;

double mean(const std::vector<double>& x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

// Trapezoid-free band integral sum(S) * df on uniformly spaced Welch bins.
double band_power(const noise::PsdResult& psd, double lo, double hi) {
  const double df = psd.freq_hz[1] - psd.freq_hz[0];
  double total = 0.0;
  for (std::size_t i = 0; i < psd.freq_hz.size(); ++i) {
    if (psd.freq_hz[i] >= lo && psd.freq_hz[i] <= hi) total += psd.s_e2_per_hz[i];
  }
  return total * df;
}

}  // namespace

TEST_SUITE("noise") {

TEST_CASE("zero amplitude generates the zero series") {
  const auto x = noise::generate_one_over_f(0.0, 1.0, 1024, 1.0, 5);
  REQUIRE(x.size() == 1024);
  for (double v : x) CHECK(v == 0.0);
}

TEST_CASE("generator is deterministic and zero-mean") {
  const auto a = noise::generate_one_over_f(1e-3, 1.0, 4096, 1.0 / 3.0, 77);
  const auto b = noise::generate_one_over_f(1e-3, 1.0, 4096, 1.0 / 3.0, 77);
  const auto c = noise::generate_one_over_f(1e-3, 1.0, 4096, 1.0 / 3.0, 78);
  CHECK(a == b);
  CHECK(a != c);
  CHECK(std::abs(mean(a)) < 1e-12);  // DC bin is pinned to zero
}

TEST_CASE("welch psd concentrates a sinusoid's power at its frequency") {
  const int n = 4096;
  const double f_s = 8.0, f0 = 1.0, amp = 0.7;
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = amp * std::sin(2.0 * kPi * f0 * i / f_s);
  const auto psd = noise::compute_psd(x, f_s);
  CHECK(psd.segment_len == n / 8);
  const double df = f_s / psd.segment_len;
  const double peak_power = band_power(psd, f0 - 6 * df, f0 + 6 * df);
  CHECK(peak_power == doctest::Approx(amp * amp / 2.0).epsilon(0.05));
  // Nearly all power sits in the peak band.
  const double total = band_power(psd, 0.0, f_s);
  CHECK(peak_power / total > 0.99);
  CHECK(psd.parseval_ratio == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("welch psd of white noise is flat at sigma^2 / (f_s / 2)") {
  const int n = 16384;
  const double f_s = 2.0, sigma = 1.3;
  fluxqp::Rng rng(11);
  std::vector<double> x(n);
  for (double& v : x) v = sigma * rng.normal();
  const auto psd = noise::compute_psd(x, f_s);
  const double level = sigma * sigma / (f_s / 2.0);
  CHECK(mean(psd.s_e2_per_hz) == doctest::Approx(level).epsilon(0.10));
  // Parseval: band integral matches the series variance (DC is negligible).
  double var = 0.0;
  const double mu = mean(x);
  for (double v : x) var += (v - mu) * (v - mu);
  var /= n;
  CHECK(band_power(psd, 0.0, f_s) == doctest::Approx(var).epsilon(0.05));
  CHECK(psd.parseval_ratio == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("one-over-f round trip recovers gamma and amplitude") {
  const double s1hz = 0.0406 * 0.0406;
  for (std::uint64_t seed : {101u, 202u, 303u}) {
    const auto x = noise::generate_one_over_f(s1hz, 1.0, 84000, 1.0 / 3.0, seed);
    const auto psd = noise::compute_psd(x, 1.0 / 3.0);
    const auto fit = noise::fit_one_over_f(psd);
    CHECK(fit.gamma > 0.9);
    CHECK(fit.gamma < 1.1);
    CHECK(fit.s1hz_e2_per_hz / s1hz > 0.85);
    CHECK(fit.s1hz_e2_per_hz / s1hz < 1.15);
    CHECK(fit.extrapolated_to_1hz);  // Nyquist/3 = 1/18 Hz < 1 Hz
    CHECK(psd.parseval_ratio == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("doubling the injected amplitude doubles the fitted amplitude") {
  const double base = 1e-3;
  const auto x1 = noise::generate_one_over_f(base, 1.0, 32768, 1.0, 42);
  const auto x2 = noise::generate_one_over_f(2.0 * base, 1.0, 32768, 1.0, 42);
  const auto f1 = noise::fit_one_over_f(noise::compute_psd(x1, 1.0));
  const auto f2 = noise::fit_one_over_f(noise::compute_psd(x2, 1.0));
  CHECK(f2.s1hz_e2_per_hz / f1.s1hz_e2_per_hz ==
        doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("loglog fit is exact on exact power laws") {
  noise::PsdResult psd;
  const double a = 0.0406 * 0.0406;
  for (int k = 1; k <= 1000; ++k) {
    const double f = 0.01 * k;
    psd.freq_hz.push_back(f);
    psd.s_e2_per_hz.push_back(a / f);
  }
  const auto fit = noise::fit_one_over_f(psd);
  CHECK(fit.gamma == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fit.s1hz_e2_per_hz == doctest::Approx(a).epsilon(1e-10));
  CHECK(fit.band_lo_hz == doctest::Approx(0.03));
  CHECK(fit.band_hi_hz == doctest::Approx(10.0 / 3.0));
  CHECK_FALSE(fit.extrapolated_to_1hz);  // 1 Hz inside the band

  for (std::size_t i = 0; i < psd.freq_hz.size(); ++i) {
    psd.s_e2_per_hz[i] = a / (psd.freq_hz[i] * psd.freq_hz[i]);
  }
  CHECK(noise::fit_one_over_f(psd).gamma == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("fit flags 1 Hz extrapolation when the band ends below it") {
  noise::PsdResult psd;
  for (int k = 1; k <= 120; ++k) {
    const double f = 0.01 * k;  // f_max = 1.2 Hz, band ends at 0.4 Hz
    psd.freq_hz.push_back(f);
    psd.s_e2_per_hz.push_back(1e-3 / f);
  }
  const auto fit = noise::fit_one_over_f(psd);
  CHECK(fit.extrapolated_to_1hz);
  CHECK(fit.gamma == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("fit masks non-positive estimates and degrades gracefully") {
  noise::PsdResult psd;
  for (int k = 1; k <= 100; ++k) {
    psd.freq_hz.push_back(0.01 * k);
    psd.s_e2_per_hz.push_back(0.0);
  }
  // Entirely non-positive band: a zero spectrum, reported as a zero fit.
  const auto zero_fit = noise::fit_one_over_f(psd);
  CHECK(zero_fit.gamma == 0.0);
  CHECK(zero_fit.s1hz_e2_per_hz == 0.0);
  CHECK(zero_fit.n_points == 0);

  // A handful of in-band positive points is not enough to fit a line.
  // The default band here is [0.03, 1/3] Hz, i.e. indices 2 through 32.
  for (int i = 10; i < 15; ++i) psd.s_e2_per_hz[i] = 1e-4;
  CHECK_THROWS_AS(noise::fit_one_over_f(psd), ConfigError);

  // With >= 10 positive points the zeros are ignored, not fatal.
  for (int i = 2; i < 32; ++i) psd.s_e2_per_hz[i] = 1e-3 / psd.freq_hz[i];
  const auto fit = noise::fit_one_over_f(psd);
  CHECK(fit.n_points == 30);
  CHECK(fit.gamma == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("psd rejects series shorter than two segments") {
  std::vector<double> x(100, 1.0);
  CHECK_THROWS_AS(noise::compute_psd(x, 1.0, 64), ConfigError);
}

TEST_CASE("chunked psd shrinks the segment to cover short chunks") {
  fluxqp::Rng rng(3);
  std::vector<std::vector<double>> chunks(20, std::vector<double>(500));
  for (auto& c : chunks)
    for (double& v : c) v = rng.normal();
  const auto psd = noise::compute_psd_chunks(chunks, 1.0 / 3.0);
  // total/8 = 1250 would skip every 500-sample chunk; the estimator halves
  // the segment until at least three quarters of the samples are covered.
  CHECK(psd.segment_len == 312);
  CHECK(psd.n_segments == 40);
  CHECK(psd.parseval_ratio == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("gap filling interpolates short runs and splits on long ones") {
  std::vector<double> v(20, 0.0);
  std::vector<bool> ok(20, true);
  for (int i = 0; i < 20; ++i) v[i] = i;

  // Interior gap of 3 samples: linearly interpolated, one chunk.
  auto ok1 = ok;
  ok1[5] = ok1[6] = ok1[7] = false;
  auto chunks = noise::fill_and_split_gaps(v, ok1, 5);
  REQUIRE(chunks.size() == 1);
  CHECK(chunks[0].size() == 20);
  CHECK(chunks[0][6] == doctest::Approx(6.0));  // linear between v[4] and v[8]

  // Interior gap of 6 samples: split into two chunks, gap dropped.
  auto ok2 = ok;
  for (int i = 5; i < 11; ++i) ok2[i] = false;
  chunks = noise::fill_and_split_gaps(v, ok2, 5);
  REQUIRE(chunks.size() == 2);
  CHECK(chunks[0].size() == 5);
  CHECK(chunks[1].size() == 9);
  CHECK(chunks[1][0] == 11.0);

  // Leading and trailing invalid runs are trimmed, never interpolated.
  auto ok3 = ok;
  ok3[0] = ok3[1] = ok3[19] = false;
  chunks = noise::fill_and_split_gaps(v, ok3, 5);
  REQUIRE(chunks.size() == 1);
  CHECK(chunks[0].size() == 17);
  CHECK(chunks[0][0] == 2.0);
}

TEST_CASE("charge folding lands in [0, e/2] on the |cos| orbit") {
  CHECK(noise::fold_to_half_e(0.7) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(noise::fold_to_half_e(1.2) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(noise::fold_to_half_e(-0.1) == doctest::Approx(0.1).epsilon(1e-12));
  for (int k = 0; k <= 400; ++k) {
    const double q = 0.005 * k - 1.0;  // covers [-1, 1] across all branches
    const double folded = noise::fold_to_half_e(q);
    CHECK(folded >= 0.0);
    CHECK(folded <= 0.5);
    CHECK(std::abs(std::cos(kPi * folded)) ==
          doctest::Approx(std::abs(std::cos(kPi * q))).epsilon(1e-9));
  }
}

TEST_CASE("cosine inversion hits the closed-form anchor points") {
  const double wmax = 0.018;
  CHECK(noise::invert_split_to_charge(wmax, wmax, noise::InversionMode::cosine) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(noise::invert_split_to_charge(0.0, wmax, noise::InversionMode::cosine) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(noise::invert_split_to_charge(wmax / 2.0, wmax,
                                      noise::InversionMode::cosine) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("cosine inversion clips small overshoots and rejects large ones") {
  const double wmax = 0.018;
  CHECK(noise::invert_split_to_charge(1.019 * wmax, wmax,
                                      noise::InversionMode::cosine) == 0.0);
  CHECK(noise::invert_split_to_charge(-0.019 * wmax, wmax,
                                      noise::InversionMode::cosine) == 0.5);
  CHECK_THROWS_AS(noise::invert_split_to_charge(1.03 * wmax, wmax,
                                                noise::InversionMode::cosine),
                  ConfigError);
  CHECK_THROWS_AS(noise::invert_split_to_charge(-0.03 * wmax, wmax,
                                                noise::InversionMode::cosine),
                  ConfigError);
}

TEST_CASE("inversion and folding are consistent over two periods") {
  const double wmax = 0.018;
  for (int k = 0; k <= 200; ++k) {
    const double q = 0.01 * k;  // [0, 2] e
    const double width = wmax * std::abs(std::cos(kPi * q));
    const double back = noise::invert_split_to_charge(
        width, wmax, noise::InversionMode::cosine);
    CHECK(back == doctest::Approx(noise::fold_to_half_e(q)).epsilon(1e-9));
  }
}

TEST_CASE("model-lookup inversion interpolates a tabulated curve") {
  const double wmax = 0.018;
  std::vector<std::pair<double, double>> curve;
  for (int k = 0; k <= 50; ++k) {
    const double q = 0.01 * k;
    curve.emplace_back(q, wmax * std::cos(kPi * q));
  }
  for (double q_true : {0.053, 0.21, 0.437}) {
    const double w = wmax * std::cos(kPi * q_true);
    const double q = noise::invert_split_to_charge(
        w, 0.0, noise::InversionMode::model_lookup, &curve);
    CHECK(q == doctest::Approx(q_true).epsilon(1e-3));
  }
  // Clip scale for lookup mode is the curve's own maximum width.
  CHECK(noise::invert_split_to_charge(1.019 * wmax, 0.0,
                                      noise::InversionMode::model_lookup,
                                      &curve) == 0.0);
  CHECK_THROWS_AS(
      noise::invert_split_to_charge(1.03 * wmax, 0.0,
                                    noise::InversionMode::model_lookup, &curve),
      ConfigError);
  CHECK_THROWS_AS(noise::invert_split_to_charge(
                      0.01, 0.0, noise::InversionMode::model_lookup, nullptr),
                  ConfigError);
}

TEST_CASE("circuit-model dispersion inverts within 0.02e of the cosine") {
  // The tabulated 0->2 dispersion of the coupled system is cosine-like but
  // not exactly cosine; both inversion modes must agree to 0.02e.
  fluxqp::circuit::CircuitParams params;
  fluxqp::circuit::BasisSpec basis;
  basis.n_charge = 4;
  basis.n_harm = 10;
  basis.n_fock = 6;
  basis.n_levels_kept = 12;
  const auto map = fluxqp::synth::make_circuit_map(params, basis,
                                                   fluxqp::circuit::FluxBias{0.5},
                                                   9);
  std::vector<std::pair<double, double>> curve;
  for (int k = 0; k <= 16; ++k) {
    const double q = 0.5 * k / 16.0;
    curve.emplace_back(q, map.frequency_at(q) - map.frequency_at(q + 1.0));
  }
  const double wmax = curve.front().second;
  REQUIRE(wmax > 0.0);
  // Inverse interpolation is exact at the table nodes.
  for (int k = 1; k < 16; ++k) {
    const double q_node = noise::invert_split_to_charge(
        curve[k].second, 0.0, noise::InversionMode::model_lookup, &curve);
    CHECK(q_node == doctest::Approx(curve[k].first).epsilon(1e-9));
  }
  // Away from the band edges (where dq/dw diverges and small shape
  // differences amplify), the two inversion modes agree to 0.02e.
  for (int k = 1; k < 16; ++k) {
    const double q_mid = 0.5 * (curve[k].first + curve[k - 1].first);
    if (q_mid < 0.1 || q_mid > 0.4) continue;
    const double w = 0.5 * (curve[k].second + curve[k - 1].second);
    const double q_lookup = noise::invert_split_to_charge(
        w, 0.0, noise::InversionMode::model_lookup, &curve);
    const double q_cosine = noise::invert_split_to_charge(
        w, wmax, noise::InversionMode::cosine);
    CHECK(std::abs(q_lookup - q_cosine) < 0.02);
  }
}

}  // TEST_SUITE
