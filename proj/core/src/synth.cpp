// Copyright (c) 2026 The fluxqp Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fluxqp/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fluxqp/errors.hpp"
#include "fluxqp/noise.hpp"
#include "fluxqp/quasiparticle.hpp"
#include "fluxqp/rng.hpp"

namespace fluxqp::synth {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Independent deterministic RNG streams derived from one master seed.
constexpr std::uint64_t kTelegraphStream = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kNoiseStream = 0xbf58476d1ce4e5b9ULL;

double lorentzian(double f, double f0, double linewidth_fwhm) {
  const double hw = 0.5 * linewidth_fwhm;
  const double d = f - f0;
  return hw * hw / (d * d + hw * hw);
}

// Fold an offset charge (units of e) onto the [0, 1] fundamental domain of
// a 2e-periodic, even map.
double fold_unit(double q_e) {
  double r = std::fmod(q_e, 2.0);
  if (r < 0.0) r += 2.0;
  if (r > 1.0) r = 2.0 - r;
  return r;
}

void check_axis(const std::vector<double>& axis, const char* what) {
  if (axis.size() < 2) throw ConfigError(std::string(what) + ": need >= 2 points");
  for (std::size_t i = 0; i + 1 < axis.size(); ++i) {
    if (!(axis[i + 1] > axis[i])) {
      throw ConfigError(std::string(what) + ": axis must be strictly increasing");
    }
  }
}

}  // namespace

Spectrogram synth_spectrogram(const std::vector<BranchWeight>& branches,
                              const std::vector<double>& freq_axis_ghz,
                              double linewidth_ghz, double noise_sigma,
                              std::uint64_t seed) {
  if (branches.empty()) throw ConfigError("synth_spectrogram: no branches");
  if (!(linewidth_ghz > 0.0)) {
    throw ConfigError("synth_spectrogram: linewidth must be > 0");
  }
  if (noise_sigma < 0.0) {
    throw ConfigError("synth_spectrogram: noise sigma must be >= 0");
  }
  check_axis(freq_axis_ghz, "synth_spectrogram: frequency");
  const auto& bias = branches.front().curve.epsilon_ghz;
  check_axis(bias, "synth_spectrogram: bias");
  for (const auto& b : branches) {
    if (b.curve.epsilon_ghz != bias) {
      throw ConfigError("synth_spectrogram: branches must share one bias grid");
    }
  }
  const auto nb = static_cast<Eigen::Index>(bias.size());
  const auto nf = static_cast<Eigen::Index>(freq_axis_ghz.size());
  Spectrogram spec;
  spec.bias = bias;
  spec.freq_ghz = freq_axis_ghz;
  spec.linewidth_ghz = linewidth_ghz;
  spec.noise_sigma = noise_sigma;
  spec.seed = seed;
  spec.amplitude = Eigen::MatrixXd::Zero(nb, nf);
  for (const auto& b : branches) {
    for (Eigen::Index i = 0; i < nb; ++i) {
      const double f0 = b.curve.freq_ghz[static_cast<std::size_t>(i)];
      for (Eigen::Index j = 0; j < nf; ++j) {
        spec.amplitude(i, j) +=
            b.weight *
            lorentzian(freq_axis_ghz[static_cast<std::size_t>(j)], f0,
                       linewidth_ghz);
      }
    }
  }
  if (noise_sigma > 0.0) {
    Rng rng(seed);
    for (Eigen::Index i = 0; i < nb; ++i) {
      for (Eigen::Index j = 0; j < nf; ++j) {
        spec.amplitude(i, j) += noise_sigma * rng.normal();
      }
    }
  }
  return spec;
}

double ChargeFreqMap::frequency_at(double q_e) const {
  const double r = fold_unit(q_e);
  if (mode == Mode::cosine) {
    return mid_ghz + 0.5 * width_max_ghz * std::cos(kPi * r);
  }
  const auto it = std::upper_bound(q_grid_e.begin(), q_grid_e.end(), r);
  if (it == q_grid_e.begin()) return freq_ghz.front();
  if (it == q_grid_e.end()) return freq_ghz.back();
  const std::size_t hi = static_cast<std::size_t>(it - q_grid_e.begin());
  const std::size_t lo = hi - 1;
  const double span = q_grid_e[hi] - q_grid_e[lo];
  const double frac = (span > 0.0) ? (r - q_grid_e[lo]) / span : 0.0;
  return freq_ghz[lo] + (freq_ghz[hi] - freq_ghz[lo]) * frac;
}

ChargeFreqMap make_cosine_map(double mid_ghz, double width_max_ghz) {
  if (!(mid_ghz > 0.0) || !(width_max_ghz > 0.0)) {
    throw ConfigError("make_cosine_map: mid and width_max must be > 0");
  }
  ChargeFreqMap map;
  map.mode = ChargeFreqMap::Mode::cosine;
  map.mid_ghz = mid_ghz;
  map.width_max_ghz = width_max_ghz;
  return map;
}

ChargeFreqMap make_circuit_map(const circuit::CircuitParams& params,
                               const circuit::BasisSpec& basis,
                               const circuit::FluxBias& flux, int n_grid) {
  if (n_grid < 3) throw ConfigError("make_circuit_map: n_grid must be >= 3");
  ChargeFreqMap map;
  map.mode = ChargeFreqMap::Mode::circuit_lookup;
  map.q_grid_e.resize(static_cast<std::size_t>(n_grid));
  map.freq_ghz.resize(static_cast<std::size_t>(n_grid));
  for (int i = 0; i < n_grid; ++i) {
    const double q = static_cast<double>(i) / (n_grid - 1);
    circuit::ChargeConfig cfg;
    cfg.q_e = {0.0, q, 0.0, 0.0};
    const auto sol = circuit::solve_total(params, cfg, flux, basis);
    map.q_grid_e[static_cast<std::size_t>(i)] = q;
    map.freq_ghz[static_cast<std::size_t>(i)] =
        sol.energies_ghz(2) - sol.energies_ghz(0);
  }
  map.mid_ghz = 0.5 * (map.freq_ghz.front() + map.freq_ghz.back());
  map.width_max_ghz = std::abs(map.freq_ghz.front() - map.freq_ghz.back());
  return map;
}

TraceStack synth_trace_stack(const ChargeFreqMap& map,
                             const TraceStackConfig& config,
                             std::uint64_t seed) {
  if (config.n_traces < 2) {
    throw ConfigError("synth_trace_stack: n_traces must be >= 2");
  }
  if (!(config.window_s > 0.0) || !(config.interval_s >= config.window_s)) {
    throw ConfigError("synth_trace_stack: need interval >= window > 0");
  }
  if (!(config.linewidth_ghz > 0.0)) {
    throw ConfigError("synth_trace_stack: linewidth must be > 0");
  }
  if (config.noise_sigma < 0.0) {
    throw ConfigError("synth_trace_stack: noise sigma must be >= 0");
  }

  std::vector<double> freq = config.freq_axis_ghz;
  if (freq.empty()) {
    if (!(config.freq_step_ghz > 0.0)) {
      throw ConfigError("synth_trace_stack: frequency step must be > 0");
    }
    const double half = 0.5 * map.width_max_ghz + config.freq_margin_ghz;
    const int half_bins =
        static_cast<int>(std::llround(half / config.freq_step_ghz));
    for (int k = -half_bins; k <= half_bins; ++k) {
      freq.push_back(map.mid_ghz + k * config.freq_step_ghz);
    }
  }
  check_axis(freq, "synth_trace_stack: frequency");

  const int n = config.n_traces;
  const double f_probe_hz = 1.0 / config.interval_s;
  const std::vector<double> background = noise::generate_one_over_f(
      config.s1hz_e2_per_hz, config.gamma, n, f_probe_hz, seed);
  const auto windows = quasiparticle::sample_probe_windows(
      config.rate_even_to_odd_hz, config.rate_odd_to_even_hz, n,
      config.interval_s, config.window_s, seed ^ kTelegraphStream,
      config.visibility_threshold);
  Rng noise_rng(seed ^ kNoiseStream);

  TraceStack stack;
  stack.time_s.resize(static_cast<std::size_t>(n));
  stack.freq_ghz = freq;
  stack.amplitude = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(freq.size()));
  stack.q_true_e.resize(static_cast<std::size_t>(n));
  stack.parity_start.resize(static_cast<std::size_t>(n));
  stack.even_fraction.resize(static_cast<std::size_t>(n));
  stack.even_visible.resize(static_cast<std::size_t>(n));
  stack.odd_visible.resize(static_cast<std::size_t>(n));

  const auto nf = static_cast<Eigen::Index>(freq.size());
  for (int k = 0; k < n; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    const double q_true = config.q0_e + background[ks];
    const auto& win = windows[ks];
    const bool even_vis = win.even_fraction > config.visibility_threshold;
    const bool odd_vis = win.odd_fraction > config.visibility_threshold;
    const double f_even = map.frequency_at(q_true);
    const double f_odd = map.frequency_at(q_true + 1.0);
    stack.time_s[ks] = k * config.interval_s;
    stack.q_true_e[ks] = q_true;
    stack.parity_start[ks] =
        (win.start == quasiparticle::Parity::odd) ? 1 : 0;
    stack.even_fraction[ks] = win.even_fraction;
    stack.even_visible[ks] = even_vis ? 1 : 0;
    stack.odd_visible[ks] = odd_vis ? 1 : 0;
    for (Eigen::Index j = 0; j < nf; ++j) {
      const double f = freq[static_cast<std::size_t>(j)];
      double a = 0.0;
      if (even_vis) a += lorentzian(f, f_even, config.linewidth_ghz);
      if (odd_vis) a += lorentzian(f, f_odd, config.linewidth_ghz);
      if (config.noise_sigma > 0.0) a += config.noise_sigma * noise_rng.normal();
      stack.amplitude(k, j) = a;
    }
  }

  stack.interval_s = config.interval_s;
  stack.window_s = config.window_s;
  stack.q0_e = config.q0_e;
  stack.s1hz_e2_per_hz = config.s1hz_e2_per_hz;
  stack.gamma = config.gamma;
  stack.rate_even_to_odd_hz = config.rate_even_to_odd_hz;
  stack.rate_odd_to_even_hz = config.rate_odd_to_even_hz;
  stack.linewidth_ghz = config.linewidth_ghz;
  stack.noise_sigma = config.noise_sigma;
  stack.visibility_threshold = config.visibility_threshold;
  stack.seed = seed;
  return stack;
}

}  // namespace fluxqp::synth
