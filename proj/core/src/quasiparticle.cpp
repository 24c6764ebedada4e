// Copyright (c) 2026 The fluxqp Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fluxqp/quasiparticle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fluxqp/constants.hpp"
#include "fluxqp/errors.hpp"
#include "fluxqp/rng.hpp"

namespace fluxqp::quasiparticle {

namespace {

void check_temperature(double temperature_k) {
  if (!(temperature_k > 0.0)) {
    throw ConfigError("quasiparticle: temperature must be > 0 K");
  }
}

void check_rates(double rate_even_to_odd_hz, double rate_odd_to_even_hz) {
  if (rate_even_to_odd_hz < 0.0 || rate_odd_to_even_hz < 0.0) {
    throw ConfigError("telegraph: rates must be >= 0");
  }
  if (rate_even_to_odd_hz == 0.0 && rate_odd_to_even_hz == 0.0) {
    throw ConfigError("telegraph: at least one rate must be > 0");
  }
}

Parity flipped(Parity p) {
  return p == Parity::even ? Parity::odd : Parity::even;
}

// Occupancy of the even state over [t0, t1] for a fixed switch-time list.
double even_time_in_window(const TelegraphTrace& trace, double t0, double t1) {
  const auto& sw = trace.switch_times_s;
  auto it = std::upper_bound(sw.begin(), sw.end(), t0);
  Parity state = ((it - sw.begin()) % 2 == 0) ? trace.start
                                              : flipped(trace.start);
  double even_s = 0.0;
  double cursor = t0;
  for (; it != sw.end() && *it < t1; ++it) {
    if (state == Parity::even) even_s += *it - cursor;
    cursor = *it;
    state = flipped(state);
  }
  if (state == Parity::even) even_s += t1 - cursor;
  return even_s;
}

}  // namespace

double tunneling_energy_change(double eps_initial_ghz, double eps_final_ghz,
                               double gap_initial_ghz, double gap_final_ghz) {
  if (gap_initial_ghz < 0.0 || gap_final_ghz < 0.0) {
    throw ConfigError("tunneling_energy_change: gaps must be >= 0");
  }
  return (eps_final_ghz - eps_initial_ghz) + (gap_final_ghz - gap_initial_ghz);
}

double rate_ratio(double delta_e_ghz, double temperature_k) {
  check_temperature(temperature_k);
  return std::exp(-delta_e_ghz / constants::thermal_ghz(temperature_k));
}

double base_rate_hz(double e_c_ghz, double resistance_ohm) {
  if (!(e_c_ghz > 0.0)) throw ConfigError("base_rate: e_c must be > 0");
  if (!(resistance_ohm > 0.0)) {
    throw ConfigError("base_rate: resistance must be > 0");
  }
  const double e_c_joule = constants::ghz_to_joule(e_c_ghz);
  const double e2r = constants::elementary_charge * constants::elementary_charge *
                     resistance_ohm;
  return e_c_joule / e2r;
}

double tunneling_rate_hz(double base_rate_hz, double delta_e_ghz,
                         double temperature_k) {
  check_temperature(temperature_k);
  if (base_rate_hz < 0.0) throw ConfigError("tunneling_rate: base rate < 0");
  const double x = delta_e_ghz / constants::thermal_ghz(temperature_k);
  return base_rate_hz * (x <= 0.0 ? 1.0 : std::exp(-x));
}

Parity TelegraphTrace::at(double t_s) const {
  if (t_s < 0.0 || t_s > duration_s) {
    throw std::out_of_range("TelegraphTrace::at: time outside trace span");
  }
  const auto n = std::upper_bound(switch_times_s.begin(), switch_times_s.end(),
                                  t_s) -
                 switch_times_s.begin();
  return (n % 2 == 0) ? start : flipped(start);
}

TelegraphTrace simulate_telegraph(double rate_even_to_odd_hz,
                                  double rate_odd_to_even_hz, double duration_s,
                                  std::uint64_t seed, Parity start) {
  check_rates(rate_even_to_odd_hz, rate_odd_to_even_hz);
  if (!(duration_s > 0.0)) throw ConfigError("telegraph: duration must be > 0");
  TelegraphTrace trace;
  trace.duration_s = duration_s;
  trace.start = start;
  trace.rate_even_to_odd_hz = rate_even_to_odd_hz;
  trace.rate_odd_to_even_hz = rate_odd_to_even_hz;
  Rng rng(seed);
  Parity state = start;
  double t = 0.0;
  for (;;) {
    const double rate =
        (state == Parity::even) ? rate_even_to_odd_hz : rate_odd_to_even_hz;
    if (rate <= 0.0) break;  // absorbing state
    t += rng.exponential(rate);
    if (t >= duration_s) break;
    trace.switch_times_s.push_back(t);
    state = flipped(state);
  }
  return trace;
}

std::vector<ProbeOccupancy> parity_at_probes(const TelegraphTrace& trace,
                                             const std::vector<double>& probe_times_s,
                                             double window_s,
                                             double visibility_threshold) {
  if (!(window_s > 0.0)) throw ConfigError("parity_at_probes: window must be > 0");
  std::vector<ProbeOccupancy> out;
  out.reserve(probe_times_s.size());
  for (double t0 : probe_times_s) {
    if (t0 < 0.0 || t0 + window_s > trace.duration_s) {
      throw std::out_of_range("parity_at_probes: probe window outside trace span");
    }
    ProbeOccupancy occ;
    occ.even_fraction = even_time_in_window(trace, t0, t0 + window_s) / window_s;
    occ.odd_fraction = 1.0 - occ.even_fraction;
    occ.both_visible =
        std::min(occ.even_fraction, occ.odd_fraction) > visibility_threshold;
    out.push_back(occ);
  }
  return out;
}

std::vector<WindowSample> sample_probe_windows(double rate_even_to_odd_hz,
                                               double rate_odd_to_even_hz,
                                               int n_probes, double interval_s,
                                               double window_s, std::uint64_t seed,
                                               double visibility_threshold) {
  check_rates(rate_even_to_odd_hz, rate_odd_to_even_hz);
  if (n_probes < 1) throw ConfigError("sample_probe_windows: n_probes must be >= 1");
  if (!(window_s > 0.0) || !(interval_s >= window_s)) {
    throw ConfigError("sample_probe_windows: need interval >= window > 0");
  }
  const double total_rate = rate_even_to_odd_hz + rate_odd_to_even_hz;
  const double pi_odd = rate_even_to_odd_hz / total_rate;
  Rng rng(seed);
  // The first window starts in the stationary distribution of the chain.
  Parity state = rng.bernoulli(pi_odd) ? Parity::odd : Parity::even;
  std::vector<WindowSample> out;
  out.reserve(static_cast<std::size_t>(n_probes));
  for (int k = 0; k < n_probes; ++k) {
    WindowSample sample;
    sample.start = state;
    // Exact continuous-time simulation inside the window.
    double t = 0.0;
    double even_s = 0.0;
    for (;;) {
      const double rate =
          (state == Parity::even) ? rate_even_to_odd_hz : rate_odd_to_even_hz;
      double dwell = (rate > 0.0) ? rng.exponential(rate) : window_s - t;
      if (t + dwell >= window_s || rate <= 0.0) {
        if (state == Parity::even) even_s += window_s - t;
        t = window_s;
        break;
      }
      if (state == Parity::even) even_s += dwell;
      t += dwell;
      state = flipped(state);
    }
    sample.even_fraction = even_s / window_s;
    sample.odd_fraction = 1.0 - sample.even_fraction;
    sample.both_visible =
        std::min(sample.even_fraction, sample.odd_fraction) >
        visibility_threshold;
    out.push_back(sample);
    // Closed-form propagation across the gap to the next window start:
    // p_odd(t) = pi_odd + (p0 - pi_odd) exp(-(r_eo + r_oe) t), the exact
    // marginal of the two-state chain, sampled with a single Bernoulli draw.
    if (k + 1 < n_probes) {
      const double gap_s = interval_s - window_s;
      const double p0 = (state == Parity::odd) ? 1.0 : 0.0;
      const double p_odd =
          pi_odd + (p0 - pi_odd) * std::exp(-total_rate * gap_s);
      state = rng.bernoulli(p_odd) ? Parity::odd : Parity::even;
    }
  }
  return out;
}

PathDominance path_dominance(const circuit::CircuitParams& params,
                             const circuit::BasisSpec& basis) {
  const auto table = circuit::ground_energy_table(params, basis);
  auto energy_of = [&table](const std::string& label) {
    for (const auto& entry : table) {
      if (entry.label == label) return entry.energy_ghz;
    }
    throw std::logic_error("path_dominance: missing table entry " + label);
  };
  const double eps2 = energy_of("(0,e,0,0)");
  const double eps3 = energy_of("(0,0,e,0)");
  const double gap2 = params.delta_sp_ghz[1];
  const double gap3 = params.delta_sp_ghz[2];
  const double gap4 = params.delta_sp_ghz[3];

  PathDominance result;
  result.delta_e_island2_ghz =
      tunneling_energy_change(0.0, eps2, gap4, gap2);
  result.delta_e_island3_ghz =
      tunneling_energy_change(0.0, eps3, gap4, gap3);
  // Forward * backward rate product per cycle, normalized by Gamma0^2. The
  // backward leg sees -delta_E, so with Metropolis rates the product is
  // min(1, exp(-x)) * min(1, exp(+x)) = exp(-|x|).
  const double t_ghz = constants::thermal_ghz(params.temperature_k);
  result.rate_product_u = std::exp(-std::abs(result.delta_e_island2_ghz) / t_ghz);
  result.rate_product_alpha =
      std::exp(-std::abs(result.delta_e_island3_ghz) / t_ghz);
  result.u_junction_dominant = result.rate_product_u > result.rate_product_alpha;
  return result;
}

}  // namespace fluxqp::quasiparticle
