// Copyright (c) 2026 The fluxqp Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Quasiparticle tunneling energetics and the two-state parity telegraph.
// A tunneling event moves one electron across a junction, shifting the
// effective island offset by 1e and changing the system energy by
// delta_E = (eps_final - eps_initial) + (gap_final - gap_initial),
// where eps are circuit ground energies of the parity configurations and
// gap are the per-island superconducting gaps. Rates obey detailed balance
// Gamma(fwd)/Gamma(bwd) = exp(-delta_E h / k_B T) around the scale
// Gamma0 = E_c h / (e^2 R).

#ifndef FLUXQP_QUASIPARTICLE_HPP
#define FLUXQP_QUASIPARTICLE_HPP

#include <cstdint>
#include <vector>

#include "fluxqp/circuit.hpp"

namespace fluxqp::quasiparticle {

// delta_E (GHz) for a tunneling event between circuit parity configurations
// with the given ground energies and superconducting gaps. Antisymmetric
// under initial <-> final exchange.
double tunneling_energy_change(double eps_initial_ghz, double eps_final_ghz,
                               double gap_initial_ghz, double gap_final_ghz);

// Detailed-balance rate ratio Gamma_fwd / Gamma_bwd = exp(-delta_E h / k_B T).
double rate_ratio(double delta_e_ghz, double temperature_k);

// Bare tunneling-rate scale Gamma0 = E_c h / (e^2 R), in Hz. Independent of
// junction area ratios.
double base_rate_hz(double e_c_ghz, double resistance_ohm);

// Directional rate Gamma0 * min(1, exp(-delta_E h / k_B T)): uphill moves are
// exponentially suppressed, downhill moves saturate at Gamma0. The
// forward/backward ratio reproduces rate_ratio exactly.
double tunneling_rate_hz(double base_rate_hz, double delta_e_ghz,
                         double temperature_k);

enum class Parity : int { even = 0, odd = 1 };

struct TelegraphTrace {
  double duration_s = 0.0;
  Parity start = Parity::even;
  std::vector<double> switch_times_s;  // strictly increasing, in (0, duration)
  double rate_even_to_odd_hz = 0.0;
  double rate_odd_to_even_hz = 0.0;

  Parity at(double t_s) const;         // parity at a given time
  std::size_t switch_count() const { return switch_times_s.size(); }
};

// Exact continuous-time Markov sampling of the two-state parity telegraph
// (exponential holding times). Deterministic for a given seed.
TelegraphTrace simulate_telegraph(double rate_even_to_odd_hz,
                                  double rate_odd_to_even_hz, double duration_s,
                                  std::uint64_t seed,
                                  Parity start = Parity::even);

struct ProbeOccupancy {
  double even_fraction = 0.0;
  double odd_fraction = 0.0;
  bool both_visible = false;  // min fraction above threshold
};

// Occupancy fractions of each parity within [t, t + window] for every probe
// time. Throws std::out_of_range if a window leaves the trace span.
std::vector<ProbeOccupancy> parity_at_probes(const TelegraphTrace& trace,
                                             const std::vector<double>& probe_times_s,
                                             double window_s,
                                             double visibility_threshold = 0.1);

// Telegraph sampler for long probe sequences (hours of wall-clock time at
// millisecond rates): the chain is simulated exactly inside each probe
// window, and propagated across the inter-probe gaps with the closed-form
// two-state occupation probability, which is the exact marginal of the
// continuous chain. Window k starts at k * interval_s.
struct WindowSample {
  Parity start = Parity::even;
  double even_fraction = 0.0;
  double odd_fraction = 0.0;
  bool both_visible = false;
};
std::vector<WindowSample> sample_probe_windows(double rate_even_to_odd_hz,
                                               double rate_odd_to_even_hz,
                                               int n_probes, double interval_s,
                                               double window_s, std::uint64_t seed,
                                               double visibility_threshold = 0.1);

// Composition with the circuit model: compare the quasiparticle cycles
// reservoir -> island 2 -> reservoir (u junction) and reservoir -> island 3
// -> reservoir (alpha junction) by their forward*backward rate products.
struct PathDominance {
  double delta_e_island2_ghz = 0.0;  // reservoir -> island 2
  double delta_e_island3_ghz = 0.0;  // reservoir -> island 3
  double rate_product_u = 0.0;       // normalized by Gamma0^2
  double rate_product_alpha = 0.0;
  bool u_junction_dominant = false;
};
PathDominance path_dominance(const circuit::CircuitParams& params,
                             const circuit::BasisSpec& basis);

}  // namespace fluxqp::quasiparticle

#endif  // FLUXQP_QUASIPARTICLE_HPP
