// Copyright (c) 2026 The fluxqp Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Synthetic spectroscopy: branch curves rendered into noisy Lorentzian
// spectrograms, and long repeated-probe trace stacks with 1/f charge drift
// and parity telegraph switching (the doubly split line).

#ifndef FLUXQP_SYNTH_HPP
#define FLUXQP_SYNTH_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "fluxqp/circuit.hpp"
#include "fluxqp/rabi.hpp"

namespace fluxqp::synth {

struct BranchWeight {
  rabi::BranchCurve curve;
  double weight = 1.0;
};

struct Spectrogram {
  std::vector<double> bias;      // strictly increasing
  std::vector<double> freq_ghz;  // strictly increasing
  Eigen::MatrixXd amplitude;     // (bias, freq)
  double linewidth_ghz = 2e-3;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

// Render weighted branch curves into a spectrogram: one unit-height
// Lorentzian of FWHM linewidth_ghz per branch per bias point (scaled by the
// branch weight), plus i.i.d. Gaussian amplitude noise. All curves must
// share the same bias grid.
Spectrogram synth_spectrogram(const std::vector<BranchWeight>& branches,
                              const std::vector<double>& freq_axis_ghz,
                              double linewidth_ghz, double noise_sigma,
                              std::uint64_t seed);

// Qubit frequency versus island-2 offset charge (units of e, any real
// value; the map is 2e periodic and symmetric about integer charges).
struct ChargeFreqMap {
  enum class Mode { cosine, circuit_lookup };
  Mode mode = Mode::cosine;
  double mid_ghz = 0.0;        // (f(0) + f(1e)) / 2
  double width_max_ghz = 0.0;  // |f(0) - f(1e)|
  std::vector<double> q_grid_e;  // lookup grid on [0, 1] e (lookup mode)
  std::vector<double> freq_ghz;  // frequency at q_grid_e (lookup mode)

  double frequency_at(double q_e) const;
};

// Analytic map f(q) = mid + (width_max / 2) cos(pi q / e).
ChargeFreqMap make_cosine_map(double mid_ghz, double width_max_ghz);

// Map tabulated from the circuit model: the 0 -> 2 transition of the coupled
// system versus island-2 offset charge on a uniform grid over [0, 1] e,
// linearly interpolated.
ChargeFreqMap make_circuit_map(const circuit::CircuitParams& params,
                               const circuit::BasisSpec& basis,
                               const circuit::FluxBias& flux, int n_grid = 17);

struct TraceStackConfig {
  int n_traces = 84000;
  double interval_s = 3.0;   // probe repetition period
  double window_s = 0.02;    // probe duration
  double q0_e = 0.15;        // static offset charge
  double s1hz_e2_per_hz = 0.0406 * 0.0406;
  double gamma = 1.0;
  double rate_even_to_odd_hz = 250.0;
  double rate_odd_to_even_hz = 250.0;
  double linewidth_ghz = 2e-3;
  double noise_sigma = 0.1;
  double visibility_threshold = 0.1;  // fraction of window to show a peak
  std::vector<double> freq_axis_ghz;  // empty selects the auto grid
  double freq_step_ghz = 2e-4;
  double freq_margin_ghz = 6e-3;  // beyond width_max/2 on each side
};

struct TraceStack {
  std::vector<double> time_s;
  std::vector<double> freq_ghz;
  Eigen::MatrixXd amplitude;  // (trace, freq)
  // Ground truth channels.
  std::vector<double> q_true_e;       // unfolded background charge, incl. q0
  std::vector<int> parity_start;      // 0 even, 1 odd at window start
  std::vector<double> even_fraction;  // occupancy within the probe window
  std::vector<std::uint8_t> even_visible;
  std::vector<std::uint8_t> odd_visible;
  // Generator parameters, echoed for the container header.
  double interval_s = 0.0, window_s = 0.0;
  double q0_e = 0.0, s1hz_e2_per_hz = 0.0, gamma = 0.0;
  double rate_even_to_odd_hz = 0.0, rate_odd_to_even_hz = 0.0;
  double linewidth_ghz = 0.0, noise_sigma = 0.0;
  double visibility_threshold = 0.0;
  std::uint64_t seed = 0;
};

// Repeated-probe synthesis: a 1/f background charge sampled once per probe,
// an exact parity telegraph sampled within each 20 ms window, and one
// Lorentzian per visible parity at f(q) and f(q + 1e). A parity peak is
// visible when its occupancy exceeds visibility_threshold of the window.
TraceStack synth_trace_stack(const ChargeFreqMap& map,
                             const TraceStackConfig& config,
                             std::uint64_t seed);

}  // namespace fluxqp::synth

#endif  // FLUXQP_SYNTH_HPP
