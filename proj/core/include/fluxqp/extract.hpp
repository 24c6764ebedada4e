// Copyright (c) 2026 The fluxqp Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Ridge extraction from spectrograms and trace stacks: per-spectrum peak
// detection (Gaussian smoothing, median + k*MAD threshold, parabolic
// sub-bin refinement), nearest-frequency ridge linking, per-trace split
// widths, and split-width histograms.

#ifndef FLUXQP_EXTRACT_HPP
#define FLUXQP_EXTRACT_HPP

#include <cstdint>
#include <vector>

#include "fluxqp/synth.hpp"

namespace fluxqp::extract {

struct RidgeConfig {
  double smooth_sigma_bins = 1.0;  // Gaussian smoothing along frequency
  double mad_k = 5.0;              // threshold = median + mad_k * MAD
  double max_jump_ghz = 5e-3;      // ridge linking window between columns
  int min_length = 10;             // shorter branches are dropped
  int min_separation_bins = 3;     // between the two reported peaks
  // A second peak counts only if its prominence reaches this fraction of the
  // first peak's: the two parity resonances carry comparable weight, so a far
  // weaker second candidate is a noise bump, not the partner branch.
  double min_second_rel = 0.4;
};

struct RidgePoint {
  int bias_index = 0;
  double bias = 0.0;
  double freq_ghz = 0.0;
  double amplitude = 0.0;   // smoothed amplitude at the peak
  double prominence = 0.0;  // topographic prominence in the smoothed spectrum
};

struct Ridge {
  int id = 0;
  std::vector<RidgePoint> points;
};

struct RidgeSet {
  std::vector<Ridge> branches;
  std::vector<RidgePoint> unassigned;  // peaks of dropped short branches
};

// Detect peaks in every bias column and link them across columns by nearest
// frequency within max_jump_ghz; a branch closes on its first unmatched
// column. Branches shorter than min_length are dropped to unassigned.
RidgeSet extract_ridges(const synth::Spectrogram& spec,
                        const RidgeConfig& config = {});

// Per-trace doubly split line readout: the two highest-prominence peaks at
// least min_separation_bins apart. Traces with fewer than two peaks carry
// NaN width and the single-peak flag; with exactly one peak, mid is that
// peak.
struct SplitSeries {
  std::vector<double> time_s;
  std::vector<double> upper_ghz;  // NaN when single-peak
  std::vector<double> lower_ghz;  // NaN when single-peak
  std::vector<double> width_ghz;  // NaN when single-peak
  std::vector<double> mid_ghz;    // NaN only when no peak at all
  std::vector<std::uint8_t> single_peak;
  int n_two_peak = 0;
};
SplitSeries extract_split_series(const synth::TraceStack& stack,
                                 const RidgeConfig& config = {});

// Histogram of the two-peak split widths in bins of bin_width_mhz centered
// at integer multiples of the bin width. Probabilities are normalized over
// two-peak traces; the mode is the highest-count bin (ties take the lowest
// center).
struct SplitHistogram {
  double bin_width_mhz = 0.5;
  std::vector<double> center_mhz;
  std::vector<int> count;
  std::vector<double> probability;
  int mode_index = 0;
  double mode_center_mhz = 0.0;
  int n_two_peak = 0;
};
SplitHistogram split_histogram(const SplitSeries& series,
                               double bin_width_mhz = 0.5);

}  // namespace fluxqp::extract

#endif  // FLUXQP_EXTRACT_HPP
