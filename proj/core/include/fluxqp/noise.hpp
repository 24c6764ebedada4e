// Copyright (c) 2026 The fluxqp Authors.
// SPDX-License-Identifier: Apache-2.0
//
// 1/f charge-noise synthesis and estimation: spectral generation of
// power-law series, Welch periodogram averaging, log-log power-law fits,
// charge folding, and inversion of splitting widths back to offset charge.

#ifndef FLUXQP_NOISE_HPP
#define FLUXQP_NOISE_HPP

#include <cstdint>
#include <utility>
#include <vector>

namespace fluxqp::noise {

// Uniformly sampled offset-charge series, in units of e.
struct ChargeSeries {
  double f_s_hz = 1.0;
  std::vector<double> q_e;
};

// Gaussian power-law noise with one-sided PSD S(f) = s1hz * f^(-gamma),
// synthesized in the frequency domain: each positive-frequency bin gets an
// independent complex Gaussian with variance n * f_s * S(f_k) / 2, the DC
// bin is zero (zero-mean series) and the Nyquist bin is real. Deterministic
// for a given seed.
std::vector<double> generate_one_over_f(double s1hz_e2_per_hz, double gamma,
                                        int n, double f_s_hz,
                                        std::uint64_t seed);

struct PsdResult {
  std::vector<double> freq_hz;        // one-sided, DC bin dropped
  std::vector<double> s_e2_per_hz;    // PSD estimate at freq_hz
  int segment_len = 0;
  int n_segments = 0;
  double overlap = 0.5;
  // Integral of the full estimated spectrum (all bins including DC and
  // Nyquist) over the mean windowed segment power; equals 1 up to rounding
  // for any input and is reported as a normalization diagnostic.
  double parseval_ratio = 0.0;
};

// Welch PSD with a Hann window and 50% overlap. The global series mean is
// subtracted once before segmenting; segments are not individually
// detrended. segment_len = 0 selects n/8, halved (down to 64) until the
// segments cover at least three quarters of the samples — relevant only for
// the chunked variant below. Requires n >= 2 * segment_len.
PsdResult compute_psd(const std::vector<double>& x, double f_s_hz,
                      int segment_len = 0, double overlap = 0.5);

// Same estimator over a series broken into contiguous chunks (after gap
// splitting); periodograms are pooled across chunks, chunks shorter than
// the segment length are skipped. The mean is taken globally over all
// chunks.
PsdResult compute_psd_chunks(const std::vector<std::vector<double>>& chunks,
                             double f_s_hz, int segment_len = 0,
                             double overlap = 0.5);

// Missing-sample handling for measured series: runs of < split_gap missing
// samples are filled by linear interpolation inside a chunk; longer runs
// (or leading/trailing ones) split the series into separate chunks.
std::vector<std::vector<double>> fill_and_split_gaps(
    const std::vector<double>& values, const std::vector<bool>& valid,
    int split_gap = 5);

struct OneOverFFit {
  double gamma = 0.0;
  double s1hz_e2_per_hz = 0.0;
  double band_lo_hz = 0.0;
  double band_hi_hz = 0.0;
  int n_points = 0;
  bool extrapolated_to_1hz = false;  // 1 Hz outside the fitted band
};

// Least-squares line in log-log coordinates over a fit band, default
// [3 * f_min, f_nyquist / 3]. Requires >= 10 strictly positive PSD points
// in the band.
OneOverFFit fit_one_over_f(const PsdResult& psd, double band_lo_hz = 0.0,
                           double band_hi_hz = 0.0);

// Fold a raw offset charge (units of e) into the physically distinguishable
// interval [0, 0.5]: reduce modulo 2e, reflect about 1e, reflect about 0.5e.
double fold_to_half_e(double q_raw_e);

enum class InversionMode { cosine, model_lookup };

// Map a splitting width back to folded offset charge in [0, 0.5] e.
// cosine: q = arccos(w / w_max) / pi. model_lookup: inverse linear
// interpolation of a monotone (q_e, width_ghz) table on [0, 0.5] e.
// Widths beyond the model range by more than clip_tol * w_max are rejected;
// smaller overshoots are clipped to the boundary.
double invert_split_to_charge(double width_ghz, double width_max_ghz,
                              InversionMode mode,
                              const std::vector<std::pair<double, double>>*
                                  model_curve = nullptr,
                              double clip_tol = 0.02);

}  // namespace fluxqp::noise

#endif  // FLUXQP_NOISE_HPP
