// Copyright (c) 2026 The fluxqp Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fluxqp/extract.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "fluxqp/errors.hpp"

namespace fluxqp::extract {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Gaussian smoothing with reflected boundaries (x[-1] mirrors x[0]).
std::vector<double> gaussian_smooth(const std::vector<double>& x, double sigma) {
  const int n = static_cast<int>(x.size());
  if (sigma <= 0.0 || n < 2) return x;
  const int radius = std::max(1, static_cast<int>(std::ceil(4.0 * sigma)));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double ksum = 0.0;
  for (int j = -radius; j <= radius; ++j) {
    const double w = std::exp(-0.5 * j * j / (sigma * sigma));
    kernel[static_cast<std::size_t>(j + radius)] = w;
    ksum += w;
  }
  for (double& w : kernel) w /= ksum;
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = -radius; j <= radius; ++j) {
      int idx = i + j;
      while (idx < 0 || idx >= n) {
        if (idx < 0) idx = -idx - 1;
        if (idx >= n) idx = 2 * n - 1 - idx;
      }
      acc += kernel[static_cast<std::size_t>(j + radius)] *
             x[static_cast<std::size_t>(idx)];
    }
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

double median_of(std::vector<double> v) {
  const std::size_t n = v.size();
  const std::size_t mid = n / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid),
                   v.end());
  double m = v[mid];
  if (n % 2 == 0) {
    std::nth_element(v.begin(),
                     v.begin() + static_cast<std::ptrdiff_t>(mid - 1),
                     v.begin() + static_cast<std::ptrdiff_t>(mid));
    m = 0.5 * (m + v[mid - 1]);
  }
  return m;
}

struct Peak {
  int index = 0;
  double freq_ghz = 0.0;
  double amplitude = 0.0;
  double prominence = 0.0;
};

// Topographic prominence: on each side, take the minimum between the peak
// and the nearest strictly higher sample (or the array edge); prominence is
// the height above the larger of the two minima.
double peak_prominence(const std::vector<double>& s, int i) {
  const int n = static_cast<int>(s.size());
  const double h = s[static_cast<std::size_t>(i)];
  double left_min = h;
  for (int j = i - 1; j >= 0; --j) {
    const double v = s[static_cast<std::size_t>(j)];
    if (v > h) break;
    left_min = std::min(left_min, v);
  }
  double right_min = h;
  for (int j = i + 1; j < n; ++j) {
    const double v = s[static_cast<std::size_t>(j)];
    if (v > h) break;
    right_min = std::min(right_min, v);
  }
  return h - std::max(left_min, right_min);
}

// All local maxima above the median + k*MAD threshold of the smoothed
// spectrum, each refined to sub-bin frequency with a three-point parabola.
std::vector<Peak> find_peaks(const std::vector<double>& raw,
                             const std::vector<double>& freq,
                             const RidgeConfig& cfg) {
  const std::vector<double> s = gaussian_smooth(raw, cfg.smooth_sigma_bins);
  const int n = static_cast<int>(s.size());
  const double med = median_of(s);
  std::vector<double> dev(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) dev[k] = std::abs(s[k] - med);
  const double mad = median_of(std::move(dev));
  const double threshold = med + cfg.mad_k * mad;

  std::vector<Peak> peaks;
  for (int i = 1; i + 1 < n; ++i) {
    const double v = s[static_cast<std::size_t>(i)];
    if (!(v > threshold)) continue;
    if (!(v > s[static_cast<std::size_t>(i - 1)] &&
          v >= s[static_cast<std::size_t>(i + 1)])) {
      continue;
    }
    const double a = s[static_cast<std::size_t>(i - 1)];
    const double c = s[static_cast<std::size_t>(i + 1)];
    const double denom = a - 2.0 * v + c;
    double shift = 0.0;
    if (denom < 0.0) shift = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
    const double step =
        0.5 * (freq[static_cast<std::size_t>(i + 1)] -
               freq[static_cast<std::size_t>(i - 1)]);
    Peak p;
    p.index = i;
    p.freq_ghz = freq[static_cast<std::size_t>(i)] + shift * step;
    p.amplitude = v - 0.25 * (a - c) * shift;
    p.prominence = peak_prominence(s, i);
    peaks.push_back(p);
  }
  return peaks;
}

// The up-to-two highest-prominence peaks at least min_separation_bins apart,
// ordered by frequency. The runner-up must also reach min_second_rel of the
// leader's prominence; weaker candidates are noise, not the partner branch.
std::vector<Peak> top_two(std::vector<Peak> peaks, int min_sep,
                          double min_second_rel) {
  std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
    return std::tie(b.prominence, b.amplitude, a.index) <
           std::tie(a.prominence, a.amplitude, b.index);
  });
  std::vector<Peak> keep;
  for (const Peak& p : peaks) {
    if (keep.empty()) {
      keep.push_back(p);
      continue;
    }
    if (std::abs(p.index - keep.front().index) >= min_sep) {
      if (p.prominence >= min_second_rel * keep.front().prominence) {
        keep.push_back(p);
      }
      break;
    }
  }
  std::sort(keep.begin(), keep.end(),
            [](const Peak& a, const Peak& b) { return a.freq_ghz < b.freq_ghz; });
  return keep;
}

std::vector<double> row_of(const Eigen::MatrixXd& m, Eigen::Index i) {
  std::vector<double> out(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    out[static_cast<std::size_t>(j)] = m(i, j);
  }
  return out;
}

}  // namespace

RidgeSet extract_ridges(const synth::Spectrogram& spec,
                        const RidgeConfig& config) {
  const auto nb = static_cast<Eigen::Index>(spec.bias.size());
  if (spec.amplitude.rows() != nb ||
      spec.amplitude.cols() != static_cast<Eigen::Index>(spec.freq_ghz.size())) {
    throw ConfigError("extract_ridges: amplitude shape mismatch");
  }
  struct Active {
    Ridge ridge;
    double last_freq = 0.0;
  };
  std::vector<Active> active;
  std::vector<Ridge> closed;
  int next_id = 0;

  for (Eigen::Index col = 0; col < nb; ++col) {
    const auto bias_idx = static_cast<std::size_t>(col);
    std::vector<Peak> peaks =
        find_peaks(row_of(spec.amplitude, col), spec.freq_ghz, config);
    std::sort(peaks.begin(), peaks.end(),
              [](const Peak& a, const Peak& b) { return a.freq_ghz < b.freq_ghz; });

    // Greedy nearest-frequency matching, closest pairs first.
    struct Pair {
      double dist;
      std::size_t branch, peak;
    };
    std::vector<Pair> pairs;
    for (std::size_t b = 0; b < active.size(); ++b) {
      for (std::size_t p = 0; p < peaks.size(); ++p) {
        const double d = std::abs(peaks[p].freq_ghz - active[b].last_freq);
        if (d <= config.max_jump_ghz) pairs.push_back({d, b, p});
      }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
      return std::tie(a.dist, a.branch, a.peak) <
             std::tie(b.dist, b.branch, b.peak);
    });
    std::vector<bool> branch_used(active.size(), false);
    std::vector<bool> peak_used(peaks.size(), false);
    for (const Pair& pr : pairs) {
      if (branch_used[pr.branch] || peak_used[pr.peak]) continue;
      branch_used[pr.branch] = true;
      peak_used[pr.peak] = true;
      RidgePoint pt{static_cast<int>(col), spec.bias[bias_idx],
                    peaks[pr.peak].freq_ghz, peaks[pr.peak].amplitude,
                    peaks[pr.peak].prominence};
      active[pr.branch].ridge.points.push_back(pt);
      active[pr.branch].last_freq = peaks[pr.peak].freq_ghz;
    }
    // Close branches that missed this column; open branches for new peaks.
    std::vector<Active> still_active;
    for (std::size_t b = 0; b < active.size(); ++b) {
      if (branch_used[b]) {
        still_active.push_back(std::move(active[b]));
      } else {
        closed.push_back(std::move(active[b].ridge));
      }
    }
    active = std::move(still_active);
    for (std::size_t p = 0; p < peaks.size(); ++p) {
      if (peak_used[p]) continue;
      Active a;
      a.ridge.id = next_id++;
      RidgePoint pt{static_cast<int>(col), spec.bias[bias_idx],
                    peaks[p].freq_ghz, peaks[p].amplitude,
                    peaks[p].prominence};
      a.ridge.points.push_back(pt);
      a.last_freq = peaks[p].freq_ghz;
      active.push_back(std::move(a));
    }
  }
  for (auto& a : active) closed.push_back(std::move(a.ridge));
  std::sort(closed.begin(), closed.end(),
            [](const Ridge& a, const Ridge& b) { return a.id < b.id; });

  RidgeSet out;
  for (auto& r : closed) {
    if (static_cast<int>(r.points.size()) >= config.min_length) {
      out.branches.push_back(std::move(r));
    } else {
      for (const auto& pt : r.points) out.unassigned.push_back(pt);
    }
  }
  return out;
}

SplitSeries extract_split_series(const synth::TraceStack& stack,
                                 const RidgeConfig& config) {
  const auto n = static_cast<Eigen::Index>(stack.time_s.size());
  if (stack.amplitude.rows() != n ||
      stack.amplitude.cols() != static_cast<Eigen::Index>(stack.freq_ghz.size())) {
    throw ConfigError("extract_split_series: amplitude shape mismatch");
  }
  SplitSeries series;
  series.time_s = stack.time_s;
  const auto ns = static_cast<std::size_t>(n);
  series.upper_ghz.assign(ns, kNan);
  series.lower_ghz.assign(ns, kNan);
  series.width_ghz.assign(ns, kNan);
  series.mid_ghz.assign(ns, kNan);
  series.single_peak.assign(ns, 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto is = static_cast<std::size_t>(i);
    const std::vector<Peak> peaks =
        top_two(find_peaks(row_of(stack.amplitude, i), stack.freq_ghz, config),
                config.min_separation_bins, config.min_second_rel);
    if (peaks.size() >= 2) {
      series.lower_ghz[is] = peaks[0].freq_ghz;
      series.upper_ghz[is] = peaks[1].freq_ghz;
      series.width_ghz[is] = peaks[1].freq_ghz - peaks[0].freq_ghz;
      series.mid_ghz[is] = 0.5 * (peaks[0].freq_ghz + peaks[1].freq_ghz);
      series.single_peak[is] = 0;
      ++series.n_two_peak;
    } else if (peaks.size() == 1) {
      series.mid_ghz[is] = peaks[0].freq_ghz;
    }
  }
  return series;
}

SplitHistogram split_histogram(const SplitSeries& series, double bin_width_mhz) {
  if (!(bin_width_mhz > 0.0)) {
    throw ConfigError("split_histogram: bin width must be > 0");
  }
  std::vector<int> bins;
  int total = 0;
  for (std::size_t i = 0; i < series.width_ghz.size(); ++i) {
    if (series.single_peak[i] != 0) continue;
    const double w_mhz = series.width_ghz[i] * 1e3;
    if (!std::isfinite(w_mhz)) continue;
    const int idx = static_cast<int>(std::floor(w_mhz / bin_width_mhz + 0.5));
    if (idx < 0) continue;  // sub-resolution negative refinements
    if (idx >= static_cast<int>(bins.size())) {
      bins.resize(static_cast<std::size_t>(idx) + 1, 0);
    }
    ++bins[static_cast<std::size_t>(idx)];
    ++total;
  }
  SplitHistogram hist;
  hist.bin_width_mhz = bin_width_mhz;
  hist.n_two_peak = total;
  hist.count = bins;
  hist.center_mhz.resize(bins.size());
  hist.probability.resize(bins.size());
  int best = 0;
  for (std::size_t k = 0; k < bins.size(); ++k) {
    hist.center_mhz[k] = static_cast<double>(k) * bin_width_mhz;
    hist.probability[k] =
        (total > 0) ? static_cast<double>(bins[k]) / total : 0.0;
    if (bins[k] > bins[static_cast<std::size_t>(best)]) {
      best = static_cast<int>(k);
    }
  }
  hist.mode_index = best;
  hist.mode_center_mhz =
      bins.empty() ? 0.0 : static_cast<double>(best) * bin_width_mhz;
  return hist;
}

}  // namespace fluxqp::extract
