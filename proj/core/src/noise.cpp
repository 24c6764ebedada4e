// Copyright (c) 2026 The fluxqp Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fluxqp/noise.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <stdexcept>

#include "fluxqp/errors.hpp"
#include "fluxqp/rng.hpp"

namespace fluxqp::noise {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};
template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwDeleter>;

template <typename T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

struct PlanDeleter {
  void operator()(fftw_plan p) const {
    if (p != nullptr) fftw_destroy_plan(p);
  }
};
using Plan = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDeleter>;

// Symmetric Hann window, w[j] = 0.5 (1 - cos(2 pi j / (N - 1))).
std::vector<double> hann_window(int n) {
  std::vector<double> w(static_cast<std::size_t>(n));
  if (n == 1) {
    w[0] = 1.0;
    return w;
  }
  for (int j = 0; j < n; ++j) {
    w[static_cast<std::size_t>(j)] =
        0.5 * (1.0 - std::cos(2.0 * kPi * j / (n - 1)));
  }
  return w;
}

}  // namespace

std::vector<double> generate_one_over_f(double s1hz_e2_per_hz, double gamma,
                                        int n, double f_s_hz,
                                        std::uint64_t seed) {
  if (n < 2) throw ConfigError("generate_one_over_f: n must be >= 2");
  if (!(f_s_hz > 0.0)) throw ConfigError("generate_one_over_f: f_s must be > 0");
  if (s1hz_e2_per_hz < 0.0) {
    throw ConfigError("generate_one_over_f: S(1 Hz) must be >= 0");
  }
  const int m = n / 2 + 1;
  auto spec = fftw_buffer<fftw_complex>(static_cast<std::size_t>(m));
  auto out = fftw_buffer<double>(static_cast<std::size_t>(n));
  Rng rng(seed);
  spec[0][0] = 0.0;  // zero-mean series
  spec[0][1] = 0.0;
  for (int k = 1; k < m; ++k) {
    const double f_k = static_cast<double>(k) * f_s_hz / n;
    const double s_k = s1hz_e2_per_hz * std::pow(f_k, -gamma);
    const double mag = std::sqrt(static_cast<double>(n) * f_s_hz * s_k / 2.0);
    const bool nyquist = (n % 2 == 0) && (k == n / 2);
    if (nyquist) {
      spec[k][0] = mag * rng.normal();
      spec[k][1] = 0.0;
    } else {
      const double scale = mag / std::sqrt(2.0);
      spec[k][0] = scale * rng.normal();
      spec[k][1] = scale * rng.normal();
    }
  }
  Plan plan(fftw_plan_dft_c2r_1d(n, spec.get(), out.get(), FFTW_ESTIMATE));
  if (!plan) throw std::runtime_error("generate_one_over_f: FFTW plan failed");
  fftw_execute(plan.get());
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] = out[j] / n;
  return x;
}

PsdResult compute_psd_chunks(const std::vector<std::vector<double>>& chunks,
                             double f_s_hz, int segment_len, double overlap) {
  if (!(f_s_hz > 0.0)) throw ConfigError("compute_psd: f_s must be > 0");
  if (!(overlap >= 0.0 && overlap < 1.0)) {
    throw ConfigError("compute_psd: overlap must lie in [0, 1)");
  }
  std::size_t total_n = 0;
  for (const auto& c : chunks) total_n += c.size();
  if (segment_len == 0) {
    // Auto length: an eighth of the data, halved until the segments cover at
    // least 75% of the samples. A gap-split series of short chunks would
    // otherwise contribute almost nothing at the full-length default.
    segment_len = static_cast<int>(total_n / 8);
    while (segment_len > 64) {
      const int hop_c =
          std::max(1, static_cast<int>(segment_len * (1.0 - overlap)));
      std::size_t covered = 0;
      for (const auto& c : chunks) {
        if (c.size() < static_cast<std::size_t>(segment_len)) continue;
        const std::size_t k = (c.size() - segment_len) / hop_c + 1;
        covered += (k - 1) * static_cast<std::size_t>(hop_c) + segment_len;
      }
      if (4 * covered >= 3 * total_n) break;
      segment_len /= 2;
    }
  }
  if (segment_len < 4) throw ConfigError("compute_psd: segment length < 4");
  if (total_n < 2 * static_cast<std::size_t>(segment_len)) {
    throw ConfigError("compute_psd: series shorter than two segments");
  }

  double mean = 0.0;
  for (const auto& c : chunks) {
    for (double v : c) mean += v;
  }
  mean /= static_cast<double>(total_n);

  const int seg = segment_len;
  const int hop = std::max(1, static_cast<int>(seg * (1.0 - overlap)));
  const int m = seg / 2 + 1;
  const std::vector<double> window = hann_window(seg);
  double wsum2 = 0.0;
  for (double w : window) wsum2 += w * w;

  auto in = fftw_buffer<double>(static_cast<std::size_t>(seg));
  auto spec = fftw_buffer<fftw_complex>(static_cast<std::size_t>(m));
  Plan plan(fftw_plan_dft_r2c_1d(seg, in.get(), spec.get(), FFTW_ESTIMATE));
  if (!plan) throw std::runtime_error("compute_psd: FFTW plan failed");

  std::vector<double> accum(static_cast<std::size_t>(m), 0.0);
  double windowed_power = 0.0;  // mean of sum(w x)^2 / sum(w^2) per segment
  int n_segments = 0;
  for (const auto& chunk : chunks) {
    if (chunk.size() < static_cast<std::size_t>(seg)) continue;
    for (std::size_t start = 0; start + seg <= chunk.size();
         start += static_cast<std::size_t>(hop)) {
      double seg_power = 0.0;
      for (int j = 0; j < seg; ++j) {
        const double xw =
            window[static_cast<std::size_t>(j)] * (chunk[start + j] - mean);
        in[j] = xw;
        seg_power += xw * xw;
      }
      fftw_execute(plan.get());
      for (int k = 0; k < m; ++k) {
        accum[static_cast<std::size_t>(k)] +=
            spec[k][0] * spec[k][0] + spec[k][1] * spec[k][1];
      }
      windowed_power += seg_power / wsum2;
      ++n_segments;
    }
  }
  if (n_segments == 0) {
    throw ConfigError("compute_psd: no chunk long enough for one segment");
  }

  PsdResult result;
  result.segment_len = seg;
  result.n_segments = n_segments;
  result.overlap = overlap;
  const double df = f_s_hz / seg;
  const double norm = 1.0 / (f_s_hz * wsum2 * n_segments);
  double integral = 0.0;
  for (int k = 0; k < m; ++k) {
    const bool edge = (k == 0) || (seg % 2 == 0 && k == seg / 2);
    const double s_k = (edge ? 1.0 : 2.0) * accum[static_cast<std::size_t>(k)] * norm;
    integral += s_k * df;
    if (k > 0) {
      result.freq_hz.push_back(k * df);
      result.s_e2_per_hz.push_back(s_k);
    }
  }
  result.parseval_ratio = windowed_power > 0.0
                              ? integral / (windowed_power / n_segments)
                              : 1.0;  // all-zero input: identity holds vacuously
  return result;
}

PsdResult compute_psd(const std::vector<double>& x, double f_s_hz,
                      int segment_len, double overlap) {
  return compute_psd_chunks({x}, f_s_hz, segment_len, overlap);
}

std::vector<std::vector<double>> fill_and_split_gaps(
    const std::vector<double>& values, const std::vector<bool>& valid,
    int split_gap) {
  if (values.size() != valid.size()) {
    throw ConfigError("fill_and_split_gaps: values/valid size mismatch");
  }
  if (split_gap < 1) throw ConfigError("fill_and_split_gaps: split_gap must be >= 1");
  std::vector<std::vector<double>> chunks;
  std::vector<double> current;
  std::size_t i = 0;
  const std::size_t n = values.size();
  while (i < n) {
    if (valid[i]) {
      current.push_back(values[i]);
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && !valid[j]) ++j;
    const std::size_t gap = j - i;
    const bool interior = !current.empty() && j < n;
    if (interior && gap < static_cast<std::size_t>(split_gap)) {
      const double left = current.back();
      const double right = values[j];
      for (std::size_t k = 0; k < gap; ++k) {
        const double frac = static_cast<double>(k + 1) / (gap + 1);
        current.push_back(left + (right - left) * frac);
      }
    } else if (!current.empty()) {
      chunks.push_back(std::move(current));
      current.clear();
    }
    i = j;
  }
  if (!current.empty()) chunks.push_back(std::move(current));
  return chunks;
}

OneOverFFit fit_one_over_f(const PsdResult& psd, double band_lo_hz,
                           double band_hi_hz) {
  if (psd.freq_hz.empty()) throw ConfigError("fit_one_over_f: empty PSD");
  if (band_lo_hz <= 0.0) band_lo_hz = 3.0 * psd.freq_hz.front();
  if (band_hi_hz <= 0.0) band_hi_hz = psd.freq_hz.back() / 3.0;
  if (!(band_lo_hz < band_hi_hz)) {
    throw ConfigError("fit_one_over_f: empty fit band");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  int in_band = 0;
  for (std::size_t k = 0; k < psd.freq_hz.size(); ++k) {
    const double f = psd.freq_hz[k];
    if (f < band_lo_hz || f > band_hi_hz) continue;
    ++in_band;
    const double s = psd.s_e2_per_hz[k];
    if (!(s > 0.0)) continue;  // log-log fit uses positive estimates only
    const double lx = std::log(f);
    const double ly = std::log(s);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (in_band > 0 && n == 0) {
    // The spectrum vanishes over the whole band: a constant (noise-free)
    // series. Report zero amplitude instead of a meaningless log-log fit.
    OneOverFFit fit;
    fit.gamma = 0.0;
    fit.s1hz_e2_per_hz = 0.0;
    fit.band_lo_hz = band_lo_hz;
    fit.band_hi_hz = band_hi_hz;
    fit.n_points = 0;
    fit.extrapolated_to_1hz = !(band_lo_hz <= 1.0 && 1.0 <= band_hi_hz);
    return fit;
  }
  if (n < 10) {
    throw ConfigError("fit_one_over_f: fewer than 10 positive PSD points in fit band");
  }
  const double denom = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  OneOverFFit fit;
  fit.gamma = -slope;
  fit.s1hz_e2_per_hz = std::exp(intercept);
  fit.band_lo_hz = band_lo_hz;
  fit.band_hi_hz = band_hi_hz;
  fit.n_points = n;
  fit.extrapolated_to_1hz = !(band_lo_hz <= 1.0 && 1.0 <= band_hi_hz);
  return fit;
}

double fold_to_half_e(double q_raw_e) {
  double r = std::fmod(q_raw_e, 2.0);
  if (r < 0.0) r += 2.0;
  if (r > 1.0) r = 2.0 - r;   // reflect about 1 e
  if (r > 0.5) r = 1.0 - r;   // reflect about 0.5 e
  return r;
}

double invert_split_to_charge(double width_ghz, double width_max_ghz,
                              InversionMode mode,
                              const std::vector<std::pair<double, double>>*
                                  model_curve,
                              double clip_tol) {
  if (mode == InversionMode::cosine) {
    if (!(width_max_ghz > 0.0)) {
      throw ConfigError("invert_split_to_charge: width_max must be > 0");
    }
    const double tol = clip_tol * width_max_ghz;
    if (width_ghz < -tol || width_ghz > width_max_ghz + tol) {
      throw ConfigError(
          "invert_split_to_charge: width outside model range beyond clip "
          "tolerance");
    }
    const double ratio =
        std::clamp(width_ghz / width_max_ghz, 0.0, 1.0);
    return std::acos(ratio) / kPi;
  }
  // model_lookup
  if (model_curve == nullptr || model_curve->size() < 2) {
    throw ConfigError("invert_split_to_charge: model curve with >= 2 points required");
  }
  const auto& curve = *model_curve;
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    if (!(curve[i + 1].first > curve[i].first)) {
      throw ConfigError("invert_split_to_charge: model charges must increase");
    }
    if (!(curve[i + 1].second < curve[i].second)) {
      throw ConfigError("invert_split_to_charge: model widths must decrease");
    }
  }
  const double w_hi = curve.front().second;
  const double w_lo = curve.back().second;
  const double tol = clip_tol * w_hi;
  if (width_ghz > w_hi + tol || width_ghz < w_lo - tol) {
    throw ConfigError(
        "invert_split_to_charge: width outside model range beyond clip "
        "tolerance");
  }
  const double w = std::clamp(width_ghz, w_lo, w_hi);
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    if (w <= curve[i].second && w >= curve[i + 1].second) {
      const double span = curve[i].second - curve[i + 1].second;
      const double frac = (span > 0.0) ? (curve[i].second - w) / span : 0.0;
      return curve[i].first + (curve[i + 1].first - curve[i].first) * frac;
    }
  }
  return curve.back().first;  // unreachable for a monotone curve
}

}  // namespace fluxqp::noise
