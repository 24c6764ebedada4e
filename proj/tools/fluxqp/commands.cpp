// Copyright (c) 2026 The fluxqp Authors.
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <stdexcept>

#include "fluxqp/circuit.hpp"
#include "fluxqp/errors.hpp"
#include "fluxqp/extract.hpp"
#include "fluxqp/fitting.hpp"
#include "fluxqp/noise.hpp"
#include "fluxqp/parallel.hpp"
#include "fluxqp/quasiparticle.hpp"
#include "fluxqp/rabi.hpp"
#include "fluxqp/synth.hpp"

namespace fluxqp::cli {

namespace {

using io::json;

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::string> kTopLevelKeys = {
    "schema_version", "seed",  "threads", "format",      "out_dir",
    "circuit",        "basis", "charge",  "rabi",        "spectrum",
    "chargesweep",    "synth", "extract", "invert",      "psd",
    "fit",            "pipeline"};

json block_or_empty(const json& config, const std::string& name) {
  if (!config.contains(name)) return json::object();
  const json& block = config.at(name);
  if (!block.is_object()) {
    throw ConfigError("key '" + name + "' must be an object");
  }
  return block;
}

json require_block(const json& config, const std::string& name) {
  if (!config.contains(name)) {
    throw ConfigError("missing required key '" + name + "'");
  }
  const json& block = config.at(name);
  if (!block.is_object()) {
    throw ConfigError("key '" + name + "' must be an object");
  }
  return block;
}

std::vector<double> linspace(double start, double stop, int n, const char* what) {
  if (n < 2) throw ConfigError(std::string(what) + ": n_points must be >= 2");
  if (!(stop > start)) {
    throw ConfigError(std::string(what) + ": stop must exceed start");
  }
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    grid[static_cast<std::size_t>(i)] = start + (stop - start) * i / (n - 1);
  }
  return grid;
}

// --- Table output honoring --format (csv | json) ----------------------------

class Table {
 public:
  Table& comment(const std::string& line) {
    comments_.push_back(line);
    return *this;
  }
  Table& col(const std::string& name, const std::string& unit,
             std::vector<double> values) {
    cols_.push_back({name, unit, Kind::real, std::move(values), {}, {}});
    return *this;
  }
  Table& col_int(const std::string& name, const std::string& unit,
                 std::vector<int> values) {
    cols_.push_back({name, unit, Kind::integer, {}, std::move(values), {}});
    return *this;
  }
  Table& col_str(const std::string& name, const std::string& unit,
                 std::vector<std::string> values) {
    cols_.push_back({name, unit, Kind::text, {}, {}, std::move(values)});
    return *this;
  }

  // Writes <base>.csv or <base>.json into the output directory and returns
  // the file name.
  std::string write(const AppContext& ctx, const std::string& base) const {
    const std::size_t rows = n_rows();
    const std::string name = base + (ctx.format == "json" ? ".json" : ".csv");
    const std::string path =
        (std::filesystem::path(ctx.out_dir) / name).string();
    if (ctx.format == "json") {
      json j;
      j["comments"] = comments_;
      json columns = json::array();
      json data = json::object();
      for (const auto& c : cols_) {
        columns.push_back({{"name", c.name}, {"unit", c.unit}});
        switch (c.kind) {
          case Kind::real:
            data[c.name] = c.real_values;
            break;
          case Kind::integer:
            data[c.name] = c.int_values;
            break;
          case Kind::text:
            data[c.name] = c.text_values;
            break;
        }
      }
      j["columns"] = columns;
      j["data"] = data;
      io::save_json_file(path, j);
      return name;
    }
    io::CsvWriter w(path);
    for (const auto& line : comments_) w.comment(line);
    std::vector<std::pair<std::string, std::string>> header;
    header.reserve(cols_.size());
    for (const auto& c : cols_) header.emplace_back(c.name, c.unit);
    w.header(header);
    for (std::size_t r = 0; r < rows; ++r) {
      for (const auto& c : cols_) {
        switch (c.kind) {
          case Kind::real:
            w.cell(c.real_values[r]);
            break;
          case Kind::integer:
            w.cell(c.int_values[r]);
            break;
          case Kind::text:
            w.cell(c.text_values[r]);
            break;
        }
      }
      w.end_row();
    }
    w.close();
    return name;
  }

 private:
  enum class Kind { real, integer, text };
  struct Column {
    std::string name, unit;
    Kind kind;
    std::vector<double> real_values;
    std::vector<int> int_values;
    std::vector<std::string> text_values;

    std::size_t size() const {
      switch (kind) {
        case Kind::real:
          return real_values.size();
        case Kind::integer:
          return int_values.size();
        case Kind::text:
          return text_values.size();
      }
      return 0;
    }
  };

  std::size_t n_rows() const {
    if (cols_.empty()) return 0;
    const std::size_t rows = cols_.front().size();
    for (const auto& c : cols_) {
      if (c.size() != rows) throw std::logic_error("Table: ragged columns");
    }
    return rows;
  }

  std::vector<std::string> comments_;
  std::vector<Column> cols_;
};

json base_resolved(const AppContext& ctx) {
  json j;
  j["schema_version"] = 1;
  j["seed"] = ctx.seed;
  j["threads"] = ctx.threads;
  j["format"] = ctx.format;
  return j;
}

std::string input_path(const json& block, const std::string& command) {
  return io::require_string(block, "input", command);
}

// --- Shared block parsers ----------------------------------------------------

struct SynthSetup {
  synth::ChargeFreqMap map;
  synth::TraceStackConfig config;
  json resolved_synth;
  json resolved_circuit;  // null unless the circuit map is used
  json resolved_basis;
};

SynthSetup parse_synth(const json& config) {
  const json block = block_or_empty(config, "synth");
  io::check_keys(block,
                 {"map", "mid_ghz", "width_max_ghz", "map_n_grid", "phi",
                  "n_traces", "interval_s", "window_s", "q0_e",
                  "s1hz_e2_per_hz", "gamma", "rate_even_to_odd_hz",
                  "rate_odd_to_even_hz", "linewidth_ghz", "noise_sigma",
                  "visibility_threshold", "freq_step_ghz", "freq_margin_ghz"},
                 "synth");
  SynthSetup setup;
  const std::string map_kind = io::get_string(block, "map", "synth", "cosine");
  const double phi = io::get_double(block, "phi", "synth", 0.5);
  const int map_n_grid = io::get_int(block, "map_n_grid", "synth", 17);
  if (map_kind == "cosine") {
    const double mid = io::get_double(block, "mid_ghz", "synth", 4.526);
    const double wmax = io::get_double(block, "width_max_ghz", "synth", 0.018);
    setup.map = synth::make_cosine_map(mid, wmax);
  } else if (map_kind == "circuit") {
    const auto params = io::circuit_from_json(block_or_empty(config, "circuit"));
    const auto basis = io::basis_from_json(block_or_empty(config, "basis"));
    setup.map = synth::make_circuit_map(params, basis, circuit::FluxBias{phi},
                                        map_n_grid);
    setup.resolved_circuit = io::circuit_to_json(params);
    setup.resolved_basis = io::basis_to_json(basis);
  } else {
    throw ConfigError("synth.map must be 'cosine' or 'circuit'");
  }

  synth::TraceStackConfig& c = setup.config;
  c.n_traces = io::get_int(block, "n_traces", "synth", c.n_traces);
  c.interval_s = io::get_double(block, "interval_s", "synth", c.interval_s);
  c.window_s = io::get_double(block, "window_s", "synth", c.window_s);
  c.q0_e = io::get_double(block, "q0_e", "synth", c.q0_e);
  c.s1hz_e2_per_hz =
      io::get_double(block, "s1hz_e2_per_hz", "synth", c.s1hz_e2_per_hz);
  c.gamma = io::get_double(block, "gamma", "synth", c.gamma);
  c.rate_even_to_odd_hz = io::get_double(block, "rate_even_to_odd_hz", "synth",
                                         c.rate_even_to_odd_hz);
  c.rate_odd_to_even_hz = io::get_double(block, "rate_odd_to_even_hz", "synth",
                                         c.rate_odd_to_even_hz);
  c.linewidth_ghz = io::get_double(block, "linewidth_ghz", "synth", c.linewidth_ghz);
  c.noise_sigma = io::get_double(block, "noise_sigma", "synth", c.noise_sigma);
  c.visibility_threshold = io::get_double(block, "visibility_threshold", "synth",
                                          c.visibility_threshold);
  c.freq_step_ghz = io::get_double(block, "freq_step_ghz", "synth", c.freq_step_ghz);
  c.freq_margin_ghz =
      io::get_double(block, "freq_margin_ghz", "synth", c.freq_margin_ghz);

  json r;
  r["map"] = map_kind;
  r["mid_ghz"] = setup.map.mid_ghz;
  r["width_max_ghz"] = setup.map.width_max_ghz;
  r["map_n_grid"] = map_n_grid;
  r["phi"] = phi;
  r["n_traces"] = c.n_traces;
  r["interval_s"] = c.interval_s;
  r["window_s"] = c.window_s;
  r["q0_e"] = c.q0_e;
  r["s1hz_e2_per_hz"] = c.s1hz_e2_per_hz;
  r["gamma"] = c.gamma;
  r["rate_even_to_odd_hz"] = c.rate_even_to_odd_hz;
  r["rate_odd_to_even_hz"] = c.rate_odd_to_even_hz;
  r["linewidth_ghz"] = c.linewidth_ghz;
  r["noise_sigma"] = c.noise_sigma;
  r["visibility_threshold"] = c.visibility_threshold;
  r["freq_step_ghz"] = c.freq_step_ghz;
  r["freq_margin_ghz"] = c.freq_margin_ghz;
  setup.resolved_synth = r;
  return setup;
}

struct ExtractSetup {
  extract::RidgeConfig ridge;
  double bin_width_mhz = 0.5;
  json resolved;
};

ExtractSetup parse_extract(const json& config, bool need_input,
                           std::string* input) {
  const json block = need_input ? require_block(config, "extract")
                                : block_or_empty(config, "extract");
  io::check_keys(block,
                 {"input", "smooth_sigma_bins", "mad_k", "max_jump_ghz",
                  "min_length", "min_separation_bins", "min_second_rel",
                  "bin_width_mhz"},
                 "extract");
  ExtractSetup setup;
  extract::RidgeConfig& rc = setup.ridge;
  rc.smooth_sigma_bins =
      io::get_double(block, "smooth_sigma_bins", "extract", rc.smooth_sigma_bins);
  rc.mad_k = io::get_double(block, "mad_k", "extract", rc.mad_k);
  rc.max_jump_ghz = io::get_double(block, "max_jump_ghz", "extract", rc.max_jump_ghz);
  rc.min_length = io::get_int(block, "min_length", "extract", rc.min_length);
  rc.min_separation_bins = io::get_int(block, "min_separation_bins", "extract",
                                       rc.min_separation_bins);
  rc.min_second_rel =
      io::get_double(block, "min_second_rel", "extract", rc.min_second_rel);
  setup.bin_width_mhz =
      io::get_double(block, "bin_width_mhz", "extract", setup.bin_width_mhz);
  if (need_input) *input = input_path(block, "extract");
  json r;
  if (need_input) r["input"] = *input;
  r["smooth_sigma_bins"] = rc.smooth_sigma_bins;
  r["mad_k"] = rc.mad_k;
  r["max_jump_ghz"] = rc.max_jump_ghz;
  r["min_length"] = rc.min_length;
  r["min_separation_bins"] = rc.min_separation_bins;
  r["min_second_rel"] = rc.min_second_rel;
  r["bin_width_mhz"] = setup.bin_width_mhz;
  setup.resolved = r;
  return setup;
}

struct InvertSetup {
  noise::InversionMode mode = noise::InversionMode::cosine;
  double width_max_ghz = 0.0;
  double clip_tol = 0.02;
  std::vector<std::pair<double, double>> model_curve;  // lookup mode
  json resolved;
  json resolved_circuit;
  json resolved_basis;
};

// default_width_max: fallback when the invert block omits width_max_ghz
// (the pipeline passes the synthesis map's width). NaN means "required".
InvertSetup parse_invert(const json& config, bool need_input,
                         std::string* input, double default_width_max) {
  const json block = need_input ? require_block(config, "invert")
                                : block_or_empty(config, "invert");
  io::check_keys(block,
                 {"input", "mode", "width_max_ghz", "clip_tol", "phi",
                  "map_n_grid"},
                 "invert");
  InvertSetup setup;
  const std::string mode = io::get_string(block, "mode", "invert", "cosine");
  setup.clip_tol = io::get_double(block, "clip_tol", "invert", 0.02);
  if (need_input) *input = input_path(block, "invert");
  json r;
  if (need_input) r["input"] = *input;
  r["mode"] = mode;
  r["clip_tol"] = setup.clip_tol;
  if (mode == "cosine") {
    setup.mode = noise::InversionMode::cosine;
    if (block.contains("width_max_ghz") || std::isnan(default_width_max)) {
      setup.width_max_ghz = io::require_double(block, "width_max_ghz", "invert");
    } else {
      setup.width_max_ghz = default_width_max;
    }
    r["width_max_ghz"] = setup.width_max_ghz;
  } else if (mode == "model_lookup") {
    setup.mode = noise::InversionMode::model_lookup;
    const double phi = io::get_double(block, "phi", "invert", 0.5);
    const int n_grid = io::get_int(block, "map_n_grid", "invert", 17);
    const auto params = io::circuit_from_json(block_or_empty(config, "circuit"));
    const auto basis = io::basis_from_json(block_or_empty(config, "basis"));
    const auto map =
        synth::make_circuit_map(params, basis, circuit::FluxBias{phi}, n_grid);
    if (n_grid < 2) throw ConfigError("invert.map_n_grid must be >= 2");
    for (int k = 0; k < n_grid; ++k) {
      const double q = 0.5 * k / (n_grid - 1);
      setup.model_curve.emplace_back(
          q, map.frequency_at(q) - map.frequency_at(q + 1.0));
    }
    setup.resolved_circuit = io::circuit_to_json(params);
    setup.resolved_basis = io::basis_to_json(basis);
    r["phi"] = phi;
    r["map_n_grid"] = n_grid;
  } else {
    throw ConfigError("invert.mode must be 'cosine' or 'model_lookup'");
  }
  setup.resolved = r;
  return setup;
}

double invert_one(const InvertSetup& setup, double width_ghz) {
  return noise::invert_split_to_charge(
      width_ghz, setup.width_max_ghz, setup.mode,
      setup.mode == noise::InversionMode::model_lookup ? &setup.model_curve
                                                       : nullptr,
      setup.clip_tol);
}

struct PsdSetup {
  int segment_len = 0;
  double overlap = 0.5;
  int split_gap = 5;
  double band_lo_hz = 0.0;
  double band_hi_hz = 0.0;
  json resolved;
};

PsdSetup parse_psd(const json& config, bool need_input, std::string* input) {
  const json block = need_input ? require_block(config, "psd")
                                : block_or_empty(config, "psd");
  io::check_keys(block,
                 {"input", "segment_len", "overlap", "split_gap", "band_lo_hz",
                  "band_hi_hz"},
                 "psd");
  PsdSetup setup;
  setup.segment_len = io::get_int(block, "segment_len", "psd", 0);
  setup.overlap = io::get_double(block, "overlap", "psd", 0.5);
  setup.split_gap = io::get_int(block, "split_gap", "psd", 5);
  setup.band_lo_hz = io::get_double(block, "band_lo_hz", "psd", 0.0);
  setup.band_hi_hz = io::get_double(block, "band_hi_hz", "psd", 0.0);
  if (need_input) *input = input_path(block, "psd");
  json r;
  if (need_input) r["input"] = *input;
  r["segment_len"] = setup.segment_len;
  r["overlap"] = setup.overlap;
  r["split_gap"] = setup.split_gap;
  r["band_lo_hz"] = setup.band_lo_hz;
  r["band_hi_hz"] = setup.band_hi_hz;
  setup.resolved = r;
  return setup;
}

// --- Shared pipeline stages ----------------------------------------------------

std::string write_split_series(const AppContext& ctx,
                               const extract::SplitSeries& series) {
  std::vector<int> single(series.single_peak.begin(), series.single_peak.end());
  return Table()
      .col("time_s", "s", series.time_s)
      .col("lower_ghz", "GHz", series.lower_ghz)
      .col("upper_ghz", "GHz", series.upper_ghz)
      .col("width_ghz", "GHz", series.width_ghz)
      .col("mid_ghz", "GHz", series.mid_ghz)
      .col_int("single_peak", "", single)
      .write(ctx, "splits");
}

std::string write_histogram(const AppContext& ctx,
                            const extract::SplitHistogram& hist) {
  return Table()
      .comment("two-peak traces: " + std::to_string(hist.n_two_peak))
      .comment("mode_center_mhz: " + io::format_double(hist.mode_center_mhz))
      .col("center_mhz", "MHz", hist.center_mhz)
      .col_int("count", "", hist.count)
      .col("probability", "", hist.probability)
      .write(ctx, "histogram");
}

struct InvertedSeries {
  std::vector<double> time_s, width_ghz, q_fold_e;
  std::vector<int> valid;
};

// Widths the model cannot represent (beyond the clip tolerance) mark the
// sample invalid instead of aborting the run; downstream gap handling treats
// them like single-peak traces. If every two-peak sample is rejected the
// setup itself is wrong, so the error propagates.
InvertedSeries invert_series(const InvertSetup& setup,
                             const std::vector<double>& time_s,
                             const std::vector<double>& width_ghz,
                             const std::vector<int>& single_peak) {
  InvertedSeries out;
  out.time_s = time_s;
  out.width_ghz = width_ghz;
  out.q_fold_e.assign(time_s.size(), kNan);
  out.valid.assign(time_s.size(), 0);
  std::size_t attempted = 0, accepted = 0;
  std::string last_error;
  for (std::size_t i = 0; i < time_s.size(); ++i) {
    if (single_peak[i] != 0 || !std::isfinite(width_ghz[i])) continue;
    ++attempted;
    try {
      out.q_fold_e[i] = invert_one(setup, width_ghz[i]);
      out.valid[i] = 1;
      ++accepted;
    } catch (const ConfigError& e) {
      last_error = e.what();
    }
  }
  if (attempted > 0 && accepted == 0) throw ConfigError(last_error);
  return out;
}

std::string write_charge_series(const AppContext& ctx,
                                const InvertedSeries& series) {
  return Table()
      .col("time_s", "s", series.time_s)
      .col("width_ghz", "GHz", series.width_ghz)
      .col("q_fold_e", "e", series.q_fold_e)
      .col_int("valid", "", series.valid)
      .write(ctx, "charge");
}

struct PsdOutputs {
  std::string psd_file, report_file;
  noise::PsdResult psd;
  noise::OneOverFFit fit;
};

PsdOutputs run_psd_stage(const AppContext& ctx, const PsdSetup& setup,
                         const std::vector<double>& q_fold_e,
                         const std::vector<int>& valid, double f_s_hz) {
  std::vector<bool> mask(valid.size());
  for (std::size_t i = 0; i < valid.size(); ++i) mask[i] = valid[i] != 0;
  const auto chunks =
      noise::fill_and_split_gaps(q_fold_e, mask, setup.split_gap);
  PsdOutputs out;
  out.psd = noise::compute_psd_chunks(chunks, f_s_hz, setup.segment_len,
                                      setup.overlap);
  out.fit = noise::fit_one_over_f(out.psd, setup.band_lo_hz, setup.band_hi_hz);
  out.psd_file = Table()
                     .col("f_hz", "Hz", out.psd.freq_hz)
                     .col("s_e2_per_hz", "e^2/Hz", out.psd.s_e2_per_hz)
                     .write(ctx, "psd");
  const std::string report_path =
      (std::filesystem::path(ctx.out_dir) / "noise_fit.txt").string();
  io::write_report(
      report_path,
      {{"gamma", io::format_double(out.fit.gamma)},
       {"s1hz_e2_per_hz", io::format_double(out.fit.s1hz_e2_per_hz)},
       {"band_lo_hz", io::format_double(out.fit.band_lo_hz)},
       {"band_hi_hz", io::format_double(out.fit.band_hi_hz)},
       {"n_points", std::to_string(out.fit.n_points)},
       {"extrapolated_to_1hz", out.fit.extrapolated_to_1hz ? "true" : "false"},
       {"parseval_ratio", io::format_double(out.psd.parseval_ratio)},
       {"segment_len", std::to_string(out.psd.segment_len)},
       {"n_segments", std::to_string(out.psd.n_segments)}});
  out.report_file = "noise_fit.txt";
  return out;
}

void print_fit_line(const std::string& name, double value,
                    const std::string& unit) {
  std::printf("  %-18s %s %s\n", name.c_str(),
              io::format_double(value).c_str(), unit.c_str());
}

}  // namespace

// --- Context -------------------------------------------------------------------

AppContext make_context(const std::string& config_path,
                        const std::string& out_dir, bool seed_given,
                        std::uint64_t seed, bool threads_given, int threads,
                        const std::string& format) {
  AppContext ctx;
  if (config_path.empty()) {
    ctx.config = json::object();
  } else {
    ctx.config = io::load_config_file(config_path);
    io::check_keys(ctx.config, kTopLevelKeys, "config");
    if (io::require_int(ctx.config, "schema_version", "config") != 1) {
      throw ConfigError("config.schema_version must be 1");
    }
  }
  ctx.seed = seed_given ? seed
                        : io::get_uint64(ctx.config, "seed", "config", 12345);
  ctx.threads = threads_given ? threads
                              : io::get_int(ctx.config, "threads", "config", 1);
  if (ctx.threads < 1) throw ConfigError("threads must be >= 1");
  ctx.format = format.empty()
                   ? io::get_string(ctx.config, "format", "config", "csv")
                   : format;
  if (ctx.format != "csv" && ctx.format != "json") {
    throw ConfigError("format must be 'csv' or 'json'");
  }
  ctx.out_dir = out_dir.empty()
                    ? io::get_string(ctx.config, "out_dir", "config", "out")
                    : out_dir;
  std::error_code ec;
  std::filesystem::create_directories(ctx.out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + ctx.out_dir);
  return ctx;
}

// --- spectrum --------------------------------------------------------------------

void cmd_spectrum(const AppContext& ctx) {
  const json block = require_block(ctx.config, "spectrum");
  io::check_keys(block, {"model", "bias_start", "bias_stop", "n_points"},
                 "spectrum");
  const std::string model = io::require_string(block, "model", "spectrum");
  const double start = io::require_double(block, "bias_start", "spectrum");
  const double stop = io::require_double(block, "bias_stop", "spectrum");
  const int n_points = io::require_int(block, "n_points", "spectrum");
  const std::vector<double> grid = linspace(start, stop, n_points, "spectrum");

  json resolved = base_resolved(ctx);
  resolved["spectrum"] = {{"model", model},
                          {"bias_start", start},
                          {"bias_stop", stop},
                          {"n_points", n_points}};
  std::vector<std::string> outputs;

  if (model == "rabi") {
    const json rabi_block = block_or_empty(ctx.config, "rabi");
    const rabi::RabiParams params = io::rabi_from_json(rabi_block);
    const auto curves =
        rabi::rabi_branches(params, grid, {{0, 1}, {0, 2}, {1, 3}});
    for (const auto& curve : curves) {
      outputs.push_back(Table()
                            .comment("branch: " + curve.id)
                            .col("epsilon_ghz", "GHz", curve.epsilon_ghz)
                            .col("freq_ghz", "GHz", curve.freq_ghz)
                            .write(ctx, "branch_" + curve.id));
    }
    resolved["rabi"] = io::rabi_to_json(params);
    if (rabi_block.contains("delta_second_ghz")) {
      rabi::RabiParams second = params;
      second.delta_ghz =
          io::require_double(rabi_block, "delta_second_ghz", "rabi");
      const auto c2 = rabi::rabi_branches(second, grid, {{0, 2}});
      outputs.push_back(Table()
                            .comment("branch: w20 (second parity)")
                            .col("epsilon_ghz", "GHz", c2[0].epsilon_ghz)
                            .col("freq_ghz", "GHz", c2[0].freq_ghz)
                            .write(ctx, "branch_w20_second"));
      resolved["rabi"]["delta_second_ghz"] = second.delta_ghz;
    }
  } else if (model == "circuit") {
    const auto params = io::circuit_from_json(block_or_empty(ctx.config, "circuit"));
    const auto basis = io::basis_from_json(block_or_empty(ctx.config, "basis"));
    const auto charge = io::charge_from_json(block_or_empty(ctx.config, "charge"));
    resolved["circuit"] = io::circuit_to_json(params);
    resolved["basis"] = io::basis_to_json(basis);
    resolved["charge"] = io::charge_to_json(charge);
    const std::vector<std::pair<std::string, circuit::ChargeConfig>> parities =
        {{"even", charge}, {"odd", charge.parity_shift(2)}};
    for (const auto& [parity_name, cfg] : parities) {
      std::vector<double> w10(grid.size()), w20(grid.size());
      parallel_for(
          grid.size(),
          [&](std::size_t i) {
            const auto sol = circuit::solve_total(params, cfg,
                                                  circuit::FluxBias{grid[i]},
                                                  basis);
            w10[i] = sol.energies_ghz(1) - sol.energies_ghz(0);
            w20[i] = sol.energies_ghz(2) - sol.energies_ghz(0);
          },
          ctx.threads);
      outputs.push_back(Table()
                            .comment("branch: w10, parity " + parity_name)
                            .col("phi", "Phi0", grid)
                            .col("freq_ghz", "GHz", w10)
                            .write(ctx, "branch_w10_" + parity_name));
      outputs.push_back(Table()
                            .comment("branch: w20, parity " + parity_name)
                            .col("phi", "Phi0", grid)
                            .col("freq_ghz", "GHz", w20)
                            .write(ctx, "branch_w20_" + parity_name));
    }
  } else {
    throw ConfigError("spectrum.model must be 'rabi' or 'circuit'");
  }
  io::write_manifest(ctx.out_dir, "spectrum", resolved, outputs);
}

// --- chargesweep ------------------------------------------------------------------

void cmd_chargesweep(const AppContext& ctx) {
  const json block = require_block(ctx.config, "chargesweep");
  io::check_keys(block, {"island", "q_start", "q_stop", "n_points", "alphas", "us"},
                 "chargesweep");
  const int island = io::get_int(block, "island", "chargesweep", 2);
  if (island != 2 && island != 3) {
    throw ConfigError("chargesweep.island must be 2 or 3");
  }
  const double q_start = io::get_double(block, "q_start", "chargesweep", 0.0);
  const double q_stop = io::get_double(block, "q_stop", "chargesweep", 1.0);
  const int n_points = io::get_int(block, "n_points", "chargesweep", 21);
  const std::vector<double> grid =
      linspace(q_start, q_stop, n_points, "chargesweep");

  const auto params = io::circuit_from_json(block_or_empty(ctx.config, "circuit"));
  const auto basis = io::basis_from_json(block_or_empty(ctx.config, "basis"));
  const auto charge = io::charge_from_json(block_or_empty(ctx.config, "charge"));

  std::vector<double> delta(grid.size()), w20(grid.size());
  parallel_for(
      grid.size(),
      [&](std::size_t i) {
        circuit::ChargeConfig cfg = charge;
        cfg.q_e[static_cast<std::size_t>(island - 1)] = grid[i];
        delta[i] = circuit::qubit_gap(params, cfg, basis);
        const auto sol = circuit::solve_total(params, cfg,
                                              circuit::FluxBias{0.5}, basis);
        w20[i] = sol.energies_ghz(2) - sol.energies_ghz(0);
      },
      ctx.threads);

  std::vector<std::string> outputs;
  outputs.push_back(Table()
                        .comment("island " + std::to_string(island) +
                                 " offset sweep at phi = 0.5")
                        .col("q_e", "e", grid)
                        .col("delta_ghz", "GHz", delta)
                        .col("w20_ghz", "GHz", w20)
                        .write(ctx, "chargesweep_island" + std::to_string(island)));

  json resolved = base_resolved(ctx);
  resolved["chargesweep"] = {{"island", island},
                             {"q_start", q_start},
                             {"q_stop", q_stop},
                             {"n_points", n_points}};
  resolved["circuit"] = io::circuit_to_json(params);
  resolved["basis"] = io::basis_to_json(basis);
  resolved["charge"] = io::charge_to_json(charge);

  const bool has_alphas = block.contains("alphas");
  const bool has_us = block.contains("us");
  if (has_alphas != has_us) {
    throw ConfigError("chargesweep: alphas and us must be given together");
  }
  if (has_alphas) {
    const auto read_array = [&](const char* key) {
      const json& arr = block.at(key);
      if (!arr.is_array() || arr.empty()) {
        throw ConfigError(std::string("chargesweep.") + key +
                          " must be a non-empty array");
      }
      std::vector<double> v;
      for (const auto& e : arr) {
        if (!e.is_number()) {
          throw ConfigError(std::string("chargesweep.") + key +
                            " must contain numbers");
        }
        v.push_back(e.get<double>());
      }
      return v;
    };
    const std::vector<double> alphas = read_array("alphas");
    const std::vector<double> us = read_array("us");
    const Eigen::MatrixXd map =
        circuit::split_map_vs_junctions(params, alphas, us, island, basis);
    std::vector<double> col_alpha, col_u, col_dd;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      for (std::size_t j = 0; j < us.size(); ++j) {
        col_alpha.push_back(alphas[i]);
        col_u.push_back(us[j]);
        col_dd.push_back(map(static_cast<Eigen::Index>(i),
                             static_cast<Eigen::Index>(j)));
      }
    }
    outputs.push_back(Table()
                          .comment("parity splitting shift vs junction ratios, island " +
                                   std::to_string(island))
                          .col("alpha", "", col_alpha)
                          .col("u", "", col_u)
                          .col("ddelta_ghz", "GHz", col_dd)
                          .write(ctx, "split_map"));
    resolved["chargesweep"]["alphas"] = alphas;
    resolved["chargesweep"]["us"] = us;
  }
  io::write_manifest(ctx.out_dir, "chargesweep", resolved, outputs);
}

// --- synth -----------------------------------------------------------------------

void cmd_synth(const AppContext& ctx) {
  const SynthSetup setup = parse_synth(ctx.config);
  const auto stack = synth::synth_trace_stack(setup.map, setup.config, ctx.seed);
  const std::string stack_path =
      (std::filesystem::path(ctx.out_dir) / "stack.bin").string();
  io::save_trace_stack(stack_path, stack);
  json resolved = base_resolved(ctx);
  resolved["synth"] = setup.resolved_synth;
  if (!setup.resolved_circuit.is_null()) {
    resolved["circuit"] = setup.resolved_circuit;
    resolved["basis"] = setup.resolved_basis;
  }
  io::write_manifest(ctx.out_dir, "synth", resolved, {"stack.bin"});
}

// --- extract ---------------------------------------------------------------------

void cmd_extract(const AppContext& ctx) {
  std::string input;
  const ExtractSetup setup = parse_extract(ctx.config, true, &input);
  std::vector<std::string> outputs;
  const std::string kind = io::container_kind(input);
  if (kind == "trace_stack") {
    const auto stack = io::load_trace_stack(input);
    const auto series = extract::extract_split_series(stack, setup.ridge);
    outputs.push_back(write_split_series(ctx, series));
    outputs.push_back(
        write_histogram(ctx, extract::split_histogram(series, setup.bin_width_mhz)));
  } else if (kind == "spectrogram") {
    const auto spec = io::load_spectrogram(input);
    const auto ridges = extract::extract_ridges(spec, setup.ridge);
    std::vector<int> ids;
    std::vector<double> bias, freq, amp, prom;
    for (const auto& branch : ridges.branches) {
      for (const auto& p : branch.points) {
        ids.push_back(branch.id);
        bias.push_back(p.bias);
        freq.push_back(p.freq_ghz);
        amp.push_back(p.amplitude);
        prom.push_back(p.prominence);
      }
    }
    for (const auto& p : ridges.unassigned) {
      ids.push_back(-1);
      bias.push_back(p.bias);
      freq.push_back(p.freq_ghz);
      amp.push_back(p.amplitude);
      prom.push_back(p.prominence);
    }
    outputs.push_back(Table()
                          .comment("branch_id -1 marks unassigned peaks")
                          .col_int("branch_id", "", ids)
                          .col("bias", "", bias)
                          .col("freq_ghz", "GHz", freq)
                          .col("amplitude", "", amp)
                          .col("prominence", "", prom)
                          .write(ctx, "ridges"));
  } else {
    throw IoError("extract: unsupported container kind '" + kind + "'");
  }
  json resolved = base_resolved(ctx);
  resolved["extract"] = setup.resolved;
  io::write_manifest(ctx.out_dir, "extract", resolved, outputs);
}

// --- invert ----------------------------------------------------------------------

void cmd_invert(const AppContext& ctx) {
  std::string input;
  const InvertSetup setup = parse_invert(ctx.config, true, &input, kNan);
  const io::CsvData data = io::read_csv(input);
  const std::vector<double> time_s = data.numeric("time_s");
  const std::vector<double> width = data.numeric("width_ghz");
  const std::vector<double> single_raw = data.numeric("single_peak");
  std::vector<int> single(single_raw.size());
  for (std::size_t i = 0; i < single_raw.size(); ++i) {
    single[i] = single_raw[i] != 0.0 ? 1 : 0;
  }
  const InvertedSeries series = invert_series(setup, time_s, width, single);
  const std::string charge_file = write_charge_series(ctx, series);
  json resolved = base_resolved(ctx);
  resolved["invert"] = setup.resolved;
  if (!setup.resolved_circuit.is_null()) {
    resolved["circuit"] = setup.resolved_circuit;
    resolved["basis"] = setup.resolved_basis;
  }
  io::write_manifest(ctx.out_dir, "invert", resolved, {charge_file});
}

// --- psd -------------------------------------------------------------------------

namespace {

double uniform_sample_rate(const std::vector<double>& time_s) {
  if (time_s.size() < 2) throw ConfigError("psd: need at least 2 samples");
  const double dt = time_s[1] - time_s[0];
  if (!(dt > 0.0)) throw ConfigError("psd: time axis must increase");
  for (std::size_t i = 1; i + 1 < time_s.size(); ++i) {
    const double d = time_s[i + 1] - time_s[i];
    if (std::abs(d - dt) > 1e-9 * std::max(dt, 1.0)) {
      throw ConfigError("psd: non-uniform sampling");
    }
  }
  return 1.0 / dt;
}

}  // namespace

void cmd_psd(const AppContext& ctx) {
  std::string input;
  const PsdSetup setup = parse_psd(ctx.config, true, &input);
  const io::CsvData data = io::read_csv(input);
  const std::vector<double> time_s = data.numeric("time_s");
  const std::vector<double> q = data.numeric("q_fold_e");
  const std::vector<double> valid_raw = data.numeric("valid");
  std::vector<int> valid(valid_raw.size());
  for (std::size_t i = 0; i < valid_raw.size(); ++i) {
    valid[i] = valid_raw[i] != 0.0 ? 1 : 0;
  }
  const double f_s = uniform_sample_rate(time_s);
  const PsdOutputs out = run_psd_stage(ctx, setup, q, valid, f_s);
  std::printf("1/f fit: gamma = %s, S(1 Hz) = %s e^2/Hz (%d points)\n",
              io::format_double(out.fit.gamma).c_str(),
              io::format_double(out.fit.s1hz_e2_per_hz).c_str(),
              out.fit.n_points);
  json resolved = base_resolved(ctx);
  resolved["psd"] = setup.resolved;
  io::write_manifest(ctx.out_dir, "psd", resolved,
                     {out.psd_file, out.report_file});
}

// --- fit -------------------------------------------------------------------------

void cmd_fit(const AppContext& ctx) {
  const json block = require_block(ctx.config, "fit");
  io::check_keys(block,
                 {"model", "data", "fit_bias_map", "multi_start", "start_spread",
                  "max_iterations", "free_parameters", "constraint"},
                 "fit");
  const std::string model = io::require_string(block, "model", "fit");
  const std::string data_path = io::require_string(block, "data", "fit");
  fitting::LmOptions lm;
  lm.multi_start = io::get_int(block, "multi_start", "fit", 8);
  lm.start_spread = io::get_double(block, "start_spread", "fit", 0.05);
  lm.max_iterations = io::get_int(block, "max_iterations", "fit", 200);
  lm.seed = ctx.seed;

  const io::CsvData data = io::read_csv(data_path);
  const bool has_weight =
      std::find(data.names.begin(), data.names.end(), "weight") !=
      data.names.end();

  json resolved = base_resolved(ctx);
  json fit_echo;
  fit_echo["model"] = model;
  fit_echo["data"] = data_path;
  fit_echo["multi_start"] = lm.multi_start;
  fit_echo["start_spread"] = lm.start_spread;
  fit_echo["max_iterations"] = lm.max_iterations;

  std::vector<std::pair<std::string, std::string>> report;
  json params_out;

  if (model == "rabi") {
    fitting::RabiFitData fd;
    fd.branch = data.columns[data.column_index("branch")];
    fd.bias = data.numeric("bias");
    fd.freq_ghz = data.numeric("freq_ghz");
    if (has_weight) fd.weight = data.numeric("weight");
    const json rabi_block = block_or_empty(ctx.config, "rabi");
    const rabi::RabiParams init = io::rabi_from_json(rabi_block);
    const double second_init = io::get_double(rabi_block, "delta_second_ghz",
                                              "rabi", init.delta_ghz);
    fitting::RabiFitOptions opts;
    opts.fit_bias_map = io::get_bool(block, "fit_bias_map", "fit", false);
    opts.lm = lm;
    fit_echo["fit_bias_map"] = opts.fit_bias_map;
    const auto result = fitting::fit_rabi_two_delta(fd, init, second_init, opts);

    std::printf("fitted Rabi parameters:\n");
    print_fit_line("delta_ghz", result.params.delta_ghz, "GHz");
    print_fit_line("delta_second_ghz", result.delta_second_ghz, "GHz");
    print_fit_line("g_ghz", result.params.g_ghz, "GHz");
    print_fit_line("omega_r_ghz", result.params.omega_r_ghz, "GHz");
    report = {{"model", "rabi"},
              {"delta_ghz", io::format_double(result.params.delta_ghz)},
              {"delta_second_ghz", io::format_double(result.delta_second_ghz)},
              {"g_ghz", io::format_double(result.params.g_ghz)},
              {"omega_r_ghz", io::format_double(result.params.omega_r_ghz)},
              {"bias_scale", io::format_double(result.bias_scale)},
              {"bias_offset", io::format_double(result.bias_offset)},
              {"stage1_rms_ghz", io::format_double(result.stage1.residual_rms)},
              {"stage1_converged", result.stage1.converged ? "true" : "false"},
              {"stage2_rms_ghz", io::format_double(result.stage2.residual_rms)},
              {"stage2_converged", result.stage2.converged ? "true" : "false"},
              {"best_start", std::to_string(result.stage1.best_start)}};
    params_out = io::rabi_to_json(result.params);
    params_out["delta_second_ghz"] = result.delta_second_ghz;
    params_out["bias_scale"] = result.bias_scale;
    params_out["bias_offset"] = result.bias_offset;
    resolved["rabi"] = io::rabi_to_json(init);
    resolved["rabi"]["delta_second_ghz"] = second_init;
  } else if (model == "circuit") {
    fitting::CircuitFitData fd;
    fd.phi = data.numeric("phi");
    const std::vector<double> parity_raw = data.numeric("parity");
    for (double p : parity_raw) fd.parity.push_back(static_cast<int>(p));
    fd.freq_ghz = data.numeric("freq_ghz");
    if (has_weight) fd.weight = data.numeric("weight");

    const auto init = io::circuit_from_json(block_or_empty(ctx.config, "circuit"));
    const auto basis = io::basis_from_json(block_or_empty(ctx.config, "basis"));
    const auto charge = io::charge_from_json(block_or_empty(ctx.config, "charge"));
    fitting::CircuitFitOptions opts;
    opts.basis = basis;
    opts.lm = lm;
    if (block.contains("free_parameters")) {
      const json& arr = block.at("free_parameters");
      if (!arr.is_array() || arr.empty()) {
        throw ConfigError("fit.free_parameters must be a non-empty array");
      }
      opts.free_parameters.clear();
      for (const auto& e : arr) {
        if (!e.is_string()) {
          throw ConfigError("fit.free_parameters must contain strings");
        }
        opts.free_parameters.push_back(e.get<std::string>());
      }
    }
    if (block.contains("constraint")) {
      const json cons = block.at("constraint");
      io::check_keys(cons,
                     {"phi_probe", "f_mid_target_ghz", "split_target_ghz",
                      "weight_mid", "weight_split"},
                     "fit.constraint");
      opts.constraint.enabled = true;
      opts.constraint.phi_probe =
          io::get_double(cons, "phi_probe", "fit.constraint", 0.5);
      opts.constraint.f_mid_target_ghz =
          io::require_double(cons, "f_mid_target_ghz", "fit.constraint");
      opts.constraint.split_target_ghz =
          io::require_double(cons, "split_target_ghz", "fit.constraint");
      opts.constraint.weight_mid =
          io::get_double(cons, "weight_mid", "fit.constraint", 1.0);
      opts.constraint.weight_split =
          io::get_double(cons, "weight_split", "fit.constraint", 1.0);
      fit_echo["constraint"] = cons;
    }
    fit_echo["free_parameters"] = opts.free_parameters;

    const auto result =
        fitting::fit_circuit_two_parity(fd, init, charge.q_e[1], opts);
    std::printf("fitted circuit parameters:\n");
    print_fit_line("e_j_ghz", result.params.e_j_ghz, "GHz");
    print_fit_line("e_c_ghz", result.params.e_c_ghz, "GHz");
    print_fit_line("alpha", result.params.alpha, "");
    print_fit_line("beta", result.params.beta, "");
    print_fit_line("u", result.params.u, "");
    print_fit_line("eta", result.params.eta[0], "");
    print_fit_line("omega_r_ghz", result.params.omega_r_ghz, "GHz");
    print_fit_line("l_r_nh", result.params.l_r_nh, "nH");
    print_fit_line("q_g2_e", result.q_g2_e, "e");
    report = {{"model", "circuit"},
              {"e_j_ghz", io::format_double(result.params.e_j_ghz)},
              {"e_c_ghz", io::format_double(result.params.e_c_ghz)},
              {"alpha", io::format_double(result.params.alpha)},
              {"beta", io::format_double(result.params.beta)},
              {"u", io::format_double(result.params.u)},
              {"eta", io::format_double(result.params.eta[0])},
              {"omega_r_ghz", io::format_double(result.params.omega_r_ghz)},
              {"l_r_nh", io::format_double(result.params.l_r_nh)},
              {"q_g2_e", io::format_double(result.q_g2_e)},
              {"rms_ghz", io::format_double(result.fit.residual_rms)},
              {"converged", result.fit.converged ? "true" : "false"},
              {"best_start", std::to_string(result.fit.best_start)}};
    params_out = io::circuit_to_json(result.params);
    params_out["q_g2_e"] = result.q_g2_e;
    resolved["circuit"] = io::circuit_to_json(init);
    resolved["basis"] = io::basis_to_json(basis);
    resolved["charge"] = io::charge_to_json(charge);
  } else {
    throw ConfigError("fit.model must be 'rabi' or 'circuit'");
  }

  io::write_report(
      (std::filesystem::path(ctx.out_dir) / "fit_report.txt").string(), report);
  io::save_json_file(
      (std::filesystem::path(ctx.out_dir) / "fit_params.json").string(),
      params_out);
  resolved["fit"] = fit_echo;
  io::write_manifest(ctx.out_dir, "fit", resolved,
                     {"fit_report.txt", "fit_params.json"});
}

// --- pipeline ----------------------------------------------------------------------

void cmd_pipeline(const AppContext& ctx) {
  io::check_keys(block_or_empty(ctx.config, "pipeline"), {}, "pipeline");
  const SynthSetup synth_setup = parse_synth(ctx.config);
  const ExtractSetup extract_setup = parse_extract(ctx.config, false, nullptr);
  const InvertSetup invert_setup = parse_invert(
      ctx.config, false, nullptr, synth_setup.map.width_max_ghz);
  const PsdSetup psd_setup = parse_psd(ctx.config, false, nullptr);

  std::vector<std::string> outputs;
  const auto stack =
      synth::synth_trace_stack(synth_setup.map, synth_setup.config, ctx.seed);
  io::save_trace_stack(
      (std::filesystem::path(ctx.out_dir) / "stack.bin").string(), stack);
  outputs.push_back("stack.bin");

  const auto series = extract::extract_split_series(stack, extract_setup.ridge);
  outputs.push_back(write_split_series(ctx, series));
  outputs.push_back(write_histogram(
      ctx, extract::split_histogram(series, extract_setup.bin_width_mhz)));

  std::vector<int> single(series.single_peak.begin(), series.single_peak.end());
  const InvertedSeries inverted =
      invert_series(invert_setup, series.time_s, series.width_ghz, single);
  outputs.push_back(write_charge_series(ctx, inverted));

  const double f_s = 1.0 / stack.interval_s;
  const PsdOutputs psd_out =
      run_psd_stage(ctx, psd_setup, inverted.q_fold_e, inverted.valid, f_s);
  outputs.push_back(psd_out.psd_file);
  outputs.push_back(psd_out.report_file);

  std::printf("pipeline: gamma = %s, S(1 Hz) = %s e^2/Hz\n",
              io::format_double(psd_out.fit.gamma).c_str(),
              io::format_double(psd_out.fit.s1hz_e2_per_hz).c_str());

  json resolved = base_resolved(ctx);
  resolved["synth"] = synth_setup.resolved_synth;
  if (!synth_setup.resolved_circuit.is_null()) {
    resolved["circuit"] = synth_setup.resolved_circuit;
    resolved["basis"] = synth_setup.resolved_basis;
  }
  resolved["extract"] = extract_setup.resolved;
  resolved["invert"] = invert_setup.resolved;
  resolved["psd"] = psd_setup.resolved;
  io::write_manifest(ctx.out_dir, "pipeline", resolved, outputs);
}

}  // namespace fluxqp::cli
