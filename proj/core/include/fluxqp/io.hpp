// Copyright (c) 2026 The fluxqp Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Serialization: shortest round-trip number formatting, CSV tables with
// unit-carrying header comments, strict JSON configs (unknown keys
// rejected, schema_version checked), run manifests, and a binary container
// for spectrograms and trace stacks that reloads bit-exactly.

#ifndef FLUXQP_IO_HPP
#define FLUXQP_IO_HPP

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "fluxqp/circuit.hpp"
#include "fluxqp/rabi.hpp"
#include "fluxqp/synth.hpp"

namespace fluxqp::io {

using json = nlohmann::json;

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

// --- CSV -------------------------------------------------------------------

// Writes "# " comment lines (one per column, carrying units), a header row,
// then data rows. Numeric cells go through format_double.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void comment(const std::string& line);
  // name/unit pairs; an empty unit means dimensionless.
  void header(const std::vector<std::pair<std::string, std::string>>& columns);
  void cell(double v);
  void cell(int v);
  void cell(std::uint64_t v);
  void cell(const std::string& v);
  void end_row();
  void close();

 private:
  void separator();
  std::ofstream out_;
  std::string path_;
  bool row_open_ = false;
  std::size_t n_columns_ = 0;
  std::size_t cells_in_row_ = 0;
};

struct CsvData {
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> columns;  // per column
  std::size_t n_rows = 0;

  std::size_t column_index(const std::string& name) const;  // throws IoError
  std::vector<double> numeric(const std::string& name) const;
};

CsvData read_csv(const std::string& path);

// --- JSON configs ----------------------------------------------------------

json load_json_file(const std::string& path);             // throws IoError
void save_json_file(const std::string& path, const json& j);

// Loads a config file; a manifest (object with "command" and "config" keys)
// is unwrapped to its embedded resolved config, so a manifest can be passed
// back as --config to reproduce a run.
json load_config_file(const std::string& path);

// Rejects keys outside `allowed`, naming the offender and the block.
void check_keys(const json& object, const std::vector<std::string>& allowed,
                const std::string& block);

// Typed field access with exact error messages ("missing required key",
// "wrong type"). block names the enclosing config block for messages.
double require_double(const json& object, const std::string& key,
                      const std::string& block);
int require_int(const json& object, const std::string& key,
                const std::string& block);
std::string require_string(const json& object, const std::string& key,
                           const std::string& block);
double get_double(const json& object, const std::string& key,
                  const std::string& block, double fallback);
int get_int(const json& object, const std::string& key,
            const std::string& block, int fallback);
bool get_bool(const json& object, const std::string& key,
              const std::string& block, bool fallback);
std::uint64_t get_uint64(const json& object, const std::string& key,
                         const std::string& block, std::uint64_t fallback);
std::string get_string(const json& object, const std::string& key,
                       const std::string& block, const std::string& fallback);

// Circuit/rabi/basis/charge blocks. Parsers apply defaults for absent keys,
// enforce allowed keys, and accept scalar-or-array forms for eta (tied
// loading) and delta_sp_ghz.
circuit::CircuitParams circuit_from_json(const json& block);
json circuit_to_json(const circuit::CircuitParams& params);
circuit::BasisSpec basis_from_json(const json& block);
json basis_to_json(const circuit::BasisSpec& basis);
circuit::ChargeConfig charge_from_json(const json& block);
json charge_to_json(const circuit::ChargeConfig& charge);
rabi::RabiParams rabi_from_json(const json& block);  // ignores delta_second
json rabi_to_json(const rabi::RabiParams& params);

// --- Manifest ---------------------------------------------------------------

// manifest.json: {schema_version, command, config, outputs}. The config is
// the full resolved configuration (seed included), sufficient to re-run the
// command bit-identically. No timestamps.
void write_manifest(const std::string& out_dir, const std::string& command,
                    const json& resolved_config,
                    const std::vector<std::string>& outputs);

// --- Key-value report -------------------------------------------------------

// Small structured text report: "key = value" lines, written in order.
void write_report(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& rows);

// --- Domain CSV exports ------------------------------------------------------

void write_levels_csv(const std::string& path,
                      const Eigen::VectorXd& energies_ghz);
void write_branch_csv(const std::string& path, const std::string& bias_name,
                      const std::string& bias_unit,
                      const rabi::BranchCurve& curve);

// --- Binary container --------------------------------------------------------

// Layout: magic "FQPB", little-endian u64 header length, JSON header
// (schema_version, kind, named array shapes, generator metadata), then the
// arrays as raw little-endian float64 in header order. Reload is bit-exact.
// Reads just the header and reports "trace_stack" or "spectrogram".
std::string container_kind(const std::string& path);

void save_trace_stack(const std::string& path, const synth::TraceStack& stack);
synth::TraceStack load_trace_stack(const std::string& path);
void save_spectrogram(const std::string& path, const synth::Spectrogram& spec);
synth::Spectrogram load_spectrogram(const std::string& path);

}  // namespace fluxqp::io

#endif  // FLUXQP_IO_HPP
