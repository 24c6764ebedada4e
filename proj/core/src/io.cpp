// Copyright (c) 2026 The fluxqp Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fluxqp/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <filesystem>
#include <system_error>

#include "fluxqp/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary container assumes a little-endian host");

namespace fluxqp::io {

namespace {

void throw_io(const std::string& what) { throw IoError(what); }

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// --- CSV ---------------------------------------------------------------------

CsvWriter::CsvWriter(const std::string& path) : out_(path), path_(path) {
  if (!out_) throw_io("cannot open " + path + " for writing");
}

CsvWriter::~CsvWriter() {
  if (out_.is_open()) out_.close();
}

void CsvWriter::comment(const std::string& line) { out_ << "# " << line << "\n"; }

void CsvWriter::header(
    const std::vector<std::pair<std::string, std::string>>& columns) {
  n_columns_ = columns.size();
  for (const auto& [name, unit] : columns) {
    comment("col: " + name + " [" + (unit.empty() ? "-" : unit) + "]");
  }
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i > 0) out_ << ",";
    out_ << columns[i].first;
  }
  out_ << "\n";
}

void CsvWriter::separator() {
  if (cells_in_row_ > 0) out_ << ",";
  ++cells_in_row_;
  row_open_ = true;
}

void CsvWriter::cell(double v) {
  separator();
  out_ << format_double(v);
}

void CsvWriter::cell(int v) {
  separator();
  out_ << v;
}

void CsvWriter::cell(std::uint64_t v) {
  separator();
  out_ << v;
}

void CsvWriter::cell(const std::string& v) {
  separator();
  out_ << v;
}

void CsvWriter::end_row() {
  if (n_columns_ != 0 && cells_in_row_ != n_columns_) {
    throw std::logic_error("CsvWriter: row width does not match header");
  }
  out_ << "\n";
  cells_in_row_ = 0;
  row_open_ = false;
}

void CsvWriter::close() {
  out_.flush();
  if (!out_) throw_io("write failed for " + path_);
  out_.close();
}

std::size_t CsvData::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  throw_io("csv: missing column '" + name + "'");
  return 0;  // unreachable
}

std::vector<double> CsvData::numeric(const std::string& name) const {
  const auto& col = columns[column_index(name)];
  std::vector<double> out;
  out.reserve(col.size());
  for (const std::string& s : col) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
      throw_io("csv: non-numeric cell '" + s + "' in column '" + name + "'");
    }
    out.push_back(v);
  }
  return out;
}

CsvData read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_io("cannot open " + path + " for reading");
  CsvData data;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!have_header) {
      data.names = cells;
      data.columns.resize(cells.size());
      have_header = true;
      continue;
    }
    if (cells.size() != data.names.size()) {
      throw_io("csv: ragged row in " + path);
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      data.columns[i].push_back(cells[i]);
    }
    ++data.n_rows;
  }
  if (!have_header) throw_io("csv: no header row in " + path);
  return data;
}

// --- JSON ----------------------------------------------------------------------

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_io("cannot open " + path + " for reading");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw_io("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
  out.flush();
  if (!out) throw_io("write failed for " + path);
}

json load_config_file(const std::string& path) {
  json j = load_json_file(path);
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  if (j.contains("command") && j.contains("config")) {
    j = j["config"];  // manifest passed back as a config
    if (!j.is_object()) {
      throw ConfigError("manifest 'config' entry must be a JSON object");
    }
  }
  return j;
}

void check_keys(const json& object, const std::vector<std::string>& allowed,
                const std::string& block) {
  for (const auto& item : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw ConfigError("unknown key '" + item.key() + "' in " + block);
    }
  }
}

namespace {

const json& fetch(const json& object, const std::string& key,
                  const std::string& block) {
  const auto it = object.find(key);
  if (it == object.end()) {
    throw ConfigError("missing required key '" + block + "." + key + "'");
  }
  return *it;
}

double as_double(const json& v, const std::string& key,
                 const std::string& block) {
  if (!v.is_number()) {
    throw ConfigError("key '" + block + "." + key + "' must be a number");
  }
  return v.get<double>();
}

int as_int(const json& v, const std::string& key, const std::string& block) {
  if (!v.is_number_integer()) {
    throw ConfigError("key '" + block + "." + key + "' must be an integer");
  }
  return v.get<int>();
}

}  // namespace

double require_double(const json& object, const std::string& key,
                      const std::string& block) {
  return as_double(fetch(object, key, block), key, block);
}

int require_int(const json& object, const std::string& key,
                const std::string& block) {
  return as_int(fetch(object, key, block), key, block);
}

std::string require_string(const json& object, const std::string& key,
                           const std::string& block) {
  const json& v = fetch(object, key, block);
  if (!v.is_string()) {
    throw ConfigError("key '" + block + "." + key + "' must be a string");
  }
  return v.get<std::string>();
}

double get_double(const json& object, const std::string& key,
                  const std::string& block, double fallback) {
  const auto it = object.find(key);
  return it == object.end() ? fallback : as_double(*it, key, block);
}

int get_int(const json& object, const std::string& key,
            const std::string& block, int fallback) {
  const auto it = object.find(key);
  return it == object.end() ? fallback : as_int(*it, key, block);
}

bool get_bool(const json& object, const std::string& key,
              const std::string& block, bool fallback) {
  const auto it = object.find(key);
  if (it == object.end()) return fallback;
  if (!it->is_boolean()) {
    throw ConfigError("key '" + block + "." + key + "' must be a boolean");
  }
  return it->get<bool>();
}

std::uint64_t get_uint64(const json& object, const std::string& key,
                         const std::string& block, std::uint64_t fallback) {
  const auto it = object.find(key);
  if (it == object.end()) return fallback;
  if (!it->is_number_unsigned() && !it->is_number_integer()) {
    throw ConfigError("key '" + block + "." + key +
                      "' must be a non-negative integer");
  }
  if (it->is_number_integer() && it->get<std::int64_t>() < 0) {
    throw ConfigError("key '" + block + "." + key +
                      "' must be a non-negative integer");
  }
  return it->get<std::uint64_t>();
}

std::string get_string(const json& object, const std::string& key,
                       const std::string& block, const std::string& fallback) {
  const auto it = object.find(key);
  if (it == object.end()) return fallback;
  if (!it->is_string()) {
    throw ConfigError("key '" + block + "." + key + "' must be a string");
  }
  return it->get<std::string>();
}

// --- Parameter blocks -----------------------------------------------------------

circuit::CircuitParams circuit_from_json(const json& block) {
  check_keys(block,
             {"e_j_ghz", "e_c_ghz", "alpha", "beta", "u", "eta", "omega_r_ghz",
              "l_r_nh", "temperature_k", "delta_sp_ghz"},
             "circuit");
  circuit::CircuitParams p;
  p.e_j_ghz = get_double(block, "e_j_ghz", "circuit", p.e_j_ghz);
  p.e_c_ghz = get_double(block, "e_c_ghz", "circuit", p.e_c_ghz);
  p.alpha = get_double(block, "alpha", "circuit", p.alpha);
  p.beta = get_double(block, "beta", "circuit", p.beta);
  p.u = get_double(block, "u", "circuit", p.u);
  p.omega_r_ghz = get_double(block, "omega_r_ghz", "circuit", p.omega_r_ghz);
  p.l_r_nh = get_double(block, "l_r_nh", "circuit", p.l_r_nh);
  p.temperature_k = get_double(block, "temperature_k", "circuit", p.temperature_k);
  if (const auto it = block.find("eta"); it != block.end()) {
    if (it->is_number()) {
      const double v = it->get<double>();
      p.eta = {v, v, v};
    } else if (it->is_array() && it->size() == 3) {
      for (std::size_t k = 0; k < 3; ++k) {
        p.eta[k] = as_double((*it)[k], "eta", "circuit");
      }
    } else {
      throw ConfigError("key 'circuit.eta' must be a number or array of 3");
    }
  }
  if (const auto it = block.find("delta_sp_ghz"); it != block.end()) {
    if (it->is_number()) {
      const double v = it->get<double>();
      p.delta_sp_ghz = {v, v, v, v};
    } else if (it->is_array() && it->size() == 4) {
      for (std::size_t k = 0; k < 4; ++k) {
        p.delta_sp_ghz[k] = as_double((*it)[k], "delta_sp_ghz", "circuit");
      }
    } else {
      throw ConfigError(
          "key 'circuit.delta_sp_ghz' must be a number or array of 4");
    }
  }
  p.validate();
  return p;
}

json circuit_to_json(const circuit::CircuitParams& p) {
  json j;
  j["e_j_ghz"] = p.e_j_ghz;
  j["e_c_ghz"] = p.e_c_ghz;
  j["alpha"] = p.alpha;
  j["beta"] = p.beta;
  j["u"] = p.u;
  j["eta"] = {p.eta[0], p.eta[1], p.eta[2]};
  j["omega_r_ghz"] = p.omega_r_ghz;
  j["l_r_nh"] = p.l_r_nh;
  j["temperature_k"] = p.temperature_k;
  j["delta_sp_ghz"] = {p.delta_sp_ghz[0], p.delta_sp_ghz[1], p.delta_sp_ghz[2],
                       p.delta_sp_ghz[3]};
  return j;
}

circuit::BasisSpec basis_from_json(const json& block) {
  check_keys(block, {"n_charge", "n_harm", "n_fock", "n_levels_kept"}, "basis");
  circuit::BasisSpec b;
  b.n_charge = get_int(block, "n_charge", "basis", b.n_charge);
  b.n_harm = get_int(block, "n_harm", "basis", b.n_harm);
  b.n_fock = get_int(block, "n_fock", "basis", b.n_fock);
  b.n_levels_kept = get_int(block, "n_levels_kept", "basis", b.n_levels_kept);
  b.validate();
  return b;
}

json basis_to_json(const circuit::BasisSpec& b) {
  json j;
  j["n_charge"] = b.n_charge;
  j["n_harm"] = b.n_harm;
  j["n_fock"] = b.n_fock;
  j["n_levels_kept"] = b.n_levels_kept;
  return j;
}

circuit::ChargeConfig charge_from_json(const json& block) {
  check_keys(block, {"q_g1_e", "q_g2_e", "q_g3_e", "q_g4_e"}, "charge");
  circuit::ChargeConfig c;
  c.q_e[0] = get_double(block, "q_g1_e", "charge", c.q_e[0]);
  c.q_e[1] = get_double(block, "q_g2_e", "charge", c.q_e[1]);
  c.q_e[2] = get_double(block, "q_g3_e", "charge", c.q_e[2]);
  c.q_e[3] = get_double(block, "q_g4_e", "charge", c.q_e[3]);
  return c;
}

json charge_to_json(const circuit::ChargeConfig& c) {
  json j;
  j["q_g1_e"] = c.q_e[0];
  j["q_g2_e"] = c.q_e[1];
  j["q_g3_e"] = c.q_e[2];
  j["q_g4_e"] = c.q_e[3];
  return j;
}

rabi::RabiParams rabi_from_json(const json& block) {
  check_keys(block,
             {"epsilon_ghz", "delta_ghz", "delta_second_ghz", "omega_r_ghz",
              "g_ghz", "n_fock"},
             "rabi");
  rabi::RabiParams p;
  p.epsilon_ghz = get_double(block, "epsilon_ghz", "rabi", p.epsilon_ghz);
  p.delta_ghz = get_double(block, "delta_ghz", "rabi", p.delta_ghz);
  p.omega_r_ghz = get_double(block, "omega_r_ghz", "rabi", p.omega_r_ghz);
  p.g_ghz = get_double(block, "g_ghz", "rabi", p.g_ghz);
  p.n_fock = get_int(block, "n_fock", "rabi", p.n_fock);
  p.validate();
  return p;
}

json rabi_to_json(const rabi::RabiParams& p) {
  json j;
  j["epsilon_ghz"] = p.epsilon_ghz;
  j["delta_ghz"] = p.delta_ghz;
  j["omega_r_ghz"] = p.omega_r_ghz;
  j["g_ghz"] = p.g_ghz;
  j["n_fock"] = p.n_fock;
  return j;
}

// --- Manifest ---------------------------------------------------------------------

void write_manifest(const std::string& out_dir, const std::string& command,
                    const json& resolved_config,
                    const std::vector<std::string>& outputs) {
  json manifest;
  manifest["schema_version"] = 1;
  manifest["command"] = command;
  manifest["config"] = resolved_config;
  manifest["outputs"] = outputs;
  save_json_file((std::filesystem::path(out_dir) / "manifest.json").string(),
                 manifest);
}

void write_report(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw_io("cannot open " + path + " for writing");
  for (const auto& [key, value] : rows) out << key << " = " << value << "\n";
  out.flush();
  if (!out) throw_io("write failed for " + path);
}

// --- Domain CSV ---------------------------------------------------------------------

void write_levels_csv(const std::string& path,
                      const Eigen::VectorXd& energies_ghz) {
  CsvWriter w(path);
  w.header({{"level_index", ""}, {"energy_ghz", "GHz"}});
  for (Eigen::Index i = 0; i < energies_ghz.size(); ++i) {
    w.cell(static_cast<int>(i));
    w.cell(energies_ghz(i));
    w.end_row();
  }
  w.close();
}

void write_branch_csv(const std::string& path, const std::string& bias_name,
                      const std::string& bias_unit,
                      const rabi::BranchCurve& curve) {
  CsvWriter w(path);
  w.comment("branch: " + curve.id);
  w.header({{bias_name, bias_unit}, {"freq_ghz", "GHz"}});
  for (std::size_t i = 0; i < curve.epsilon_ghz.size(); ++i) {
    w.cell(curve.epsilon_ghz[i]);
    w.cell(curve.freq_ghz[i]);
    w.end_row();
  }
  w.close();
}

// --- Binary container -----------------------------------------------------------------

namespace {

constexpr char kMagic[4] = {'F', 'Q', 'P', 'B'};

struct ArrayRef {
  std::string name;
  const double* data;
  std::uint64_t rows, cols;
};

void save_container(const std::string& path, const std::string& kind,
                    const json& meta, const std::vector<ArrayRef>& arrays) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_io("cannot open " + path + " for writing");
  json header;
  header["schema_version"] = 1;
  header["kind"] = kind;
  header["meta"] = meta;
  json list = json::array();
  for (const auto& a : arrays) {
    list.push_back({{"name", a.name}, {"rows", a.rows}, {"cols", a.cols}});
  }
  header["arrays"] = list;
  const std::string hs = header.dump();
  const std::uint64_t hlen = hs.size();
  out.write(kMagic, 4);
  out.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
  out.write(hs.data(), static_cast<std::streamsize>(hs.size()));
  for (const auto& a : arrays) {
    out.write(reinterpret_cast<const char*>(a.data),
              static_cast<std::streamsize>(a.rows * a.cols * sizeof(double)));
  }
  out.flush();
  if (!out) throw_io("write failed for " + path);
}

struct Container {
  json meta;
  std::vector<std::pair<std::string, Eigen::MatrixXd>> arrays;  // column-major

  const Eigen::MatrixXd& array(const std::string& name) const {
    for (const auto& [n, m] : arrays) {
      if (n == name) return m;
    }
    throw IoError("container: missing array '" + name + "'");
  }
};

Container load_container(const std::string& path, const std::string& kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot open " + path + " for reading");
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw_io(path + ": not a fluxqp binary container");
  }
  std::uint64_t hlen = 0;
  in.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
  if (!in || hlen == 0 || hlen > (1ull << 30)) {
    throw_io(path + ": corrupt container header length");
  }
  std::string hs(hlen, '\0');
  in.read(hs.data(), static_cast<std::streamsize>(hlen));
  if (!in) throw_io(path + ": truncated container header");
  json header;
  try {
    header = json::parse(hs);
  } catch (const json::parse_error& e) {
    throw IoError(path + ": corrupt container header: " + e.what());
  }
  if (get_int(header, "schema_version", "container", -1) != 1) {
    throw_io(path + ": unsupported container schema version");
  }
  if (require_string(header, "kind", "container") != kind) {
    throw_io(path + ": container kind is not '" + kind + "'");
  }
  Container c;
  c.meta = header.at("meta");
  for (const auto& entry : header.at("arrays")) {
    const std::string name = require_string(entry, "name", "container.arrays");
    const auto rows = static_cast<Eigen::Index>(
        get_uint64(entry, "rows", "container.arrays", 0));
    const auto cols = static_cast<Eigen::Index>(
        get_uint64(entry, "cols", "container.arrays", 0));
    Eigen::MatrixXd m(rows, cols);
    in.read(reinterpret_cast<char*>(m.data()),
            static_cast<std::streamsize>(rows * cols * sizeof(double)));
    if (!in) throw_io(path + ": truncated array '" + name + "'");
    c.arrays.emplace_back(name, std::move(m));
  }
  return c;
}

Eigen::MatrixXd column_from(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::MatrixXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()),
                                           1);
}

std::vector<double> to_vector(const Eigen::MatrixXd& m) {
  return std::vector<double>(m.data(), m.data() + m.size());
}

}  // namespace

std::string container_kind(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot open " + path + " for reading");
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw_io(path + ": not a fluxqp binary container");
  }
  std::uint64_t hlen = 0;
  in.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
  if (!in || hlen == 0 || hlen > (1ull << 30)) {
    throw_io(path + ": corrupt container header length");
  }
  std::string hs(hlen, '\0');
  in.read(hs.data(), static_cast<std::streamsize>(hlen));
  if (!in) throw_io(path + ": truncated container header");
  json header;
  try {
    header = json::parse(hs);
  } catch (const json::parse_error& e) {
    throw IoError(path + ": corrupt container header: " + e.what());
  }
  return require_string(header, "kind", "container");
}

void save_trace_stack(const std::string& path, const synth::TraceStack& stack) {
  json meta;
  meta["interval_s"] = stack.interval_s;
  meta["window_s"] = stack.window_s;
  meta["q0_e"] = stack.q0_e;
  meta["s1hz_e2_per_hz"] = stack.s1hz_e2_per_hz;
  meta["gamma"] = stack.gamma;
  meta["rate_even_to_odd_hz"] = stack.rate_even_to_odd_hz;
  meta["rate_odd_to_even_hz"] = stack.rate_odd_to_even_hz;
  meta["linewidth_ghz"] = stack.linewidth_ghz;
  meta["noise_sigma"] = stack.noise_sigma;
  meta["visibility_threshold"] = stack.visibility_threshold;
  meta["seed"] = stack.seed;

  std::vector<double> parity(stack.parity_start.begin(),
                             stack.parity_start.end());
  std::vector<double> even_vis(stack.even_visible.begin(),
                               stack.even_visible.end());
  std::vector<double> odd_vis(stack.odd_visible.begin(),
                              stack.odd_visible.end());
  const Eigen::MatrixXd time = column_from(stack.time_s);
  const Eigen::MatrixXd freq = column_from(stack.freq_ghz);
  const Eigen::MatrixXd q_true = column_from(stack.q_true_e);
  const Eigen::MatrixXd par = column_from(parity);
  const Eigen::MatrixXd efr = column_from(stack.even_fraction);
  const Eigen::MatrixXd evis = column_from(even_vis);
  const Eigen::MatrixXd ovis = column_from(odd_vis);

  auto ref = [](const std::string& name, const Eigen::MatrixXd& m) {
    return ArrayRef{name, m.data(), static_cast<std::uint64_t>(m.rows()),
                    static_cast<std::uint64_t>(m.cols())};
  };
  save_container(path, "trace_stack", meta,
                 {ref("time_s", time), ref("freq_ghz", freq),
                  ref("amplitude", stack.amplitude), ref("q_true_e", q_true),
                  ref("parity_start", par), ref("even_fraction", efr),
                  ref("even_visible", evis), ref("odd_visible", ovis)});
}

synth::TraceStack load_trace_stack(const std::string& path) {
  const Container c = load_container(path, "trace_stack");
  synth::TraceStack stack;
  stack.time_s = to_vector(c.array("time_s"));
  stack.freq_ghz = to_vector(c.array("freq_ghz"));
  stack.amplitude = c.array("amplitude");
  stack.q_true_e = to_vector(c.array("q_true_e"));
  for (double v : to_vector(c.array("parity_start"))) {
    stack.parity_start.push_back(static_cast<int>(v));
  }
  stack.even_fraction = to_vector(c.array("even_fraction"));
  for (double v : to_vector(c.array("even_visible"))) {
    stack.even_visible.push_back(static_cast<std::uint8_t>(v));
  }
  for (double v : to_vector(c.array("odd_visible"))) {
    stack.odd_visible.push_back(static_cast<std::uint8_t>(v));
  }
  const json& meta = c.meta;
  stack.interval_s = require_double(meta, "interval_s", "container.meta");
  stack.window_s = require_double(meta, "window_s", "container.meta");
  stack.q0_e = require_double(meta, "q0_e", "container.meta");
  stack.s1hz_e2_per_hz =
      require_double(meta, "s1hz_e2_per_hz", "container.meta");
  stack.gamma = require_double(meta, "gamma", "container.meta");
  stack.rate_even_to_odd_hz =
      require_double(meta, "rate_even_to_odd_hz", "container.meta");
  stack.rate_odd_to_even_hz =
      require_double(meta, "rate_odd_to_even_hz", "container.meta");
  stack.linewidth_ghz = require_double(meta, "linewidth_ghz", "container.meta");
  stack.noise_sigma = require_double(meta, "noise_sigma", "container.meta");
  stack.visibility_threshold =
      require_double(meta, "visibility_threshold", "container.meta");
  stack.seed = get_uint64(meta, "seed", "container.meta", 0);
  return stack;
}

void save_spectrogram(const std::string& path, const synth::Spectrogram& spec) {
  json meta;
  meta["linewidth_ghz"] = spec.linewidth_ghz;
  meta["noise_sigma"] = spec.noise_sigma;
  meta["seed"] = spec.seed;
  const Eigen::MatrixXd bias = column_from(spec.bias);
  const Eigen::MatrixXd freq = column_from(spec.freq_ghz);
  auto ref = [](const std::string& name, const Eigen::MatrixXd& m) {
    return ArrayRef{name, m.data(), static_cast<std::uint64_t>(m.rows()),
                    static_cast<std::uint64_t>(m.cols())};
  };
  save_container(path, "spectrogram", meta,
                 {ref("bias", bias), ref("freq_ghz", freq),
                  ref("amplitude", spec.amplitude)});
}

synth::Spectrogram load_spectrogram(const std::string& path) {
  const Container c = load_container(path, "spectrogram");
  synth::Spectrogram spec;
  spec.bias = to_vector(c.array("bias"));
  spec.freq_ghz = to_vector(c.array("freq_ghz"));
  spec.amplitude = c.array("amplitude");
  spec.linewidth_ghz = require_double(c.meta, "linewidth_ghz", "container.meta");
  spec.noise_sigma = require_double(c.meta, "noise_sigma", "container.meta");
  spec.seed = get_uint64(c.meta, "seed", "container.meta", 0);
  return spec;
}

}  // namespace fluxqp::io
