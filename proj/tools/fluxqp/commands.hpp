// Copyright (c) 2026 The fluxqp Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef FLUXQP_TOOLS_COMMANDS_HPP
#define FLUXQP_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <string>

#include "fluxqp/io.hpp"

namespace fluxqp::cli {

struct AppContext {
  io::json config;       // validated top-level config (defaults applied later)
  std::string out_dir;
  std::uint64_t seed = 12345;
  int threads = 1;
  std::string format = "csv";  // csv | json table output
};

// Builds the context from the parsed flags: loads and validates the config
// file (a manifest is unwrapped), applies --seed/--threads/--format
// overrides, and creates the output directory.
AppContext make_context(const std::string& config_path,
                        const std::string& out_dir, bool seed_given,
                        std::uint64_t seed, bool threads_given, int threads,
                        const std::string& format);

void cmd_spectrum(const AppContext& ctx);
void cmd_chargesweep(const AppContext& ctx);
void cmd_synth(const AppContext& ctx);
void cmd_extract(const AppContext& ctx);
void cmd_invert(const AppContext& ctx);
void cmd_psd(const AppContext& ctx);
void cmd_fit(const AppContext& ctx);
void cmd_pipeline(const AppContext& ctx);

}  // namespace fluxqp::cli

#endif  // FLUXQP_TOOLS_COMMANDS_HPP
