// Copyright (c) 2026 The fluxqp Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <cstdio>
#include <exception>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "fluxqp/errors.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string format;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* threads_opt = nullptr;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path,
                  "JSON config file (or a manifest from a previous run)");
  cmd->add_option("--out", flags.out_dir, "output directory");
  flags.seed_opt =
      cmd->add_option("--seed", flags.seed, "RNG seed (overrides config)");
  flags.threads_opt = cmd->add_option("--threads", flags.threads,
                                      "worker threads (overrides config)");
  cmd->add_option("--format", flags.format, "table format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flux qubit + resonator spectrum simulator and analysis toolkit"};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    void (*run)(const fluxqp::cli::AppContext&);
  };
  const Sub subs[] = {
      {"spectrum", "transition-frequency branches vs bias", fluxqp::cli::cmd_spectrum},
      {"chargesweep", "qubit gap and w20 vs island charge offset",
       fluxqp::cli::cmd_chargesweep},
      {"synth", "synthesize a resonance trace stack", fluxqp::cli::cmd_synth},
      {"extract", "peak/ridge extraction from a container file",
       fluxqp::cli::cmd_extract},
      {"invert", "split width -> folded charge offset", fluxqp::cli::cmd_invert},
      {"psd", "Welch spectrum + 1/f fit of a charge series", fluxqp::cli::cmd_psd},
      {"fit", "least-squares model fits (rabi | circuit)", fluxqp::cli::cmd_fit},
      {"pipeline", "synth -> extract -> invert -> psd in one run",
       fluxqp::cli::cmd_pipeline},
  };

  std::vector<std::pair<const Sub*, std::shared_ptr<CommonFlags>>> registered;
  for (const Sub& sub : subs) {
    CLI::App* cmd = app.add_subcommand(sub.name, sub.help);
    auto flags = std::make_shared<CommonFlags>();
    add_common_flags(cmd, *flags);
    registered.emplace_back(&sub, flags);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (std::size_t i = 0; i < registered.size(); ++i) {
      CLI::App* cmd = app.get_subcommands().front();
      if (cmd->get_name() != registered[i].first->name) continue;
      const CommonFlags& f = *registered[i].second;
      const fluxqp::cli::AppContext ctx = fluxqp::cli::make_context(
          f.config_path, f.out_dir, f.seed_opt->count() > 0, f.seed,
          f.threads_opt->count() > 0, f.threads, f.format);
      registered[i].first->run(ctx);
      return 0;
    }
    std::fprintf(stderr, "error: no subcommand selected\n");
    return 2;
  } catch (const fluxqp::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const fluxqp::ConvergenceError& e) {
    std::fprintf(stderr, "convergence error: %s\n", e.what());
    return 3;
  } catch (const fluxqp::IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return 4;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::out_of_range& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
}
