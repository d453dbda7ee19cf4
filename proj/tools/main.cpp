// lsi-toolkit: bounds, transport tables and LSI verification for Gaussian
// convolutions of compactly supported measures on the line.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lsi/error.hpp"
#include "lsi_cli/commands.hpp"
#include "lsi_cli/config.hpp"

namespace {

struct Overrides {
  std::string config;
  std::string out;
  std::string format;
  unsigned jobs = 0;
  std::string bound;
  std::optional<double> c;
  std::vector<std::string> families;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "Sweep config (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "Output directory (overrides config)");
  cmd->add_option("--format", o.format, "json or csv (overrides config)");
  cmd->add_option("--jobs", o.jobs, "Worker threads over (measure, delta) pairs");
}

void add_verify_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--bound", o.bound,
                  "Bound to verify: thm1, thm1_small, thm2, thm4, pushforward, bg_upper");
  cmd->add_option("--c", o.c, "Explicit LSI constant (overrides --bound)");
  cmd->add_option("--families", o.families, "Test-function families: exponential bump step");
}

lsi::cli::SweepConfig resolve(const Overrides& o) {
  auto cfg = lsi::cli::load_config(o.config);
  if (!o.out.empty()) cfg.out_dir = o.out;
  if (!o.format.empty()) cfg.format = lsi::cli::parse_format(o.format);
  if (o.jobs > 0) cfg.jobs = o.jobs;
  if (!o.bound.empty()) {
    const auto& names = lsi::cli::known_bounds();
    if (std::find(names.begin(), names.end(), o.bound) == names.end()) {
      throw lsi::Error(lsi::ErrorKind::ConfigParseError, "unknown bound '" + o.bound + "'");
    }
    cfg.verify.bound = o.bound;
  }
  if (o.c) {
    if (!(*o.c >= 0.0)) throw lsi::Error(lsi::ErrorKind::ConfigParseError, "--c must be >= 0");
    cfg.verify.c = o.c;
  }
  if (!o.families.empty()) {
    cfg.verify.families.clear();
    for (const auto& f : o.families) cfg.verify.families.push_back(lsi::family_from_string(f));
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Log-Sobolev constants of Gaussian convolutions on the real line"};
  app.require_subcommand(1);
  Overrides o;
  auto* bounds = app.add_subcommand("bounds", "Closed-form, transport and Bobkov-Goetze bounds");
  auto* transport = app.add_subcommand("transport", "CSV table of the monotone transport map");
  auto* verify = app.add_subcommand("verify", "Check Ent <= c Energy over test-function families");
  auto* sweep = app.add_subcommand("sweep", "bounds + transport + verify with cross-checks");
  for (auto* cmd : {bounds, transport, verify, sweep}) add_common(cmd, o);
  add_verify_flags(verify, o);
  add_verify_flags(sweep, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(lsi::cli::ExitCode::InputError);
  }

  unsigned stages = lsi::cli::kSweep;
  if (bounds->parsed()) stages = lsi::cli::kBounds;
  if (transport->parsed()) stages = lsi::cli::kTransport;
  if (verify->parsed()) stages = lsi::cli::kVerify;

  try {
    const auto cfg = resolve(o);
    const auto code = lsi::cli::run(cfg, stages);
    if (code != lsi::cli::ExitCode::Ok) {
      std::cerr << "lsi-toolkit: at least one invariant check failed; see reports in "
                << cfg.out_dir.string() << "\n";
    }
    return static_cast<int>(code);
  } catch (const lsi::Error& e) {
    std::cerr << "lsi-toolkit: " << e.what() << "\n";
    return static_cast<int>(lsi::cli::ExitCode::InputError);
  } catch (const std::exception& e) {
    std::cerr << "lsi-toolkit: " << e.what() << "\n";
    return static_cast<int>(lsi::cli::ExitCode::InputError);
  }
}
