#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "lsi/bounds.hpp"
#include "lsi/empirical.hpp"
#include "lsi_cli/config.hpp"

namespace lsi::cli {

enum class ExitCode : int { Ok = 0, InvariantFailure = 1, InputError = 2 };

/// One embedded invariant lhs <= rhs. Bound checks compare logarithms.
struct Check {
  std::string name;
  double lhs;
  double rhs;
  bool pass;
};

/// exp(log_lhs) <= exp(log_rhs) (1 + rel_slack).
Check make_log_check(std::string name, double log_lhs, double log_rhs, double rel_slack = 1e-6);

std::vector<Check> bound_checks(const BoundReport& report);

nlohmann::json log_value_json(LogValue v);
nlohmann::json bound_report_json(const BoundReport& report, const std::string& measure,
                                 const std::vector<Check>& checks);

/// Header plus one row per sweep point: x, T(x), T_prime(x), envelope_lo, envelope_hi.
std::string transport_csv(const std::vector<TransportSample>& samples);

/// Every sweep row respects the envelope, T increases and T' > 0.
std::vector<Check> transport_checks(const std::vector<TransportSample>& samples, double root_tol);

/// The named bound for (R, delta); nullopt when its hypothesis fails.
/// `measured` supplies pushforward and bg_upper and may be null for the
/// closed-form bounds.
std::optional<LogValue> select_bound(const std::string& name, double radius, double delta,
                                     int dimension, const BoundReport* measured);

enum Command : unsigned { kBounds = 1u, kTransport = 2u, kVerify = 4u, kSweep = 7u };

/// Runs the selected stages over every (measure, delta) pair, writes the
/// report files under cfg.out_dir and returns the process exit code.
ExitCode run(const SweepConfig& cfg, unsigned stages);

}  // namespace lsi::cli
