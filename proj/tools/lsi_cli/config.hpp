#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lsi/empirical.hpp"
#include "lsi/smoothing.hpp"
#include "lsi/transport.hpp"

namespace lsi::cli {

enum class OutputFormat { Json, Csv };

/// Which LSI constant `verify` tests against: a named bound from the bound
/// report, or an explicit value.
struct VerifySpec {
  std::string bound = "thm4";
  std::optional<double> c;
  std::vector<Family> families = {Family::Exponential, Family::Bump, Family::Step};
};

struct SweepConfig {
  std::vector<std::filesystem::path> measures;
  std::vector<double> deltas;
  Tolerances tol;
  SweepGrid transport_grid;
  int dimension = 1;
  std::filesystem::path out_dir = "out";
  OutputFormat format = OutputFormat::Json;
  unsigned jobs = 1;
  VerifySpec verify;
};

/// Bound names accepted by VerifySpec::bound.
const std::vector<std::string>& known_bounds();

/// Parses a config document. Relative measure paths resolve against base_dir.
/// Throws ConfigParseError with the offending key in the message.
SweepConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
SweepConfig load_config(const std::filesystem::path& path);

OutputFormat parse_format(const std::string& name);

}  // namespace lsi::cli
