#include "lsi_cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lsi/error.hpp"
#include "lsi/numerics.hpp"

namespace lsi::cli {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorKind::ConfigParseError, msg); }

double positive(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) fail("'" + key + "' must be a number");
  const double x = v.get<double>();
  if (!(x > 0.0) || !std::isfinite(x)) fail("'" + key + "' must be positive and finite");
  return x;
}

std::vector<double> parse_deltas(const nlohmann::json& v) {
  std::vector<double> out;
  if (v.is_array()) {
    for (const auto& d : v) out.push_back(positive(d, "delta[]"));
  } else if (v.is_object() && v.contains("logspace")) {
    const auto& ls = v.at("logspace");
    if (!ls.is_object()) fail("'delta.logspace' must be an object");
    const double lo = positive(ls.value("min", nlohmann::json()), "delta.logspace.min");
    const double hi = positive(ls.value("max", nlohmann::json()), "delta.logspace.max");
    const auto count = ls.value("count", nlohmann::json());
    if (!count.is_number_integer() || count.get<long>() < 1) {
      fail("'delta.logspace.count' must be a positive integer");
    }
    if (hi < lo) fail("'delta.logspace' needs min <= max");
    out = numerics::logspace(lo, hi, static_cast<std::size_t>(count.get<long>()));
  } else {
    fail("'delta' must be a list of variances or {\"logspace\": {min, max, count}}");
  }
  if (out.empty()) fail("'delta' grid is empty");
  return out;
}

}  // namespace

const std::vector<std::string>& known_bounds() {
  static const std::vector<std::string> names = {"thm1",        "thm1_small", "thm2", "thm4",
                                                 "pushforward", "bg_upper"};
  return names;
}

OutputFormat parse_format(const std::string& name) {
  if (name == "json") return OutputFormat::Json;
  if (name == "csv") return OutputFormat::Csv;
  fail("unknown output format '" + name + "' (expected json or csv)");
}

SweepConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) fail("config must be a JSON object");
  SweepConfig cfg;

  if (!doc.contains("measures") || !doc.at("measures").is_array()) {
    fail("'measures' must be a list of measure file paths");
  }
  for (const auto& m : doc.at("measures")) {
    if (!m.is_string()) fail("'measures' entries must be strings");
    std::filesystem::path p = m.get<std::string>();
    cfg.measures.push_back(p.is_absolute() ? p : base_dir / p);
  }
  if (cfg.measures.empty()) fail("'measures' is empty");

  if (!doc.contains("delta")) fail("missing 'delta'");
  cfg.deltas = parse_deltas(doc.at("delta"));

  if (doc.contains("tolerances")) {
    const auto& t = doc.at("tolerances");
    if (!t.is_object()) fail("'tolerances' must be an object");
    for (const auto& [key, value] : t.items()) {
      const double v = positive(value, "tolerances." + key);
      if (key == "integ_tol") cfg.tol.integ_tol = v;
      else if (key == "cdf_tol") cfg.tol.cdf_tol = v;
      else if (key == "root_tol") cfg.tol.root_tol = v;
      else if (key == "mass_tol") cfg.tol.mass_tol = v;
      else if (key == "tail_sigmas") cfg.tol.tail_sigmas = v;
      else fail("unknown tolerance '" + key + "'");
    }
  }

  if (doc.contains("transport")) {
    const auto& t = doc.at("transport");
    if (!t.is_object()) fail("'transport' must be an object");
    if (t.contains("points")) {
      if (!t.at("points").is_number_integer() || t.at("points").get<long>() < 2) {
        fail("'transport.points' must be an integer >= 2");
      }
      cfg.transport_grid.points = static_cast<std::size_t>(t.at("points").get<long>());
    }
    if (t.contains("margin")) cfg.transport_grid.margin = positive(t.at("margin"), "transport.margin");
  }

  if (doc.contains("dimension")) {
    const auto& n = doc.at("dimension");
    if (!n.is_number_integer() || n.get<long>() < 1) fail("'dimension' must be an integer >= 1");
    cfg.dimension = static_cast<int>(n.get<long>());
  }

  if (doc.contains("out")) {
    if (!doc.at("out").is_string()) fail("'out' must be a path string");
    std::filesystem::path p = doc.at("out").get<std::string>();
    cfg.out_dir = p.is_absolute() ? p : base_dir / p;
  }
  if (doc.contains("format")) {
    if (!doc.at("format").is_string()) fail("'format' must be a string");
    cfg.format = parse_format(doc.at("format").get<std::string>());
  }
  if (doc.contains("jobs")) {
    if (!doc.at("jobs").is_number_integer() || doc.at("jobs").get<long>() < 1) {
      fail("'jobs' must be a positive integer");
    }
    cfg.jobs = static_cast<unsigned>(doc.at("jobs").get<long>());
  }

  if (doc.contains("verify")) {
    const auto& v = doc.at("verify");
    if (!v.is_object()) fail("'verify' must be an object");
    if (v.contains("bound")) {
      if (!v.at("bound").is_string()) fail("'verify.bound' must be a string");
      cfg.verify.bound = v.at("bound").get<std::string>();
    }
    if (v.contains("c") && !v.at("c").is_null()) {
      if (!v.at("c").is_number() || v.at("c").get<double>() < 0.0) {
        fail("'verify.c' must be a nonnegative number");
      }
      cfg.verify.c = v.at("c").get<double>();
    }
    if (v.contains("families")) {
      if (!v.at("families").is_array()) fail("'verify.families' must be a list");
      cfg.verify.families.clear();
      for (const auto& f : v.at("families")) {
        if (!f.is_string()) fail("'verify.families' entries must be strings");
        cfg.verify.families.push_back(family_from_string(f.get<std::string>()));
      }
      if (cfg.verify.families.empty()) fail("'verify.families' is empty");
    }
  }
  const auto& names = known_bounds();
  if (std::find(names.begin(), names.end(), cfg.verify.bound) == names.end()) {
    fail("unknown bound '" + cfg.verify.bound + "'");
  }
  return cfg;
}

SweepConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(path.string() + ": cannot open config");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
    fail(path.string() + ":" + std::to_string(line) + ": " + e.what());
  }
  return parse_config(doc, path.parent_path());
}

}  // namespace lsi::cli
