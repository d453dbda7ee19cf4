#include "lsi_cli/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "lsi/error.hpp"

namespace lsi::cli {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string delta_tag(double delta) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", delta);
  return buf;
}

nlohmann::json checks_json(const std::vector<Check>& checks) {
  auto out = nlohmann::json::array();
  for (const auto& c : checks) {
    out.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"pass", c.pass}});
  }
  return out;
}

bool all_pass(const std::vector<Check>& checks) {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

nlohmann::json function_json(const TestFunction& f) {
  return {{"family", std::string(to_string(f.family))}, {"params", f.params}};
}

}  // namespace

Check make_log_check(std::string name, double log_lhs, double log_rhs, double rel_slack) {
  const bool pass = log_lhs <= log_rhs + std::log1p(rel_slack);
  return {std::move(name), log_lhs, log_rhs, pass};
}

std::vector<Check> bound_checks(const BoundReport& r) {
  std::vector<Check> out;
  const double bg_lower = std::log(r.bg.lower);
  out.push_back(make_log_check("lipschitz_estimate<=theoretical", r.lipschitz.log_value,
                               r.lipschitz_theoretical.log));
  out.push_back(make_log_check("bg_lower<=bg_upper", bg_lower, std::log(r.bg.upper)));
  out.push_back(make_log_check("bg_lower<=thm4", bg_lower, r.thm4.value.log));
  out.push_back(make_log_check("bg_lower<=pushforward", bg_lower, r.pushforward.log));
  if (r.delta <= 16.0 * r.radius * r.radius) {
    const double simplified = bound_thm4_simplified(r.radius, r.delta).log;
    out.push_back({"thm4==simplified", r.thm4.value.log, simplified,
                   r.thm4.value.log == simplified});
  }
  return out;
}

nlohmann::json log_value_json(LogValue v) {
  nlohmann::json out;
  out["log_value"] = std::isfinite(v.log) ? nlohmann::json(v.log) : nlohmann::json(nullptr);
  if (v.log == -std::numeric_limits<double>::infinity()) {
    out["value"] = 0.0;
  } else if (auto lin = v.linear()) {
    out["value"] = *lin;
  } else {
    out["value"] = nullptr;
  }
  return out;
}

nlohmann::json bound_report_json(const BoundReport& r, const std::string& measure,
                                 const std::vector<Check>& checks) {
  nlohmann::json j;
  j["measure"] = measure;
  j["delta"] = r.delta;
  j["R"] = r.radius;
  j["center"] = r.center;
  j["dimension"] = r.dimension;
  j["thm1_bound"] = log_value_json(r.thm1.general);
  j["thm1_small_delta_bound"] =
      r.thm1.small_delta ? log_value_json(*r.thm1.small_delta) : nlohmann::json(nullptr);
  j["thm2_bound"] = r.thm2 ? log_value_json(*r.thm2) : nlohmann::json(nullptr);
  j["thm4_bound"] = log_value_json(r.thm4.value);
  j["thm4_branch"] = r.thm4.active == Thm4Branch::Middle ? "middle" : "outer";
  j["lipschitz_estimate"] = log_value_json(LogValue::from_log(r.lipschitz.log_value));
  j["lipschitz_argmax"] = r.lipschitz.argmax;
  j["lipschitz_theoretical"] = log_value_json(r.lipschitz_theoretical);
  j["lipschitz_certified_tail"] = log_value_json(r.lipschitz.certified_tail);
  j["pushforward_bound"] = log_value_json(r.pushforward);
  j["bg_median"] = r.bg.median;
  j["bg_D0"] = log_value_json(LogValue::from_linear(r.bg.d0));
  j["bg_D1"] = log_value_json(LogValue::from_linear(r.bg.d1));
  j["bg_lower"] = log_value_json(LogValue::from_linear(r.bg.lower));
  j["bg_upper"] = log_value_json(LogValue::from_linear(r.bg.upper));
  j["quadrature"] = {{"sweep_points", r.lipschitz.grid_points},
                     {"sweep_step", r.lipschitz.grid_step}};
  j["checks"] = checks_json(checks);
  j["pass"] = all_pass(checks);
  return j;
}

std::string transport_csv(const std::vector<TransportSample>& samples) {
  std::string out = "x,T,T_prime,envelope_lo,envelope_hi\n";
  for (const auto& s : samples) {
    out += fmt_double(s.x) + ',' + fmt_double(s.value) + ',' + fmt_double(s.derivative) + ',' +
           fmt_double(s.envelope_lo) + ',' + fmt_double(s.envelope_hi) + '\n';
  }
  return out;
}

std::vector<Check> transport_checks(const std::vector<TransportSample>& samples,
                                    double root_tol) {
  double worst_envelope = 0.0;
  double worst_monotone = 0.0;
  double min_derivative = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const double slack = 10.0 * root_tol * (1.0 + std::abs(s.x));
    worst_envelope = std::max({worst_envelope, s.envelope_lo - s.value - slack,
                               s.value - s.envelope_hi - slack});
    if (i > 0) worst_monotone = std::max(worst_monotone, samples[i - 1].value - s.value);
    min_derivative = std::min(min_derivative, s.derivative);
  }
  return {{"envelope_violation<=0", worst_envelope, 0.0, worst_envelope <= 0.0},
          {"monotone_decrease<=0", worst_monotone, 0.0, worst_monotone <= 0.0},
          {"-min_T_prime<0", -min_derivative, 0.0, min_derivative > 0.0}};
}

std::optional<LogValue> select_bound(const std::string& name, double radius, double delta,
                                     int dimension, const BoundReport* measured) {
  if (name == "thm1") return bound_thm1(radius, delta).general;
  if (name == "thm1_small") return bound_thm1(radius, delta).small_delta;
  if (name == "thm2") {
    if (!(radius > 0.0) || delta > radius * radius) return std::nullopt;
    return bound_thm2(radius, delta, dimension);
  }
  if (name == "thm4") return bound_thm4(radius, delta).value;
  if (name == "pushforward" || name == "bg_upper") {
    if (measured == nullptr) {
      throw Error(ErrorKind::DomainError, "bound '" + name + "' needs a measured report");
    }
    if (name == "pushforward") return measured->pushforward;
    return LogValue::from_linear(measured->bg.upper);
  }
  throw Error(ErrorKind::ConfigParseError, "unknown bound '" + name + "'");
}

namespace {

struct CaseOutput {
  nlohmann::json bounds;
  std::string transport;
  std::string transport_name;
  nlohmann::json verify;
  bool ok = true;
};

bool needs_report(unsigned stages, const SweepConfig& cfg) {
  if (stages & kBounds) return true;
  if (!(stages & kVerify) || cfg.verify.c) return false;
  return cfg.verify.bound == "pushforward" || cfg.verify.bound == "bg_upper";
}

nlohmann::json verify_case(const SweepConfig& cfg, const Measure1D& mu, const GaussianParams& gp,
                           const BoundReport* report, bool& ok) {
  nlohmann::json j;
  const double radius = mu.radius();
  std::optional<LogValue> c_log;
  std::string bound_name = cfg.verify.bound;
  if (cfg.verify.c) {
    bound_name = "value";
    c_log = LogValue::from_linear(*cfg.verify.c);
  } else {
    c_log = select_bound(cfg.verify.bound, radius, gp.delta(), cfg.dimension, report);
  }
  j["bound"] = bound_name;
  if (!c_log) {
    j["skipped"] = "bound hypothesis not satisfied for this (R, delta)";
    return j;
  }
  const SmoothedMeasure sm(mu, gp, cfg.tol);
  std::vector<TestFunction> members =
      all_family_members(std::span<const Family>(cfg.verify.families), sm);
  std::vector<Functionals> values;
  values.reserve(members.size() + 1);
  for (const auto& f : members) values.push_back(evaluate(f, sm));
  const RatioBound ratio = ratio_lower_bound(std::span<const TestFunction>(members),
                                             std::span<const Functionals>(values), sm);
  members.push_back(ratio.argmax);
  values.push_back(evaluate(ratio.argmax, sm));

  const double c = c_log->value();
  const VerifyReport vr = verify_lsi(c, members, values);
  j["c"] = log_value_json(*c_log);
  j["ratio_lower_bound"] = {{"value", ratio.c_lower}, {"argmax", function_json(ratio.argmax)}};
  j["all_pass"] = vr.all_pass;
  j["worst_relative_margin"] = vr.worst_relative_margin;
  j["worst_member"] = vr.worst_index;
  auto rows = nlohmann::json::array();
  for (const auto& m : vr.members) {
    auto row = function_json(m.function);
    row["entropy"] = m.values.entropy;
    row["energy"] = m.values.energy;
    row["ratio"] = std::isnan(m.values.ratio) ? nlohmann::json(nullptr) : nlohmann::json(m.values.ratio);
    row["margin"] = m.margin;
    row["pass"] = m.pass;
    rows.push_back(row);
  }
  j["members"] = rows;
  ok = ok && vr.all_pass;

  if (report != nullptr) {
    const double lr = std::log(ratio.c_lower);
    std::vector<Check> cross = {
        make_log_check("ratio_lower_bound<=bg_upper", lr, std::log(report->bg.upper)),
        make_log_check("ratio_lower_bound<=pushforward", lr, report->pushforward.log),
        make_log_check("ratio_lower_bound<=thm4", lr, report->thm4.value.log)};
    j["cross_checks"] = checks_json(cross);
    ok = ok && all_pass(cross);
  }
  return j;
}

CaseOutput run_case(const SweepConfig& cfg, const std::string& name, const Measure1D& mu,
                    double delta, unsigned stages) {
  CaseOutput out;
  const GaussianParams gp(delta);
  try {
    std::optional<BoundReport> report;
    if (needs_report(stages, cfg)) {
      report = make_bound_report(mu, gp, cfg.dimension, cfg.tol, cfg.transport_grid);
    }
    if (stages & kBounds) {
      const auto checks = bound_checks(*report);
      out.bounds = bound_report_json(*report, name, checks);
      out.ok = out.ok && all_pass(checks);
    }
    if (stages & kTransport) {
      const TransportMap tm(mu, gp, cfg.tol, TransportFrame::Normalized, cfg.transport_grid);
      const auto samples = tm.sweep();
      out.transport = transport_csv(samples);
      out.transport_name = name + "_delta_" + delta_tag(delta) + ".csv";
      out.ok = out.ok && all_pass(transport_checks(samples, cfg.tol.root_tol));
    }
    if (stages & kVerify) {
      out.verify = verify_case(cfg, mu, gp, report ? &*report : nullptr, out.ok);
      out.verify["measure"] = name;
      out.verify["delta"] = delta;
    }
  } catch (const Error& e) {
    // Numerical failures are recorded in the report and fail the run.
    out.ok = false;
    nlohmann::json err = {{"measure", name}, {"delta", delta}, {"error", e.what()}};
    if (stages & kBounds) out.bounds = err;
    if (stages & kVerify) out.verify = err;
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::ConfigParseError, "cannot write " + path.string());
  out << text;
}

std::string bounds_csv(const std::vector<CaseOutput>& cases) {
  static const std::vector<std::string> cols = {
      "thm1_bound",         "thm1_small_delta_bound", "thm2_bound", "thm4_bound",
      "lipschitz_estimate", "pushforward_bound",      "bg_D0",      "bg_D1",
      "bg_lower",           "bg_upper"};
  std::string out = "measure,delta,R,center";
  for (const auto& c : cols) out += "," + c + "_log," + c;
  out += ",pass\n";
  auto cell = [](const nlohmann::json& v) {
    return v.is_null() ? std::string() : fmt_double(v.get<double>());
  };
  for (const auto& cs : cases) {
    const auto& j = cs.bounds;
    if (j.contains("error")) {
      out += j["measure"].get<std::string>() + ',' + fmt_double(j["delta"].get<double>()) +
             ",,";
      for (std::size_t i = 0; i < cols.size(); ++i) out += ",,";
      out += ",false\n";
      continue;
    }
    out += j["measure"].get<std::string>() + ',' + fmt_double(j["delta"].get<double>()) + ',' +
           fmt_double(j["R"].get<double>()) + ',' + fmt_double(j["center"].get<double>());
    for (const auto& c : cols) {
      const auto& v = j[c];
      if (v.is_null()) {
        out += ",,";
      } else {
        out += ',' + cell(v["log_value"]) + ',' + cell(v["value"]);
      }
    }
    out += j["pass"].get<bool>() ? ",true\n" : ",false\n";
  }
  return out;
}

std::string verify_csv(const std::vector<CaseOutput>& cases) {
  std::string out = "measure,delta,bound,family,params,entropy,energy,ratio,margin,pass\n";
  auto num = [](const nlohmann::json& v) {
    return v.is_null() ? std::string() : fmt_double(v.get<double>());
  };
  for (const auto& cs : cases) {
    const auto& j = cs.verify;
    if (!j.contains("members")) continue;
    const std::string prefix = j["measure"].get<std::string>() + ',' +
                               fmt_double(j["delta"].get<double>()) + ',' +
                               j["bound"].get<std::string>() + ',';
    for (const auto& m : j["members"]) {
      std::string params;
      for (const auto& p : m["params"]) params += (params.empty() ? "" : ";") + num(p);
      out += prefix + m["family"].get<std::string>() + ',' + params + ',' + num(m["entropy"]) +
             ',' + num(m["energy"]) + ',' + num(m["ratio"]) + ',' + num(m["margin"]) + ',' +
             (m["pass"].get<bool>() ? "true" : "false") + '\n';
    }
  }
  return out;
}

}  // namespace

ExitCode run(const SweepConfig& cfg, unsigned stages) {
  struct Job {
    std::size_t measure;
    double delta;
  };
  std::vector<std::pair<std::string, Measure1D>> measures;
  for (const auto& path : cfg.measures) {
    measures.emplace_back(path.stem().string(), load_measure(path, cfg.tol.mass_tol));
  }
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < measures.size(); ++i) {
    for (double d : cfg.deltas) jobs.push_back({i, d});
  }

  std::vector<CaseOutput> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      const auto& [name, mu] = measures[jobs[k].measure];
      results[k] = run_case(cfg, name, mu, jobs[k].delta, stages);
    }
  };
  const unsigned n_threads = std::max(1u, std::min<unsigned>(cfg.jobs, jobs.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::filesystem::create_directories(cfg.out_dir);
  bool ok = true;
  for (const auto& r : results) ok = ok && r.ok;

  const bool json = cfg.format == OutputFormat::Json;
  if (stages & kBounds) {
    if (json) {
      std::string text;
      for (const auto& r : results) text += r.bounds.dump() + '\n';
      write_file(cfg.out_dir / "bounds.jsonl", text);
    } else {
      write_file(cfg.out_dir / "bounds.csv", bounds_csv(results));
    }
  }
  if (stages & kTransport) {
    std::filesystem::create_directories(cfg.out_dir / "transport");
    for (const auto& r : results) {
      if (!r.transport_name.empty()) write_file(cfg.out_dir / "transport" / r.transport_name, r.transport);
    }
  }
  if (stages & kVerify) {
    if (json) {
      std::string text;
      for (const auto& r : results) text += r.verify.dump() + '\n';
      write_file(cfg.out_dir / "verify.jsonl", text);
    } else {
      write_file(cfg.out_dir / "verify.csv", verify_csv(results));
    }
  }
  return ok ? ExitCode::Ok : ExitCode::InvariantFailure;
}

}  // namespace lsi::cli
