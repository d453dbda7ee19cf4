// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "lsi/bounds.hpp"
#include "lsi/empirical.hpp"
#include "lsi/transport.hpp"

namespace fs = std::filesystem;
using namespace lsi;

namespace {

const fs::path kDataDir = LSI_DATA_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;
  int violations = 0;

  void require(bool ok) {
    if (!ok) {
      pass = false;
      ++violations;
    }
  }
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

bool rel_le(double lhs, double rhs, double rel) { return lhs <= rhs + rel * std::abs(rhs); }
bool rel_eq(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

struct Named {
  std::string name;
  Measure1D mu;
};

std::vector<Named> bundled() {
  std::vector<Named> out;
  for (const char* n : {"point_mass", "bernoulli", "asymmetric", "uniform", "mixed"}) {
    out.push_back({n, load_measure(kDataDir / "measures" / (std::string(n) + ".json"))});
  }
  return out;
}

// the three shapes of the lemma suite, support [-r, r]
std::vector<Named> lemma_measures(double r) {
  return {{"bernoulli", make_discrete({{-r, 0.5}, {r, 0.5}})},
          {"asymmetric", make_discrete({{-r, 0.25}, {r, 0.75}})},
          {"uniform", make_uniform(-r, r)}};
}

const std::vector<Family> kAllFamilies = {Family::Exponential, Family::Bump, Family::Step};

Outcome gaussian_fixed_point() {
  Outcome o;
  const auto mu = make_discrete({{0.0, 1.0}});
  const TransportMap tm(mu, GaussianParams(1.0));
  double worst = 0.0;
  for (const auto& s : tm.sweep()) worst = std::max(worst, std::abs(s.value - s.x));
  o.require(worst <= 1e-6);
  const auto lip = tm.lipschitz_estimate();
  o.require(std::abs(lip.value - 1.0) <= 1e-6);
  const double push = bound_pushforward(2.0, lip.value);
  o.require(std::abs(push - 2.0) <= 1e-5);
  const SmoothedMeasure sm(mu, GaussianParams(1.0));
  double ratio_dev = 0.0;
  for (const auto& f : family_members(Family::Exponential, sm)) {
    ratio_dev = std::max(ratio_dev, std::abs(evaluate(f, sm).ratio - 2.0));
  }
  const std::vector<Family> expo{Family::Exponential};
  const double best = ratio_lower_bound(expo, sm).c_lower;
  ratio_dev = std::max(ratio_dev, std::abs(best - 2.0));
  o.require(ratio_dev <= 1e-3);
  o.detail = "max|T-x|=" + fmt("%.2e", worst) + " L=" + fmt("%.10f", lip.value) +
             " pushforward=" + fmt("%.8f", push) + " max|ratio-2|=" + fmt("%.2e", ratio_dev);
  return o;
}

Outcome lemma_suite() {
  Outcome o;
  std::size_t checks = 0;
  constexpr double kSlack = 1e-8;
  for (double r : {0.5, 1.0, 2.0}) {
    for (const auto& [name, mu] : lemma_measures(r)) {
      const TransportMap tm(mu, GaussianParams(1.0));
      const SmoothedMeasure& sm = tm.normalized();
      for (int i = 0; i < 200; ++i) {
        const double x0 = 2.0 * r + 8.0 * i / 199.0;
        for (double x : {x0, -x0}) {
          const double k = sm.shift(x);
          const double lq = sm.log_density(x + k);
          const double lp = log_gaussian_density(x, 1.0);
          // q(x + K) between exp(-2R^2-2R-1/8) p and e^{-R} p, compared in logs
          o.require(lq <= lp - r + kSlack);
          o.require(lq >= lp - 2.0 * r * r - 2.0 * r - 0.125 - kSlack);
          o.require(rel_le(sm.shift_derivative(x), r, kSlack));
          const double t = tm(x);
          o.require(rel_le(x - r, t, kSlack));
          o.require(rel_le(t, x + r, kSlack));
          if (x > 0.0) {
            o.require(rel_le(t, x + k, kSlack));
          } else {
            o.require(rel_le(x + k, t, kSlack));
          }
          checks += 7;
        }
      }
    }
  }
  o.detail = std::to_string(checks) + " checks, " + std::to_string(o.violations) + " violations";
  return o;
}

Outcome case_bounds() {
  Outcome o;
  std::size_t checks = 0;
  double worst_outer = -1e300, worst_middle = -1e300;
  for (double r : {0.5, 1.0, 2.0}) {
    for (const auto& [name, mu] : lemma_measures(r)) {
      const TransportMap tm(mu, GaussianParams(1.0));
      const double outer = outer_case_bound(r).log;
      const double middle = middle_case_bound(r).log;
      for (double x : tm.sweep_points()) {
        const double ld = tm.log_derivative(x);
        if (std::abs(x) >= 2.0 * r) {
          o.require(ld <= outer);
          worst_outer = std::max(worst_outer, ld - outer);
          ++checks;
        }
        if (std::abs(x) <= 2.0 * r) {
          o.require(ld <= middle);
          worst_middle = std::max(worst_middle, ld - middle);
          ++checks;
        }
      }
    }
  }
  o.detail = std::to_string(checks) + " checks, " + std::to_string(o.violations) +
             " violations; max log-gap outer " + fmt("%.3f", worst_outer) + ", middle " +
             fmt("%.3f", worst_middle);
  return o;
}

Outcome thm4_formula() {
  Outcome o;
  const auto b = bound_thm4(1.0, 1.0);
  const double err = std::abs(b.value.log - (24.0 + std::log(2.0)));
  o.require(err <= 1e-12);
  int identical = 0;
  for (int i = 0; i < 10; ++i) {
    const double r = 0.05 * std::pow(2.0, i);
    for (int j = 0; j < 10; ++j) {
      const double delta = 16.0 * r * r * std::pow(0.5, j);
      const bool same = bound_thm4(r, delta).value.log == bound_thm4_simplified(r, delta).log;
      o.require(same);
      identical += same;
    }
  }
  o.detail = "|log c - (24 + log 2)|=" + fmt("%.1e", err) + ", " + std::to_string(identical) +
             "/100 grid points identical";
  return o;
}

struct CaseData {
  std::string name;
  double delta;
  BoundReport report;
  std::vector<TestFunction> members;
  std::vector<Functionals> values;
  RatioBound ratio;
};

std::vector<CaseData> bundled_cases() {
  std::vector<CaseData> out;
  for (const auto& [name, mu] : bundled()) {
    for (double delta : {0.25, 1.0, 4.0}) {
      CaseData c{name, delta, make_bound_report(mu, GaussianParams(delta)), {}, {}, {}};
      const SmoothedMeasure sm(mu, GaussianParams(delta));
      c.members = all_family_members(kAllFamilies, sm);
      for (const auto& f : c.members) c.values.push_back(evaluate(f, sm));
      c.ratio = ratio_lower_bound(c.members, c.values, sm);
      c.members.push_back(c.ratio.argmax);
      c.values.push_back(evaluate(c.ratio.argmax, sm));
      out.push_back(std::move(c));
    }
  }
  return out;
}

Outcome sandwich(const std::vector<CaseData>& cases) {
  Outcome o;
  std::string failures;
  for (const auto& c : cases) {
    const double bg_lower = c.report.bg.lower;
    const double push = c.report.pushforward.value();
    const double thm4 = c.report.thm4.value.value();
    const double rl = c.ratio.c_lower;
    const bool ok = rel_le(bg_lower, push, 1e-6) && rel_le(bg_lower, thm4, 1e-6) &&
                    rel_le(rl, c.report.bg.upper, 1e-6) && rel_le(rl, push, 1e-6);
    o.require(ok);
    if (!ok) failures += " " + c.name + "@" + fmt("%g", c.delta);
  }
  o.detail = std::to_string(cases.size()) + " cases" +
             (failures.empty() ? "" : ", failing:" + failures);
  return o;
}

Outcome scaling_law() {
  Outcome o;
  double worst = 0.0;
  for (const auto& [name, mu] : bundled()) {
    for (double delta : {0.25, 4.0}) {
      const double lambda = 1.0 / std::sqrt(delta);
      const TransportMap direct(mu, GaussianParams(delta), {}, TransportFrame::Direct);
      const TransportMap unit(pushforward_affine(mu, lambda, 0.0), GaussianParams(1.0));
      const double ld = direct.lipschitz_estimate().value;
      const double lu = unit.lipschitz_estimate().value;
      const double pd = bound_pushforward(2.0 * delta, ld);
      const double pu = bound_pushforward(2.0, lu);
      o.require(rel_eq(ld, lu, 1e-6));
      o.require(rel_eq(pd, delta * pu, 1e-6));
      worst = std::max({worst, std::abs(ld - lu) / lu, std::abs(pd - delta * pu) / pd});
    }
  }
  o.detail = "max relative deviation " + fmt("%.2e", worst);
  return o;
}

Outcome verify_bounds(const std::vector<CaseData>& cases) {
  Outcome o;
  int strict_failures = 0;
  std::string missing;
  for (const auto& c : cases) {
    const auto at_thm4 = verify_lsi(c.report.thm4.value.value(), c.members, c.values);
    o.require(at_thm4.all_pass);
    const auto below = verify_lsi(0.99 * c.ratio.c_lower, c.members, c.values);
    o.require(!below.all_pass);
    if (!below.all_pass) ++strict_failures;
    else missing += " " + c.name + "@" + fmt("%g", c.delta);
  }
  o.detail = "thm4 passes on " + std::to_string(cases.size()) + " cases; 0.99*ratio fails on " +
             std::to_string(strict_failures) + (missing.empty() ? "" : ", not on:" + missing);
  return o;
}

int run_quiet(const std::string& cmd) {
  const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "lsi_acceptance_determinism";
  fs::remove_all(root);
  const fs::path config = kDataDir / "sweep.json";
  for (const char* run : {"a", "b"}) {
    const int code = run_quiet(std::string("\"") + LSI_TOOLKIT_PATH + "\" sweep --config \"" +
                               config.string() + "\" --out \"" + (root / run).string() + "\"");
    o.require(code == 0);
  }
  std::size_t files = 0, differing = 0;
  for (const auto& entry : fs::recursive_directory_iterator(root / "a")) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), root / "a");
    ++files;
    if (!fs::exists(root / "b" / rel) || slurp(entry.path()) != slurp(root / "b" / rel)) {
      ++differing;
    }
  }
  std::size_t files_b = 0;
  for (const auto& entry : fs::recursive_directory_iterator(root / "b")) {
    files_b += entry.is_regular_file();
  }
  o.require(files > 0 && differing == 0 && files == files_b);
  o.detail = std::to_string(files) + " files compared, " + std::to_string(differing) + " differ";
  fs::remove_all(root);
  return o;
}

}  // namespace

int main() {
  bool all = true;
  auto report = [&](int id, const char* title, const std::function<Outcome()>& body) {
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    all = all && o.pass;
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str());
    std::fflush(stdout);
  };

  report(1, "gaussian fixed point", gaussian_fixed_point);
  report(2, "tail lemmas", lemma_suite);
  report(3, "case bounds on T'", case_bounds);
  report(4, "thm4 closed form", thm4_formula);
  std::vector<CaseData> cases;
  std::string case_error;
  try {
    cases = bundled_cases();
  } catch (const std::exception& e) {
    case_error = e.what();
  }
  auto with_cases = [&](auto fn) {
    return [&, fn]() -> Outcome {
      if (!case_error.empty()) throw std::runtime_error(case_error);
      return fn(cases);
    };
  };
  report(5, "cross-method sandwich", with_cases(sandwich));
  report(6, "scaling law", scaling_law);
  report(7, "verify_lsi", with_cases(verify_bounds));
  report(8, "deterministic sweep", determinism);
  return all ? 0 : 1;
}
