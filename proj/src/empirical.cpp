#include "lsi/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "lsi/error.hpp"
#include "lsi/numerics.hpp"

namespace lsi {

using numerics::kNegInf;

std::string_view to_string(Family family) {
  switch (family) {
    case Family::Exponential: return "exponential";
    case Family::Bump: return "bump";
    case Family::Step: return "step";
  }
  return "unknown";
}

Family family_from_string(std::string_view name) {
  if (name == "exponential") return Family::Exponential;
  if (name == "bump") return Family::Bump;
  if (name == "step") return Family::Step;
  throw Error(ErrorKind::ConfigParseError, "unknown test-function family '" + std::string(name) +
                                               "' (expected exponential, bump or step)");
}

namespace {

// log(1 + tanh z) = log 2 - log(1 + exp(-2z)), arranged to avoid overflow.
double log_one_plus_tanh(double z) {
  if (z >= 0.0) return std::log(2.0) - std::log1p(std::exp(-2.0 * z));
  return std::log(2.0) + 2.0 * z - std::log1p(std::exp(2.0 * z));
}

// log sech^2 z.
double log_sech2(double z) {
  const double a = std::abs(z);
  return 2.0 * (std::log(2.0) - a - std::log1p(std::exp(-2.0 * a)));
}

// r log r - r + 1 with d = r - 1, accurate near r = 1.
double entropy_kernel(double d) {
  if (d <= -1.0) return 1.0;
  if (std::abs(d) < 1e-2) {
    double term = d;
    double sum = 0.0;
    for (int k = 2; k <= 9; ++k) {
      term *= -d;
      sum += -term / (k * (k - 1.0));
    }
    return sum;
  }
  return (1.0 + d) * std::log1p(d) - d;
}

}  // namespace

double TestFunction::log_f2(double x) const {
  const double la = 2.0 * std::log(amplitude);
  switch (family) {
    case Family::Exponential: return la + params[0] * x;
    case Family::Bump: {
      const double z = (x - params[0]) / params[1];
      return la - z * z;
    }
    case Family::Step: return la + 2.0 * log_one_plus_tanh((x - params[0]) / params[1]);
  }
  return kNegInf;
}

double TestFunction::log_slope2(double x) const {
  const double la = 2.0 * std::log(amplitude);
  switch (family) {
    case Family::Exponential:
      if (params[0] == 0.0) return kNegInf;
      return la + 2.0 * std::log(0.5 * std::abs(params[0])) + params[0] * x;
    case Family::Bump: {
      const double s = params[1];
      const double z = (x - params[0]) / s;
      if (z == 0.0) return kNegInf;
      return la + 2.0 * std::log(std::abs(z) / s) - z * z;
    }
    case Family::Step:
      return la - 2.0 * std::log(params[1]) + 2.0 * log_sech2((x - params[0]) / params[1]);
  }
  return kNegInf;
}

double TestFunction::value(double x) const { return std::exp(0.5 * log_f2(x)); }
double TestFunction::slope(double x) const { return std::exp(0.5 * log_slope2(x)); }

Interval TestFunction::window(const SmoothedMeasure& sm) const {
  const Interval base = sm.window();
  if (family == Family::Exponential) {
    // exp(lambda x) q(x) is centered near lambda * delta.
    const double c = params[0] * sm.delta();
    return {base.lo + c, base.hi + c};
  }
  return base;
}

Functionals evaluate(const TestFunction& f, const SmoothedMeasure& sm) {
  const Interval win = f.window(sm);
  const double a = win.lo;
  const double b = win.hi;
  const double tol = sm.tolerances().integ_tol;

  // Coarse composite Simpson on a fixed grid supplies the scale M and the
  // magnitudes that set the adaptive tolerances.
  constexpr std::size_t kCoarse = 256;
  const auto xs = numerics::linspace(a, b, kCoarse + 1);
  std::vector<double> lf2(xs.size());
  std::vector<double> ls2(xs.size());
  std::vector<double> lq(xs.size());
  double scale = kNegInf;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    lf2[i] = f.log_f2(xs[i]);
    ls2[i] = f.log_slope2(xs[i]);
    lq[i] = sm.log_density(xs[i]);
    scale = std::max(scale, lf2[i]);
  }
  if (f.family == Family::Bump && f.params[0] > a && f.params[0] < b) {
    scale = std::max(scale, f.log_f2(f.params[0]));
  }
  const double h = (b - a) / kCoarse;
  auto coarse = [&](auto&& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double w = (i == 0 || i == kCoarse) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      s += w * g(i);
    }
    return s * h / 3.0;
  };
  const double z_coarse = coarse([&](std::size_t i) { return std::exp(lf2[i] - scale + lq[i]); });
  const double e_coarse = coarse([&](std::size_t i) { return std::exp(ls2[i] - scale + lq[i]); });
  if (!(z_coarse > 0.0) || !std::isfinite(z_coarse)) {
    throw Error(ErrorKind::NonintegrableTestFunction,
                "integral of f^2 is not positive and finite on the window");
  }

  auto mass_and_energy = [&](double x) {
    const double q = sm.log_density(x);
    return numerics::Vec<2>{std::exp(f.log_f2(x) - scale + q), std::exp(f.log_slope2(x) - scale + q)};
  };
  const auto me = numerics::adaptive_simpson<2>(
      mass_and_energy, a, b, {tol * z_coarse, tol * std::max(e_coarse, 1e-300)}, 32, 40);
  const double z = me[0];
  const double log_z = std::log(z);

  auto entropy_integrand = [&](double x) {
    const double d = std::expm1(f.log_f2(x) - scale - log_z);
    return numerics::Vec<1>{z * entropy_kernel(d) * sm.density(x)};
  };
  const double ent_coarse = coarse([&](std::size_t i) {
    return z * entropy_kernel(std::expm1(lf2[i] - scale - log_z)) * std::exp(lq[i]);
  });
  const double ent_tol = tol * std::max(ent_coarse, tol * z);
  // Where f^2 is negligible the integrand reduces to z q, whose mass outside
  // the window is known exactly; the shifted exponential window needs it.
  const double outside = std::exp(sm.log_cdf(a)) + std::exp(sm.log_sf(b));
  const double ent =
      numerics::adaptive_simpson<1>(entropy_integrand, a, b, {ent_tol}, 32, 40)[0] + z * outside;

  // Tail certificate: integrand at the edges times a Gaussian length scale.
  const double sigma = sm.sigma();
  for (double edge : {a, b}) {
    const auto v = mass_and_energy(edge);
    const double e = std::abs(entropy_integrand(edge)[0] - z * sm.density(edge));
    if (v[0] * sigma > 1e-8 * z || v[1] * sigma > 1e-8 * std::max(me[1], 1e-300) ||
        e * sigma > 1e-8 * std::max(ent, 1e-8 * z)) {
      throw Error(ErrorKind::NonintegrableTestFunction,
                  std::string(to_string(f.family)) + " member is not negligible at window edge " +
                      std::to_string(edge));
    }
  }

  const double scale_factor = std::exp(scale);
  const double entropy_value = std::max(ent, 0.0);
  return {entropy_value * scale_factor, me[1] * scale_factor,
          me[1] > 0.0 ? entropy_value / me[1] : std::numeric_limits<double>::quiet_NaN(), scale};
}

double entropy(const TestFunction& f, const SmoothedMeasure& sm) { return evaluate(f, sm).entropy; }
double energy(const TestFunction& f, const SmoothedMeasure& sm) { return evaluate(f, sm).energy; }

std::vector<TestFunction> family_members(Family family, const SmoothedMeasure& sm) {
  const double sigma = sm.sigma();
  const double r = sm.radius();
  std::vector<TestFunction> out;
  switch (family) {
    case Family::Exponential: {
      const double hi = 4.0 / sigma;
      const double lo = std::min(0.05, hi / 80.0);
      for (double lambda : numerics::logspace(lo, hi, 64)) out.push_back({family, {lambda}});
      break;
    }
    case Family::Bump:
      for (double a : numerics::linspace(-r - 2.0 * sigma, r + 2.0 * sigma, 9)) {
        for (double s : {0.25, 0.5, 1.0, 2.0, 4.0}) out.push_back({family, {a, s * sigma}});
      }
      break;
    case Family::Step:
      for (double a : numerics::linspace(-r - 2.0 * sigma, r + 2.0 * sigma, 9)) {
        for (double eps : {0.1, 0.25, 0.5, 1.0, 2.0}) out.push_back({family, {a, eps * sigma}});
      }
      break;
  }
  return out;
}

std::vector<TestFunction> all_family_members(std::span<const Family> families,
                                             const SmoothedMeasure& sm) {
  std::vector<TestFunction> out;
  for (Family fam : families) {
    auto members = family_members(fam, sm);
    out.insert(out.end(), members.begin(), members.end());
  }
  return out;
}

namespace {

// Members that cannot be integrated drop out of the search with a NaN ratio.
Functionals safe_evaluate(const TestFunction& f, const SmoothedMeasure& sm) {
  try {
    return evaluate(f, sm);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NonintegrableTestFunction ||
        e.kind() == ErrorKind::QuadratureFailure) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      return {nan, nan, nan, nan};
    }
    throw;
  }
}

double safe_ratio(const TestFunction& f, const SmoothedMeasure& sm) {
  const double r = safe_evaluate(f, sm).ratio;
  return std::isnan(r) ? kNegInf : r;
}

}  // namespace

RatioBound ratio_lower_bound(std::span<const TestFunction> members, const SmoothedMeasure& sm) {
  std::vector<Functionals> values;
  values.reserve(members.size());
  for (const auto& f : members) values.push_back(safe_evaluate(f, sm));
  return ratio_lower_bound(members, values, sm);
}

RatioBound ratio_lower_bound(std::span<const TestFunction> members,
                             std::span<const Functionals> values, const SmoothedMeasure& sm) {
  if (members.empty()) throw Error(ErrorKind::EmptyFamily, "no test functions supplied");
  if (values.size() != members.size()) {
    throw Error(ErrorKind::DomainError, "one set of functionals per member is required");
  }
  std::size_t best = members.size();
  double best_ratio = kNegInf;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const double r = values[i].ratio;
    if (!std::isnan(r) && r > best_ratio) {
      best_ratio = r;
      best = i;
    }
  }
  if (best == members.size()) {
    throw Error(ErrorKind::EmptyFamily, "no member has finite entropy and positive energy");
  }

  TestFunction argmax = members[best];
  for (std::size_t p = 0; p < argmax.params.size(); ++p) {
    // Grid neighbours of the current value along parameter p, within the same family.
    std::set<double> grid;
    for (const auto& m : members) {
      if (m.family == argmax.family && m.params.size() == argmax.params.size()) {
        grid.insert(m.params[p]);
      }
    }
    const double current = argmax.params[p];
    auto it = grid.find(current);
    if (it == grid.end() || grid.size() < 2) continue;
    const double lo = it == grid.begin() ? current : *std::prev(it);
    const double hi = std::next(it) == grid.end() ? current : *std::next(it);
    if (!(hi > lo)) continue;
    auto along = [&](double v) {
      TestFunction trial = argmax;
      trial.params[p] = v;
      return safe_ratio(trial, sm);
    };
    const auto refined = numerics::golden_section_max(along, lo, hi, 1e-4 * (hi - lo));
    if (refined.value > best_ratio) {
      best_ratio = refined.value;
      argmax.params[p] = refined.x;
    }
  }
  return {best_ratio, argmax, members.size()};
}

RatioBound ratio_lower_bound(std::span<const Family> families, const SmoothedMeasure& sm) {
  const auto members = all_family_members(families, sm);
  return ratio_lower_bound(std::span<const TestFunction>(members), sm);
}

VerifyReport verify_lsi(const SmoothedMeasure& sm, double c,
                        std::span<const TestFunction> members) {
  std::vector<Functionals> values;
  values.reserve(members.size());
  for (const auto& f : members) values.push_back(evaluate(f, sm));
  return verify_lsi(c, members, values);
}

VerifyReport verify_lsi(double c, std::span<const TestFunction> members,
                        std::span<const Functionals> values) {
  if (!(c >= 0.0)) throw Error(ErrorKind::DomainError, "LSI constant must be >= 0");
  if (values.size() != members.size()) {
    throw Error(ErrorKind::DomainError, "one set of functionals per member is required");
  }
  VerifyReport report{c, {}, true, -std::numeric_limits<double>::infinity(), 0};
  report.members.reserve(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    const Functionals& v = values[i];
    if (std::isnan(v.entropy) || std::isnan(v.energy)) {
      throw Error(ErrorKind::NonintegrableTestFunction,
                  std::string(to_string(members[i].family)) + " member has no functionals");
    }
    const double budget = v.energy > 0.0 ? c * v.energy : 0.0;
    const double scale = std::max({v.entropy, budget, 1.0});
    const double margin = v.entropy - budget;
    const double slack = 1e-6 * scale;
    const bool pass = margin <= slack;
    report.all_pass = report.all_pass && pass;
    // an infinite budget dominates any finite entropy
    const double relative = std::isinf(scale) ? -1.0 : margin / scale;
    if (relative > report.worst_relative_margin) {
      report.worst_relative_margin = relative;
      report.worst_index = report.members.size();
    }
    report.members.push_back({members[i], v, margin, slack, pass});
  }
  return report;
}

}  // namespace lsi
