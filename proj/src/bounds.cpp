#include "lsi/bounds.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "lsi/error.hpp"
#include "lsi/numerics.hpp"

namespace lsi {

using numerics::kNegInf;
using numerics::log_add_exp;

Thm1Bound bound_thm1(double radius, double delta) {
  GaussianParams params(delta);  // validates delta
  (void)params;
  if (!(radius >= 0.0)) throw Error(ErrorKind::DomainError, "support radius must be >= 0");
  const double exponent = 2.0 * radius * radius / delta;
  const double first = std::log(kThm1K1) + 1.5 * std::log(delta) + std::log(radius) -
                       std::log(4.0 * radius * radius + delta) + exponent;
  const double second = std::log(kThm1K2) + 2.0 * std::log(std::sqrt(delta) + 2.0 * radius);
  Thm1Bound out{LogValue::from_log(log_add_exp(first, second)), std::nullopt};
  if (radius > 0.0 && delta <= radius * radius) {
    out.small_delta =
        LogValue::from_log(std::log(kThm1K3) + 1.5 * std::log(delta) - std::log(radius) + exponent);
  }
  return out;
}

LogValue bound_thm2(double radius, double delta, int dimension) {
  if (dimension < 1) throw Error(ErrorKind::DomainError, "dimension must be >= 1");
  if (!(delta > 0.0) || !(radius > 0.0) || delta > radius * radius) {
    throw Error(ErrorKind::DomainError, "requires 0 < delta <= R^2, got delta=" +
                                            std::to_string(delta) +
                                            ", R=" + std::to_string(radius));
  }
  return LogValue::from_log(std::log(kThm2K) + 2.0 * std::log(radius) + 20.0 * dimension +
                            5.0 * radius * radius / delta);
}

LogValue bound_thm4_simplified(double radius, double delta) {
  return LogValue::from_log(std::log(2.0 * delta) + 24.0 * radius * radius / delta);
}

Thm4Bound bound_thm4(double radius, double delta) {
  GaussianParams params(delta);
  if (!(radius >= 0.0)) throw Error(ErrorKind::DomainError, "support radius must be >= 0");
  const double r = radius / params.sigma();
  const LogValue outer =
      LogValue::from_log(std::log(2.0 * delta) + 4.0 * r * r + 4.0 * r + 0.25);
  const LogValue middle = bound_thm4_simplified(radius, delta);
  // For delta <= 16 R^2 the middle branch dominates algebraically; selecting it
  // outright keeps the result bit-identical to the simplified form at the
  // crossover, where rounding could otherwise tip the comparison.
  const bool middle_active = delta <= 16.0 * radius * radius || !(middle < outer);
  return {middle_active ? middle : outer, outer, middle,
          middle_active ? Thm4Branch::Middle : Thm4Branch::Outer};
}

LogValue bound_pushforward(LogValue c_source, LogValue lipschitz_norm) {
  if (c_source.log == kNegInf || lipschitz_norm.log == kNegInf) return LogValue{};
  return LogValue::from_log(c_source.log + 2.0 * lipschitz_norm.log);
}

double bound_pushforward(double c_source, double lipschitz_norm) {
  return c_source * lipschitz_norm * lipschitz_norm;
}

double median(const SmoothedMeasure& sm) { return sm.center() + sm.quantile(0.5); }

namespace {

// log of the Simpson estimate of the integral of exp(-log_q) over a panel of width h.
double log_simpson_reciprocal(double lq_a, double lq_m, double lq_b, double h) {
  const double top = std::max({-lq_a, -lq_m, -lq_b});
  const double s = std::exp(-lq_a - top) + 4.0 * std::exp(-lq_m - top) + std::exp(-lq_b - top);
  return top + std::log(h / 6.0 * s);
}

struct SideSup {
  double log_value;
  double argmax;
};

// One side of the criterion. `direction` is -1 for x < m (D0), +1 for x > m (D1).
SideSup scan_side(const SmoothedMeasure& sm, double m, int direction, const BgOptions& opts) {
  const double reach = sm.radius() + opts.scan_sigmas * sm.sigma();
  const std::size_t n = opts.scan_points;
  const double h = reach / static_cast<double>(n - 1);
  auto at = [&](std::size_t i) { return m + direction * h * static_cast<double>(i); };

  // Tail mass on the far side of x and the objective built from it; the
  // 0 * inf = 0 convention applies when the tail mass underflows.
  auto log_tail = [&](double x) { return direction < 0 ? sm.log_cdf(x) : sm.log_sf(x); };
  auto objective = [&](double x, double log_integral) {
    const double lt = log_tail(x);
    if (lt == kNegInf || log_integral == kNegInf || lt >= 0.0) return kNegInf;
    return lt + std::log(-lt) + log_integral;
  };

  std::vector<double> cumulative(n, kNegInf);
  double lq_prev = sm.log_density(at(0));
  SideSup best{kNegInf, m};
  std::size_t best_index = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const double x = at(i);
    const double lq_mid = sm.log_density(x - direction * 0.5 * h);
    const double lq = sm.log_density(x);
    cumulative[i] = log_add_exp(cumulative[i - 1], log_simpson_reciprocal(lq_prev, lq_mid, lq, h));
    lq_prev = lq;
    const double value = objective(x, cumulative[i]);
    if (value > best.log_value) {
      best = {value, x};
      best_index = i;
    }
  }
  if (best.log_value == kNegInf) return {kNegInf, m};
  if (best_index == n - 1) {
    throw Error(ErrorKind::SupremumNotLocalized,
                std::string(direction < 0 ? "D0" : "D1") +
                    " scan peaks at its boundary; widen scan_sigmas");
  }

  // Refine between the neighbouring grid points. The integral from x inward
  // reuses the cumulative value at the inner neighbour.
  const std::size_t inner = best_index - 1;
  const double inner_x = at(inner);
  auto refined_objective = [&](double x) {
    const double lo = std::min(x, inner_x);
    const double hi = std::max(x, inner_x);
    if (hi - lo <= 0.0) return objective(x, cumulative[inner]);
    const double top = -sm.log_density(direction < 0 ? lo : hi);
    const double piece = numerics::adaptive_simpson(
        [&](double t) { return std::exp(-sm.log_density(t) - top); }, lo, hi,
        1e-13 * (hi - lo), 2, 30);
    return objective(x, log_add_exp(cumulative[inner], top + std::log(piece)));
  };
  const double a = std::min(inner_x, at(best_index + 1));
  const double b = std::max(inner_x, at(best_index + 1));
  const auto refined = numerics::golden_section_max(refined_objective, a, b, 1e-9 * sm.sigma());
  if (refined.value > best.log_value) best = {refined.value, refined.x};
  return best;
}

}  // namespace

BobkovGoetze bobkov_goetze(const SmoothedMeasure& sm, BgOptions opts) {
  if (opts.scan_points < 3) throw Error(ErrorKind::DomainError, "scan needs at least 3 points");
  const double m = sm.quantile(0.5);
  const SideSup left = scan_side(sm, m, -1, opts);
  const SideSup right = scan_side(sm, m, +1, opts);
  const double d0 = std::exp(left.log_value);
  const double d1 = std::exp(right.log_value);
  return {d0,
          d1,
          (d0 + d1) / kBgLowerDivisor,
          kBgUpperFactor * (d0 + d1),
          sm.center() + m,
          left.argmax,
          right.argmax};
}

BoundReport make_bound_report(const Measure1D& mu, GaussianParams params, int dimension,
                              Tolerances tol, SweepGrid grid) {
  const double radius = mu.radius();
  const double delta = params.delta();
  std::optional<LogValue> thm2;
  if (radius > 0.0 && delta <= radius * radius) thm2 = bound_thm2(radius, delta, dimension);

  const TransportMap transport(mu, params, tol, TransportFrame::Normalized, grid);
  const LipschitzEstimate lip = transport.lipschitz_estimate();
  const SmoothedMeasure sm(mu, params, tol);

  return {radius,
          mu.center(),
          delta,
          dimension,
          bound_thm1(radius, delta),
          thm2,
          bound_thm4(radius, delta),
          lip,
          lipschitz_theoretical_bound(radius / params.sigma()),
          bound_pushforward(LogValue::from_linear(2.0 * delta), LogValue::from_log(lip.log_value)),
          bobkov_goetze(sm, BgOptions{})};
}

}  // namespace lsi
