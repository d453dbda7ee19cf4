#include "lsi/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lsi/error.hpp"

namespace lsi {

using numerics::kNegInf;
using numerics::LogSumExp;

GaussianParams::GaussianParams(double delta) : delta_(delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorKind::DomainError, "Gaussian variance must be positive and finite, got " +
                                            std::to_string(delta));
  }
}

SmoothedMeasure::SmoothedMeasure(const Measure1D& mu, GaussianParams params, Tolerances tol)
    : base_(centered(mu)),
      params_(params),
      tol_(tol),
      center_(mu.center()),
      radius_(mu.radius()) {
  if (truncation_error() > tol_.cdf_tol) {
    throw Error(ErrorKind::DomainError,
                "tail cutoff of " + std::to_string(tol_.tail_sigmas) +
                    " sigma leaves more Gaussian mass than cdf_tol");
  }
  for (const auto& a : base_.atoms()) nodes_.push_back({a.x, std::log(a.w)});
  if (const auto& d = base_.density()) {
    const auto& grid = d->grid();
    const auto& vals = d->values();
    const double max_panel = sigma() / 8.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      const double a = grid[i - 1];
      const double b = grid[i];
      const auto panels = static_cast<std::size_t>(std::ceil((b - a) / max_panel));
      const double h = (b - a) / static_cast<double>(panels);
      for (std::size_t k = 0; k < panels; ++k) {
        const double lo = a + h * static_cast<double>(k);
        for (std::size_t j = 0; j < 8; ++j) {
          const double s = lo + 0.5 * h * (1.0 + numerics::GaussLegendre8::nodes[j]);
          const double t = (s - a) / (b - a);
          const double rho = vals[i - 1] + t * (vals[i] - vals[i - 1]);
          if (rho <= 0.0) continue;
          nodes_.push_back({s, std::log(0.5 * h * numerics::GaussLegendre8::weights[j] * rho)});
        }
      }
    }
  }
}

Interval SmoothedMeasure::window() const {
  const double half = radius_ + tol_.tail_sigmas * sigma();
  return {-half, half};
}

double SmoothedMeasure::truncation_error() const {
  return 2.0 * std::exp(numerics::log_ndtr(-tol_.tail_sigmas));
}

double SmoothedMeasure::log_density(double t) const {
  LogSumExp acc;
  for (const auto& n : nodes_) acc.add(n.log_w + log_gaussian_density(t - n.s, delta()));
  return acc.value();
}

double SmoothedMeasure::density_derivative(double t) const {
  // q'(t) = -sum w_j (t - s_j)/delta p(t - s_j), weighted relative to the largest term.
  double max_log = kNegInf;
  for (const auto& n : nodes_) {
    max_log = std::max(max_log, n.log_w + log_gaussian_density(t - n.s, delta()));
  }
  double acc = 0.0;
  for (const auto& n : nodes_) {
    const double lt = n.log_w + log_gaussian_density(t - n.s, delta());
    acc += -(t - n.s) / delta() * std::exp(lt - max_log);
  }
  return acc * std::exp(max_log);
}

double SmoothedMeasure::log_cdf(double x) const {
  LogSumExp acc;
  for (const auto& n : nodes_) acc.add(n.log_w + log_gaussian_cdf(x - n.s, delta()));
  return std::min(acc.value(), 0.0);
}

double SmoothedMeasure::log_sf(double x) const {
  LogSumExp acc;
  for (const auto& n : nodes_) acc.add(n.log_w + log_gaussian_sf(x - n.s, delta()));
  return std::min(acc.value(), 0.0);
}

template <class Residual>
double SmoothedMeasure::solve_monotone(Residual&& residual, double lo, double hi) const {
  // residual(y) returns {r, dr/dy} with r increasing in y.
  auto [r_lo, d_lo] = residual(lo);
  auto [r_hi, d_hi] = residual(hi);
  (void)d_lo;
  (void)d_hi;
  if (r_lo > 0.0 || r_hi < 0.0) {
    throw Error(ErrorKind::BracketFailure, "root not bracketed by [" + std::to_string(lo) +
                                               ", " + std::to_string(hi) + "]");
  }
  if (r_lo == 0.0) return lo;
  if (r_hi == 0.0) return hi;
  const double width_goal = 1e-3 * sigma();
  while (hi - lo > width_goal) {
    const double mid = 0.5 * (lo + hi);
    const double r = residual(mid).first;
    if (r == 0.0) return mid;
    (r < 0.0 ? lo : hi) = mid;
  }
  const double step_goal = tol_.root_tol * sigma();
  double y = 0.5 * (lo + hi);
  for (int iter = 0; iter < 100; ++iter) {
    const auto [r, dr] = residual(y);
    if (r == 0.0) return y;
    (r < 0.0 ? lo : hi) = y;
    double next = y - r / dr;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = next - y;
    y = next;
    if (std::abs(step) <= step_goal || hi - lo <= step_goal) return y;
  }
  return y;
}

double SmoothedMeasure::solve_log_cdf(double log_u, double lo, double hi) const {
  return solve_monotone(
      [&](double y) {
        const double lg = log_cdf(y);
        return std::pair{lg - log_u, std::exp(log_density(y) - lg)};
      },
      lo, hi);
}

double SmoothedMeasure::solve_log_sf(double log_v, double lo, double hi) const {
  return solve_monotone(
      [&](double y) {
        const double ls = log_sf(y);
        return std::pair{log_v - ls, std::exp(log_density(y) - ls)};
      },
      lo, hi);
}

double SmoothedMeasure::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) {
    throw Error(ErrorKind::DomainError, "quantile level must lie in (0, 1)");
  }
  const bool lower = u <= 0.5;
  const double target = lower ? std::log(u) : std::log1p(-u);
  auto residual = [&](double y) {
    return lower ? log_cdf(y) - target : target - log_sf(y);
  };
  const Interval win = window();
  double reach = radius_ + sigma();
  double lo = -reach;
  double hi = reach;
  while (residual(lo) > 0.0 || residual(hi) < 0.0) {
    if (reach >= win.hi) {
      throw Error(ErrorKind::BracketFailure, "quantile level " + std::to_string(u) +
                                                 " lies beyond the truncation window");
    }
    reach = std::min(2.0 * reach, win.hi);
    lo = -reach;
    hi = reach;
  }
  return lower ? solve_log_cdf(target, lo, hi) : solve_log_sf(target, lo, hi);
}

double SmoothedMeasure::log_mgf(double x) const {
  LogSumExp acc;
  for (const auto& n : nodes_) acc.add(n.log_w + x * n.s);
  return acc.value();
}

double SmoothedMeasure::tilted_mean(double x) const {
  double max_log = kNegInf;
  for (const auto& n : nodes_) max_log = std::max(max_log, n.log_w + x * n.s);
  double num = 0.0;
  double den = 0.0;
  for (const auto& n : nodes_) {
    const double w = std::exp(n.log_w + x * n.s - max_log);
    num += w * n.s;
    den += w;
  }
  return num / den;
}

double SmoothedMeasure::shift(double x) const {
  if (x == 0.0) throw Error(ErrorKind::DomainError, "shift function K is undefined at x = 0");
  return (log_mgf(x) + radius_) / x;
}

double SmoothedMeasure::shift_derivative(double x) const {
  if (x == 0.0) throw Error(ErrorKind::DomainError, "shift function K is undefined at x = 0");
  return tilted_mean(x) / x - log_mgf(x) / (x * x) - radius_ / (x * x);
}

ShiftEvaluation SmoothedMeasure::shift_eval(double x) const {
  return {shift(x), shift_derivative(x), std::abs(x) >= 2.0 * radius_};
}

}  // namespace lsi
