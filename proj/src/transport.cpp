#include "lsi/transport.hpp"

#include <algorithm>
#include <cmath>

namespace lsi {

namespace {

Measure1D rescaled(const Measure1D& mu, double sigma) {
  return pushforward_affine(centered(mu), 1.0 / sigma, 0.0);
}

}  // namespace

TransportMap::TransportMap(const Measure1D& mu, GaussianParams params, Tolerances tol,
                           TransportFrame frame, SweepGrid grid)
    : sigma_(params.sigma()),
      frame_(frame),
      grid_(grid),
      normalized_(rescaled(mu, params.sigma()), GaussianParams(1.0), tol) {
  if (frame == TransportFrame::Direct) direct_.emplace(mu, params, tol);
}

double TransportMap::solve(double xw) const {
  const SmoothedMeasure& sm = working();
  const double r = sm.radius();
  const double pad = 1e-6 * sm.sigma() + 1e-9 * r;
  const double lo = xw - r - pad;
  const double hi = xw + r + pad;
  // Match whichever tail of F is small so the target keeps full precision.
  if (xw >= 0.0) return sm.solve_log_sf(log_gaussian_sf(xw, sm.delta()), lo, hi);
  return sm.solve_log_cdf(log_gaussian_cdf(xw, sm.delta()), lo, hi);
}

double TransportMap::operator()(double x) const { return from_working(solve(to_working(x))); }

double TransportMap::log_derivative(double x) const {
  const SmoothedMeasure& sm = working();
  const double xw = to_working(x);
  return log_gaussian_density(xw, sm.delta()) - sm.log_density(solve(xw));
}

double TransportMap::derivative(double x) const { return std::exp(log_derivative(x)); }

Interval TransportMap::envelope(double x) const {
  const double r = normalized_.radius();
  const double xn = x / sigma_;
  double lo = xn - r;
  double hi = xn + r;
  if (xn != 0.0 && std::abs(xn) >= 2.0 * r) {
    const double k = normalized_.shift(xn);
    if (xn > 0.0) {
      hi = std::min(hi, xn + k);
    } else {
      lo = std::max(lo, xn + k);
    }
  }
  return {lo * sigma_, hi * sigma_};
}

TransportSample TransportMap::sample(double x) const {
  const SmoothedMeasure& sm = working();
  const double xw = to_working(x);
  const double tw = solve(xw);
  const double log_d = log_gaussian_density(xw, sm.delta()) - sm.log_density(tw);
  const Interval env = envelope(x);
  return {x, from_working(tw), std::exp(log_d), env.lo, env.hi};
}

std::vector<double> TransportMap::sweep_points() const {
  const double half = 2.0 * normalized_.radius() + grid_.margin;
  auto xs = numerics::linspace(-half, half, grid_.points);
  for (auto& x : xs) x *= sigma_;
  return xs;
}

std::vector<TransportSample> TransportMap::sweep() const {
  std::vector<TransportSample> out;
  const auto xs = sweep_points();
  out.reserve(xs.size());
  for (double x : xs) out.push_back(sample(x));
  return out;
}

LipschitzEstimate TransportMap::lipschitz_estimate() const {
  const auto xs = sweep_points();
  std::size_t best = 0;
  double best_log = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double ld = log_derivative(xs[i]);
    if (ld > best_log) {
      best_log = ld;
      best = i;
    }
  }
  double argmax = xs[best];
  if (xs.size() >= 3) {
    const double a = xs[best == 0 ? 0 : best - 1];
    const double b = xs[std::min(best + 1, xs.size() - 1)];
    const auto refined = numerics::golden_section_max(
        [this](double x) { return log_derivative(x); }, a, b, 1e-8 * sigma_);
    if (refined.value > best_log) {
      best_log = refined.value;
      argmax = refined.x;
    }
  }
  const double step = xs.size() > 1 ? xs[1] - xs[0] : 0.0;
  return {std::exp(best_log), best_log,   argmax,
          step,               xs.size(), outer_case_bound(normalized_.radius())};
}

LogValue outer_case_bound(double r) { return LogValue::from_log(2.0 * r * r + 2.0 * r + 0.125); }

LogValue middle_case_bound(double r) { return LogValue::from_log(12.0 * r * r); }

LogValue lipschitz_theoretical_bound(double r) {
  return std::max(outer_case_bound(r), middle_case_bound(r));
}

}  // namespace lsi
