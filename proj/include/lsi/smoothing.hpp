#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "lsi/measures.hpp"
#include "lsi/numerics.hpp"

namespace lsi {

/// Variance of the Gaussian mollifier gamma_delta.
class GaussianParams {
 public:
  explicit GaussianParams(double delta);
  double delta() const { return delta_; }
  double sigma() const { return std::sqrt(delta_); }

 private:
  double delta_;
};

struct Tolerances {
  double integ_tol = kDefaultIntegTol;
  double cdf_tol = 1e-12;
  double root_tol = 1e-10;
  double mass_tol = kDefaultMassTol;
  double tail_sigmas = 12.0;  // window is [-R - k sigma, R + k sigma]
};

// Centered Gaussian of variance delta.
inline double log_gaussian_density(double t, double delta) {
  return -0.5 * t * t / delta - 0.5 * std::log(delta) - numerics::kLogSqrt2Pi;
}
inline double gaussian_density(double t, double delta) {
  return std::exp(log_gaussian_density(t, delta));
}
inline double log_gaussian_cdf(double x, double delta) {
  return numerics::log_ndtr(x / std::sqrt(delta));
}
inline double log_gaussian_sf(double x, double delta) {
  return numerics::log_ndtr(-x / std::sqrt(delta));
}
inline double gaussian_cdf(double x, double delta) { return numerics::ndtr(x / std::sqrt(delta)); }

/// K(x) and K'(x) together with whether x lies in the outer regime |x| >= 2R
/// where the tail lemmas apply.
struct ShiftEvaluation {
  double shift;
  double shift_derivative;
  bool in_lemma_regime;
};

/// mu * gamma_delta for a compactly supported mu, translated so that the
/// support of mu is [-R, R]. Every evaluator below takes and returns
/// coordinates in that centered frame; center() recovers the offset.
///
/// mu is discretized once into a fixed rule {(s_j, w_j)}: atoms verbatim and
/// each density segment as 8-point Gauss-Legendre panels no wider than
/// sigma/8. All convolution integrals are then log-sum-exp sums over it.
class SmoothedMeasure {
 public:
  SmoothedMeasure(const Measure1D& mu, GaussianParams params, Tolerances tol = {});

  const Measure1D& base() const { return base_; }
  double center() const { return center_; }
  double radius() const { return radius_; }
  double delta() const { return params_.delta(); }
  double sigma() const { return params_.sigma(); }
  const Tolerances& tolerances() const { return tol_; }

  /// Truncation window [-R - k sigma, R + k sigma] and the Gaussian mass
  /// it leaves out.
  Interval window() const;
  double truncation_error() const;

  // Convolved density q and its derivative.
  double log_density(double t) const;
  double density(double t) const { return std::exp(log_density(t)); }
  double density_derivative(double t) const;

  // Distribution function G, computed as the mu-average of the Gaussian CDF.
  double log_cdf(double x) const;
  double log_sf(double x) const;
  double cdf(double x) const { return numerics::probability_from_logs(log_cdf(x), log_sf(x)); }

  /// G^{-1}(u): bisection to width 1e-3 inside a bracket grown out to the
  /// truncation window, then safeguarded Newton until the step is below
  /// root_tol. Throws BracketFailure when u lies beyond the window.
  double quantile(double u) const;
  /// Solves log G(y) = log_u within [lo, hi].
  double solve_log_cdf(double log_u, double lo, double hi) const;
  /// Solves log(1 - G(y)) = log_v within [lo, hi].
  double solve_log_sf(double log_v, double lo, double hi) const;

  // Moment generating function of the centered mu and the shift functions.
  double log_mgf(double x) const;
  double mgf(double x) const { return std::exp(log_mgf(x)); }
  /// Lambda'(x) / Lambda(x), the mean of mu tilted by exp(x s).
  double tilted_mean(double x) const;
  double shift(double x) const;
  double shift_derivative(double x) const;
  ShiftEvaluation shift_eval(double x) const;

  std::size_t rule_size() const { return nodes_.size(); }

 private:
  struct Node {
    double s;
    double log_w;
  };

  template <class Residual>
  double solve_monotone(Residual&& residual, double lo, double hi) const;

  Measure1D base_;
  GaussianParams params_;
  Tolerances tol_;
  double center_;
  double radius_;
  std::vector<Node> nodes_;
};

}  // namespace lsi
