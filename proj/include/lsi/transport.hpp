#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lsi/log_value.hpp"
#include "lsi/smoothing.hpp"

namespace lsi {

/// Frame in which T is solved. Normalized conjugates by the scaling map
/// x -> x/sqrt(delta) and works at unit variance; Direct inverts the
/// variance-delta CDFs as they stand. Both give the same map.
enum class TransportFrame { Normalized, Direct };

struct SweepGrid {
  std::size_t points = 4001;
  double margin = 8.0;  // normalized units beyond +-2R
};

struct TransportSample {
  double x;
  double value;       // T(x)
  double derivative;  // T'(x)
  double envelope_lo;
  double envelope_hi;
};

struct LipschitzEstimate {
  double value;
  double log_value;
  double argmax;  // centered coordinates
  double grid_step;
  std::size_t grid_points;
  LogValue certified_tail;  // outer-case bound used beyond the sweep window
};

/// Increasing rearrangement T = G^{-1} o F pushing gamma_delta onto
/// mu * gamma_delta. Coordinates are centered on the support of mu.
class TransportMap {
 public:
  TransportMap(const Measure1D& mu, GaussianParams params, Tolerances tol = {},
               TransportFrame frame = TransportFrame::Normalized, SweepGrid grid = {});

  double operator()(double x) const;
  double derivative(double x) const;
  double log_derivative(double x) const;

  /// Guaranteed range of T(x): [x - R, x + R], tightened by x + K(x) on the
  /// side the tail lemmas cover when |x| >= 2R in normalized units.
  Interval envelope(double x) const;
  TransportSample sample(double x) const;

  /// Sweep points, sigma * linspace(-2R_n - margin, 2R_n + margin, points).
  std::vector<double> sweep_points() const;
  std::vector<TransportSample> sweep() const;

  /// Grid maximum of T', refined by golden-section search near the argmax.
  LipschitzEstimate lipschitz_estimate() const;

  const SmoothedMeasure& normalized() const { return normalized_; }
  TransportFrame frame() const { return frame_; }
  double sigma() const { return sigma_; }
  double normalized_radius() const { return normalized_.radius(); }

 private:
  const SmoothedMeasure& working() const { return direct_ ? *direct_ : normalized_; }
  double to_working(double x) const { return direct_ ? x : x / sigma_; }
  double from_working(double y) const { return direct_ ? y : y * sigma_; }
  double solve(double xw) const;

  double sigma_;
  TransportFrame frame_;
  SweepGrid grid_;
  SmoothedMeasure normalized_;
  std::optional<SmoothedMeasure> direct_;
};

/// max(exp(2R^2 + 2R + 1/8), exp(12 R^2)) for R = R/sqrt(delta).
LogValue lipschitz_theoretical_bound(double normalized_radius);

/// Outer-case bound exp(2R^2 + 2R + 1/8) on T' for |x| >= 2R.
LogValue outer_case_bound(double normalized_radius);

/// Middle-case bound exp(12 R^2) on T' for |x| <= 2R.
LogValue middle_case_bound(double normalized_radius);

}  // namespace lsi
