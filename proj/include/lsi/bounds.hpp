#pragma once

#include <optional>

#include "lsi/log_value.hpp"
#include "lsi/smoothing.hpp"
#include "lsi/transport.hpp"

namespace lsi {

// Absolute constants of the closed-form bounds.
inline constexpr double kThm1K1 = 6905.0;
inline constexpr double kThm1K2 = 4989.0;
inline constexpr double kThm1K3 = 7803.0;
inline constexpr double kThm2K = 289.0;
inline constexpr double kBgLowerDivisor = 150.0;
inline constexpr double kBgUpperFactor = 468.0;

struct Thm1Bound {
  LogValue general;
  std::optional<LogValue> small_delta;  // present only when delta <= R^2
};

/// K1 delta^{3/2} R/(4R^2+delta) exp(2R^2/delta) + K2 (sqrt(delta) + 2R)^2,
/// and K3 delta^{3/2}/R exp(2R^2/delta) when delta <= R^2.
Thm1Bound bound_thm1(double radius, double delta);

/// 289 R^2 exp(20 n + 5 R^2/delta). Requires 0 < delta <= R^2 and n >= 1.
LogValue bound_thm2(double radius, double delta, int dimension);

enum class Thm4Branch { Outer, Middle };

struct Thm4Bound {
  LogValue value;
  LogValue outer;   // 2 delta exp(4R^2/delta + 4R/sqrt(delta) + 1/4)
  LogValue middle;  // 2 delta exp(24 R^2/delta)
  Thm4Branch active;
};

Thm4Bound bound_thm4(double radius, double delta);

/// Simplified form 2 delta exp(24 R^2/delta), valid as the bound when delta <= 16 R^2.
LogValue bound_thm4_simplified(double radius, double delta);

/// c * L^2.
LogValue bound_pushforward(LogValue c_source, LogValue lipschitz_norm);
double bound_pushforward(double c_source, double lipschitz_norm);

/// A point m with G(m) = 1/2, in the original (uncentered) coordinates of mu.
double median(const SmoothedMeasure& sm);

struct BgOptions {
  double scan_sigmas = 10.0;   // scan reaches R + k sigma beyond the median
  std::size_t scan_points = 2001;
};

struct BobkovGoetze {
  double d0;
  double d1;
  double lower;  // (D0 + D1)/150
  double upper;  // 468 (D0 + D1)
  double median;
  double argmax0;  // centered coordinates of the two suprema
  double argmax1;
};

/// Hardy-type functionals of mu * gamma_delta around its median. Throws
/// SupremumNotLocalized when either scan peaks on its outer boundary.
BobkovGoetze bobkov_goetze(const SmoothedMeasure& sm, BgOptions opts = {});

struct BoundReport {
  double radius;
  double center;
  double delta;
  int dimension;
  Thm1Bound thm1;
  std::optional<LogValue> thm2;
  Thm4Bound thm4;
  LipschitzEstimate lipschitz;
  LogValue lipschitz_theoretical;
  LogValue pushforward;
  BobkovGoetze bg;
};

BoundReport make_bound_report(const Measure1D& mu, GaussianParams params, int dimension = 1,
                              Tolerances tol = {}, SweepGrid grid = {});

}  // namespace lsi
