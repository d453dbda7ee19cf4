#pragma once

// Log-domain helpers, normal-distribution tails and one-dimensional quadrature
// and search routines shared by every module.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "lsi/error.hpp"

namespace lsi::numerics {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log(sqrt(2*pi))

/// log(exp(a) + exp(b)) without overflow.
inline double log_add_exp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (a == kNegInf) return a;
  return a + std::log1p(std::exp(b - a));
}

/// Streaming log-sum-exp. Rescales whenever a larger term arrives.
class LogSumExp {
 public:
  void add(double log_term) {
    if (log_term == kNegInf) return;
    if (log_term <= max_) {
      sum_ += std::exp(log_term - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
      max_ = log_term;
    }
  }
  double value() const { return sum_ > 0.0 ? max_ + std::log(sum_) : kNegInf; }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
};

/// log Phi(z) for the standard normal CDF, accurate deep into the lower tail.
double log_ndtr(double z);

/// log(1 - Phi(z)).
inline double log_ndtr_complement(double z) { return log_ndtr(-z); }

/// Standard normal CDF.
inline double ndtr(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// Picks whichever of exp(log_lower) or 1 - exp(log_upper) is better conditioned.
inline double probability_from_logs(double log_lower, double log_upper) {
  return log_lower < log_upper ? std::exp(log_lower) : -std::expm1(log_upper);
}

// ---------------------------------------------------------------------------
// Composite adaptive Simpson on vector-valued integrands.
//
// The interval is first split into `panels` equal pieces; each piece is then
// refined until every component satisfies |S(l)+S(r) - S| <= 15 tol_i.
// Throws QuadratureFailure when max_depth is exhausted or the integrand
// returns a non-finite value.
// ---------------------------------------------------------------------------
template <std::size_t N>
using Vec = std::array<double, N>;

namespace detail {

template <std::size_t N>
Vec<N> simpson_combine(const Vec<N>& fa, const Vec<N>& fm, const Vec<N>& fb, double h) {
  Vec<N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = h / 6.0 * (fa[i] + 4.0 * fm[i] + fb[i]);
  return out;
}

template <std::size_t N, class F>
Vec<N> simpson_recurse(F& f, double a, double b, const Vec<N>& fa, const Vec<N>& fm,
                       const Vec<N>& fb, const Vec<N>& whole, Vec<N> tol, int depth,
                       bool& failed) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const Vec<N> flm = f(lm);
  const Vec<N> frm = f(rm);
  const Vec<N> left = simpson_combine<N>(fa, flm, fm, m - a);
  const Vec<N> right = simpson_combine<N>(fm, frm, fb, b - m);
  bool converged = true;
  for (std::size_t i = 0; i < N; ++i) {
    if (!std::isfinite(left[i]) || !std::isfinite(right[i])) {
      failed = true;
      return whole;
    }
    const double delta = left[i] + right[i] - whole[i];
    // Agreement at rounding level also counts; tolerances below it cannot be met.
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() *
                         (std::abs(left[i]) + std::abs(right[i]));
    if (!(std::abs(delta) <= std::max(15.0 * tol[i], noise))) converged = false;
  }
  if (converged || depth <= 0) {
    if (!converged) failed = true;
    Vec<N> out{};
    for (std::size_t i = 0; i < N; ++i) {
      const double delta = left[i] + right[i] - whole[i];
      out[i] = left[i] + right[i] + delta / 15.0;
    }
    return out;
  }
  for (auto& t : tol) t *= 0.5;
  const Vec<N> l = simpson_recurse<N>(f, a, m, fa, flm, fm, left, tol, depth - 1, failed);
  const Vec<N> r = simpson_recurse<N>(f, m, b, fm, frm, fb, right, tol, depth - 1, failed);
  Vec<N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = l[i] + r[i];
  return out;
}

}  // namespace detail

template <std::size_t N, class F>
Vec<N> adaptive_simpson(F&& f, double a, double b, const Vec<N>& abs_tol, int panels = 16,
                        int max_depth = 40) {
  Vec<N> total{};
  if (!(b > a)) return total;
  bool failed = false;
  const double width = (b - a) / panels;
  Vec<N> panel_tol{};
  for (std::size_t i = 0; i < N; ++i) panel_tol[i] = abs_tol[i] / panels;
  Vec<N> fa = f(a);
  for (int k = 0; k < panels; ++k) {
    const double lo = a + k * width;
    const double hi = (k + 1 == panels) ? b : a + (k + 1) * width;
    const Vec<N> fm = f(0.5 * (lo + hi));
    const Vec<N> fb = f(hi);
    const Vec<N> whole = detail::simpson_combine<N>(fa, fm, fb, hi - lo);
    const Vec<N> part =
        detail::simpson_recurse<N>(f, lo, hi, fa, fm, fb, whole, panel_tol, max_depth, failed);
    for (std::size_t i = 0; i < N; ++i) total[i] += part[i];
    fa = fb;
  }
  if (failed) {
    throw Error(ErrorKind::QuadratureFailure, "adaptive Simpson did not reach tolerance on [" +
                                                  std::to_string(a) + ", " + std::to_string(b) +
                                                  "]");
  }
  return total;
}

template <class F>
double adaptive_simpson(F&& f, double a, double b, double abs_tol, int panels = 16,
                        int max_depth = 40) {
  auto wrapped = [&f](double x) { return Vec<1>{f(x)}; };
  return adaptive_simpson<1>(wrapped, a, b, Vec<1>{abs_tol}, panels, max_depth)[0];
}

/// Nodes and weights of the 8-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre8 {
  static constexpr std::array<double, 8> nodes = {
      -0.96028985649753623168, -0.79666647741362673959, -0.52553240991632898582,
      -0.18343464249564980494, 0.18343464249564980494,  0.52553240991632898582,
      0.79666647741362673959,  0.96028985649753623168};
  static constexpr std::array<double, 8> weights = {
      0.10122853629037625915, 0.22238103445337447054, 0.31370664587788728734,
      0.36268378337836198297, 0.36268378337836198297, 0.31370664587788728734,
      0.22238103445337447054, 0.10122853629037625915};
};

struct Extremum {
  double x;
  double value;
};

/// Golden-section search for the maximum of a unimodal f on [a, b].
template <class F>
Extremum golden_section_max(F&& f, double a, double b, double x_tol) {
  constexpr double inv_phi = 0.61803398874989484820;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > x_tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? Extremum{c, fc} : Extremum{d, fd};
}

/// n points spaced uniformly on [a, b], endpoints included.
std::vector<double> linspace(double a, double b, std::size_t n);

/// n points spaced geometrically on [a, b], endpoints included; requires 0 < a.
std::vector<double> logspace(double a, double b, std::size_t n);

}  // namespace lsi::numerics
