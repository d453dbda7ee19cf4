#include "lsi/numerics.hpp"

#include <cmath>
#include <string>

namespace lsi {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonpositiveWeight: return "NonpositiveWeight";
    case ErrorKind::MassNotNormalized: return "MassNotNormalized";
    case ErrorKind::InvalidMeasure: return "InvalidMeasure";
    case ErrorKind::ZeroScale: return "ZeroScale";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::BracketFailure: return "BracketFailure";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::SupremumNotLocalized: return "SupremumNotLocalized";
    case ErrorKind::EmptyFamily: return "EmptyFamily";
    case ErrorKind::NonintegrableTestFunction: return "NonintegrableTestFunction";
    case ErrorKind::ConfigParseError: return "ConfigParseError";
    case ErrorKind::MeasureParseError: return "MeasureParseError";
  }
  return "UnknownError";
}

}  // namespace lsi

namespace lsi::numerics {

double log_ndtr(double z) {
  if (std::isnan(z)) return z;
  if (z >= 0.0) return std::log1p(-0.5 * std::erfc(z / std::numbers::sqrt2));
  if (z > -35.0) return std::log(0.5 * std::erfc(-z / std::numbers::sqrt2));
  // Mills-ratio series: Phi(z) = phi(z)/|z| * (1 - 1/z^2 + 3/z^4 - 15/z^6 + ...).
  // At |z| >= 35 the truncation after the z^-14 term is below 1e-19.
  const double w = 1.0 / (z * z);
  double term = 1.0;
  double series = 1.0;
  for (int k = 1; k <= 7; ++k) {
    term *= -(2.0 * k - 1.0) * w;
    series += term;
  }
  return -0.5 * z * z - std::log(-z) - kLogSqrt2Pi + std::log(series);
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out;
  if (n == 0) return out;
  if (n == 1) return {a};
  out.reserve(n);
  const double step = (b - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) out.push_back(a + step * static_cast<double>(i));
  out.push_back(b);
  return out;
}

std::vector<double> logspace(double a, double b, std::size_t n) {
  std::vector<double> out = linspace(std::log(a), std::log(b), n);
  for (auto& v : out) v = std::exp(v);
  if (!out.empty()) {
    out.front() = a;
    out.back() = b;
  }
  return out;
}

}  // namespace lsi::numerics
