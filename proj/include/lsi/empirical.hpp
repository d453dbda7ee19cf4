#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lsi/smoothing.hpp"

namespace lsi {

enum class Family {
  Exponential,  // exp(lambda x / 2); params {lambda}
  Bump,         // exp(-(x - a)^2 / (2 s^2)); params {a, s}
  Step,         // tanh((x - a)/eps) + 1; params {a, eps}
};

std::string_view to_string(Family family);
Family family_from_string(std::string_view name);  // throws ConfigParseError

/// Smooth nonnegative test function, scaled by `amplitude`. Coordinates are
/// the centered frame of the SmoothedMeasure it is paired with.
struct TestFunction {
  Family family;
  std::vector<double> params;
  double amplitude = 1.0;

  double value(double x) const;
  double slope(double x) const;  // |f'(x)|
  double log_f2(double x) const;
  double log_slope2(double x) const;

  /// Integration window carrying essentially all of f^2 q.
  Interval window(const SmoothedMeasure& sm) const;
};

struct Functionals {
  double entropy;  // Ent(f^2) against mu * gamma_delta
  double energy;   // integral of |f'|^2 against mu * gamma_delta
  double ratio;    // entropy / energy; NaN when energy == 0
  double log_scale;  // both integrals were computed divided by exp(log_scale)
};

/// Ent and energy in one pass. The entropy integrand is written as
/// u log(u/Z) - u + Z >= 0, which integrates to the same value without the
/// cancellation of the textbook form. Throws NonintegrableTestFunction when
/// the window edges carry more than 1e-8 of an integral.
Functionals evaluate(const TestFunction& f, const SmoothedMeasure& sm);
double entropy(const TestFunction& f, const SmoothedMeasure& sm);
double energy(const TestFunction& f, const SmoothedMeasure& sm);

/// Members of a shipped family on its default parameter grid for sm.
std::vector<TestFunction> family_members(Family family, const SmoothedMeasure& sm);
std::vector<TestFunction> all_family_members(std::span<const Family> families,
                                             const SmoothedMeasure& sm);

struct RatioBound {
  double c_lower;
  TestFunction argmax;
  std::size_t members_evaluated;
};

/// max Ent/Energy over the members, then a golden-section pass along each
/// parameter of the best member within its grid neighbourhood.
RatioBound ratio_lower_bound(std::span<const TestFunction> members, const SmoothedMeasure& sm);
RatioBound ratio_lower_bound(std::span<const Family> families, const SmoothedMeasure& sm);
/// Same search with the grid values already computed; values[i] belongs to members[i].
RatioBound ratio_lower_bound(std::span<const TestFunction> members,
                             std::span<const Functionals> values, const SmoothedMeasure& sm);

struct MemberVerdict {
  TestFunction function;
  Functionals values;
  double margin;  // Ent - c * Energy
  double slack;   // 1e-6 * max(Ent, c * Energy, 1)
  bool pass;
};

struct VerifyReport {
  double c;
  std::vector<MemberVerdict> members;
  bool all_pass;
  double worst_relative_margin;  // max of margin / max(Ent, c Energy, 1)
  std::size_t worst_index;
};

VerifyReport verify_lsi(const SmoothedMeasure& sm, double c, std::span<const TestFunction> members);
VerifyReport verify_lsi(double c, std::span<const TestFunction> members,
                        std::span<const Functionals> values);

}  // namespace lsi
