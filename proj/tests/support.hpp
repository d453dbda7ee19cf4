#pragma once

#include <cmath>
#include <vector>

#include "lsi/measures.hpp"

namespace lsi::testing {

inline Measure1D point_mass(double a = 0.0) { return make_discrete({{a, 1.0}}); }

inline Measure1D bernoulli(double r = 1.0) { return make_discrete({{-r, 0.5}, {r, 0.5}}); }

inline Measure1D asymmetric(double r = 1.0) { return make_discrete({{-r, 0.25}, {r, 0.75}}); }

inline Measure1D uniform(double r = 1.0) { return make_uniform(-r, r); }

// atom at 1 plus a triangular bump on [-1, 0]
inline Measure1D mixed() {
  return Measure1D::create({{1.0, 0.4}},
                           TabulatedDensity({-1.0, -0.5, 0.0}, {0.0, 1.2, 0.0}));
}

inline bool rel_close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace lsi::testing
