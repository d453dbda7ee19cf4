#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include <json.hpp>

namespace lsi {

inline constexpr double kDefaultMassTol = 1e-9;
inline constexpr double kDefaultIntegTol = 1e-10;

struct Atom {
  double x;
  double w;
};

/// Nonnegative density tabulated on a strictly increasing grid and
/// interpolated piecewise-linearly; zero outside [grid.front(), grid.back()].
class TabulatedDensity {
 public:
  TabulatedDensity(std::vector<double> grid, std::vector<double> values);

  double operator()(double s) const;
  double mass() const;
  double lower() const { return grid_.front(); }
  double upper() const { return grid_.back(); }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> grid_;
  std::vector<double> values_;
};

struct Interval {
  double lo;
  double hi;
};

struct SupportRadius {
  double radius;  // half-length of the support interval
  double center;  // its midpoint
};

/// Compactly supported probability measure on the line: finitely many atoms
/// plus an optional tabulated density. Immutable once built.
class Measure1D {
 public:
  /// Validates weights, density values and total mass.
  static Measure1D create(std::vector<Atom> atoms, std::optional<TabulatedDensity> density,
                          double mass_tol = kDefaultMassTol);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::optional<TabulatedDensity>& density() const { return density_; }
  Interval support() const { return support_; }
  SupportRadius support_radius() const {
    return {0.5 * (support_.hi - support_.lo), 0.5 * (support_.hi + support_.lo)};
  }
  double radius() const { return support_radius().radius; }
  double center() const { return support_radius().center; }
  double total_mass() const;

 private:
  Measure1D(std::vector<Atom> atoms, std::optional<TabulatedDensity> density, Interval support)
      : atoms_(std::move(atoms)), density_(std::move(density)), support_(support) {}

  std::vector<Atom> atoms_;
  std::optional<TabulatedDensity> density_;
  Interval support_;
};

Measure1D make_discrete(std::vector<Atom> atoms, double mass_tol = kDefaultMassTol);

/// Uniform probability density on [a, b].
Measure1D make_uniform(double a, double b);

/// Sum over atoms plus adaptive-Simpson quadrature of g times the density,
/// one grid segment at a time so the interpolation kinks never fall inside a
/// panel.
double integrate(const Measure1D& mu, const std::function<double(double)>& g,
                 double integ_tol = kDefaultIntegTol);

/// Image of mu under s -> lambda*s + shift.
Measure1D pushforward_affine(const Measure1D& mu, double lambda, double shift);

/// Translate mu so its support interval is centered at the origin.
inline Measure1D centered(const Measure1D& mu) {
  return pushforward_affine(mu, 1.0, -mu.center());
}

/// {"atoms": [{"x": .., "w": ..}], "density": {"grid": [..], "values": [..]} | null}
Measure1D measure_from_json(const nlohmann::json& doc, double mass_tol = kDefaultMassTol);
nlohmann::json measure_to_json(const Measure1D& mu);
Measure1D load_measure(const std::filesystem::path& path, double mass_tol = kDefaultMassTol);

}  // namespace lsi
