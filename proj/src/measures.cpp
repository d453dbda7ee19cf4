#include "lsi/measures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "lsi/error.hpp"
#include "lsi/numerics.hpp"

namespace lsi {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw Error(ErrorKind::InvalidMeasure, std::string(what) + " is not finite");
  }
}

}  // namespace

TabulatedDensity::TabulatedDensity(std::vector<double> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (grid_.size() < 2 || grid_.size() != values_.size()) {
    throw Error(ErrorKind::InvalidMeasure,
                "density needs at least two grid points and one value per point");
  }
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    require_finite(grid_[i], "density grid point");
    require_finite(values_[i], "density value");
    if (values_[i] < 0.0) {
      throw Error(ErrorKind::InvalidMeasure, "density value " + std::to_string(values_[i]) +
                                                 " at index " + std::to_string(i) +
                                                 " is negative");
    }
    if (i > 0 && !(grid_[i] > grid_[i - 1])) {
      throw Error(ErrorKind::InvalidMeasure, "density grid must be strictly increasing");
    }
  }
}

double TabulatedDensity::operator()(double s) const {
  if (s < grid_.front() || s > grid_.back()) return 0.0;
  auto it = std::upper_bound(grid_.begin(), grid_.end(), s);
  if (it == grid_.end()) return values_.back();
  const auto hi = static_cast<std::size_t>(it - grid_.begin());
  const auto lo = hi - 1;
  const double t = (s - grid_[lo]) / (grid_[hi] - grid_[lo]);
  return values_[lo] + t * (values_[hi] - values_[lo]);
}

double TabulatedDensity::mass() const {
  double m = 0.0;
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    m += 0.5 * (values_[i] + values_[i - 1]) * (grid_[i] - grid_[i - 1]);
  }
  return m;
}

double Measure1D::total_mass() const {
  double m = 0.0;
  for (const auto& a : atoms_) m += a.w;
  if (density_) m += density_->mass();
  return m;
}

Measure1D Measure1D::create(std::vector<Atom> atoms, std::optional<TabulatedDensity> density,
                            double mass_tol) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double mass = 0.0;
  for (const auto& a : atoms) {
    require_finite(a.x, "atom location");
    require_finite(a.w, "atom weight");
    if (!(a.w > 0.0)) {
      throw Error(ErrorKind::NonpositiveWeight,
                  "atom at x=" + std::to_string(a.x) + " has weight " + std::to_string(a.w));
    }
    lo = std::min(lo, a.x);
    hi = std::max(hi, a.x);
    mass += a.w;
  }
  if (density) {
    lo = std::min(lo, density->lower());
    hi = std::max(hi, density->upper());
    mass += density->mass();
  }
  const double deviation = mass - 1.0;
  if (!(std::abs(deviation) <= mass_tol)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "total mass " << mass << " deviates from 1 by " << deviation << " (mass_tol "
        << mass_tol << ")";
    throw Error(ErrorKind::MassNotNormalized, msg.str());
  }
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.x < b.x; });
  return Measure1D(std::move(atoms), std::move(density), Interval{lo, hi});
}

Measure1D make_discrete(std::vector<Atom> atoms, double mass_tol) {
  return Measure1D::create(std::move(atoms), std::nullopt, mass_tol);
}

Measure1D make_uniform(double a, double b) {
  if (!(b > a)) throw Error(ErrorKind::InvalidMeasure, "uniform density needs a < b");
  const double h = 1.0 / (b - a);
  return Measure1D::create({}, TabulatedDensity({a, b}, {h, h}));
}

double integrate(const Measure1D& mu, const std::function<double(double)>& g, double integ_tol) {
  double total = 0.0;
  for (const auto& a : mu.atoms()) total += a.w * g(a.x);
  if (const auto& d = mu.density()) {
    const auto& grid = d->grid();
    const auto& vals = d->values();
    for (std::size_t i = 1; i < grid.size(); ++i) {
      const double a = grid[i - 1];
      const double b = grid[i];
      const double va = vals[i - 1];
      const double vb = vals[i];
      if (va == 0.0 && vb == 0.0) continue;
      auto integrand = [&](double s) {
        const double t = (s - a) / (b - a);
        return g(s) * (va + t * (vb - va));
      };
      // Tolerance is shared out in proportion to the segment's mass.
      const double seg_mass = 0.5 * (va + vb) * (b - a);
      const double coarse = std::abs(numerics::adaptive_simpson(integrand, a, b, 1e300, 4, 0));
      const double tol = integ_tol * std::max(seg_mass, coarse);
      total += numerics::adaptive_simpson(integrand, a, b, tol, 4, 50);
    }
  }
  return total;
}

Measure1D pushforward_affine(const Measure1D& mu, double lambda, double shift) {
  if (lambda == 0.0 || !std::isfinite(lambda)) {
    throw Error(ErrorKind::ZeroScale, "affine push-forward needs a finite nonzero scale");
  }
  std::vector<Atom> atoms;
  atoms.reserve(mu.atoms().size());
  for (const auto& a : mu.atoms()) atoms.push_back({lambda * a.x + shift, a.w});

  std::optional<TabulatedDensity> density;
  if (const auto& d = mu.density()) {
    std::vector<double> grid;
    std::vector<double> values;
    const double jac = 1.0 / std::abs(lambda);
    for (std::size_t i = 0; i < d->grid().size(); ++i) {
      grid.push_back(lambda * d->grid()[i] + shift);
      values.push_back(d->values()[i] * jac);
    }
    if (lambda < 0.0) {
      std::reverse(grid.begin(), grid.end());
      std::reverse(values.begin(), values.end());
    }
    density.emplace(std::move(grid), std::move(values));
  }
  // Mass is preserved exactly up to rounding; revalidate with a loose tolerance.
  return Measure1D::create(std::move(atoms), std::move(density),
                           std::max(kDefaultMassTol, 2.0 * std::abs(mu.total_mass() - 1.0)));
}

Measure1D measure_from_json(const nlohmann::json& doc, double mass_tol) {
  if (!doc.is_object()) {
    throw Error(ErrorKind::MeasureParseError, "measure document must be a JSON object");
  }
  std::vector<Atom> atoms;
  std::optional<TabulatedDensity> density;
  try {
    if (doc.contains("atoms") && !doc.at("atoms").is_null()) {
      for (const auto& a : doc.at("atoms")) {
        atoms.push_back({a.at("x").get<double>(), a.at("w").get<double>()});
      }
    }
    if (doc.contains("density") && !doc.at("density").is_null()) {
      const auto& d = doc.at("density");
      density.emplace(d.at("grid").get<std::vector<double>>(),
                      d.at("values").get<std::vector<double>>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MeasureParseError, e.what());
  }
  return Measure1D::create(std::move(atoms), std::move(density), mass_tol);
}

nlohmann::json measure_to_json(const Measure1D& mu) {
  nlohmann::json doc;
  doc["atoms"] = nlohmann::json::array();
  for (const auto& a : mu.atoms()) doc["atoms"].push_back({{"x", a.x}, {"w", a.w}});
  if (const auto& d = mu.density()) {
    doc["density"] = {{"grid", d->grid()}, {"values", d->values()}};
  } else {
    doc["density"] = nullptr;
  }
  return doc;
}

Measure1D load_measure(const std::filesystem::path& path, double mass_tol) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::MeasureParseError, path.string() + ": cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
    throw Error(ErrorKind::MeasureParseError,
                path.string() + ":" + std::to_string(line) + ": " + e.what());
  }
  try {
    return measure_from_json(doc, mass_tol);
  } catch (const Error& e) {
    throw Error(ErrorKind::MeasureParseError, path.string() + ": " + e.what());
  }
}

}  // namespace lsi
