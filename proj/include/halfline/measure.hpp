#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace halfline {

// Law of a lattice walk: mass[i] sits at position (i + offset) / n.
struct LatticeLaw {
  int n = 1;
  int offset = 0;
  std::vector<double> mass;
  double delta = 0.0;

  double position(std::size_t i) const {
    return (static_cast<double>(i) + offset) / n;
  }
  double total() const;
};

// Law on [0, x_max] with an atom at 0, a density on the uniform grid
// x_i = i * dx and an atom at the cemetery.
struct ContinuousLaw {
  double atom_delta = 0.0;
  double atom_zero = 0.0;
  double dx = 0.0;
  std::vector<double> density;

  double x(std::size_t i) const { return static_cast<double>(i) * dx; }
  double total() const;
};

using SubMeasure = std::variant<LatticeLaw, ContinuousLaw>;

double total_mass(const SubMeasure& mu);

// Shortest round-trip decimal form; used for every CSV field so output is
// reproducible byte for byte.
std::string format_double(double v);

void write_lattice_csv(std::ostream& os, const LatticeLaw& law);
void write_continuous_csv(std::ostream& os, const ContinuousLaw& law);
void write_measure_csv(std::ostream& os, const SubMeasure& mu);

// Reads either CSV layout produced above; lines starting with '#' other
// than the lattice descriptor are ignored. Throws std::runtime_error.
SubMeasure read_measure_csv(std::istream& is);

}  // namespace halfline
