#include "halfline/measure.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "halfline/numerics.hpp"

namespace halfline {

double LatticeLaw::total() const {
  double s = delta;
  for (double m : mass) s += m;
  return s;
}

double ContinuousLaw::total() const {
  return atom_delta + atom_zero + simpson(density, dx);
}

double total_mass(const SubMeasure& mu) {
  return std::visit([](const auto& law) { return law.total(); }, mu);
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_lattice_csv(std::ostream& os, const LatticeLaw& law) {
  os << "# lattice n=" << law.n << " offset=" << law.offset << "\n";
  os << "site,mass\n";
  os << "-1," << format_double(law.delta) << "\n";
  for (std::size_t i = 0; i < law.mass.size(); ++i)
    os << i << "," << format_double(law.mass[i]) << "\n";
}

void write_continuous_csv(std::ostream& os, const ContinuousLaw& law) {
  os << "delta_atom," << format_double(law.atom_delta) << "\n";
  os << "zero_atom," << format_double(law.atom_zero) << "\n";
  os << "x,density\n";
  for (std::size_t i = 0; i < law.density.size(); ++i)
    os << format_double(law.x(i)) << "," << format_double(law.density[i]) << "\n";
}

void write_measure_csv(std::ostream& os, const SubMeasure& mu) {
  if (const auto* l = std::get_if<LatticeLaw>(&mu))
    write_lattice_csv(os, *l);
  else
    write_continuous_csv(os, std::get<ContinuousLaw>(mu));
}

namespace {

std::pair<std::string, std::string> split_pair(const std::string& line) {
  const auto comma = line.find(',');
  if (comma == std::string::npos) throw std::runtime_error("malformed CSV line: " + line);
  return {line.substr(0, comma), line.substr(comma + 1)};
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::runtime_error("bad number: " + s);
  return v;
}

}  // namespace

SubMeasure read_measure_csv(std::istream& is) {
  std::string line;
  bool lattice = false;
  LatticeLaw lat;
  ContinuousLaw con;
  std::vector<double> xs;
  std::map<long, double> sites;
  bool saw_header = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ss(line.substr(1));
      std::string word;
      ss >> word;
      if (word == "lattice") {
        lattice = true;
        while (ss >> word) {
          if (word.rfind("n=", 0) == 0) lat.n = std::stoi(word.substr(2));
          if (word.rfind("offset=", 0) == 0) lat.offset = std::stoi(word.substr(7));
        }
      }
      continue;
    }
    auto [a, b] = split_pair(line);
    if (a == "site" || a == "x") {
      saw_header = true;
      continue;
    }
    if (a == "delta_atom") {
      con.atom_delta = to_double(b);
      continue;
    }
    if (a == "zero_atom") {
      con.atom_zero = to_double(b);
      continue;
    }
    if (!saw_header) throw std::runtime_error("CSV data before column header");
    if (lattice) {
      const long site = std::stol(a);
      if (site < -1) throw std::runtime_error("negative site index");
      if (!sites.emplace(site, to_double(b)).second)
        throw std::runtime_error("duplicate site " + a);
    } else {
      xs.push_back(to_double(a));
      con.density.push_back(to_double(b));
    }
  }
  if (lattice) {
    if (lat.n < 1) throw std::runtime_error("lattice scale must be positive");
    long max_site = -1;
    for (const auto& [s, m] : sites) max_site = std::max(max_site, s);
    lat.mass.assign(static_cast<std::size_t>(max_site + 1), 0.0);
    for (const auto& [s, m] : sites) {
      if (s == -1)
        lat.delta = m;
      else
        lat.mass[static_cast<std::size_t>(s)] = m;
    }
    return lat;
  }
  if (xs.size() < 2) throw std::runtime_error("continuous law needs at least two grid points");
  con.dx = xs[1] - xs[0];
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (std::abs(xs[i] - static_cast<double>(i) * con.dx) > 1e-9 * (1.0 + xs[i]))
      throw std::runtime_error("continuous law grid is not uniform from 0");
  }
  return con;
}

}  // namespace halfline
