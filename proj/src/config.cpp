#include "halfline/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <sstream>

#include "halfline/lattice_walk.hpp"
#include "halfline/measure.hpp"
#include "halfline/numerics.hpp"

namespace halfline {

namespace pt = boost::property_tree;

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

std::string real_text(double v) { return std::isinf(v) ? "inf" : format_double(v); }

template <class T>
T parse_integer(const std::string& key, const std::string& s) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size() || v < 0) throw ConfigError("");
    return static_cast<T>(v);
  } catch (const std::exception&) {
    throw ConfigError("invalid integer for " + key + ": '" + s + "'");
  }
}

}  // namespace

double parse_real(const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "inf" || s == "+inf" || s == "infinity") return kInf;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || std::isnan(v)) throw ConfigError("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid number: '" + s + "'");
  }
}

std::vector<int> parse_n_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("empty entry in n list");
    out.push_back(parse_integer<int>("n", item));
  }
  if (out.empty()) throw ConfigError("n list is empty");
  return out;
}

void apply_regime_override(ExperimentConfig& cfg, const std::string& spec) {
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("regime entry needs key=value: '" + item + "'");
    const std::string key = trim(item.substr(0, eq));
    const double v = parse_real(item.substr(eq + 1));
    if (key == "alpha")
      cfg.alpha = v;
    else if (key == "beta")
      cfg.beta = v;
    else if (key == "A")
      cfg.A = v;
    else if (key == "B")
      cfg.B = v;
    else
      throw ConfigError("unknown regime key '" + key + "'");
  }
}

GridSpec ExperimentConfig::grid() const {
  GridSpec g = GridSpec::defaults(u, t);
  if (x_max) g.x_max = *x_max;
  g.dx = dx ? *dx : 1e-3 * g.x_max;
  if (steps) g.steps = *steps;
  g.richardson = richardson;
  return g;
}

void ExperimentConfig::validate() const {
  if (!(alpha >= 0) || !(beta >= 0)) throw ConfigError("alpha and beta must be nonnegative");
  if (!(A >= 0) || !(B >= 0) || std::isinf(A) || std::isinf(B))
    throw ConfigError("A and B must be finite and nonnegative");
  if (!(t > 0) || std::isinf(t)) throw ConfigError("t must be positive");
  if (!(u > 0) || std::isinf(u)) throw ConfigError("u must be positive");
  if (ns.empty()) throw ConfigError("n list is empty");
  for (int n : ns)
    if (n < 1) throw ConfigError("n values must be positive");
  if (K < 1 || J < 1 || K > 60 || J > 60) throw ConfigError("K and J must lie in [1, 60]");
  if (threads < 1) throw ConfigError("threads must be at least 1");
  const GridSpec g = grid();
  if (!(g.x_max > 0) || !(g.dx > 0) || g.dx > g.x_max || g.steps < 1)
    throw ConfigError("invalid grid specification");
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream os;
  os << "alpha=" << real_text(alpha) << " beta=" << real_text(beta) << " A=" << real_text(A)
     << " B=" << real_text(B) << " t=" << real_text(t) << " u=" << real_text(u) << " n=";
  for (std::size_t i = 0; i < ns.size(); ++i) os << (i ? "," : "") << ns[i];
  os << " K=" << K << " J=" << J << " seed=" << seed << " paths=" << paths;
  const GridSpec g = grid();
  os << " x_max=" << real_text(g.x_max) << " dx=" << real_text(g.dx) << " steps=" << g.steps
     << " richardson=" << (g.richardson ? 1 : 0);
  return os.str();
}

std::string ExperimentConfig::to_ini() const {
  std::ostringstream os;
  os << "[regime]\nalpha = " << real_text(alpha) << "\nbeta = " << real_text(beta)
     << "\nA = " << real_text(A) << "\nB = " << real_text(B) << "\n\n";
  os << "[run]\nt = " << real_text(t) << "\nu = " << real_text(u) << "\nn = ";
  for (std::size_t i = 0; i < ns.size(); ++i) os << (i ? "," : "") << ns[i];
  os << "\nseed = " << seed << "\npaths = " << paths << "\n\n";
  os << "[family]\nK = " << K << "\nJ = " << J << "\n\n";
  const GridSpec g = grid();
  os << "[grid]\nx_max = " << real_text(g.x_max) << "\ndx = " << real_text(g.dx)
     << "\nsteps = " << g.steps << "\nrichardson = " << (g.richardson ? 1 : 0) << "\n";
  return os.str();
}

ExperimentConfig parse_config_text(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream is(text);
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.message());
  }
  ExperimentConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError("key '" + section + "' outside of a section");
    for (const auto& [key, node] : body) {
      const std::string v = node.get_value<std::string>();
      const std::string where = section + "." + key;
      if (section == "regime") {
        if (key == "alpha")
          cfg.alpha = parse_real(v);
        else if (key == "beta")
          cfg.beta = parse_real(v);
        else if (key == "A")
          cfg.A = parse_real(v);
        else if (key == "B")
          cfg.B = parse_real(v);
        else
          throw ConfigError("unknown key " + where);
      } else if (section == "run") {
        if (key == "t")
          cfg.t = parse_real(v);
        else if (key == "u")
          cfg.u = parse_real(v);
        else if (key == "n")
          cfg.ns = parse_n_list(v);
        else if (key == "seed")
          cfg.seed = parse_integer<std::uint64_t>(where, trim(v));
        else if (key == "paths")
          cfg.paths = parse_integer<std::size_t>(where, trim(v));
        else if (key == "threads")
          cfg.threads = parse_integer<unsigned>(where, trim(v));
        else
          throw ConfigError("unknown key " + where);
      } else if (section == "family") {
        if (key == "K")
          cfg.K = parse_integer<int>(where, trim(v));
        else if (key == "J")
          cfg.J = parse_integer<int>(where, trim(v));
        else
          throw ConfigError("unknown key " + where);
      } else if (section == "grid") {
        if (key == "x_max")
          cfg.x_max = parse_real(v);
        else if (key == "dx")
          cfg.dx = parse_real(v);
        else if (key == "steps")
          cfg.steps = parse_integer<int>(where, trim(v));
        else if (key == "richardson")
          cfg.richardson = parse_integer<int>(where, trim(v)) != 0;
        else
          throw ConfigError("unknown key " + where);
      } else {
        throw ConfigError("unknown section [" + section + "]");
      }
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace halfline
