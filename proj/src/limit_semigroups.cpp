#include "halfline/limit_semigroups.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "halfline/lattice_walk.hpp"
#include "halfline/numerics.hpp"

namespace halfline {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::elastic: return "elastic";
    case Regime::sticky: return "sticky";
    case Regime::ehbm: return "ehbm";
    case Regime::reflected: return "reflected";
    case Regime::absorbed: return "absorbed";
    case Regime::mixed: return "mixed";
    case Regime::killed: return "killed";
  }
  return "unknown";
}

std::string to_string(Subcase s) {
  switch (s) {
    case Subcase::none: return "none";
    case Subcase::alpha_below_two: return "alpha<2";
    case Subcase::alpha_two: return "alpha=2";
    case Subcase::alpha_above_two: return "alpha>2";
    case Subcase::beta_zero: return "beta=0";
    case Subcase::beta_above_one: return "beta>1";
    case Subcase::alpha_below_one_plus_beta: return "alpha<1+beta";
  }
  return "unknown";
}

BoundaryCondition BoundaryCondition::make(double c1, double c2, double c3) {
  if (!(c1 >= 0 && c2 >= 0 && c3 >= 0))
    throw std::invalid_argument("boundary triple must be nonnegative");
  if (std::abs(c1 + c2 + c3 - 1.0) > 1e-12)
    throw std::invalid_argument("boundary triple must sum to one");
  BoundaryCondition b{c1, c2, c3, Regime::mixed};
  if (c1 == 1.0)
    b.regime = Regime::killed;
  else if (c3 == 1.0)
    b.regime = Regime::absorbed;
  else if (c2 == 1.0)
    b.regime = Regime::reflected;
  else if (c3 == 0.0)
    b.regime = Regime::elastic;
  else if (c1 == 0.0)
    b.regime = Regime::sticky;
  else if (c2 == 0.0)
    b.regime = Regime::ehbm;
  return b;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Classification rated(Regime r, Subcase s, BoundaryCondition c, double exponent) {
  Classification out{r, s, c, std::isfinite(exponent), exponent, false};
  if (!out.rate_available) out.predicted_exponent = kNaN;
  return out;
}

Classification killed(Subcase s) {
  Classification out{Regime::killed, s, BoundaryCondition::make(1, 0, 0), false, kNaN, true};
  return out;
}

}  // namespace

Classification classify(double alpha, double beta, double A, double B) {
  if (std::isnan(alpha) || std::isnan(beta) || std::isnan(A) || std::isnan(B) || alpha < 0 ||
      beta < 0 || A < 0 || B < 0 || std::isinf(A) || std::isinf(B))
    throw std::domain_error("no-limit-classified");
  const double a = A == 0.0 ? kInf : alpha;
  const double b = B == 0.0 ? kInf : beta;
  if (b < 1.0) {
    if (a < b + 1.0) return killed(Subcase::alpha_below_one_plus_beta);
    if (a == b + 1.0) {
      auto c = BoundaryCondition::make(A / (A + B), B / (A + B), 0.0);
      if (b == 0.0) return rated(Regime::elastic, Subcase::beta_zero, c, 1.0);
      return rated(Regime::elastic, Subcase::none, c, std::min(b, 1.0 - b));
    }
    const auto c = BoundaryCondition::make(0, 1, 0);
    // With beta = 0 every displayed rate degenerates to n^0.
    if (a < 2.0) {
      const double e = b == 0.0 ? kNaN : std::min({b, a - b - 1.0, 2.0 - a});
      return rated(Regime::reflected, Subcase::alpha_below_two, c, e);
    }
    if (a == 2.0) {
      const double e = b == 0.0 ? kNaN : std::min(b, 1.0 - b);
      return rated(Regime::reflected, Subcase::alpha_two, c, e);
    }
    const double e = b == 0.0 ? kNaN : std::min({a - 2.0, b, 1.0 - b});
    return rated(Regime::reflected, Subcase::alpha_above_two, c, e);
  }
  if (b == 1.0) {
    if (a < 2.0) return killed(Subcase::alpha_below_one_plus_beta);
    if (a == 2.0) {
      const double s = 1.0 + A + B;
      return rated(Regime::mixed, Subcase::none, BoundaryCondition::make(A / s, B / s, 1.0 / s),
                   1.0);
    }
    return rated(Regime::sticky, Subcase::none,
                 BoundaryCondition::make(0.0, B / (B + 1.0), 1.0 / (B + 1.0)),
                 std::min(a - 2.0, 1.0));
  }
  if (a < 2.0) return killed(Subcase::beta_above_one);
  if (a == 2.0) {
    const auto c = BoundaryCondition::make(A / (1.0 + A), 0.0, 1.0 / (1.0 + A));
    return rated(Regime::ehbm, Subcase::none, c, b > 2.0 ? std::min(b - 2.0, 1.0) : kNaN);
  }
  return rated(Regime::absorbed, Subcase::none, BoundaryCondition::make(0, 0, 1),
               b > 2.0 ? std::min({a - 2.0, b - 2.0, 1.0}) : kNaN);
}

BoundaryCondition params_to_limit(double alpha, double beta, double A, double B) {
  return classify(alpha, beta, A, B).cond;
}

namespace {

double heat(double t, double z) { return std::exp(-z * z / (2.0 * t)) / std::sqrt(2.0 * M_PI * t); }

// Integral over z > 0 of exp(-kappa z) times the heat kernel at s + z.
double robin_tail(double t, double kappa, double s) {
  const double r = std::sqrt(2.0 * t);
  return 0.5 * std::exp(-s * s / (2.0 * t)) * erfcx((s + kappa * t) / r);
}

bool has_closed_form(Regime r) {
  return r == Regime::reflected || r == Regime::absorbed || r == Regime::killed ||
         r == Regime::elastic;
}

}  // namespace

double kernel_closed_form(const BoundaryCondition& cond, double t, double x, double y) {
  if (!(t > 0.0)) throw std::invalid_argument("kernel needs t > 0");
  if (x < 0 || y < 0) throw std::invalid_argument("kernel needs x, y >= 0");
  switch (cond.regime) {
    case Regime::reflected: return heat(t, y - x) + heat(t, y + x);
    case Regime::absorbed:
    case Regime::killed: return std::max(0.0, heat(t, y - x) - heat(t, y + x));
    case Regime::elastic: {
      const double kappa = cond.c1 / cond.c2;
      const double v = heat(t, y - x) + heat(t, y + x) - 2.0 * kappa * robin_tail(t, kappa, x + y);
      return std::max(0.0, v);
    }
    default: throw std::invalid_argument("no closed-form kernel for regime " + to_string(cond.regime));
  }
}

double closed_form_deficit(const BoundaryCondition& cond, double t, double x) {
  if (!(t > 0.0)) throw std::invalid_argument("kernel needs t > 0");
  const double r = std::sqrt(2.0 * t);
  switch (cond.regime) {
    case Regime::reflected: return 0.0;
    case Regime::absorbed:
    case Regime::killed: return std::erfc(x / r);
    case Regime::elastic: {
      const double kappa = cond.c1 / cond.c2;
      return std::erfc(x / r) - std::exp(-x * x / (2.0 * t)) * erfcx((x + kappa * t) / r);
    }
    default: throw std::invalid_argument("no closed-form kernel for regime " + to_string(cond.regime));
  }
}

GridSpec GridSpec::defaults(double u, double t) {
  GridSpec g;
  g.x_max = default_x_max(u, t);
  g.dx = 1e-3 * g.x_max;
  g.steps = 2000;
  return g;
}

namespace {

std::size_t grid_intervals(const GridSpec& g) {
  if (!(g.x_max > 0) || !(g.dx > 0) || g.dx > g.x_max || g.steps < 1)
    throw std::invalid_argument("invalid grid specification");
  return static_cast<std::size_t>(std::llround(g.x_max / g.dx));
}

enum class BoundaryMode { coupled_atom, separate_atom, robin, dirichlet };

// Semi-discrete system C U' = K U on nodes 0..N with tridiagonal K. The
// meaning of U[0] depends on the boundary mode: the density at 0 for the
// coupled and Robin modes, the atom at 0 for the separate mode, and a
// frozen zero for the Dirichlet (killed) mode.
struct Scheme {
  BoundaryMode mode;
  double h;
  std::vector<double> cap, lower, diag, upper;
  std::size_t kill_node = 0;
  double kill_coef = 0.0;  // rate of mass flow to the cemetery per unit U[kill_node]
  double atom_per_p0 = 0.0;

  Scheme(const BoundaryCondition& c, std::size_t N, double h_) : h(h_) {
    const std::size_t S = N + 1;
    cap.assign(S, h);
    lower.assign(S, 0.5 / h);
    upper.assign(S, 0.5 / h);
    diag.assign(S, -1.0 / h);
    cap[N] = 0.5 * h;
    diag[N] = -0.5 / h;
    upper[N] = 0.0;
    lower[0] = 0.0;
    if (c.regime == Regime::killed) {
      mode = BoundaryMode::dirichlet;
      cap[0] = 1.0;
      diag[0] = 0.0;
      upper[0] = 0.0;
      lower[1] = 0.0;
      kill_node = 1;
      kill_coef = 0.5 / h;
    } else if (c.c2 == 0.0) {
      mode = BoundaryMode::separate_atom;
      cap[0] = 1.0;
      diag[0] = -c.c1 / c.c3;
      upper[0] = 0.5 / h;
      lower[1] = 0.0;
      kill_coef = c.c1 / c.c3;
    } else if (c.c3 == 0.0) {
      mode = BoundaryMode::robin;
      cap[0] = 0.5 * h;
      diag[0] = -0.5 / h - 0.5 * c.c1 / c.c2;
      kill_coef = 0.5 * c.c1 / c.c2;
    } else {
      mode = BoundaryMode::coupled_atom;
      atom_per_p0 = c.c3 / (2.0 * c.c2);
      cap[0] = atom_per_p0 + 0.5 * h;
      diag[0] = -0.5 / h - c.c1 / (2.0 * c.c2);
      kill_coef = c.c1 / (2.0 * c.c2);
    }
  }

  // Swaps to the adjoint operator C U' = K^T U used by the backward equation.
  void transpose() {
    const std::size_t S = diag.size();
    std::vector<double> lo(S, 0.0), up(S, 0.0);
    for (std::size_t i = 0; i + 1 < S; ++i) {
      up[i] = lower[i + 1];
      lo[i + 1] = upper[i];
    }
    lower.swap(lo);
    upper.swap(up);
  }

  std::vector<double> apply(const std::vector<double>& U) const {
    const std::size_t S = U.size();
    std::vector<double> out(S);
    for (std::size_t i = 0; i < S; ++i) {
      double v = diag[i] * U[i];
      if (i > 0) v += lower[i] * U[i - 1];
      if (i + 1 < S) v += upper[i] * U[i + 1];
      out[i] = v;
    }
    return out;
  }
};

// Factorized (C - dt/2 K) for repeated Crank-Nicolson solves.
struct CrankNicolson {
  const Scheme& s;
  double dt;
  std::vector<double> l, d, u;

  CrankNicolson(const Scheme& sc, double dt_) : s(sc), dt(dt_) {
    const std::size_t S = s.diag.size();
    l.resize(S);
    d.resize(S);
    u.resize(S);
    for (std::size_t i = 0; i < S; ++i) {
      l[i] = -0.5 * dt * s.lower[i];
      d[i] = s.cap[i] - 0.5 * dt * s.diag[i];
      u[i] = -0.5 * dt * s.upper[i];
    }
    for (std::size_t i = 1; i < S; ++i) {
      l[i] /= d[i - 1];
      d[i] -= l[i] * u[i - 1];
    }
  }

  void step(std::vector<double>& U) const {
    const std::size_t S = U.size();
    std::vector<double> rhs = s.apply(U);
    for (std::size_t i = 0; i < S; ++i) rhs[i] = s.cap[i] * U[i] + 0.5 * dt * rhs[i];
    for (std::size_t i = 1; i < S; ++i) rhs[i] -= l[i] * rhs[i - 1];
    rhs[S - 1] /= d[S - 1];
    for (std::size_t i = S - 1; i-- > 0;) rhs[i] = (rhs[i] - u[i] * rhs[i + 1]) / d[i];
    U.swap(rhs);
  }
};

std::vector<double> law_to_state(const Scheme& sc, const ContinuousLaw& law, double& delta) {
  std::vector<double> U = law.density;
  switch (sc.mode) {
    case BoundaryMode::coupled_atom:
      U[0] = (law.atom_zero + 0.5 * sc.h * law.density[0]) / sc.cap[0];
      break;
    case BoundaryMode::separate_atom: U[0] = law.atom_zero + 0.5 * sc.h * law.density[0]; break;
    case BoundaryMode::robin: U[0] = law.density[0] + law.atom_zero / (0.5 * sc.h); break;
    case BoundaryMode::dirichlet:
      delta += law.atom_zero + 0.5 * sc.h * law.density[0];
      U[0] = 0.0;
      break;
  }
  return U;
}

ContinuousLaw state_to_law(const Scheme& sc, const std::vector<double>& U, double delta) {
  ContinuousLaw law;
  law.dx = sc.h;
  law.density = U;
  law.atom_delta = delta;
  switch (sc.mode) {
    case BoundaryMode::coupled_atom: law.atom_zero = sc.atom_per_p0 * U[0]; break;
    case BoundaryMode::separate_atom:
      law.atom_zero = U[0];
      law.density[0] = 0.0;
      break;
    case BoundaryMode::robin: break;
    case BoundaryMode::dirichlet: law.density[0] = 0.0; break;
  }
  return law;
}

ContinuousLaw evolve_raw(const BoundaryCondition& cond, const ContinuousLaw& start, double t,
                         std::size_t N, double h, int steps) {
  Scheme sc(cond, N, h);
  double delta = start.atom_delta;
  std::vector<double> U = law_to_state(sc, start, delta);
  if (t > 0.0) {
    const double dt = t / steps;
    CrankNicolson cn(sc, dt);
    for (int s = 0; s < steps; ++s) {
      const double before = U[sc.kill_node];
      cn.step(U);
      delta += 0.5 * dt * sc.kill_coef * (before + U[sc.kill_node]);
    }
  }
  return state_to_law(sc, U, delta);
}

// Image-difference law at a short time t0, used as the smoothed start.
ContinuousLaw short_time_start(double u, double t0, std::size_t N, double h) {
  ContinuousLaw law;
  law.dx = h;
  law.density.resize(N + 1);
  for (std::size_t i = 0; i <= N; ++i) {
    const double y = static_cast<double>(i) * h;
    law.density[i] = std::max(0.0, heat(t0, y - u) - heat(t0, y + u));
  }
  law.atom_delta = std::erfc(u / std::sqrt(2.0 * t0));
  return law;
}

ContinuousLaw reference_once(const BoundaryCondition& cond, double u, double t, std::size_t N,
                             double h, int steps) {
  double t0 = std::min(0.5 * t, (u / 8.0) * (u / 8.0));
  t0 = std::min(std::max(t0, 9.0 * h * h), 0.5 * t);
  ContinuousLaw start = short_time_start(u, t0, N, h);
  // The smoothed start misses only the mass that reached 0 before t0, far
  // below every tolerance. Without killing at 0 it cannot be in the cemetery.
  if (cond.c1 == 0.0) {
    start.atom_zero = start.atom_delta;
    start.atom_delta = 0.0;
  }
  return evolve_raw(cond, start, t - t0, N, h, steps);
}

ContinuousLaw extrapolate(const ContinuousLaw& coarse, const ContinuousLaw& fine) {
  ContinuousLaw out = coarse;
  for (std::size_t i = 0; i < out.density.size(); ++i)
    out.density[i] = (4.0 * fine.density[2 * i] - coarse.density[i]) / 3.0;
  out.atom_zero = (4.0 * fine.atom_zero - coarse.atom_zero) / 3.0;
  out.atom_delta = (4.0 * fine.atom_delta - coarse.atom_delta) / 3.0;
  return out;
}

}  // namespace

ContinuousLaw closed_form_law(const BoundaryCondition& cond, double u, double t,
                              const GridSpec& grid) {
  const std::size_t N = grid_intervals(grid);
  const double h = grid.x_max / static_cast<double>(N);
  ContinuousLaw law;
  law.dx = h;
  law.density.resize(N + 1);
  for (std::size_t i = 0; i <= N; ++i)
    law.density[i] = kernel_closed_form(cond, t, u, static_cast<double>(i) * h);
  const double deficit = closed_form_deficit(cond, t, u);
  if (cond.regime == Regime::absorbed)
    law.atom_zero = deficit;
  else
    law.atom_delta = deficit;
  return law;
}

ContinuousLaw wentzell_reference(const BoundaryCondition& cond, double u, double t,
                                 const GridSpec& grid) {
  if (!(u > 0.0)) throw std::invalid_argument("reference start must be positive");
  if (!(t > 0.0)) throw std::invalid_argument("reference time must be positive");
  const std::size_t N = grid_intervals(grid);
  const double h = grid.x_max / static_cast<double>(N);
  ContinuousLaw coarse = reference_once(cond, u, t, N, h, grid.steps);
  if (!grid.richardson) return coarse;
  ContinuousLaw fine = reference_once(cond, u, t, 2 * N, 0.5 * h, 2 * grid.steps);
  return extrapolate(coarse, fine);
}

ContinuousLaw wentzell_evolve(const BoundaryCondition& cond, const ContinuousLaw& start, double t,
                              const GridSpec& grid) {
  if (!(t >= 0.0)) throw std::invalid_argument("time must be nonnegative");
  const std::size_t N = grid_intervals(grid);
  const double h = grid.x_max / static_cast<double>(N);
  if (start.density.size() != N + 1 || std::abs(start.dx - h) > 1e-12 * h)
    throw std::invalid_argument("start law does not live on the grid");
  return evolve_raw(cond, start, t, N, h, grid.steps);
}

namespace {

std::vector<double> backward_once(const BoundaryCondition& cond,
                                  const std::function<double(double)>& f, double t,
                                  std::size_t N, double h, int steps) {
  Scheme sc(cond, N, h);
  sc.transpose();
  std::vector<double> U(N + 1);
  for (std::size_t i = 0; i <= N; ++i) U[i] = f(static_cast<double>(i) * h);
  if (sc.mode == BoundaryMode::dirichlet) U[0] = 0.0;
  if (t > 0.0) {
    CrankNicolson cn(sc, t / steps);
    for (int s = 0; s < steps; ++s) cn.step(U);
  }
  return U;
}

}  // namespace

std::vector<double> wentzell_backward(const BoundaryCondition& cond,
                                      const std::function<double(double)>& f, double t,
                                      const GridSpec& grid) {
  if (!(t >= 0.0)) throw std::invalid_argument("time must be nonnegative");
  const std::size_t N = grid_intervals(grid);
  const double h = grid.x_max / static_cast<double>(N);
  std::vector<double> coarse = backward_once(cond, f, t, N, h, grid.steps);
  if (!grid.richardson || t == 0.0) return coarse;
  const std::vector<double> fine = backward_once(cond, f, t, 2 * N, 0.5 * h, 2 * grid.steps);
  for (std::size_t i = 0; i <= N; ++i) coarse[i] = (4.0 * fine[2 * i] - coarse[i]) / 3.0;
  return coarse;
}

ContinuousLaw limit_law(const BoundaryCondition& cond, double u, double t, const GridSpec& grid) {
  if (has_closed_form(cond.regime)) return closed_form_law(cond, u, t, grid);
  return wentzell_reference(cond, u, t, grid);
}

double integrate_against(const ContinuousLaw& law, const std::function<double(double)>& f) {
  std::vector<double> y(law.density.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = law.density[i] * f(law.x(i));
  return law.atom_zero * f(0.0) + simpson(y, law.dx);
}

}  // namespace halfline
