#pragma once

#include <functional>
#include <string>
#include <vector>

#include "halfline/measure.hpp"

namespace halfline {

enum class Regime { elastic, sticky, ehbm, reflected, absorbed, mixed, killed };

// Refinement of the regime where corrections or rates depend on it.
enum class Subcase {
  none,
  alpha_below_two,          // reflected, alpha < 2
  alpha_two,                // reflected, alpha = 2
  alpha_above_two,          // reflected, alpha > 2
  beta_zero,                // elastic with beta = 0
  beta_above_one,           // killed via beta > 1
  alpha_below_one_plus_beta // killed via alpha < 1 + beta, beta <= 1
};

std::string to_string(Regime r);
std::string to_string(Subcase s);

// Boundary triple of the Wentzell condition c1 f(0) - c2 f'(0) + c3/2 f''(0) = 0.
struct BoundaryCondition {
  double c1 = 0.0;
  double c2 = 1.0;
  double c3 = 0.0;
  Regime regime = Regime::reflected;

  // The regime is read off the zero pattern. Throws std::invalid_argument
  // unless the triple is nonnegative and sums to one within 1e-12.
  static BoundaryCondition make(double c1, double c2, double c3);
};

struct Classification {
  Regime regime = Regime::reflected;
  Subcase subcase = Subcase::none;
  BoundaryCondition cond;
  bool rate_available = false;
  double predicted_exponent = 0.0;  // NaN when rate_available is false
  bool shifted = false;             // killed limit reached by the shifted walk
};

// Total over [0, inf]^2; A = 0 is read as alpha = inf and B = 0 as beta = inf.
// Throws std::domain_error("no-limit-classified") only for invalid input.
Classification classify(double alpha, double beta, double A, double B);

BoundaryCondition params_to_limit(double alpha, double beta, double A, double B);

// Transition density of the limit process from x to y at time t (reflected,
// absorbed, killed and elastic conditions only).
double kernel_closed_form(const BoundaryCondition& cond, double t, double x, double y);

// Probability that the process started at x has left (0, inf) by time t,
// i.e. the mass missing from the density.
double closed_form_deficit(const BoundaryCondition& cond, double t, double x);

struct GridSpec {
  double x_max = 11.0;
  double dx = 0.011;
  int steps = 2000;
  bool richardson = true;  // combine (dx, steps) with (dx/2, 2 steps)

  static GridSpec defaults(double u, double t);
};

// Closed-form law sampled on the grid, with the deficit booked as an atom
// at zero (absorbed) or at the cemetery (killed, elastic).
ContinuousLaw closed_form_law(const BoundaryCondition& cond, double u, double t,
                              const GridSpec& grid);

// Forward heat equation with the dynamic boundary condition, solved by a
// conservative finite-volume Crank-Nicolson scheme.
ContinuousLaw wentzell_reference(const BoundaryCondition& cond, double u, double t,
                                 const GridSpec& grid);

// Evolves an arbitrary law on the grid (density spacing must equal grid.dx)
// for time t with the same scheme, without extrapolation.
ContinuousLaw wentzell_evolve(const BoundaryCondition& cond, const ContinuousLaw& start,
                              double t, const GridSpec& grid);

// T(t) f on the grid nodes, by the adjoint of the forward scheme.
std::vector<double> wentzell_backward(const BoundaryCondition& cond,
                                      const std::function<double(double)>& f, double t,
                                      const GridSpec& grid);

// Closed form where available, otherwise the PDE reference.
ContinuousLaw limit_law(const BoundaryCondition& cond, double u, double t,
                        const GridSpec& grid);

// atom_zero f(0) + Simpson quadrature of density * f.
double integrate_against(const ContinuousLaw& law, const std::function<double(double)>& f);

}  // namespace halfline
