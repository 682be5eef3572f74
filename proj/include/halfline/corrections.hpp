#pragma once

#include <functional>
#include <vector>

#include "halfline/lattice_walk.hpp"
#include "halfline/limit_semigroups.hpp"
#include "halfline/test_functions.hpp"

namespace halfline {

// Auxiliary functions of the correction operators.
double aux_g_linear(double u);   // u, unbounded with Lipschitz constant 1
double aux_g_compact(double u);  // u^2 exp(-1/(1-(u/4)^2)) on |u| < 4
double aux_h(double u);          // e u exp(-1/(1-(u/4)^2)), h'(0) = 1

struct CorrectionSpec {
  BoundaryParams params;
  Classification cls;

  // Classifies the parameters. Throws std::invalid_argument when `expected`
  // is given and does not match the classification.
  static CorrectionSpec make(const BoundaryParams& p);
  static CorrectionSpec make(const BoundaryParams& p, Regime expected);

  // Shifted walk: site i sits at (i + 1) / n.
  int offset() const { return cls.shifted ? 1 : 0; }
  double position(std::size_t site) const {
    return (static_cast<double>(site) + offset()) / params.n;
  }
  bool is_zero() const;
};

struct BoundaryValues {
  double f0 = 0.0, f1 = 0.0, f2 = 0.0;  // f(0), f'(0), f''(0)
  static BoundaryValues of(const Jet& j) { return {j[0], j[1], j[2]}; }
};

// Value of the correction at a lattice site; the cemetery value is 0.
double xi_apply(const CorrectionSpec& spec, const BoundaryValues& f, std::size_t site);

using JetFn = std::function<Jet(double)>;

// Phi_n f = pi_n f + Xi_n f on sites 0..M.
LatticeFunction phi_apply(const CorrectionSpec& spec, const JetFn& f, std::size_t M);

struct H2Residual {
  int n = 0;
  double boundary_residual = 0.0;  // |pi_n L f - n^2 L_n Phi_n f| at site 0
  double interior_residual = 0.0;  // sup over sites 1..M-1
};

// Uses the untruncated generator formula, so sites 0..M-1 are exact.
H2Residual check_H2(const CorrectionSpec& spec, const JetFn& f, std::size_t M);

// sup over sites 0..M of |Xi_n f|.
double xi_sup(const CorrectionSpec& spec, const BoundaryValues& f, std::size_t M);

// Exponents against which the measured decay in n is compared; NaN when
// there is no rate to compare against.
double predicted_h2_exponent(const Classification& c, double alpha, double beta);
double predicted_h3_exponent(const Classification& c, double alpha, double beta);

// Default test function for the hypothesis checks: f_{0,2} of the limit
// condition, or f_1 for the killed regime.
JetFn hypothesis_test_function(const Classification& c);

}  // namespace halfline
