#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <vector>

#include "halfline/limit_semigroups.hpp"

namespace halfline {

// Value and first four derivatives at a point.
using Jet = std::array<double, 5>;

// Sup norm of x^k exp(-x^2) on [0, inf).
double norm_f_tilde(int k);

// f_k = x^k exp(-x^2) / norm_f_tilde(k) with derivatives.
Jet f_k_jet(int k, double x);

// phi_j(x) = j phi_1(j x), phi_1 = exp(-1/(1-x^2)) / c on (-1, 1).
double mollifier(int j, double x);
Jet mollifier_jet(int j, double x);
double mollifier_constant();  // c = integral of exp(-1/(1-x^2)) over (-1, 1)

// Smooth cutoff, 1 for |j x| <= 1 and 0 for |j x| >= sqrt 2.
double bump(int j, double x);
Jet bump_jet(int j, double x);

// P(x) = a1 x + a2 x^2 + a3 x^3 + a4 x^4 such that exp(-x^2) + P and its
// second derivative both satisfy the boundary condition.
struct BoundaryPolynomial {
  double a1 = 0, a2 = 0, a3 = 0, a4 = 0;
  Jet jet(double x) const;
  // Residuals of the two boundary constraints for exp(-x^2) + P.
  std::array<double, 2> residuals(const BoundaryCondition& c) const;
};

BoundaryPolynomial boundary_polynomial(const BoundaryCondition& cond);

// Doubly indexed family f_{k,j}, k in [k_min, K], j in [0, J]. Index j uses
// the mollifier scale s = max(j, 1). For k >= 5 the function is f_k itself,
// for 1 <= k <= 4 it is the mollified shift of f_k by 4/s, and f_{0,j} is
// exp(-x^2) plus the cut-off boundary polynomial.
class TestFunctionFamily {
 public:
  TestFunctionFamily(const BoundaryCondition& cond, int K, int J, bool killed_mode);

  const BoundaryCondition& cond() const { return cond_; }
  int K() const { return K_; }
  int J() const { return J_; }
  bool killed_mode() const { return killed_; }
  int k_min() const { return killed_ ? 1 : 0; }
  std::size_t size() const;  // number of (k, j) pairs
  std::size_t index(int k, int j) const;
  double weight(int k, int j) const;
  // Sum of all weights left out by truncating at (K, J).
  double tail_bound() const;
  const BoundaryPolynomial& polynomial() const { return poly_; }

  double value(int k, int j, double x) const;
  Jet jet(int k, int j, double x) const;
  double L(int k, int j, double x) const { return 0.5 * jet(k, j, x)[2]; }
  double LL(int k, int j, double x) const { return 0.25 * jet(k, j, x)[4]; }
  // order 1 gives L f = f''/2, order 2 gives L^2 f = f''''/4.
  std::function<double(double)> apply_L(int k, int j, int order) const;

  // Weighted sums sum_i w_i f_{k,j}(x_i) for every pair, laid out by index().
  std::vector<double> integrals(const std::vector<double>& xs,
                                const std::vector<double>& ws) const;

 private:
  double conv_value(int k, int s, double x) const;
  Jet conv_jet(int k, int s, double x) const;

  BoundaryCondition cond_;
  int K_, J_;
  bool killed_;
  BoundaryPolynomial poly_;
};

TestFunctionFamily build_family(const BoundaryCondition& cond, int K, int J,
                                bool killed_mode = false);

struct GrowthReport {
  std::vector<int> js;
  std::vector<double> sup_L;   // sup over k of ||L f_{k,j}||
  std::vector<double> sup_LL;  // sup over k of ||L^2 f_{k,j}||
  double exponent_L = 0.0;
  double exponent_LL = 0.0;
  double C1 = 0.0;  // h1(j) = C1 j^2
  double C2 = 0.0;  // h2(j) = C2 j^4
  double sum_h1 = 0.0;  // sum over j of 2^-j h1(j) for j >= 1
  double sum_h2 = 0.0;
  double sum_norms = 0.0;  // sum over k of 2^-k ||f_k||
  double max_boundary_residual = 0.0;
  bool ok = true;
};

// Measures the growth of ||L f_{k,j}|| and ||L^2 f_{k,j}|| in j and the
// boundary identities of f_{0,j} and L f_{0,j}.
GrowthReport verify_G2_G3(const TestFunctionFamily& fam, int j_lo = 2, int j_hi = 40);

// Sup norm on a grid over [0, x_hi] fine enough to resolve scale 1/s.
double grid_sup(const std::function<double(double)>& g, int s, double x_hi = 8.0);

void write_family_csv(std::ostream& os, const TestFunctionFamily& fam, double x_hi = 5.0,
                      double step = 0.05);

}  // namespace halfline
