#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace halfline {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Scaled complementary error function exp(w^2) erfc(w).
double erfcx(double w);

// Composite Simpson rule on equally spaced samples. An odd number of
// intervals is handled with a 3/8 panel at the right end.
double simpson(const std::vector<double>& y, double h);

// Weights w with simpson(y, h) == sum_i w_i y_i.
std::vector<double> simpson_weights(std::size_t n, double h);

// Thomas algorithm for a tridiagonal system. `lower[0]` and `upper[n-1]`
// are ignored. Inputs are taken by value because they are overwritten.
std::vector<double> solve_tridiagonal(std::vector<double> lower,
                                      std::vector<double> diag,
                                      std::vector<double> upper,
                                      std::vector<double> rhs);

struct PoissonWeights {
  std::size_t first = 0;        // index of weights[0]
  std::vector<double> weights;  // normalized, covering all but < tol of mass
};

// Poisson(lambda) probabilities computed by recurrence outward from the
// mode and renormalized; the two tails that are dropped each carry less
// than tol/2 of the mass.
PoissonWeights poisson_weights(double lambda, double tol = 1e-12);

struct SlopeFit {
  double exponent = 0.0;  // decay exponent p in y ~ C x^{-p}
  double intercept = 0.0;
  double residual = 0.0;  // root mean square residual in log space
  std::size_t points = 0;
};

// Ordinary least squares of log y against log x. Points with y <= 0 are
// skipped; fewer than two usable points give a NaN exponent.
SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace halfline
