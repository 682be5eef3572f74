#include "halfline/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace halfline {

double erfcx(double w) {
  if (w < 26.0) return std::exp(w * w) * std::erfc(w);
  // Asymptotic series 1/(w sqrt(pi)) (1 - 1/(2w^2) + 3/(4w^4) - ...).
  const double inv = 1.0 / (2.0 * w * w);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 8; ++k) {
    term *= -(2.0 * k - 1.0) * inv;
    sum += term;
  }
  return sum / (w * std::sqrt(M_PI));
}

double simpson(const std::vector<double>& y, double h) {
  const std::size_t n = y.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * h * (y[0] + y[1]);
  std::size_t intervals = n - 1;
  double tail = 0.0;
  if (intervals % 2 == 1) {
    if (intervals == 1) return 0.5 * h * (y[0] + y[1]);
    const std::size_t k = n - 4;
    tail = 3.0 * h / 8.0 * (y[k] + 3.0 * y[k + 1] + 3.0 * y[k + 2] + y[k + 3]);
    intervals -= 3;
  }
  if (intervals == 0) return tail;
  double s = y[0] + y[intervals];
  for (std::size_t i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * y[i];
  return s * h / 3.0 + tail;
}

std::vector<double> simpson_weights(std::size_t n, double h) {
  std::vector<double> w(n, 0.0);
  if (n < 2) return w;
  std::size_t intervals = n - 1;
  if (intervals == 1 || n == 2) {
    w[0] = w[1] = 0.5 * h;
    return w;
  }
  if (intervals % 2 == 1) {
    const std::size_t k = n - 4;
    const double c = 3.0 * h / 8.0;
    w[k] += c;
    w[k + 1] += 3.0 * c;
    w[k + 2] += 3.0 * c;
    w[k + 3] += c;
    intervals -= 3;
  }
  if (intervals == 0) return w;
  w[0] += h / 3.0;
  w[intervals] += h / 3.0;
  for (std::size_t i = 1; i < intervals; ++i) w[i] += (i % 2 ? 4.0 : 2.0) * h / 3.0;
  return w;
}

std::vector<double> solve_tridiagonal(std::vector<double> lower,
                                      std::vector<double> diag,
                                      std::vector<double> upper,
                                      std::vector<double> rhs) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n)
    throw std::invalid_argument("solve_tridiagonal: size mismatch");
  for (std::size_t i = 1; i < n; ++i) {
    const double m = lower[i] / diag[i - 1];
    diag[i] -= m * upper[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;)
    rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
  return rhs;
}

PoissonWeights poisson_weights(double lambda, double tol) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("poisson_weights: negative rate");
  PoissonWeights out;
  if (lambda == 0.0) {
    out.weights = {1.0};
    return out;
  }
  const auto mode = static_cast<std::size_t>(std::floor(lambda));
  // Unnormalized weights relative to the mode; accumulate outward until
  // the relative increments are negligible.
  std::vector<double> right{1.0};
  double w = 1.0;
  for (std::size_t k = mode + 1;; ++k) {
    w *= lambda / static_cast<double>(k);
    right.push_back(w);
    if (w < tol * 1e-3 && static_cast<double>(k) > lambda + 1.0) break;
  }
  std::vector<double> left;
  w = 1.0;
  for (std::size_t k = mode; k > 0; --k) {
    w *= static_cast<double>(k) / lambda;
    left.push_back(w);
    if (w < tol * 1e-3) break;
  }
  double total = 0.0;
  for (double v : left) total += v;
  for (double v : right) total += v;

  // Drop tails below tol/2 of the total from each side.
  std::size_t keep_left = left.size();
  double acc = 0.0;
  while (keep_left > 0 && acc + left[keep_left - 1] < 0.5 * tol * total) {
    acc += left[keep_left - 1];
    --keep_left;
  }
  std::size_t keep_right = right.size();
  acc = 0.0;
  while (keep_right > 1 && acc + right[keep_right - 1] < 0.5 * tol * total) {
    acc += right[keep_right - 1];
    --keep_right;
  }
  out.first = mode - keep_left;
  out.weights.reserve(keep_left + keep_right);
  for (std::size_t i = keep_left; i-- > 0;) out.weights.push_back(left[i] / total);
  for (std::size_t i = 0; i < keep_right; ++i) out.weights.push_back(right[i] / total);
  return out;
}

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  SlopeFit fit;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  fit.points = lx.size();
  if (lx.size() < 2) {
    fit.exponent = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  const double m = static_cast<double>(lx.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  const double slope = sxy / sxx;
  fit.exponent = -slope;
  fit.intercept = my - slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (fit.intercept + slope * lx[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / m);
  return fit;
}

}  // namespace halfline
