#include "halfline/corrections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "halfline/numerics.hpp"

namespace halfline {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double flat_top(double u) {
  const double r = u / 4.0;
  const double w = 1.0 - r * r;
  if (w <= 0.0 || 1.0 / w > 600.0) return 0.0;
  return std::exp(-1.0 / w);
}

double npow(int n, double e) { return std::pow(static_cast<double>(n), e); }

}  // namespace

double aux_g_linear(double u) { return u; }
double aux_g_compact(double u) { return u * u * flat_top(u); }
double aux_h(double u) { return M_E * u * flat_top(u); }

CorrectionSpec CorrectionSpec::make(const BoundaryParams& p) {
  return CorrectionSpec{p, classify(p.alpha, p.beta, p.A, p.B)};
}

CorrectionSpec CorrectionSpec::make(const BoundaryParams& p, Regime expected) {
  CorrectionSpec s = make(p);
  if (s.cls.regime != expected)
    throw std::invalid_argument("parameters classify as " + to_string(s.cls.regime) +
                                ", not " + to_string(expected));
  return s;
}

bool CorrectionSpec::is_zero() const {
  switch (cls.regime) {
    case Regime::sticky:
    case Regime::mixed:
    case Regime::ehbm:
    case Regime::absorbed: return true;
    default: return false;
  }
}

double xi_apply(const CorrectionSpec& spec, const BoundaryValues& f, std::size_t site) {
  const auto& p = spec.params;
  const int n = p.n;
  const double u = static_cast<double>(site) / n;
  switch (spec.cls.regime) {
    case Regime::sticky:
    case Regime::mixed:
    case Regime::ehbm:
    case Regime::absorbed: return 0.0;
    case Regime::elastic: {
      const double damp = 1.0 + aux_g_linear(u) / n;
      if (spec.cls.subcase == Subcase::beta_zero)
        return -(1.0 - p.B) * 0.5 * f.f2 / (p.A * n * damp);
      return -0.5 * f.f2 / (p.A * npow(n, 1.0 - p.beta) * damp);
    }
    case Regime::reflected: {
      switch (spec.cls.subcase) {
        case Subcase::alpha_below_two: {
          const double tilde =
              -0.5 * f.f2 / (p.A * npow(n, 2.0 - p.alpha) * (1.0 + aux_g_compact(u) / n));
          const double hat = p.A * f.f0 * aux_h(u) / (p.B * npow(n, p.alpha - p.beta - 1.0));
          return tilde + hat;
        }
        case Subcase::alpha_two:
          return (0.5 * f.f2 + p.A * f.f0) * aux_h(u) / (p.B * npow(n, 1.0 - p.beta));
        default: return 0.5 * f.f2 * aux_h(u) / (p.B * npow(n, 1.0 - p.beta));
      }
    }
    case Regime::killed: {
      const double damp = 1.0 + aux_g_compact(u) / n;
      double num = -f.f1 / n;
      if (spec.cls.subcase == Subcase::alpha_below_one_plus_beta)
        num += (p.B / p.A) * f.f1 * npow(n, p.alpha - p.beta - 1.0);
      return num / damp;
    }
  }
  return 0.0;
}

LatticeFunction phi_apply(const CorrectionSpec& spec, const JetFn& f, std::size_t M) {
  const BoundaryValues bv = BoundaryValues::of(f(0.0));
  LatticeFunction out;
  out.sites.resize(M + 1);
  for (std::size_t i = 0; i <= M; ++i)
    out.sites[i] = f(spec.position(i))[0] + xi_apply(spec, bv, i);
  out.delta = 0.0;
  return out;
}

H2Residual check_H2(const CorrectionSpec& spec, const JetFn& f, std::size_t M) {
  if (M < 2) throw std::invalid_argument("check_H2 needs M >= 2");
  const auto& p = spec.params;
  const LatticeFunction phi = phi_apply(spec, f, M);
  H2Residual r;
  r.n = p.n;
  const double kill = p.kill_rate(), entry = p.entry_rate(), half = p.interior_rate();
  const double gen0 = kill * (0.0 - phi.sites[0]) + entry * (phi.sites[1] - phi.sites[0]);
  r.boundary_residual = std::abs(0.5 * f(spec.position(0))[2] - gen0);
  for (std::size_t i = 1; i < M; ++i) {
    const double gen = half * (phi.sites[i + 1] - 2.0 * phi.sites[i] + phi.sites[i - 1]);
    r.interior_residual =
        std::max(r.interior_residual, std::abs(0.5 * f(spec.position(i))[2] - gen));
  }
  return r;
}

double xi_sup(const CorrectionSpec& spec, const BoundaryValues& f, std::size_t M) {
  double m = 0.0;
  for (std::size_t i = 0; i <= M; ++i) m = std::max(m, std::abs(xi_apply(spec, f, i)));
  return m;
}

double predicted_h2_exponent(const Classification& c, double alpha, double beta) {
  switch (c.regime) {
    case Regime::elastic: return c.subcase == Subcase::beta_zero ? 1.0 : std::min(beta, 1.0 - beta);
    case Regime::sticky: return std::min(alpha - 2.0, 1.0);
    case Regime::ehbm: return beta > 2.0 ? std::min(beta - 2.0, 2.0) : kNaN;
    case Regime::absorbed: return beta > 2.0 ? std::min({alpha - 2.0, beta - 2.0, 2.0}) : kNaN;
    case Regime::mixed: return 1.0;
    case Regime::reflected:
      if (beta == 0.0) return kNaN;
      if (c.subcase == Subcase::alpha_below_two)
        return std::min({alpha - beta - 1.0, beta, 2.0 - alpha});
      if (c.subcase == Subcase::alpha_two) return std::min(beta, 1.0 - beta);
      return std::min({alpha - 2.0, beta, 1.0 - beta});
    case Regime::killed: return kNaN;
  }
  return kNaN;
}

double predicted_h3_exponent(const Classification& c, double alpha, double beta) {
  switch (c.regime) {
    case Regime::elastic: return c.subcase == Subcase::beta_zero ? 1.0 : 1.0 - beta;
    case Regime::reflected:
      if (c.subcase == Subcase::alpha_below_two) return std::min(alpha - beta - 1.0, 2.0 - alpha);
      return 1.0 - beta;
    case Regime::killed:
      if (c.subcase == Subcase::beta_above_one) return 1.0;
      return std::min(1.0, 1.0 + beta - alpha);
    default: return kInf;  // the correction vanishes identically
  }
}

JetFn hypothesis_test_function(const Classification& c) {
  if (c.regime == Regime::killed) return [](double x) { return f_k_jet(1, x); };
  auto fam = std::make_shared<TestFunctionFamily>(c.cond, 1, 2, false);
  return [fam](double x) { return fam->jet(0, 2, x); };
}

}  // namespace halfline
