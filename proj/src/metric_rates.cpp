#include "halfline/metric_rates.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "halfline/lattice_walk.hpp"

namespace halfline {

namespace {

// Runs body(i) for i in [0, count) on up to `threads` workers with a fixed
// round-robin assignment; results must be written to per-index slots.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += threads) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void check_ladder(const std::vector<int>& ns, double t, double u) {
  if (ns.empty()) throw std::invalid_argument("empty n ladder");
  for (int n : ns)
    if (n < 1) throw std::invalid_argument("ladder entries must be positive");
  if (!(t > 0.0) || !(u > 0.0)) throw std::invalid_argument("ladder needs t > 0 and u > 0");
}

double cubic_at(const std::vector<double>& v, double h, double x) {
  const double s = x / h;
  const auto last = static_cast<long>(v.size()) - 1;
  long i = static_cast<long>(std::floor(s)) - 1;
  i = std::clamp(i, 0L, last - 3);
  double out = 0.0;
  for (long a = i; a < i + 4; ++a) {
    double l = 1.0;
    for (long b = i; b < i + 4; ++b)
      if (b != a) l *= (s - static_cast<double>(b)) / static_cast<double>(a - b);
    out += l * v[static_cast<std::size_t>(a)];
  }
  return out;
}

}  // namespace

std::vector<double> family_integrals(const TestFunctionFamily& fam, const SubMeasure& mu) {
  std::vector<double> xs, ws;
  if (const auto* l = std::get_if<LatticeLaw>(&mu)) {
    xs.resize(l->mass.size());
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = l->position(i);
    ws = l->mass;
  } else {
    const auto& c = std::get<ContinuousLaw>(mu);
    ws = simpson_weights(c.density.size(), c.dx);
    xs.resize(ws.size());
    for (std::size_t i = 0; i < ws.size(); ++i) {
      xs[i] = c.x(i);
      ws[i] *= c.density[i];
    }
    ws[0] += c.atom_zero;
  }
  return fam.integrals(xs, ws);
}

Distance distance_from_integrals(const TestFunctionFamily& fam, const std::vector<double>& a,
                                 const std::vector<double>& b) {
  if (a.size() != fam.size() || b.size() != fam.size())
    throw std::invalid_argument("integral vectors do not match the family");
  Distance d;
  d.truncation_bound = fam.tail_bound();
  for (int k = fam.k_min(); k <= fam.K(); ++k)
    for (int j = 0; j <= fam.J(); ++j) {
      const std::size_t i = fam.index(k, j);
      double diff = std::abs(a[i] - b[i]);
      if (diff >= 1.0) {
        diff = 1.0;
        ++d.clipped;
      }
      d.value += fam.weight(k, j) * diff;
    }
  return d;
}

Distance distance_d(const SubMeasure& mu, const SubMeasure& nu, const TestFunctionFamily& fam) {
  return distance_from_integrals(fam, family_integrals(fam, mu), family_integrals(fam, nu));
}

LatticeLaw lattice_embedding(const ContinuousLaw& law, int n) {
  if (n < 1) throw std::invalid_argument("lattice scale must be positive");
  const std::size_t N = law.density.size();
  const double h = law.dx;
  if (N == 0) {
    LatticeLaw out;
    out.n = n;
    out.delta = law.atom_delta;
    out.mass = {law.atom_zero};
    return out;
  }
  // Cumulative integral of the piecewise quadratic interpolant on cell pairs,
  // with a cubic on the last three cells when their count is odd. Whole
  // segments then integrate to exactly the Simpson mass the law reports.
  const std::size_t intervals = N - 1;
  const std::size_t tail = (intervals % 2 == 1 && intervals >= 3) ? 3 : 0;
  std::vector<std::size_t> seg_start;
  for (std::size_t s = 0; s + 2 <= intervals - tail; s += 2) seg_start.push_back(s);
  if (tail) seg_start.push_back(intervals - 3);
  if (seg_start.empty()) seg_start.push_back(0);
  auto seg_len = [&](std::size_t k) {
    if (intervals < 2) return intervals;
    return (tail && k + 1 == seg_start.size()) ? std::size_t{3} : std::size_t{2};
  };
  // Integral over the first R cells of segment k, in Newton forward form.
  auto seg_integral = [&](std::size_t k, double R) {
    const std::size_t s = seg_start[k], len = seg_len(k);
    const double* y = law.density.data() + s;
    const double d1 = len >= 1 ? y[1] - y[0] : 0.0;
    const double d2 = len >= 2 ? y[2] - 2.0 * y[1] + y[0] : 0.0;
    const double d3 = len >= 3 ? y[3] - 3.0 * y[2] + 3.0 * y[1] - y[0] : 0.0;
    const double R2 = R * R, R3 = R2 * R, R4 = R3 * R;
    return h * (y[0] * R + d1 * R2 / 2.0 + d2 / 2.0 * (R3 / 3.0 - R2 / 2.0) +
                d3 / 6.0 * (R4 / 4.0 - R3 + R2));
  };
  std::vector<double> cum(seg_start.size() + 1, 0.0);
  for (std::size_t k = 0; k < seg_start.size(); ++k)
    cum[k + 1] = cum[k] + seg_integral(k, static_cast<double>(seg_len(k)));
  const double x_end = h * static_cast<double>(intervals);
  auto F = [&](double x) {
    if (x <= 0.0) return 0.0;
    if (x >= x_end) return cum.back();
    const double r = x / h;
    std::size_t k = std::min(static_cast<std::size_t>(r / 2.0), seg_start.size() - 1);
    while (k > 0 && static_cast<double>(seg_start[k]) > r) --k;
    return cum[k] + seg_integral(k, r - static_cast<double>(seg_start[k]));
  };
  LatticeLaw out;
  out.n = n;
  out.delta = law.atom_delta;
  const auto sites = static_cast<std::size_t>(std::floor(x_end * n)) + 1;
  out.mass.resize(sites);
  for (std::size_t i = 0; i < sites; ++i) {
    const double a = (static_cast<double>(i) - 0.5) / n, b = (static_cast<double>(i) + 0.5) / n;
    out.mass[i] = F(b) - F(a);
  }
  out.mass[0] += law.atom_zero;
  return out;
}

namespace {

RateReport ladder(const Classification& cls, double alpha, double beta, double A, double B,
                  double t, double u, const std::vector<int>& ns, const LadderOptions& opt,
                  bool shifted) {
  check_ladder(ns, t, u);
  RateReport r;
  r.regime = cls.regime;
  r.subcase = cls.subcase;
  r.alpha = alpha;
  r.beta = beta;
  r.A = A;
  r.B = B;
  r.t = t;
  r.u = u;
  r.ns = ns;
  const GridSpec grid = opt.grid.value_or(GridSpec::defaults(u, t));
  const ContinuousLaw mu = limit_law(cls.cond, u, t, grid);
  const TestFunctionFamily fam(cls.cond, opt.K, opt.J, shifted);
  r.truncation_bound = fam.tail_bound();
  const std::vector<double> ref = family_integrals(fam, mu);

  std::vector<std::vector<double>> ints(ns.size());
  std::vector<double> delta(ns.size());
  parallel_for(ns.size(), opt.threads, [&](std::size_t i) {
    const int n = ns[i];
    const auto p = BoundaryParams::make(alpha, beta, A, B, n);
    const std::size_t M = default_truncation(n, u, t);
    auto x0 = static_cast<std::size_t>(std::floor(u * n));
    if (shifted && x0 > 0) --x0;  // the shifted start (x0 + 1)/n matches floor(u n)/n
    const LatticeLaw law = distribution_at(p, x0, t, M, RightEdge::reflect, shifted ? 1 : 0);
    ints[i] = family_integrals(fam, law);
    delta[i] = law.delta;
  });

  std::vector<bool> clipped(fam.size(), false);
  for (const auto& v : ints)
    for (std::size_t q = 0; q < v.size(); ++q)
      if (std::abs(v[q] - ref[q]) >= 1.0) clipped[q] = true;
  r.clipped_terms = static_cast<std::size_t>(std::count(clipped.begin(), clipped.end(), true));
  for (std::size_t i = 0; i < ns.size(); ++i) {
    r.d.push_back(distance_from_integrals(fam, ints[i], ref).value);
    double fit_value = 0.0;
    for (int k = fam.k_min(); k <= fam.K(); ++k)
      for (int j = 0; j <= fam.J(); ++j) {
        const std::size_t q = fam.index(k, j);
        if (!clipped[q]) fit_value += fam.weight(k, j) * std::abs(ints[i][q] - ref[q]);
      }
    r.d_fit.push_back(fit_value);
    if (shifted) r.delta_gap.push_back(std::abs(delta[i] - mu.atom_delta));
  }
  std::vector<double> nd(ns.begin(), ns.end());
  r.fit = fit_loglog(nd, r.d_fit);
  return r;
}

}  // namespace

RateReport run_rate_ladder(double alpha, double beta, double A, double B, double t, double u,
                           const std::vector<int>& ns, const LadderOptions& opt) {
  const Classification cls = classify(alpha, beta, A, B);
  if (cls.regime == Regime::killed)
    throw std::invalid_argument("killed regime needs the shifted walk ladder");
  RateReport r = ladder(cls, alpha, beta, A, B, t, u, ns, opt, false);
  r.rate_available = cls.rate_available;
  r.predicted_exponent = cls.predicted_exponent;
  if (r.rate_available) {
    r.pass = std::isfinite(r.fit.exponent) && r.fit.exponent >= opt.tolerance * r.predicted_exponent;
  } else {
    r.pass = true;
    r.note = "rate-unavailable";
  }
  return r;
}

RateReport run_killed_ladder(double alpha, double beta, double A, double B, double t, double u,
                             const std::vector<int>& ns, const LadderOptions& opt) {
  const Classification cls = classify(alpha, beta, A, B);
  if (cls.regime != Regime::killed)
    throw std::invalid_argument("parameters are not in the killed region");
  RateReport r = ladder(cls, alpha, beta, A, B, t, u, ns, opt, true);
  r.rate_available = false;
  r.predicted_exponent = std::numeric_limits<double>::quiet_NaN();
  r.pass = true;
  for (std::size_t i = 1; i < r.d.size(); ++i)
    if (r.d[i - 1] > r.truncation_bound && !(r.d[i] < r.d[i - 1])) r.pass = false;
  r.note = "convergence only";
  return r;
}

void write_rate_csv(std::ostream& os, const RateReport& r) {
  os << "n,d,bound\n";
  for (std::size_t i = 0; i < r.ns.size(); ++i)
    os << r.ns[i] << "," << format_double(r.d[i]) << "," << format_double(r.truncation_bound)
       << "\n";
}

void write_rate_summary(std::ostream& os, const RateReport& r) {
  os << "regime: " << to_string(r.regime);
  if (r.subcase != Subcase::none) os << " (" << to_string(r.subcase) << ")";
  os << "\nparams: alpha=" << format_double(r.alpha) << " beta=" << format_double(r.beta)
     << " A=" << format_double(r.A) << " B=" << format_double(r.B) << " t=" << format_double(r.t)
     << " u=" << format_double(r.u) << "\n";
  os << "fitted exponent: " << format_double(r.fit.exponent)
     << " (log residual " << format_double(r.fit.residual) << ")\n";
  if (r.rate_available)
    os << "predicted exponent: " << format_double(r.predicted_exponent) << "\n";
  else
    os << "predicted exponent: none\n";
  os << "clipped terms: " << r.clipped_terms << "\n";
  os << "series truncation bound: " << format_double(r.truncation_bound) << "\n";
  if (!r.delta_gap.empty()) {
    os << "cemetery mass gap:";
    for (double g : r.delta_gap) os << " " << format_double(g);
    os << "\n";
  }
  if (!r.note.empty()) os << "note: " << r.note << "\n";
  os << "result: " << (r.pass ? "PASS" : "FAIL") << "\n";
}

TrotterKatoReport check_trotter_kato(double alpha, double beta, double A, double B, int k, int j,
                                     double t, const std::vector<int>& ns, double u_for_grid,
                                     unsigned threads) {
  if (!(t >= 0.0)) throw std::invalid_argument("time must be nonnegative");
  const Classification cls = classify(alpha, beta, A, B);
  const bool shifted = cls.regime == Regime::killed;
  const TestFunctionFamily fam(cls.cond, std::max(k, 1), std::max(j, 1), shifted);
  if (k < fam.k_min()) throw std::invalid_argument("index k outside the family");
  auto f = [&](double x) { return fam.value(k, j, x); };
  TrotterKatoReport rep;
  rep.ns = ns;
  rep.predicted_exponent = cls.predicted_exponent;
  rep.error.assign(ns.size(), 0.0);
  if (t == 0.0) return rep;
  const GridSpec grid = GridSpec::defaults(u_for_grid, t);
  const std::vector<double> Tf = wentzell_backward(cls.cond, f, t, grid);
  const double h = grid.x_max / static_cast<double>(Tf.size() - 1);
  parallel_for(ns.size(), threads, [&](std::size_t i) {
    const int n = ns[i];
    const auto p = BoundaryParams::make(alpha, beta, A, B, n);
    const std::size_t M = default_truncation(n, u_for_grid, t);
    const GeneratorMatrix gen = build_generator(p, M);
    const double off = shifted ? 1.0 : 0.0;
    LatticeFunction pf;
    pf.sites.resize(M + 1);
    for (std::size_t s = 0; s <= M; ++s) pf.sites[s] = f((static_cast<double>(s) + off) / n);
    const LatticeFunction Tn = semigroup_apply(gen, t, pf);
    double err = 0.0;
    for (std::size_t s = 0; s <= M; ++s) {
      const double x = (static_cast<double>(s) + off) / n;
      if (x > grid.x_max) break;
      err = std::max(err, std::abs(Tn.sites[s] - cubic_at(Tf, h, x)));
    }
    rep.error[i] = err;
  });
  std::vector<double> nd(ns.begin(), ns.end());
  rep.fit = fit_loglog(nd, rep.error);
  return rep;
}

}  // namespace halfline
