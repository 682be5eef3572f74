#include "halfline/lattice_walk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "halfline/numerics.hpp"

#if defined(__SSE2__)
#include <xmmintrin.h>
#endif

namespace halfline {

namespace {

// Tails of the transient law decay far below the smallest normal double;
// subnormal arithmetic there is very slow and contributes nothing.
class FlushSubnormals {
 public:
#if defined(__SSE2__)
  FlushSubnormals() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040u); }
  ~FlushSubnormals() { _mm_setcsr(saved_); }

 private:
  unsigned saved_;
#endif
};

}  // namespace

BoundaryParams BoundaryParams::make(double alpha, double beta, double A, double B, int n) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (std::isnan(alpha) || std::isnan(beta) || std::isnan(A) || std::isnan(B))
    throw std::invalid_argument("boundary parameters must not be NaN");
  if (alpha < 0 || beta < 0) throw std::invalid_argument("exponents must be nonnegative");
  if (A < 0 || B < 0) throw std::invalid_argument("rates must be nonnegative");
  if (!std::isfinite(A) || !std::isfinite(B)) throw std::invalid_argument("rates must be finite");
  BoundaryParams p{alpha, beta, A, B, n};
  if (A == 0.0 || std::isinf(alpha)) {
    p.A = 0.0;
    p.alpha = kInf;
  }
  if (B == 0.0 || std::isinf(beta)) {
    p.B = 0.0;
    p.beta = kInf;
  }
  return p;
}

double BoundaryParams::kill_rate() const {
  if (A == 0.0) return 0.0;
  return A * std::pow(static_cast<double>(n), 2.0 - alpha);
}

double BoundaryParams::entry_rate() const {
  if (B == 0.0) return 0.0;
  return B * std::pow(static_cast<double>(n), 2.0 - beta);
}

double GeneratorMatrix::rate(long i, long j) const {
  if (i == -1) return 0.0;
  const auto si = static_cast<std::size_t>(i);
  if (j == -1) return si == 0 ? kill : 0.0;
  if (j == i + 1) return up[si];
  if (j == i - 1) return down[si];
  if (j == i) return -exit_rate(si);
  return 0.0;
}

double GeneratorMatrix::uniformization_rate() const {
  double lam = 0.0;
  for (std::size_t i = 0; i < sites(); ++i) lam = std::max(lam, exit_rate(i));
  return lam;
}

GeneratorMatrix build_generator(const BoundaryParams& p, std::size_t M, RightEdge edge) {
  if (M < 2) throw std::invalid_argument("truncation M must be at least 2");
  const double kill = p.kill_rate(), entry = p.entry_rate();
  if (!(kill >= 0.0) || !(entry >= 0.0) || !std::isfinite(kill) || !std::isfinite(entry))
    throw std::invalid_argument("boundary rates must be finite and nonnegative");
  GeneratorMatrix g;
  g.edge = edge;
  g.kill = kill;
  g.down.assign(M + 1, p.interior_rate());
  g.up.assign(M + 1, p.interior_rate());
  g.down[0] = 0.0;
  g.up[0] = entry;
  g.up[M] = 0.0;
  if (edge == RightEdge::absorb) g.down[M] = 0.0;
  return g;
}

LatticeFunction semigroup_apply(const GeneratorMatrix& gen, double t, const LatticeFunction& f) {
  if (!(t >= 0.0)) throw std::invalid_argument("time must be nonnegative");
  const std::size_t S = gen.sites();
  if (f.sites.size() != S) throw std::invalid_argument("function size does not match generator");
  if (t == 0.0) return f;
  const double lam = gen.uniformization_rate();
  if (lam == 0.0) {
    bool constant = f.delta == f.sites.front();
    for (double v : f.sites) constant = constant && v == f.delta;
    if (!constant)
      throw std::runtime_error("uniformization rate is zero for a non-constant function");
    return f;
  }
  const PoissonWeights pw = poisson_weights(lam * t);
  const FlushSubnormals ftz;

  std::vector<double> v = f.sites, next(S);
  LatticeFunction out;
  out.sites.assign(S, 0.0);
  out.delta = f.delta;
  const double inv = 1.0 / lam;
  const std::size_t last = pw.first + pw.weights.size();
  for (std::size_t m = 0; m < last; ++m) {
    if (m >= pw.first) {
      const double w = pw.weights[m - pw.first];
      for (std::size_t i = 0; i < S; ++i) out.sites[i] += w * v[i];
    }
    if (m + 1 == last) break;
    // v <- P v with P = I + Q / lam.
    next[0] = v[0] + inv * (gen.up[0] * (v[1] - v[0]) + gen.kill * (f.delta - v[0]));
    for (std::size_t i = 1; i + 1 < S; ++i)
      next[i] = v[i] + inv * (gen.down[i] * (v[i - 1] - v[i]) + gen.up[i] * (v[i + 1] - v[i]));
    next[S - 1] = v[S - 1] + inv * gen.down[S - 1] * (v[S - 2] - v[S - 1]);
    v.swap(next);
  }
  return out;
}

LatticeLaw distribution_at(const BoundaryParams& p, std::size_t x0, double t, std::size_t M,
                           RightEdge edge, int offset) {
  if (x0 > M) throw std::invalid_argument("start site beyond truncation");
  if (!(t >= 0.0)) throw std::invalid_argument("time must be nonnegative");
  const GeneratorMatrix gen = build_generator(p, M, edge);
  const std::size_t S = gen.sites();
  LatticeLaw law;
  law.n = p.n;
  law.offset = offset;
  law.mass.assign(S, 0.0);
  if (t == 0.0) {
    law.mass[x0] = 1.0;
    return law;
  }
  const double lam = gen.uniformization_rate();
  const PoissonWeights pw = poisson_weights(lam * t);
  const double inv = 1.0 / lam;
  const FlushSubnormals ftz;

  std::vector<double> pi(S, 0.0), next(S, 0.0);
  pi[x0] = 1.0;
  double pi_delta = 0.0;
  // Support after m steps lies in [x0 - m, x0 + m]; sweep only that window.
  std::size_t lo = x0, hi = x0;
  std::vector<double> stay(S);
  for (std::size_t i = 0; i < S; ++i) stay[i] = 1.0 - inv * gen.exit_rate(i);

  const std::size_t last = pw.first + pw.weights.size();
  for (std::size_t m = 0; m < last; ++m) {
    if (m >= pw.first) {
      const double w = pw.weights[m - pw.first];
      for (std::size_t i = lo; i <= hi; ++i) law.mass[i] += w * pi[i];
      law.delta += w * pi_delta;
    }
    if (m + 1 == last) break;
    const std::size_t nlo = lo > 0 ? lo - 1 : 0;
    const std::size_t nhi = std::min(hi + 1, S - 1);
    for (std::size_t j = nlo; j <= nhi; ++j) {
      double s = pi[j] * stay[j];
      if (j > 0) s += pi[j - 1] * gen.up[j - 1] * inv;
      if (j + 1 < S) s += pi[j + 1] * gen.down[j + 1] * inv;
      next[j] = s;
    }
    pi_delta += pi[0] * gen.kill * inv;
    for (std::size_t j = nlo; j <= nhi; ++j) pi[j] = next[j];
    lo = nlo;
    hi = nhi;
  }
  return law;
}

double default_x_max(double u, double t) { return u + 10.0 * std::max(1.0, std::sqrt(t)); }

std::size_t default_truncation(int n, double u, double t) {
  return static_cast<std::size_t>(std::ceil(n * default_x_max(u, t)));
}

double truncation_tail_bound(int n, std::size_t x0, std::size_t M, double t) {
  if (x0 >= M) return 2.0;
  const double a = static_cast<double>(M - x0) / n;
  return std::min(2.0, 4.0 * std::exp(-a * a / (2.0 * (t + a / (3.0 * n)))));
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream & 0xffffffffu),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

namespace {

double exp_draw(std::mt19937_64& rng, double rate) {
  // 53-bit uniform on (0, 1].
  const double u = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
  return -std::log(u) / rate;
}

bool coin(std::mt19937_64& rng) { return (rng() >> 63) != 0; }

// Runs one exact path until `horizon`, reporting every jump to `visit`.
template <class Visit>
void run_path(const BoundaryParams& p, long x0, double horizon, std::mt19937_64& rng,
              Visit&& visit) {
  const double kill = p.kill_rate(), entry = p.entry_rate();
  const double boundary_total = kill + entry;
  const double interior_total = 2.0 * p.interior_rate();
  long site = x0;
  double now = 0.0;
  while (site >= 0) {
    const double rate = site == 0 ? boundary_total : interior_total;
    if (rate == 0.0) return;
    now += exp_draw(rng, rate);
    if (now > horizon) return;
    if (site == 0) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      site = u * boundary_total < kill ? -1 : 1;
    } else {
      site += coin(rng) ? 1 : -1;
    }
    visit(now, site);
  }
}

}  // namespace

std::vector<PathEvent> sample_path(const BoundaryParams& p, long x0, double horizon,
                                   std::uint64_t seed) {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (x0 < 0) throw std::invalid_argument("start site must be nonnegative");
  auto rng = make_stream(seed, 0);
  std::vector<PathEvent> path{{0.0, x0}};
  run_path(p, x0, horizon, rng, [&](double time, long site) { path.push_back({time, site}); });
  return path;
}

long sample_endpoint(const BoundaryParams& p, long x0, double t, std::mt19937_64& rng) {
  long last = x0;
  run_path(p, x0, t, rng, [&](double, long site) { last = site; });
  return last;
}

LatticeLaw monte_carlo_law(const BoundaryParams& p, long x0, double t, std::size_t paths,
                           std::uint64_t seed, unsigned threads) {
  if (x0 < 0) throw std::invalid_argument("start site must be nonnegative");
  if (!(t >= 0.0)) throw std::invalid_argument("time must be nonnegative");
  const std::size_t blocks = (paths + kPathsPerBlock - 1) / kPathsPerBlock;
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(blocks, 1))));

  // Integer counts per worker; summing integers is order independent.
  std::vector<std::vector<std::uint64_t>> counts(threads);
  std::vector<std::uint64_t> dead(threads, 0);
  auto work = [&](unsigned w) {
    auto& c = counts[w];
    for (std::size_t b = w; b < blocks; b += threads) {
      auto rng = make_stream(seed, b);
      const std::size_t end = std::min(paths, (b + 1) * kPathsPerBlock);
      for (std::size_t i = b * kPathsPerBlock; i < end; ++i) {
        const long s = sample_endpoint(p, x0, t, rng);
        if (s < 0) {
          ++dead[w];
          continue;
        }
        const auto us = static_cast<std::size_t>(s);
        if (us >= c.size()) c.resize(us + 1, 0);
        ++c[us];
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  std::size_t width = static_cast<std::size_t>(x0) + 1;
  for (const auto& c : counts) width = std::max(width, c.size());
  std::vector<std::uint64_t> total(width, 0);
  std::uint64_t total_dead = 0;
  for (unsigned w = 0; w < threads; ++w) {
    for (std::size_t i = 0; i < counts[w].size(); ++i) total[i] += counts[w][i];
    total_dead += dead[w];
  }
  LatticeLaw law;
  law.n = p.n;
  law.mass.resize(width);
  const double inv = paths ? 1.0 / static_cast<double>(paths) : 0.0;
  for (std::size_t i = 0; i < width; ++i) law.mass[i] = static_cast<double>(total[i]) * inv;
  law.delta = static_cast<double>(total_dead) * inv;
  return law;
}

}  // namespace halfline
