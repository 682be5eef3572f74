#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "halfline/measure.hpp"

namespace halfline {

// Parameters of the boundary random walk on (1/n)N. Rates are quoted for
// the walk already sped up by n^2: interior n^2/2 each side, A n^{2-alpha}
// from 0 to the cemetery and B n^{2-beta} from 0 to site 1.
struct BoundaryParams {
  double alpha = 0.0;
  double beta = 0.0;
  double A = 1.0;
  double B = 1.0;
  int n = 1;

  // Validates and canonicalizes: A = 0 and alpha = inf are the same walk,
  // and likewise for B and beta. Throws std::invalid_argument.
  static BoundaryParams make(double alpha, double beta, double A, double B, int n);

  double kill_rate() const;
  double entry_rate() const;
  double interior_rate() const { return 0.5 * static_cast<double>(n) * n; }
};

enum class RightEdge { reflect, absorb };

// Tridiagonal generator on sites 0..M plus the cemetery. Only site 0 can
// jump to the cemetery, whose row is identically zero.
struct GeneratorMatrix {
  std::vector<double> down;  // rate i -> i-1 (down[0] = 0)
  std::vector<double> up;    // rate i -> i+1 (up[M] = 0)
  double kill = 0.0;         // rate 0 -> cemetery
  RightEdge edge = RightEdge::reflect;

  std::size_t sites() const { return down.size(); }
  double exit_rate(std::size_t i) const {
    return down[i] + up[i] + (i == 0 ? kill : 0.0);
  }
  // Rate i -> j where j == -1 denotes the cemetery and i == -1 its row.
  double rate(long i, long j) const;
  double uniformization_rate() const;
};

// Values on sites 0..M and at the cemetery.
struct LatticeFunction {
  std::vector<double> sites;
  double delta = 0.0;
};

GeneratorMatrix build_generator(const BoundaryParams& p, std::size_t M,
                                RightEdge edge = RightEdge::reflect);

// T(t) f by uniformization, truncating the Poisson series below 1e-12.
LatticeFunction semigroup_apply(const GeneratorMatrix& gen, double t,
                                const LatticeFunction& f);

// Row x0 of exp(tQ): the law at time t of the walk started at site x0.
// `offset` is recorded in the law so the shifted walk can be represented.
LatticeLaw distribution_at(const BoundaryParams& p, std::size_t x0, double t,
                           std::size_t M, RightEdge edge = RightEdge::reflect,
                           int offset = 0);

// Default right truncation: x_max = u + 10 max(1, sqrt t), M = ceil(n x_max).
double default_x_max(double u, double t);
std::size_t default_truncation(int n, double u, double t);

// Analytic bound on the total variation effect of moving the right edge
// from M to 2M for a walk started at x0 (sub-Gaussian tail of the
// displacement needed to reach the edge).
double truncation_tail_bound(int n, std::size_t x0, std::size_t M, double t);

struct PathEvent {
  double time;
  long site;  // -1 is the cemetery
};

// Stream splitting rule: stream s of master seed `seed` is an mt19937_64
// seeded with seed_seq{low32(seed), high32(seed), s}.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream);

// Exact CTMC path on the untruncated lattice up to `horizon`, starting
// with the event (0, x0). Uses stream 0 of `seed`.
std::vector<PathEvent> sample_path(const BoundaryParams& p, long x0, double horizon,
                                   std::uint64_t seed);

// Site at time t (or -1) of one exact path drawn from `rng`.
long sample_endpoint(const BoundaryParams& p, long x0, double t, std::mt19937_64& rng);

inline constexpr std::size_t kPathsPerBlock = std::size_t{1} << 14;

// Empirical law of `paths` endpoints. Paths are grouped in blocks of
// kPathsPerBlock; block b draws from stream b, so the result does not
// depend on the number of threads.
LatticeLaw monte_carlo_law(const BoundaryParams& p, long x0, double t,
                           std::size_t paths, std::uint64_t seed, unsigned threads = 1);

}  // namespace halfline
