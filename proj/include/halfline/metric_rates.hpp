#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "halfline/limit_semigroups.hpp"
#include "halfline/measure.hpp"
#include "halfline/numerics.hpp"
#include "halfline/test_functions.hpp"

namespace halfline {

// All integrals of the family against mu, laid out by fam.index(k, j).
std::vector<double> family_integrals(const TestFunctionFamily& fam, const SubMeasure& mu);

struct Distance {
  double value = 0.0;
  double truncation_bound = 0.0;  // weight of all terms beyond (K, J)
  std::size_t clipped = 0;        // terms where |difference| reached 1
};

Distance distance_from_integrals(const TestFunctionFamily& fam, const std::vector<double>& a,
                                 const std::vector<double>& b);
Distance distance_d(const SubMeasure& mu, const SubMeasure& nu, const TestFunctionFamily& fam);

// Cell averages of a continuous law on the lattice (1/n)N: site i collects
// the mass of [(i - 1/2)/n, (i + 1/2)/n] and site 0 also the atom at 0.
LatticeLaw lattice_embedding(const ContinuousLaw& law, int n);

struct LadderOptions {
  int K = 16;
  int J = 16;
  unsigned threads = 1;
  std::optional<GridSpec> grid;  // reference grid; defaults from (u, t)
  double tolerance = 0.8;        // fitted exponent must reach this share of the prediction
};

struct RateReport {
  Regime regime = Regime::reflected;
  Subcase subcase = Subcase::none;
  double alpha = 0, beta = 0, A = 0, B = 0;
  double t = 0, u = 0;
  std::vector<int> ns;
  std::vector<double> d;
  std::vector<double> d_fit;  // d without the clipped terms
  SlopeFit fit;
  bool rate_available = false;
  double predicted_exponent = 0.0;
  std::size_t clipped_terms = 0;
  double truncation_bound = 0.0;
  bool pass = false;
  std::string note;
  std::vector<double> delta_gap;  // killed ladders: |Delta atom of mu_n - deficit of mu|
};

// Theorem-level rate check: d(mu_n(t), mu(t)) for the walk started at
// floor(u n) against the limit law started at u.
RateReport run_rate_ladder(double alpha, double beta, double A, double B, double t, double u,
                           const std::vector<int>& ns, const LadderOptions& opt = {});

// Shifted walk against killed Brownian motion; passes when d decreases
// strictly along the ladder while above the series truncation floor.
RateReport run_killed_ladder(double alpha, double beta, double A, double B, double t, double u,
                             const std::vector<int>& ns, const LadderOptions& opt = {});

void write_rate_csv(std::ostream& os, const RateReport& r);
void write_rate_summary(std::ostream& os, const RateReport& r);

struct TrotterKatoReport {
  std::vector<int> ns;
  std::vector<double> error;  // sup over sites of |T_n(t) pi_n f - pi_n T(t) f|
  SlopeFit fit;
  double predicted_exponent = 0.0;
};

// f = f_{k,j} of the family for the limit condition (killed mode for the
// killed regime). T(t) f comes from the backward PDE on the default grid.
TrotterKatoReport check_trotter_kato(double alpha, double beta, double A, double B, int k, int j,
                                     double t, const std::vector<int>& ns, double u_for_grid = 1.0,
                                     unsigned threads = 1);

}  // namespace halfline
