#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "halfline/lattice_walk.hpp"
#include "halfline/metric_rates.hpp"

using namespace halfline;

namespace {

const BoundaryCondition kMixed = BoundaryCondition::make(1.0 / 3, 1.0 / 3, 1.0 / 3);

SubMeasure random_measure(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double keep = U(rng);
  if (U(rng) < 0.5) {
    LatticeLaw l;
    l.n = 1 + static_cast<int>(rng() % 20);
    l.mass.resize(1 + rng() % (6 * l.n));
    double s = 0.0;
    for (double& m : l.mass) s += (m = U(rng) * U(rng));
    for (double& m : l.mass) m *= keep / s;
    l.delta = 1.0 - keep;
    return l;
  }
  ContinuousLaw c;
  c.dx = 0.01;
  c.density.resize(601);
  const double centre = 4 * U(rng), width = 0.1 + U(rng);
  for (std::size_t i = 0; i < c.density.size(); ++i)
    c.density[i] = std::exp(-std::pow((c.x(i) - centre) / width, 2));
  const double zero = keep * U(rng);
  const double s = c.total();
  for (double& v : c.density) v *= (keep - zero) / s;
  c.atom_zero = zero;
  c.atom_delta = 1.0 - keep;
  return c;
}

}  // namespace

TEST(Distance, IdenticalArgumentsAndCemetery) {
  const auto fam = build_family(kMixed, 6, 6);
  LatticeLaw a;
  a.n = 10;
  a.mass = {0.1, 0.4, 0.2};
  a.delta = 0.3;
  EXPECT_EQ(distance_d(a, a, fam).value, 0.0);
  LatticeLaw dead;
  dead.mass = {0.0};
  dead.delta = 1.0;
  EXPECT_EQ(distance_d(dead, dead, fam).value, 0.0);
}

TEST(Distance, PointMassAtZeroAgainstCemetery) {
  for (int J : {4, 10}) {
    const auto fam = build_family(kMixed, 8, J);
    LatticeLaw zero, dead;
    zero.mass = {1.0};
    dead.mass = {0.0};
    dead.delta = 1.0;
    const auto d = distance_d(zero, dead, fam);
    EXPECT_NEAR(d.value, 2.0 - std::ldexp(1.0, -J), 1e-14);
    EXPECT_EQ(d.clipped, static_cast<std::size_t>(J + 1));
    EXPECT_DOUBLE_EQ(d.truncation_bound, fam.tail_bound());
  }
}

TEST(Distance, MetricPropertiesOnRandomMeasures) {
  const auto fam = build_family(kMixed, 6, 6);
  const auto coarse = build_family(kMixed, 4, 4);
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_measure(rng), b = random_measure(rng), c = random_measure(rng);
    const double ab = distance_d(a, b, fam).value, ba = distance_d(b, a, fam).value;
    EXPECT_EQ(ab, ba);
    EXPECT_LE(ab, distance_d(a, c, fam).value + distance_d(c, b, fam).value + 1e-14);
    EXPECT_LT(ab, 4.0);
    EXPECT_GE(ab, 0.0);
    const double small = distance_d(a, b, coarse).value;
    EXPECT_LE(small, ab + 1e-14);
    EXPECT_LE(ab, small + coarse.tail_bound() + 1e-14);
  }
}

TEST(Distance, IntegralSizeMismatchThrows) {
  const auto fam = build_family(kMixed, 2, 2);
  EXPECT_THROW(distance_from_integrals(fam, {1.0}, {1.0}), std::invalid_argument);
}

TEST(Embedding, PreservesMassAndApproachesTheContinuousLaw) {
  const auto cond = BoundaryCondition::make(0, 0.5, 0.5);
  const auto law = wentzell_reference(cond, 1.0, 0.5, GridSpec::defaults(1.0, 0.5));
  const auto fam = build_family(cond, 8, 8);
  // Measured d * n peaks near 1e-3 at n = 50; frozen with a factor two margin.
  const double C = 2e-3;
  for (int n : {50, 100, 200, 400}) {
    const auto lat = lattice_embedding(law, n);
    EXPECT_NEAR(lat.total(), law.total(), 1e-12);
    EXPECT_LE(distance_d(lat, law, fam).value, C / n) << n;
  }
  EXPECT_THROW(lattice_embedding(law, 0), std::invalid_argument);
}

TEST(TrotterKato, ZeroTimeHasNoError) {
  const auto r = check_trotter_kato(2, 1, 1, 1, 6, 0, 0.0, {50, 100});
  for (double e : r.error) EXPECT_EQ(e, 0.0);
}

TEST(TrotterKato, MixedRegimeConvergesAtRateOne) {
  const auto r = check_trotter_kato(2, 1, 1, 1, 6, 0, 0.5, {50, 100, 200, 400});
  EXPECT_GE(r.fit.exponent, 0.8);
  EXPECT_DOUBLE_EQ(r.predicted_exponent, 1.0);
}

TEST(TrotterKato, ReflectedAlphaTwoConvergesAtRateOneHalf) {
  const auto r = check_trotter_kato(2, 0.5, 1, 1, 6, 0, 0.5, {50, 100, 200, 400});
  EXPECT_GE(r.fit.exponent, 0.4);
}

TEST(Ladder, MixedShortLadderPasses) {
  LadderOptions opt;
  opt.K = opt.J = 8;
  const auto r = run_rate_ladder(2, 1, 1, 1, 0.5, 1.0, {25, 50, 100}, opt);
  EXPECT_EQ(r.regime, Regime::mixed);
  EXPECT_TRUE(r.pass);
  EXPECT_GE(r.fit.exponent, 0.8);
  EXPECT_EQ(r.d.size(), 3u);
  std::ostringstream os;
  write_rate_summary(os, r);
  EXPECT_NE(os.str().find("result: PASS"), std::string::npos);
  std::ostringstream csv;
  write_rate_csv(csv, r);
  EXPECT_EQ(csv.str().substr(0, 12), "n,d,bound\n25");
}

TEST(Ladder, NoRateForHoldingBoundaryBetweenOneAndTwo) {
  LadderOptions opt;
  opt.K = opt.J = 4;
  const auto r = run_rate_ladder(2, 1.5, 1, 1, 0.5, 1.0, {20, 40}, opt);
  EXPECT_EQ(r.regime, Regime::ehbm);
  EXPECT_FALSE(r.rate_available);
  EXPECT_EQ(r.note, "rate-unavailable");
  EXPECT_TRUE(r.pass);
}

TEST(Ladder, KilledParametersNeedTheShiftedLadder) {
  EXPECT_THROW(run_rate_ladder(0, 0, 1, 1, 0.5, 1.0, {20}), std::invalid_argument);
  EXPECT_THROW(run_killed_ladder(2, 1, 1, 1, 0.5, 1.0, {20}), std::invalid_argument);
  EXPECT_THROW(run_rate_ladder(2, 1, 1, 1, 0.5, 1.0, {}), std::invalid_argument);
}

TEST(Ladder, KilledShortLadderDecreases) {
  LadderOptions opt;
  opt.K = opt.J = 8;
  const auto r = run_killed_ladder(1, 2, 1, 1, 0.5, 1.0, {25, 50, 100}, opt);
  EXPECT_TRUE(r.pass);
  for (std::size_t i = 1; i < r.d.size(); ++i) {
    EXPECT_LT(r.d[i], r.d[i - 1]);
    EXPECT_LT(r.delta_gap[i], r.delta_gap[i - 1]);
  }
}
