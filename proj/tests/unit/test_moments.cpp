#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "bdstat/errors.hpp"
#include "bdstat/moments.hpp"

using namespace bdstat;

namespace {

std::vector<double> tabulate(const CountModel& m) {
  std::vector<double> p;
  for (std::uint64_t n = 0; n < 2000; ++n) {
    p.push_back(m.pmf(n));
    if (n > 60 && p.back() < 1e-30) break;
  }
  return p;
}

// phi from the equidispersion formula, summed in long double.
double equi_phi_oracle(double lambda, int q) {
  oracle::LD s = 0;
  for (int k = 0; k < q; ++k) s += (q - k) * std::exp(k * std::log(static_cast<oracle::LD>(lambda)) - lambda - oracle::lfact(k));
  return static_cast<double>(1 + (lambda - q) / s);
}

}  // namespace

TEST_CASE("closed moments") {
  const auto base = BaseDistribution::negative_binomial(1.3, 2.0);
  for (auto fam : {InflationFamily::Type1, InflationFamily::Type2}) {
    const auto m = moments_closed(InfDefDistribution(base, InflationSpec::make(fam, {0, 3}, {1.0, 1.0})));
    CHECK(m.mean == doctest::Approx(base.mean()).epsilon(1e-14));
    CHECK(m.variance == doctest::Approx(base.variance()).epsilon(1e-14));
    CHECK_FALSE(m.series_fallback);
  }
  const auto a = moments_closed(InfDefDistribution(BaseDistribution::poisson(2.6), InflationSpec::type2({2}, {2.756})));
  CHECK(a.mean == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(a.variance == doctest::Approx(2.0).epsilon(1e-3));
  const auto b = moments_closed(InfDefDistribution(BaseDistribution::poisson(1.2), InflationSpec::type2({2}, {0.170})));
  CHECK(b.mean == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(b.variance == doctest::Approx(2.0).epsilon(2e-3));
  const auto pl = moments_closed(InfDefDistribution(BaseDistribution::poisson_lindley(0.4), InflationSpec::type1({1}, {2.0})));
  CHECK(pl.series_fallback);
}

TEST_CASE("closed and direct moments agree on random models") {
  std::mt19937_64 rng(100);
  for (int trial = 0; trial < 100; ++trial) {
    BaseDistribution base = BaseDistribution::poisson(1.0);
    switch (trial % 5) {
      case 0: base = BaseDistribution::geometric(oracle::uniform(rng, 0.05, 0.85)); break;
      case 1: base = BaseDistribution::poisson(oracle::uniform(rng, 0.2, 10)); break;
      case 2: base = BaseDistribution::negative_binomial(oracle::uniform(rng, 0.2, 2.5), 3.0); break;
      case 3: base = BaseDistribution::hyper_poisson(oracle::uniform(rng, 0.2, 6), oracle::uniform(rng, 0.3, 4)); break;
      default: base = BaseDistribution::cmp(oracle::uniform(rng, 0.2, 6), oracle::uniform(rng, 0.4, 2.0)); break;
    }
    const auto fam = trial % 2 ? InflationFamily::Type1 : InflationFamily::Type2;
    const std::vector<std::uint64_t> pts = {static_cast<std::uint64_t>(rng() % 2), 2 + rng() % 4};
    const InfDefDistribution d(base, InflationSpec::make(fam, pts, {oracle::uniform(rng, 0.1, 5), oracle::uniform(rng, 0.1, 5)}));
    const auto c = moments_closed(d);
    const auto o = oracle::moments(tabulate(CountModel(d)));
    CAPTURE(d.describe());
    CHECK(std::abs(c.mean - o.mean) < 1e-8 * std::max(1.0, o.mean));
    CHECK(std::abs(c.variance - o.var) < 1e-8 * std::max(1.0, o.var));
  }
}

TEST_CASE("direct moments") {
  const auto p = moments_direct(CountModel(BaseDistribution::poisson(2.0)));
  CHECK(p.skewness == doctest::Approx(0.7071).epsilon(1e-4));
  CHECK(p.kurtosis == doctest::Approx(3.50).epsilon(1e-3));
  CHECK(p.dispersion_index == doctest::Approx(1.0).epsilon(1e-12));

  const auto a = moments_direct(CountModel(InfDefDistribution(BaseDistribution::poisson(2.6), InflationSpec::type2({2}, {2.756}))));
  CHECK(a.skewness == doctest::Approx(1.1314).epsilon(1e-3));
  CHECK(std::round(a.kurtosis * 100) / 100 == doctest::Approx(4.88));
  const auto b = moments_direct(CountModel(InfDefDistribution(BaseDistribution::poisson(3.2), InflationSpec::type2({2}, {6.661}))));
  CHECK(std::round(b.kurtosis_central_band / b.kurtosis * 1e4) / 1e4 == doctest::Approx(0.0131));

  for (double lambda : {0.3, 1.0, 4.5, 12.0, 40.0}) {
    const auto m = moments_direct(CountModel(BaseDistribution::poisson(lambda)));
    CHECK(m.skewness == doctest::Approx(1 / std::sqrt(lambda)).epsilon(1e-8));
    CHECK(m.kurtosis == doctest::Approx(1 / lambda + 3).epsilon(1e-8));
  }

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const InfDefDistribution d(BaseDistribution::cmp(oracle::uniform(rng, 0.5, 6), oracle::uniform(rng, 0.5, 2)),
                               InflationSpec::type1({1}, {oracle::uniform(rng, 0.2, 4)}));
    const auto m = moments_direct(CountModel(d));
    const auto o = oracle::moments(tabulate(CountModel(d)));
    CHECK(m.mean == doctest::Approx(o.mean).epsilon(1e-10));
    CHECK(m.variance == doctest::Approx(o.var).epsilon(1e-9));
    CHECK(m.skewness == doctest::Approx(o.skew).epsilon(1e-8));
    CHECK(m.kurtosis == doctest::Approx(o.kurt).epsilon(1e-8));
    CHECK(m.kurtosis_central_band == doctest::Approx(o.band).epsilon(1e-8));
    CHECK(m.variance >= 0);
  }
}

TEST_CASE("central band is inclusive") {
  // Mean 1, sd 1: the points 0, 1, 2 all sit within one sd.
  const auto m = moments_from_probabilities({0.25, 0.5, 0.25});
  CHECK(m.mean == doctest::Approx(1.0));
  CHECK(m.variance == doctest::Approx(0.5));
  const auto two = moments_from_probabilities({0.5, 0.0, 0.5});
  CHECK(two.kurtosis_central_band == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(two.kurtosis == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("equidispersion phi") {
  CHECK(std::round(equidispersion_phi(3.2, 2) * 1000) / 1000 == doctest::Approx(6.661));
  CHECK(std::round(equidispersion_phi(1.6, 2) * 1000) / 1000 == doctest::Approx(0.450));
  CHECK(equidispersion_phi(2.0, 2) == 1.0);
  CHECK(equidispersion_phi(5.0, 5) == 1.0);

  std::mt19937_64 rng(50);
  for (int trial = 0; trial < 50; ++trial) {
    const double lambda = oracle::uniform(rng, 0.3, 9.0);
    const auto q = 1 + rng() % 6;
    const double phi = equidispersion_phi(lambda, q);
    CHECK(phi == doctest::Approx(equi_phi_oracle(lambda, static_cast<int>(q))).epsilon(1e-12));
    const InfDefDistribution d(BaseDistribution::poisson(lambda), InflationSpec::type2({q}, {phi}));
    const auto o = oracle::moments(tabulate(CountModel(d)));
    CHECK(std::abs(o.mean - q) < 1e-8);
    CHECK(std::abs(o.var - q) < 1e-8);
    const auto c = moments_closed(d);
    CHECK(std::abs(c.mean - q) < 1e-10);
    CHECK(std::abs(c.variance - q) < 1e-10);
  }
}

TEST_CASE("dispersion surfaces") {
  const DispersionFamily pois{BaseKind::Poisson, 0.0, InflationFamily::Type2, 2};
  std::vector<double> lambdas;
  for (int i = 1; i <= 16; ++i) lambdas.push_back(0.5 * i);
  const auto flat = dispersion_surface(pois, lambdas, {1.0});
  for (const auto& row : flat.index) CHECK(*row[0] == doctest::Approx(1.0).epsilon(1e-12));

  for (double lambda : {0.7, 1.6, 2.0, 3.2, 5.5}) {
    const double phi = equidispersion_phi(lambda, 2);
    const auto s = dispersion_surface(pois, {lambda}, {phi});
    CHECK(std::abs(*s.index[0][0] - 1.0) < 1e-8);
  }

  const DispersionFamily cmp{BaseKind::CMP, 1.1, InflationFamily::Type2, 3};
  const auto under = dispersion_surface(cmp, lambdas, {1.0});
  for (const auto& row : under.index) CHECK(*row[0] < 1.0);

  // Inadmissible nodes are recorded rather than thrown.
  const DispersionFamily geo{BaseKind::Geometric, 0.0, InflationFamily::Type1, 1};
  const auto g = dispersion_surface(geo, {0.5, 1.5}, {2.0});
  CHECK(g.index[0][0].has_value());
  CHECK_FALSE(g.index[1][0].has_value());
  CHECK(g.errors[1][0].find("lambda < 1") != std::string::npos);
}

TEST_CASE("equidispersion contours") {
  const DispersionFamily pois{BaseKind::Poisson, 0.0, InflationFamily::Type2, 3};
  const auto c = equidispersion_contour(pois, 0.2, 0.0, 8.0);
  REQUIRE(c.roots.size() == 1);
  CHECK(std::abs(c.roots[0] - 2.055) < 0.005);
  CHECK(equi_phi_oracle(c.roots[0], 3) == doctest::Approx(0.2).epsilon(1e-5));

  const DispersionFamily cmp{BaseKind::CMP, 1.1, InflationFamily::Type2, 3};
  const auto cc = equidispersion_contour(cmp, 0.2, 0.0, 8.0);
  REQUIRE(cc.roots.size() == 2);
  CHECK(std::abs(cc.roots[0] - 0.237) < 0.005);
  CHECK(std::abs(cc.roots[1] - 2.159) < 0.005);
  for (double r : cc.roots) CHECK(std::abs(cmp.dispersion_index(r, 0.2) - 1.0) < 1e-5);

  const DispersionFamily q2{BaseKind::Poisson, 0.0, InflationFamily::Type2, 2};
  const auto flat = equidispersion_contour(q2, 1.0, 0.5, 6.0);
  CHECK(flat.degenerate);

  const auto none = equidispersion_contour(pois, 0.2, 3.0, 8.0);
  CHECK(none.roots.empty());
  CHECK_FALSE(none.degenerate);
}

TEST_CASE("ratio sequence classification") {
  CHECK(classify_sequence(CountModel(BaseDistribution::poisson(2.0))).trend == SequenceTrend::Constant);
  CHECK(classify_sequence(CountModel(BaseDistribution::poisson(2.0))).implication == DispersionKind::Equidispersed);
  CHECK(classify_sequence(CountModel(BaseDistribution::negative_binomial(1.0, 2.0))).trend == SequenceTrend::Increasing);
  CHECK(classify_sequence(CountModel(BaseDistribution::geometric(0.5))).trend == SequenceTrend::Increasing);
  const InfDefDistribution t2(BaseDistribution::poisson(2.0), InflationSpec::type2({2}, {3.0}));
  CHECK(classify_sequence(CountModel(t2)).trend == SequenceTrend::NonMonotonic);
  CHECK(classify_sequence(CountModel(t2)).implication == DispersionKind::Undetermined);
  // Zero-point models are monotone.
  const InfDefDistribution z_up(BaseDistribution::poisson(2.0), InflationSpec::type1({0}, {3.0}));
  CHECK(classify_sequence(CountModel(z_up)).trend == SequenceTrend::Increasing);
  const InfDefDistribution z_down(BaseDistribution::poisson(2.0), InflationSpec::type2({0}, {0.3}));
  CHECK(classify_sequence(CountModel(z_down)).trend == SequenceTrend::Decreasing);

  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 60; ++trial) {
    BaseDistribution b = BaseDistribution::poisson(1.0);
    switch (trial % 3) {
      case 0: b = BaseDistribution::hyper_poisson(oracle::uniform(rng, 0.3, 6), oracle::uniform(rng, 0.2, 4)); break;
      case 1: b = BaseDistribution::cmp(oracle::uniform(rng, 0.3, 6), oracle::uniform(rng, 0.3, 2.5)); break;
      default: b = BaseDistribution::negative_binomial(oracle::uniform(rng, 0.1, 2.0), oracle::uniform(rng, 2.1, 6)); break;
    }
    const auto v = classify_sequence(CountModel(b));
    const double excess = b.variance() / b.mean() - 1.0;
    CAPTURE(b.describe());
    if (v.trend == SequenceTrend::Increasing) CHECK(excess > 0);
    if (v.trend == SequenceTrend::Decreasing) CHECK(excess < 0);
    if (v.trend == SequenceTrend::Constant) CHECK(std::abs(excess) < 1e-10);
    CHECK(v.trend != SequenceTrend::NonMonotonic);
  }
}
