#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

#include "bdstat/errors.hpp"
#include "bdstat/simulate.hpp"

using namespace bdstat;

namespace {

std::vector<double> target(const CountModel& m, std::size_t len) {
  std::vector<double> p(len);
  for (std::size_t n = 0; n < len; ++n) p[n] = m.pmf(n);
  return p;
}

}  // namespace

TEST_CASE("canonical rates reproduce the ratios") {
  const auto pois = BaseDistribution::poisson(2.0);
  const auto r = canonical_rates(pois.ratio_sequence());
  CHECK(r.birth(0) == doctest::Approx(2.0));
  CHECK(r.birth(5) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(r.death(3) == 3.0);
  for (std::uint64_t n = 0; n <= 100; ++n) CHECK(r.birth(n) / r.death(n + 1) == doctest::Approx(2.0 / (n + 1)).epsilon(1e-14));

  const auto geo = canonical_rates(BaseDistribution::geometric(0.4).ratio_sequence(), DeathClock::Constant);
  CHECK(geo.birth(0) == 0.4);
  CHECK(geo.birth(17) == 0.4);
  CHECK(geo.death(1) == 1.0);
  CHECK(geo.death(9) == 1.0);
  CHECK(geo.canonicalized_from.has_value());
  CHECK(geo.provenance.find("mu_n = 1") != std::string::npos);

  const InfDefDistribution d(BaseDistribution::cmp(3.0, 0.7), InflationSpec::type2({1, 4}, {2.0, 0.3}));
  for (auto clock : {DeathClock::Linear, DeathClock::Constant}) {
    const auto rr = canonical_rates(d.ratio_sequence(), clock);
    for (std::uint64_t n = 0; n <= 100; ++n) CHECK(std::abs(rr.birth(n) / rr.death(n + 1) / d.ratio(n) - 1.0) < 1e-14);
  }
}

TEST_CASE("simulated occupancy matches the stationary law") {
  const CountModel pois(BaseDistribution::poisson(2.0));
  SimConfig cfg;
  cfg.seed = 7;
  cfg.sample_time = 2e4;
  const auto res = run_ctmc(canonical_rates(pois.ratio_sequence()), cfg);
  CHECK(total_variation(res.occupancy, target(pois, 40)) < 0.02);
  CHECK(res.burn_in_time == doctest::Approx(50.0 / 1.0));

  const CountModel t2(InfDefDistribution(BaseDistribution::poisson(2.6), InflationSpec::type2({2}, {2.756})));
  cfg.seed = 11;
  const auto res2 = run_ctmc(canonical_rates(t2.ratio_sequence()), cfg);
  CHECK(total_variation(res2.occupancy, target(t2, 40)) < 0.02);
  double s = 0;
  for (double w : res2.occupancy) s += w;
  CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  double snap = 0;
  for (double w : res2.snapshots) snap += w;
  CHECK(snap == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(total_variation(res2.snapshots, target(t2, 40)) < 0.03);
}

TEST_CASE("simulation is deterministic per seed") {
  const CountModel m(InfDefDistribution(BaseDistribution::geometric(0.5), InflationSpec::type1({0}, {3.0})));
  SimConfig cfg;
  cfg.seed = 123;
  cfg.sample_time = 2000;
  const auto rates = canonical_rates(m.ratio_sequence(), DeathClock::Constant);
  const auto a = run_ctmc(rates, cfg);
  const auto b = run_ctmc(rates, cfg);
  CHECK(a.occupancy == b.occupancy);
  CHECK(a.up == b.up);
  CHECK(a.events == b.events);
  cfg.seed = 124;
  CHECK(run_ctmc(rates, cfg).occupancy != a.occupancy);
}

TEST_CASE("longer runs get closer") {
  const CountModel m(BaseDistribution::negative_binomial(1.5, 3.0));
  const auto rates = canonical_rates(m.ratio_sequence());
  const auto p = target(m, 200);
  SimConfig cfg;
  cfg.seed = 99;
  cfg.sample_time = 500;
  const double short_tv = total_variation(run_ctmc(rates, cfg).occupancy, p);
  cfg.sample_time = 5000;
  const double mid_tv = total_variation(run_ctmc(rates, cfg).occupancy, p);
  cfg.sample_time = 50000;
  const double long_tv = total_variation(run_ctmc(rates, cfg).occupancy, p);
  CHECK(mid_tv < short_tv);
  CHECK(long_tv < mid_tv);
}

TEST_CASE("detailed balance of crossing flux") {
  const CountModel m(InfDefDistribution(BaseDistribution::poisson(3.0), InflationSpec::type1({1}, {2.5})));
  const auto rates = canonical_rates(m.ratio_sequence());
  SimConfig cfg;
  cfg.seed = 2;
  cfg.sample_time = 2e4;
  const auto res = run_ctmc(rates, cfg);
  for (std::uint64_t n = 0; n < 8; ++n) {
    const double up = static_cast<double>(res.up[n]);
    const double down = static_cast<double>(res.down[n]);
    CHECK(std::abs(up - down) <= 1.0);
    // Crossing rates against the occupancy-implied flux.
    const double T = res.sample_time;
    const double flux_up = res.occupancy[n] * rates.birth(n);
    const double flux_down = res.occupancy[n + 1] * rates.death(n + 1);
    CHECK(std::abs(up / T - flux_up) < 3 * std::sqrt(up) / T);
    CHECK(std::abs(down / T - flux_down) < 3 * std::sqrt(down) / T);
  }
}

TEST_CASE("simulation errors") {
  const CountModel pois(BaseDistribution::poisson(2.0));
  SimConfig cfg;
  cfg.sample_time = 0.0;
  CHECK_THROWS_AS(run_ctmc(canonical_rates(pois.ratio_sequence()), cfg), DomainError);
  cfg.sample_time = 100;
  cfg.thinning_interval = 0.0;
  CHECK_THROWS_AS(run_ctmc(canonical_rates(pois.ratio_sequence()), cfg), DomainError);

  cfg.thinning_interval = 1.0;
  cfg.state_cap = 3;
  CHECK_THROWS_AS(run_ctmc(canonical_rates(CountModel(BaseDistribution::poisson(20.0)).ratio_sequence()), cfg),
                  StateExplosionError);
  CHECK(explosion_cap(pois) == static_cast<std::uint64_t>(std::ceil(10 * (2 + 12 * std::sqrt(2.0)))) + 1);
}

TEST_CASE("iid draws and generator") {
  const CountModel m(InfDefDistribution(BaseDistribution::poisson(2.6), InflationSpec::type2({2}, {2.756})));
  const auto xs = draw_sample(m, 100000, 31);
  std::vector<double> freq(40, 0.0);
  for (auto x : xs) freq[std::min<std::uint64_t>(x, 39)] += 1e-5;
  CHECK(total_variation(freq, target(m, 40)) < 0.01);
  CHECK(draw_sample(m, 50, 4) == draw_sample(m, 50, 4));

  std::mt19937_64 rng(5);
  double lo = 1, hi = 0;
  for (int i = 0; i < 10000; ++i) {
    const double u = uniform01(rng);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(lo < 1e-3);
  CHECK(hi > 0.999);
  CHECK(total_variation({0.5, 0.5}, {1.0}) == doctest::Approx(0.5));
  CHECK(std::string(kRngAlgorithm) == "mt19937_64");
}
