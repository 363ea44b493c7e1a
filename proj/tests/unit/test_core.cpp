#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "bdstat/base.hpp"
#include "bdstat/errors.hpp"
#include "bdstat/stationary.hpp"
#include "bdstat/weights.hpp"

using namespace bdstat;

namespace {

std::vector<BaseDistribution> sample_bases() {
  return {BaseDistribution::geometric(0.4),         BaseDistribution::poisson(2.0),
          BaseDistribution::poisson_lindley(0.5),   BaseDistribution::negative_binomial(1.5, 3.0),
          BaseDistribution::negative_binomial(0.3, 0.5), BaseDistribution::hyper_poisson(2.0, 0.7),
          BaseDistribution::hyper_poisson(3.0, 2.5), BaseDistribution::cmp(2.0, 1.4),
          BaseDistribution::cmp(0.8, 0.5)};
}

BaseDistribution random_base(std::mt19937_64& rng) {
  const int k = static_cast<int>(rng() % 6);
  switch (k) {
    case 0: return BaseDistribution::geometric(oracle::uniform(rng, 0.05, 0.9));
    case 1: return BaseDistribution::poisson(oracle::uniform(rng, 0.1, 15.0));
    case 2: return BaseDistribution::poisson_lindley(oracle::uniform(rng, 0.05, 0.9));
    case 3: {
      const double r = oracle::uniform(rng, 0.3, 10.0);
      return BaseDistribution::negative_binomial(r * oracle::uniform(rng, 0.05, 0.9), r);
    }
    case 4: return BaseDistribution::hyper_poisson(oracle::uniform(rng, 0.1, 10.0), oracle::uniform(rng, 0.2, 5.0));
    default: return BaseDistribution::cmp(oracle::uniform(rng, 0.1, 8.0), oracle::uniform(rng, 0.3, 2.5));
  }
}

}  // namespace

TEST_CASE("base ratios follow the birth-death ratio table") {
  const auto pois = BaseDistribution::poisson(2.0);
  CHECK(pois.ratio(0) == doctest::Approx(2.00).epsilon(0.005));
  CHECK(std::round(pois.ratio(2) * 100) / 100 == doctest::Approx(0.67));
  const auto geo = BaseDistribution::geometric(0.5);
  for (std::uint64_t n : {0u, 1u, 7u, 100u}) CHECK(base_ratio(geo, n) == 0.5);
  const double lam = 0.5;
  CHECK(BaseDistribution::poisson_lindley(lam).ratio(0) ==
        doctest::Approx((1 + 2 * lam) * lam / (1 + lam)).epsilon(1e-15));
  CHECK(BaseDistribution::poisson_lindley(lam).ratio(0) == doctest::Approx(0.6667).epsilon(1e-4));
  CHECK(BaseDistribution::negative_binomial(1.5, 3.0).ratio(4) ==
        doctest::Approx((4.0 / 3.0 + 1.0) * 1.5 / 5.0).epsilon(1e-15));
  CHECK(BaseDistribution::hyper_poisson(2.0, 0.7).ratio(3) == doctest::Approx(2.0 / 3.7).epsilon(1e-15));
  CHECK(BaseDistribution::cmp(2.0, 1.4).ratio(3) == doctest::Approx(2.0 / std::pow(4.0, 1.4)).epsilon(1e-15));
}

TEST_CASE("parameter domain violations name the bound") {
  auto message = [](auto&& fn) {
    try {
      fn();
    } catch (const DomainError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message([] { BaseDistribution::geometric(1.2); }).find("lambda < 1") != std::string::npos);
  CHECK(message([] { BaseDistribution::poisson_lindley(1.0); }).find("lambda < 1") != std::string::npos);
  CHECK(message([] { BaseDistribution::poisson(0.0); }).find("lambda > 0") != std::string::npos);
  CHECK(message([] { BaseDistribution::negative_binomial(3.0, 2.0); }).find("lambda/r < 1") != std::string::npos);
  CHECK(message([] { BaseDistribution::negative_binomial(1.0, -1.0); }).find("r > 0") != std::string::npos);
  CHECK(message([] { BaseDistribution::hyper_poisson(1.0, 0.0); }).find("tau > 0") != std::string::npos);
  CHECK(message([] { BaseDistribution::cmp(1.0, 0.0); }).find("nu > 0") != std::string::npos);
  CHECK_THROWS_AS(parse_base_kind("binomial"), DomainError);
  CHECK(parse_base_kind("nb") == BaseKind::NegativeBinomial);
}

TEST_CASE("series policy bounds") {
  CHECK_THROWS_AS((SeriesPolicy{1e-3, 100000}.validate()), DomainError);
  CHECK_THROWS_AS((SeriesPolicy{0.0, 100000}.validate()), DomainError);
  CHECK_THROWS_AS((SeriesPolicy{1e-12, 999}.validate()), DomainError);
  CHECK_NOTHROW((SeriesPolicy{1e-6, 1000}.validate()));
}

TEST_CASE("stationary construction from ratio sequences") {
  const StationaryPmf geo = stationary_pmf_from_ratios(RatioSequence::constant(0.5), {});
  for (std::uint64_t n = 0; n < 40; ++n) CHECK(geo.pmf(n) == doctest::Approx(0.5 * std::pow(0.5, n)).epsilon(1e-13));

  const StationaryPmf pois(BaseDistribution::poisson(2.0).ratio_sequence(), {});
  CHECK(pois.pmf(0) == doctest::Approx(0.135335283).epsilon(1e-9));
  CHECK(pois.pmf(0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-13));

  CHECK_THROWS_AS(stationary_pmf_from_ratios(RatioSequence::constant(1.1), {}), NonExistenceError);
  CHECK_THROWS_AS(stationary_pmf_from_ratios(RatioSequence::constant(1.0), {}), NonExistenceError);

  // No limit hint: the probe window has to catch divergence.
  RatioSequence growing;
  growing.eval = [](std::uint64_t n) { return 1.0 + 0.01 * static_cast<double>(n); };
  CHECK_THROWS_AS(stationary_pmf_from_ratios(growing, {}), NonExistenceError);

  // Ratios above 1 early on are fine when the tail decays.
  const auto head = RatioSequence::from_values({3.0, 2.5, 2.0, 1.5}, 0.3);
  const StationaryPmf h(head, {});
  const auto p = oracle::normalize(
      [](std::uint64_t n) {
        const double r[] = {3.0, 2.5, 2.0, 1.5};
        oracle::LD w = 1;
        for (std::uint64_t k = 0; k < n; ++k) w *= k < 4 ? r[k] : 0.3;
        return w;
      },
      200);
  for (std::uint64_t n = 0; n < 30; ++n) CHECK(h.pmf(n) == doctest::Approx(p[n]).epsilon(1e-12));

  CHECK_THROWS_AS(RatioSequence::from_values({1.0, -2.0}, 0.5), DomainError);
}

TEST_CASE("closed-form pmf values") {
  const double lam = 0.5;
  CHECK(base_pmf(BaseDistribution::poisson_lindley(lam), 0) ==
        doctest::Approx((1 - lam) * (1 - lam) * (1 + lam)).epsilon(1e-14));
  CHECK(base_pmf(BaseDistribution::poisson_lindley(lam), 0) == doctest::Approx(0.375).epsilon(1e-14));
  CHECK(base_pmf(BaseDistribution::poisson(2.0), 2) == doctest::Approx(0.270671).epsilon(1e-6));
  const auto cmp = BaseDistribution::cmp(2.0, 1.0);
  for (std::uint64_t n = 0; n < 30; ++n) CHECK(cmp.pmf(n) == doctest::Approx(oracle::poisson(2.0, n)).epsilon(1e-12));
  // HP with tau = 1 is Poisson.
  const auto hp = BaseDistribution::hyper_poisson(3.0, 1.0);
  for (std::uint64_t n = 0; n < 30; ++n) CHECK(hp.pmf(n) == doctest::Approx(oracle::poisson(3.0, n)).epsilon(1e-12));
}

TEST_CASE("stationary construction reproduces the closed forms") {
  for (const auto& b : sample_bases()) {
    CAPTURE(b.describe());
    const StationaryPmf s(b.ratio_sequence(), b.policy());
    for (std::uint64_t n = 0; n <= 50; ++n) {
      const double p = b.pmf(n);
      if (p < 1e-300) break;
      CHECK(std::abs(s.pmf(n) - p) <= 1e-10 * std::max(p, 1e-300) + 1e-300);
      CHECK(std::exp(b.log_pmf(n + 1) - b.log_pmf(n)) == doctest::Approx(b.ratio(n)).epsilon(1e-10));
    }
  }
}

TEST_CASE("random bases: normalization and ratio consistency") {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 60; ++trial) {
    const auto b = random_base(rng);
    CAPTURE(b.describe());
    const auto probs = enumerate_support([&](std::uint64_t n) { return b.log_pmf(n); }, b.policy());
    double s = 0;
    for (double p : probs) s += p;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    for (std::uint64_t n = 0; n <= 50; ++n) {
      if (b.log_pmf(n + 1) < -700) break;
      CHECK(std::exp(b.log_pmf(n + 1) - b.log_pmf(n)) == doctest::Approx(b.ratio(n)).epsilon(1e-10));
    }
    double m = 0, v = 0;
    for (std::size_t n = 0; n < probs.size(); ++n) m += n * probs[n];
    for (std::size_t n = 0; n < probs.size(); ++n) v += (n - m) * (n - m) * probs[n];
    CHECK(b.mean() == doctest::Approx(m).epsilon(1e-9));
    CHECK(b.variance() == doctest::Approx(v).epsilon(1e-9));
  }
}

TEST_CASE("Poisson-Lindley agrees with the Sankaran parameterization") {
  for (double lam : {0.05, 0.2, 0.5, 0.8, 0.95}) {
    const double phi = (1 - lam) / lam;
    const auto pl = BaseDistribution::poisson_lindley(lam);
    for (std::uint64_t n = 0; n <= 40; ++n) {
      const double sankaran = phi * phi * (phi + 2 + n) / std::pow(phi + 1, n + 3.0);
      CHECK(pl.pmf(n) == doctest::Approx(sankaran).epsilon(1e-12));
    }
    CHECK(pl.mean() == doctest::Approx(lam * (1 + lam) / (1 - lam)).epsilon(1e-12));
  }
}

TEST_CASE("log-space evaluation stays finite for large rates") {
  const auto b = BaseDistribution::poisson(50.0);
  for (std::uint64_t n = 0; n <= 200; ++n) {
    CHECK(std::isfinite(b.log_pmf(n)));
    CHECK(std::isfinite(b.pmf(n)));
  }
  const StationaryPmf s(b.ratio_sequence(), {});
  CHECK(std::isfinite(s.log_pmf(200)));
  CHECK(s.pmf(50) == doctest::Approx(oracle::poisson(50.0, 50)).epsilon(1e-10));
}

TEST_CASE("normalizer series hits the term cap") {
  CHECK_THROWS_AS(BaseDistribution::cmp(0.999, 0.001, SeriesPolicy{1e-14, 1000}), SeriesCapError);
}

TEST_CASE("weighted pmf") {
  const SeriesPolicy pol;
  const auto geo = BaseDistribution::geometric(0.6);
  const StationaryPmf same = weighted_pmf(geo, identity_weight(), pol);
  for (std::uint64_t n = 0; n < 30; ++n) CHECK(same.pmf(n) == doctest::Approx(geo.pmf(n)).epsilon(1e-12));

  // Geometric column "poisson" entry turns the geometric law into Poisson(lambda).
  const StationaryPmf p = weighted_pmf(geo, catalogue_weight("poisson", WeightColumn::Geometric), pol);
  for (std::uint64_t n = 0; n < 30; ++n) CHECK(p.pmf(n) == doctest::Approx(oracle::poisson(0.6, n)).epsilon(1e-12));

  // Puig weight on a Poisson base against brute-force normalization.
  const double tau = 0.1, lam = 4.0;
  const StationaryPmf puig =
      weighted_pmf(BaseDistribution::poisson(lam), catalogue_weight("puig", WeightColumn::Poisson, {{"tau", tau}}), pol);
  const auto brute = oracle::normalize(
      [&](std::uint64_t n) {
        return std::exp(-static_cast<oracle::LD>(n) * n * tau + n * std::log(static_cast<oracle::LD>(lam)) - oracle::lfact(n));
      },
      300);
  for (std::uint64_t n = 0; n < 40; ++n) CHECK(puig.pmf(n) == doctest::Approx(brute[n]).epsilon(1e-11));
  CHECK_THROWS_AS(catalogue_weight("puig", WeightColumn::Poisson), DomainError);
  CHECK_THROWS_AS(catalogue_weight("nope", WeightColumn::Poisson), DomainError);
}

TEST_CASE("weight catalogue columns rebuild the named laws") {
  const SeriesPolicy pol;
  struct Case {
    const char* entry;
    std::map<std::string, double> params;
    BaseDistribution target;
  };
  const double lam = 0.7;
  const std::vector<Case> geometric_column = {
      {"geometric", {}, BaseDistribution::geometric(lam)},
      {"poisson_lindley", {{"lambda", lam}}, BaseDistribution::poisson_lindley(lam)},
      {"negative_binomial", {{"r", 2.5}}, BaseDistribution::negative_binomial(lam, 2.5)},
      {"hyper_poisson", {{"tau", 1.7}}, BaseDistribution::hyper_poisson(lam, 1.7)},
      {"cmp", {{"nu", 0.6}}, BaseDistribution::cmp(lam, 0.6)},
  };
  for (const auto& c : geometric_column) {
    CAPTURE(std::string(c.entry));
    const StationaryPmf w = weighted_pmf(BaseDistribution::geometric(lam), catalogue_weight(c.entry, WeightColumn::Geometric, c.params), pol);
    for (std::uint64_t n = 0; n < 30; ++n) CHECK(w.pmf(n) == doctest::Approx(c.target.pmf(n)).epsilon(1e-11));
  }
  const double plam = 2.3;
  const std::vector<Case> poisson_column = {
      {"poisson", {}, BaseDistribution::poisson(plam)},
      {"hyper_poisson", {{"tau", 1.7}}, BaseDistribution::hyper_poisson(plam, 1.7)},
      {"cmp", {{"nu", 1.3}}, BaseDistribution::cmp(plam, 1.3)},
  };
  for (const auto& c : poisson_column) {
    CAPTURE(std::string(c.entry));
    const StationaryPmf w = weighted_pmf(BaseDistribution::poisson(plam), catalogue_weight(c.entry, WeightColumn::Poisson, c.params), pol);
    for (std::uint64_t n = 0; n < 30; ++n) CHECK(w.pmf(n) == doctest::Approx(c.target.pmf(n)).epsilon(1e-11));
  }
  // Weighted Poisson and Bohning entries against brute force.
  const StationaryPmf wp = weighted_pmf(BaseDistribution::poisson(plam),
                                        catalogue_weight("weighted_poisson", WeightColumn::Poisson, {{"r", 2.0}, {"tau", 0.5}}), pol);
  const auto wp_brute = oracle::normalize(
      [&](std::uint64_t n) {
        return std::pow(n + 0.5L, 2.0L) * std::exp(n * std::log(static_cast<oracle::LD>(plam)) - oracle::lfact(n));
      },
      200);
  for (std::uint64_t n = 0; n < 30; ++n) CHECK(wp.pmf(n) == doctest::Approx(wp_brute[n]).epsilon(1e-11));
  const StationaryPmf bo = weighted_pmf(BaseDistribution::poisson(plam),
                                        catalogue_weight("bohning", WeightColumn::Poisson, {{"tau", 0.05}, {"nu", 0.8}}), pol);
  const auto bo_brute = oracle::normalize(
      [&](std::uint64_t n) {
        return std::exp(-0.05L * n * n + n * std::log(static_cast<oracle::LD>(plam)) - 0.8L * oracle::lfact(n));
      },
      300);
  for (std::uint64_t n = 0; n < 30; ++n) CHECK(bo.pmf(n) == doctest::Approx(bo_brute[n]).epsilon(1e-11));
}
