#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "bdstat/series.hpp"
#include "bdstat/stationary.hpp"

namespace bdstat {

enum class BaseKind { Geometric, Poisson, PoissonLindley, NegativeBinomial, HyperPoisson, CMP };

std::string_view to_string(BaseKind kind);
// Accepts the names produced by to_string plus short aliases (geom, pl, nb, hp).
BaseKind parse_base_kind(std::string_view name);

// One of the six classical stationary birth-death laws.
//
// Parameters are validated on construction. HP and CMP evaluate their
// normalizing series once, under the supplied policy.
class BaseDistribution {
 public:
  static BaseDistribution geometric(double lambda, const SeriesPolicy& policy = {});
  static BaseDistribution poisson(double lambda, const SeriesPolicy& policy = {});
  static BaseDistribution poisson_lindley(double lambda, const SeriesPolicy& policy = {});
  static BaseDistribution negative_binomial(double lambda, double r, const SeriesPolicy& policy = {});
  static BaseDistribution hyper_poisson(double lambda, double tau, const SeriesPolicy& policy = {});
  static BaseDistribution cmp(double lambda, double nu, const SeriesPolicy& policy = {});

  // Generic constructor; `shape` is r (NB), tau (HP) or nu (CMP), ignored otherwise.
  static BaseDistribution make(BaseKind kind, double lambda, double shape,
                               const SeriesPolicy& policy = {});

  BaseKind kind() const { return kind_; }
  double lambda() const { return lambda_; }
  double r() const { return shape_; }
  double tau() const { return shape_; }
  double nu() const { return shape_; }
  // r, tau or nu depending on kind; 0 for one-parameter kinds.
  double shape() const { return shape_; }
  bool has_shape() const;
  const SeriesPolicy& policy() const { return policy_; }

  BaseDistribution with_lambda(double lambda) const;

  // lambda_n = p(n+1)/p(n).
  double ratio(std::uint64_t n) const;
  RatioSequence ratio_sequence() const;

  double log_pmf(std::uint64_t n) const;
  double pmf(std::uint64_t n) const;

  // Closed form for geometric, Poisson and NB; truncated series otherwise.
  double mean() const;
  double variance() const;

  std::string describe() const;

 private:
  BaseDistribution(BaseKind kind, double lambda, double shape, const SeriesPolicy& policy);

  BaseKind kind_;
  double lambda_;
  double shape_;
  SeriesPolicy policy_;
  // log of the HP/CMP normalizing series z; unused otherwise.
  double log_z_ = 0.0;
  // Summed once on construction for PL, HP and CMP.
  double series_mean_ = 0.0;
  double series_var_ = 0.0;
};

double base_ratio(const BaseDistribution& base, std::uint64_t n);
double base_pmf(const BaseDistribution& base, std::uint64_t n);

}  // namespace bdstat
