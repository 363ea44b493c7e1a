#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "bdstat/base.hpp"
#include "bdstat/series.hpp"
#include "bdstat/stationary.hpp"

namespace bdstat {

enum class InflationFamily { Type1, Type2 };

std::string_view to_string(InflationFamily family);
InflationFamily parse_inflation_family(std::string_view name);

// Inflation set F with one positive factor per point.
//
// Type 1 factors multiply p(n) at the single point n_i. Type 2 factors multiply
// every p(n) with n <= n_i. Off F the factors are implicitly 1.
class InflationSpec {
 public:
  static InflationSpec type1(std::vector<std::uint64_t> points, std::vector<double> alphas);
  static InflationSpec type2(std::vector<std::uint64_t> points, std::vector<double> phis);
  static InflationSpec make(InflationFamily family, std::vector<std::uint64_t> points,
                            std::vector<double> factors);

  InflationFamily family() const { return family_; }
  const std::vector<std::uint64_t>& points() const { return points_; }
  const std::vector<double>& factors() const { return factors_; }
  std::size_t size() const { return points_.size(); }
  std::uint64_t max_point() const { return points_.back(); }

  InflationSpec with_factors(std::vector<double> factors) const;

  // f(n): product of factors over matching indicators (type 1) or steps n <= n_i (type 2).
  double log_weight(std::uint64_t n) const;
  double weight(std::uint64_t n) const;
  // g(n) = f(n+1)/f(n).
  double log_ratio_factor(std::uint64_t n) const;
  double ratio_factor(std::uint64_t n) const;

  std::string describe() const;

 private:
  InflationSpec(InflationFamily family, std::vector<std::uint64_t> points,
                std::vector<double> factors);

  InflationFamily family_;
  std::vector<std::uint64_t> points_;
  std::vector<double> factors_;
};

// log lambda_n split into the base part and the inflation modifier.
struct LogRatioTerms {
  double log_base = 0.0;
  double log_modifier = 0.0;
  double total() const { return log_base + log_modifier; }
};

// p(n) = f(n) b(n) / z with the normalizer cached on construction.
class InfDefDistribution {
 public:
  InfDefDistribution(BaseDistribution base, InflationSpec spec);

  const BaseDistribution& base() const { return base_; }
  const InflationSpec& spec() const { return spec_; }
  const SeriesPolicy& policy() const { return base_.policy(); }
  double log_z() const { return log_z_; }
  double z() const;

  double log_pmf(std::uint64_t n) const;
  double pmf(std::uint64_t n) const;

  // g(n) lambda_n^b.
  double ratio(std::uint64_t n) const;
  RatioSequence ratio_sequence() const;
  LogRatioTerms log_ratio_terms(std::uint64_t n) const;

  std::string describe() const;

 private:
  BaseDistribution base_;
  InflationSpec spec_;
  double log_z_ = 0.0;
};

// sum_{k > q} b(k) g(k), carried until the remaining terms are negligible.
double upper_tail(const BaseDistribution& base, std::uint64_t q,
                  const std::function<double(std::uint64_t)>& g);

// z for a base and spec without building the distribution; throws if z <= 0.
double inflation_normalizer(const BaseDistribution& base, const InflationSpec& spec);

}  // namespace bdstat
