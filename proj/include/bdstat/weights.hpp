#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "bdstat/base.hpp"
#include "bdstat/stationary.hpp"

namespace bdstat {

// Positive weight f(n) multiplying a base pmf. Evaluated in log space.
struct WeightFunction {
  std::string name;
  std::map<std::string, double> params;
  std::function<double(std::uint64_t)> log_eval;

  double eval(std::uint64_t n) const;
  // f(n+1)/f(n).
  double ratio(std::uint64_t n) const;
};

// Which base the catalogue weight is meant to modify: the geometric column
// turns a geometric law into the named law, the Poisson column turns Poisson into it.
enum class WeightColumn { Geometric, Poisson };

WeightFunction identity_weight();

// Catalogue entries: identity, geometric, poisson, poisson_lindley (lambda),
// negative_binomial (r), hyper_poisson (tau), cmp (nu), weighted_poisson (r, tau),
// puig (tau), bohning (tau, nu). Missing or invalid parameters throw DomainError.
WeightFunction catalogue_weight(std::string_view entry, WeightColumn column,
                                const std::map<std::string, double>& params = {});
std::vector<std::string> catalogue_entries();

// p(n) = w(n) b(n) / sum_i w(i) b(i), built through the modified ratio sequence.
StationaryPmf weighted_pmf(const BaseDistribution& base, const WeightFunction& w,
                           const SeriesPolicy& policy);

}  // namespace bdstat
