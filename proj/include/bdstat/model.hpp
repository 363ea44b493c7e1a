#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "bdstat/base.hpp"
#include "bdstat/infdef.hpp"
#include "bdstat/mixture.hpp"
#include "bdstat/stationary.hpp"

namespace bdstat {

// Any count law the library can evaluate. Custom laws come straight from a ratio sequence.
class CountModel {
 public:
  using Variant = std::variant<BaseDistribution, InfDefDistribution, MixtureModel, StationaryPmf>;

  CountModel(BaseDistribution d) : v_(std::move(d)) {}
  CountModel(InfDefDistribution d) : v_(std::move(d)) {}
  CountModel(MixtureModel d) : v_(std::move(d)) {}
  CountModel(StationaryPmf d) : v_(std::move(d)) {}

  const Variant& get() const { return v_; }
  template <class T>
  const T* as() const {
    return std::get_if<T>(&v_);
  }

  double log_pmf(std::uint64_t n) const;
  double pmf(std::uint64_t n) const;
  const SeriesPolicy& policy() const;

  // lambda_n = p(n+1)/p(n), with the divergence probe starting past the last modified index.
  RatioSequence ratio_sequence() const;

  // Smallest support horizon that must be enumerated regardless of tail behaviour.
  std::uint64_t min_support() const;

  // p(0..N) with the remaining tail below policy tolerance.
  std::vector<double> probabilities() const;

  std::string describe() const;

 private:
  Variant v_;
};

}  // namespace bdstat
