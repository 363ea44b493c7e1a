#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bdstat/series.hpp"

namespace bdstat {

// Birth-death-rate ratio sequence n -> lambda_n = gamma_n / mu_{n+1}.
//
// Only the ratio is represented; the individual rates are not identifiable
// from the stationary law. `limit` is the analytic limit of lambda_n when
// known, and `regular_from` is the index past which the sequence behaves
// regularly (the divergence probe starts there).
struct RatioSequence {
  std::function<double(std::uint64_t)> eval;
  std::optional<double> limit;
  std::uint64_t regular_from = 0;
  std::string label = "custom";

  double operator()(std::uint64_t n) const { return eval(n); }

  static RatioSequence constant(double value);
  // lambda_n = values[n] for n < values.size(), tail_value afterwards.
  static RatioSequence from_values(std::vector<double> values, double tail_value);
};

// Normalized stationary law built from a ratio sequence:
// p_0 = (1 + sum_i lambda_0...lambda_i)^-1 and p_n = lambda_0...lambda_{n-1} p_0.
class StationaryPmf {
 public:
  StationaryPmf(RatioSequence ratios, const SeriesPolicy& policy);

  double log_p0() const { return log_p_.front(); }
  // log(1 + lambda_0 + lambda_0 lambda_1 + ...).
  double log_series_sum() const { return -log_p_.front(); }
  double log_pmf(std::uint64_t n) const;
  double pmf(std::uint64_t n) const;
  // Number of terms retained before the tail bound was met.
  std::size_t tabulated() const { return log_p_.size(); }
  const RatioSequence& ratios() const { return ratios_; }
  const SeriesPolicy& policy() const { return policy_; }

 private:
  RatioSequence ratios_;
  SeriesPolicy policy_;
  std::vector<double> log_p_;
};

// Throws NonExistenceError when the ratio series diverges.
StationaryPmf stationary_pmf_from_ratios(const RatioSequence& ratios, const SeriesPolicy& policy);

}  // namespace bdstat
