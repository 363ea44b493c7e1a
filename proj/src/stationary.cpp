#include "bdstat/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "bdstat/errors.hpp"

namespace bdstat {

namespace {

constexpr std::size_t kProbeWindow = 64;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

RatioSequence RatioSequence::constant(double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError("ratio must be positive and finite, got " + fmt(value));
  }
  RatioSequence seq;
  seq.eval = [value](std::uint64_t) { return value; };
  seq.limit = value;
  seq.label = "constant(" + fmt(value) + ")";
  return seq;
}

RatioSequence RatioSequence::from_values(std::vector<double> values, double tail_value) {
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("ratio values must be positive and finite");
  }
  if (!(tail_value > 0.0) || !std::isfinite(tail_value)) {
    throw DomainError("tail ratio must be positive and finite, got " + fmt(tail_value));
  }
  RatioSequence seq;
  const std::size_t head = values.size();
  seq.eval = [vals = std::move(values), tail_value](std::uint64_t n) {
    return n < vals.size() ? vals[n] : tail_value;
  };
  seq.limit = tail_value;
  seq.regular_from = head;
  seq.label = "tabulated";
  return seq;
}

StationaryPmf::StationaryPmf(RatioSequence ratios, const SeriesPolicy& policy)
    : ratios_(std::move(ratios)), policy_(policy) {
  policy_.validate();
  if (ratios_.limit && *ratios_.limit >= 1.0) {
    throw NonExistenceError("ratio sequence '" + ratios_.label + "' has limit " +
                            fmt(*ratios_.limit) +
                            " >= 1; the series 1 + sum lambda_0...lambda_i diverges, so no stationary distribution exists");
  }

  // log_terms[n] = log(lambda_0 ... lambda_{n-1}), log_terms[0] = 0.
  std::vector<double> log_terms{0.0};
  std::deque<double> window;
  double log_total = 0.0;
  const double log_tol = std::log(policy_.rel_tol);
  bool done = false;
  for (std::uint64_t n = 0; n < policy_.max_terms; ++n) {
    const double r = ratios_(n);
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw DomainError("ratio sequence '" + ratios_.label + "' is not positive at n=" +
                        std::to_string(n));
    }
    const double t = log_terms.back() + std::log(r);
    log_terms.push_back(t);
    log_total = log_add(log_total, t);

    if (n < ratios_.regular_from) continue;
    window.push_back(r);
    if (window.size() > kProbeWindow) window.pop_front();

    if (window.size() == kProbeWindow &&
        std::all_of(window.begin(), window.end(), [](double x) { return x >= 1.0; }) &&
        window.back() >= window.front()) {
      throw NonExistenceError("ratio sequence '" + ratios_.label + "' stays >= 1 over " +
                              std::to_string(kProbeWindow) + " indices past n=" +
                              std::to_string(ratios_.regular_from) +
                              "; the series 1 + sum lambda_0...lambda_i diverges, so no stationary distribution exists");
    }
    if (r < 1.0 && n > ratios_.regular_from) {
      double bound = *std::max_element(window.begin(), window.end());
      if (ratios_.limit) bound = std::max(bound, *ratios_.limit);
      if (bound < 1.0 && t + std::log(bound) - std::log1p(-bound) < log_tol + log_total) {
        done = true;
        break;
      }
    }
  }
  if (!done) {
    throw SeriesCapError("ratio series '" + ratios_.label + "' did not converge within max_terms=" +
                         std::to_string(policy_.max_terms));
  }
  log_p_.resize(log_terms.size());
  for (std::size_t i = 0; i < log_terms.size(); ++i) log_p_[i] = log_terms[i] - log_total;
}

double StationaryPmf::log_pmf(std::uint64_t n) const {
  if (n < log_p_.size()) return log_p_[n];
  double lp = log_p_.back();
  for (std::uint64_t k = log_p_.size() - 1; k < n; ++k) lp += std::log(ratios_(k));
  return lp;
}

double StationaryPmf::pmf(std::uint64_t n) const { return std::exp(log_pmf(n)); }

StationaryPmf stationary_pmf_from_ratios(const RatioSequence& ratios, const SeriesPolicy& policy) {
  return StationaryPmf(ratios, policy);
}

}  // namespace bdstat
