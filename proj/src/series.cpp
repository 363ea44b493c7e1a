#include "bdstat/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bdstat/errors.hpp"

namespace bdstat {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

void SeriesPolicy::validate() const {
  if (!(rel_tol > 0.0 && rel_tol <= 1e-6)) {
    throw DomainError("series rel_tol must lie in (0, 1e-6], got " + std::to_string(rel_tol));
  }
  if (max_terms < 1000) {
    throw DomainError("series max_terms must be >= 1000, got " + std::to_string(max_terms));
  }
}

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

double log_sum_exp(std::span<const double> xs) {
  if (xs.empty()) return kNegInf;
  const double m = *std::max_element(xs.begin(), xs.end());
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

double log_rising_factorial(double x, std::uint64_t n) {
  if (n == 0) return 0.0;
  return std::lgamma(x + static_cast<double>(n)) - std::lgamma(x);
}

double log_factorial(std::uint64_t n) { return std::lgamma(static_cast<double>(n) + 1.0); }

SeriesSum sum_log_series(const LogTermFn& log_term, const SeriesPolicy& policy,
                         std::optional<double> ratio_limit, std::uint64_t min_terms) {
  const double log_tol = std::log(policy.rel_tol);
  double total = kNegInf;
  double prev = kNegInf;
  for (std::uint64_t n = 0; n < policy.max_terms; ++n) {
    const double t = log_term(n);
    if (std::isnan(t)) throw DomainError("series term is NaN at n=" + std::to_string(n));
    total = log_add(total, t);
    if (n >= min_terms && n > 0) {
      if (t == kNegInf && prev == kNegInf) return {total, n + 1};
      const double log_r = t - prev;
      if (log_r < 0.0) {
        double r = std::exp(log_r);
        if (ratio_limit) r = std::max(r, *ratio_limit);
        if (r < 1.0 && t + std::log(r) - std::log1p(-r) < log_tol + total) {
          return {total, n + 1};
        }
      }
    }
    prev = t;
  }
  throw SeriesCapError("series did not converge within max_terms=" +
                       std::to_string(policy.max_terms));
}

std::vector<double> enumerate_support(const LogTermFn& log_pmf, const SeriesPolicy& policy,
                                      std::uint64_t min_support) {
  std::vector<double> probs;
  double mass = 0.0, s1 = 0.0, s2 = 0.0;
  double prev = 0.0;
  for (std::uint64_t n = 0; n < policy.max_terms; ++n) {
    const double p = std::exp(log_pmf(n));
    if (std::isnan(p)) throw DomainError("pmf is NaN at n=" + std::to_string(n));
    probs.push_back(p);
    const double x = static_cast<double>(n);
    mass += p;
    s1 += x * p;
    s2 += x * x * p;
    if (n >= min_support && n > 0 && mass > 0.5) {
      if (p == 0.0 && prev == 0.0) return probs;
      if (p < prev) {
        const double r = p / prev;
        const double mean = s1 / mass;
        const double sd = std::sqrt(std::max(0.0, s2 / mass - mean * mean));
        if (p * r / (1.0 - r) < policy.rel_tol * mass && x > mean + 12.0 * sd) return probs;
      }
    }
    prev = p;
  }
  throw SeriesCapError("support enumeration did not converge within max_terms=" +
                       std::to_string(policy.max_terms));
}

}  // namespace bdstat
