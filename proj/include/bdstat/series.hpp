#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace bdstat {

// Truncation rule shared by every infinite series in the library.
struct SeriesPolicy {
  double rel_tol = 1e-14;
  std::size_t max_terms = 100000;

  // Throws DomainError unless rel_tol is in (0, 1e-6] and max_terms >= 1000.
  void validate() const;
};

double log_add(double a, double b);
double log_sum_exp(std::span<const double> xs);

struct SeriesSum {
  double log_sum = 0.0;
  std::size_t terms = 0;
};

using LogTermFn = std::function<double(std::uint64_t)>;

// Sums exp(log_term(n)) for n = 0, 1, ... in log space.
//
// Stops at the first n >= min_terms where successive terms are decreasing and
// the geometric tail bound, using ratio max(current ratio, ratio_limit), falls
// below rel_tol times the running sum. Throws SeriesCapError after max_terms.
SeriesSum sum_log_series(const LogTermFn& log_term, const SeriesPolicy& policy,
                         std::optional<double> ratio_limit = std::nullopt,
                         std::uint64_t min_terms = 1);

// Probabilities p(0..N) of a normalized law, extended until the remaining tail is
// negligible: n >= min_support, p decreasing, tail bound < rel_tol, and n past
// mean + 12 sd of the mass seen so far.
std::vector<double> enumerate_support(const LogTermFn& log_pmf, const SeriesPolicy& policy,
                                      std::uint64_t min_support = 0);

// log of the rising factorial (x)_n = x (x+1) ... (x+n-1).
double log_rising_factorial(double x, std::uint64_t n);
double log_factorial(std::uint64_t n);

}  // namespace bdstat
