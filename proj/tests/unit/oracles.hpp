// Independent reference computations for the unit tests. Everything here is
// written from the textbook formulas with plain loops in long double and does
// not call into the library.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using LD = long double;

inline LD lfact(std::uint64_t n) { return std::lgamma(static_cast<LD>(n) + 1.0L); }

inline double poisson(double lambda, std::uint64_t n) {
  return static_cast<double>(std::exp(n * std::log(static_cast<LD>(lambda)) - lambda - lfact(n)));
}

inline double geometric(double lambda, std::uint64_t n) {
  return static_cast<double>((1.0L - lambda) * std::pow(static_cast<LD>(lambda), static_cast<LD>(n)));
}

// Unnormalized weights w(0..N-1) -> normalized probabilities.
inline std::vector<double> normalize(const std::function<LD(std::uint64_t)>& w, std::uint64_t N) {
  std::vector<LD> v(N);
  LD s = 0;
  for (std::uint64_t n = 0; n < N; ++n) s += (v[n] = w(n));
  std::vector<double> out(N);
  for (std::uint64_t n = 0; n < N; ++n) out[n] = static_cast<double>(v[n] / s);
  return out;
}

// Brute-force moments of a probability vector.
struct Moments {
  double mean, var, skew, kurt, band;
};

inline Moments moments(const std::vector<double>& p) {
  LD m = 0, s = 0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    m += n * static_cast<LD>(p[n]);
    s += p[n];
  }
  m /= s;
  LD c2 = 0, c3 = 0, c4 = 0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    const LD d = n - m;
    c2 += d * d * p[n];
    c3 += d * d * d * p[n];
    c4 += d * d * d * d * p[n];
  }
  c2 /= s;
  c3 /= s;
  c4 /= s;
  const LD sd = std::sqrt(c2);
  LD band = 0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    const LD d = n - m;
    if (std::fabs(d) <= sd) band += d * d * d * d * p[n];
  }
  return {static_cast<double>(m), static_cast<double>(c2), static_cast<double>(c3 / (c2 * sd)),
          static_cast<double>(c4 / (c2 * c2)), static_cast<double>(band / s / (c2 * c2))};
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace oracle
