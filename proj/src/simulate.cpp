#include "bdstat/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "bdstat/errors.hpp"
#include "bdstat/moments.hpp"

namespace bdstat {

std::string to_string(DeathClock clock) {
  return clock == DeathClock::Linear ? "linear" : "constant";
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

BirthDeathRates canonical_rates(const RatioSequence& ratios, DeathClock clock) {
  BirthDeathRates r;
  r.canonicalized_from = ratios;
  if (clock == DeathClock::Linear) {
    r.birth = [ratios](std::uint64_t n) { return ratios(n) * (static_cast<double>(n) + 1.0); };
    r.death = [](std::uint64_t n) { return static_cast<double>(n); };
    r.provenance = "mu_n = n, gamma_n = (n+1) lambda_n from " + ratios.label;
  } else {
    r.birth = [ratios](std::uint64_t n) { return ratios(n); };
    r.death = [](std::uint64_t n) { return n == 0 ? 0.0 : 1.0; };
    r.provenance = "mu_n = 1, gamma_n = lambda_n from " + ratios.label;
  }
  return r;
}

SimResult run_ctmc(const BirthDeathRates& rates, const SimConfig& config) {
  if (!(config.sample_time > 0.0) || !std::isfinite(config.sample_time)) {
    throw DomainError("sample_time must be positive; an empty window gives no occupancy table");
  }
  if (!(config.thinning_interval > 0.0)) throw DomainError("thinning_interval must be positive");
  SimResult out;
  out.burn_in_time = config.burn_in_time
                         ? *config.burn_in_time
                         : 50.0 / std::min(rates.death(1), rates.birth(0));
  if (!(out.burn_in_time >= 0.0) || !std::isfinite(out.burn_in_time)) {
    throw DomainError("burn_in_time must be finite and non-negative");
  }
  out.sample_time = config.sample_time;
  const double start = out.burn_in_time;
  const double stop = start + config.sample_time;

  std::mt19937_64 rng(config.seed);
  std::vector<double> time_in(1, 0.0);
  std::vector<double> snaps(1, 0.0);
  double next_snapshot = start;
  std::uint64_t n = 0;
  double t = 0.0;
  auto grow = [&](std::uint64_t k) {
    if (time_in.size() <= k + 1) {
      time_in.resize(k + 2, 0.0);
      snaps.resize(k + 2, 0.0);
      out.up.resize(k + 2, 0);
      out.down.resize(k + 2, 0);
    }
  };
  grow(0);
  while (t < stop) {
    const double b = rates.birth(n);
    const double d = n == 0 ? 0.0 : rates.death(n);
    const double total = b + d;
    if (!(total > 0.0)) throw DomainError("state " + std::to_string(n) + " is absorbing");
    const double dt = -std::log1p(-uniform01(rng)) / total;
    const double t_next = t + dt;
    const double lo = std::max(t, start), hi = std::min(t_next, stop);
    if (hi > lo) time_in[n] += hi - lo;
    while (next_snapshot < stop && next_snapshot < t_next) {
      snaps[n] += 1.0;
      next_snapshot += config.thinning_interval;
    }
    if (t_next >= stop) break;
    const bool birth = uniform01(rng) * total < b;
    const bool counted = t_next >= start;
    if (birth) {
      if (counted) ++out.up[n];
      ++n;
      if (config.state_cap && n > *config.state_cap) {
        throw StateExplosionError("state " + std::to_string(n) + " exceeded the guard " +
                                  std::to_string(*config.state_cap) + " at time " +
                                  std::to_string(t_next));
      }
      grow(n);
    } else {
      --n;
      if (counted) ++out.down[n];
    }
    t = t_next;
    ++out.events;
  }
  while (time_in.size() > 1 && time_in.back() == 0.0 && snaps.back() == 0.0) {
    time_in.pop_back();
    snaps.pop_back();
  }
  out.up.resize(time_in.size());
  out.down.resize(time_in.size());
  double total_snaps = 0.0;
  for (double s : snaps) total_snaps += s;
  out.occupancy.resize(time_in.size());
  for (std::size_t k = 0; k < time_in.size(); ++k) out.occupancy[k] = time_in[k] / config.sample_time;
  out.snapshots.resize(snaps.size());
  for (std::size_t k = 0; k < snaps.size(); ++k) {
    out.snapshots[k] = total_snaps > 0.0 ? snaps[k] / total_snaps : 0.0;
  }
  return out;
}

std::uint64_t explosion_cap(const CountModel& model) {
  const MomentSummary m = moments_direct(model);
  return static_cast<std::uint64_t>(std::ceil(10.0 * (m.mean + 12.0 * std::sqrt(m.variance)))) + 1;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  const std::size_t n = std::max(p.size(), q.size());
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = k < p.size() ? p[k] : 0.0;
    const double b = k < q.size() ? q[k] : 0.0;
    s += std::abs(a - b);
  }
  return 0.5 * s;
}

std::vector<std::uint64_t> draw_sample(const CountModel& model, std::size_t size,
                                       std::uint64_t seed) {
  const auto probs = model.probabilities();
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) cdf[k] = (acc += probs[k]);
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> out(size);
  for (auto& x : out) {
    const double u = uniform01(rng) * acc;
    x = static_cast<std::uint64_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    if (x >= probs.size()) x = probs.size() - 1;
  }
  return out;
}

}  // namespace bdstat
