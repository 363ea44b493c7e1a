#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bdstat/model.hpp"
#include "bdstat/stationary.hpp"

namespace bdstat {

enum class DeathClock {
  Linear,    // mu_n = n, gamma_n = lambda_n (n+1)
  Constant,  // mu_n = 1, gamma_n = lambda_n
};

std::string to_string(DeathClock clock);

struct BirthDeathRates {
  std::function<double(std::uint64_t)> birth;
  std::function<double(std::uint64_t)> death;  // used for n >= 1
  std::optional<RatioSequence> canonicalized_from;
  std::string provenance;
};

BirthDeathRates canonical_rates(const RatioSequence& ratios, DeathClock clock = DeathClock::Linear);

struct SimConfig {
  std::uint64_t seed = 1;
  // Defaults to 50 / min(mu_1, gamma_0).
  std::optional<double> burn_in_time;
  double sample_time = 1e5;
  double thinning_interval = 1.0;
  // Abort when the state exceeds this bound.
  std::optional<std::uint64_t> state_cap;
};

struct SimResult {
  std::vector<double> occupancy;       // time-weighted, normalized
  std::vector<double> snapshots;       // states seen every thinning_interval, normalized
  std::vector<std::uint64_t> up;       // up[n]: transitions n -> n+1 inside the window
  std::vector<std::uint64_t> down;     // down[n]: transitions n+1 -> n inside the window
  double burn_in_time = 0.0;
  double sample_time = 0.0;
  std::uint64_t events = 0;
};

// Name of the generator recorded in output metadata.
inline constexpr const char* kRngAlgorithm = "mt19937_64";

// Gillespie simulation from state 0. Throws StateExplosionError past the cap.
SimResult run_ctmc(const BirthDeathRates& rates, const SimConfig& config);

// 10 (mean + 12 sd) of the target law, rounded up.
std::uint64_t explosion_cap(const CountModel& model);

double total_variation(const std::vector<double>& p, const std::vector<double>& q);

// iid draws by inverse CDF.
std::vector<std::uint64_t> draw_sample(const CountModel& model, std::size_t size, std::uint64_t seed);

// Uniform on [0, 1) from the top 53 bits.
double uniform01(std::mt19937_64& rng);

}  // namespace bdstat
