#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bdstat/base.hpp"
#include "bdstat/infdef.hpp"
#include "bdstat/model.hpp"

namespace bdstat {

struct MomentSummary {
  double mean = 0.0;
  double variance = 0.0;
  double dispersion_index = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
  // Fourth standardized moment restricted to |n - mean| <= sd.
  double kurtosis_central_band = 0.0;
};

struct ClosedMoments {
  double mean = 0.0;
  double variance = 0.0;
  // Set when the base has no closed moments (PL) and the values were summed directly.
  bool series_fallback = false;
};

// Mean and variance as corrections around the base moments.
ClosedMoments moments_closed(const InfDefDistribution& dist);

MomentSummary moments_direct(const CountModel& model);
MomentSummary moments_from_probabilities(const std::vector<double>& probs);

// phi making the type 2 Poisson model with F = {q} have mean = variance = q.
double equidispersion_phi(double lambda, std::uint64_t q);

// Type 1/type 2 models with a single inflation point q on a given base.
struct DispersionFamily {
  BaseKind kind = BaseKind::Poisson;
  double shape = 0.0;
  InflationFamily inflation = InflationFamily::Type2;
  std::uint64_t q = 1;
  SeriesPolicy policy{};

  InfDefDistribution model(double lambda, double factor) const;
  double dispersion_index(double lambda, double factor) const;
};

struct DispersionSurface {
  std::vector<double> lambdas;
  std::vector<double> factors;
  // index[i][j] at (lambdas[i], factors[j]); empty where the node is inadmissible.
  std::vector<std::vector<std::optional<double>>> index;
  std::vector<std::vector<std::string>> errors;
};

DispersionSurface dispersion_surface(const DispersionFamily& family,
                                     const std::vector<double>& lambdas,
                                     const std::vector<double>& factors);

struct Contour {
  std::vector<double> roots;
  // The index equals 1 at every scanned node, so every lambda is a root.
  bool degenerate = false;
};

// Roots in lambda of dispersion_index - 1 over (lo, hi) at a fixed factor.
Contour equidispersion_contour(const DispersionFamily& family, double factor, double lo,
                               double hi, std::size_t scan_intervals = 400, double tol = 1e-6);

enum class SequenceTrend { Constant, Increasing, Decreasing, NonMonotonic };
enum class DispersionKind { Equidispersed, Overdispersed, Underdispersed, Undetermined };

std::string to_string(SequenceTrend trend);
std::string to_string(DispersionKind kind);

struct SequenceVerdict {
  SequenceTrend trend;
  DispersionKind implication;
};

// Monotonicity of a_n = (n+1) lambda_n for n < horizon.
SequenceVerdict classify_sequence(const RatioSequence& ratios, std::uint64_t horizon = 200);
SequenceVerdict classify_sequence(const CountModel& model, std::uint64_t horizon = 200);

}  // namespace bdstat
