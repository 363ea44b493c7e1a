#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bdstat/base.hpp"
#include "bdstat/infdef.hpp"

namespace bdstat {

enum class MixtureVariant { ZeroInflated, MultipleInflation, Hurdle, Haslett };

std::string_view to_string(MixtureVariant variant);
MixtureVariant parse_mixture_variant(std::string_view name);

// Classical reference models for inflation at a set of points.
//
// ZeroInflated and MultipleInflation store omegas per point. Hurdle stores pi
// and Haslett stores psi as the single parameter at point 0.
class MixtureModel {
 public:
  static MixtureModel zero_inflated(BaseDistribution base, double omega);
  static MixtureModel multiple(BaseDistribution base, std::vector<std::uint64_t> points,
                               std::vector<double> omegas);
  static MixtureModel hurdle(BaseDistribution base, double pi);
  static MixtureModel haslett(BaseDistribution base, double psi);
  static MixtureModel make(MixtureVariant variant, BaseDistribution base,
                           std::vector<std::uint64_t> points, std::vector<double> params);

  MixtureVariant variant() const { return variant_; }
  const BaseDistribution& base() const { return base_; }
  const std::vector<std::uint64_t>& points() const { return points_; }
  const std::vector<double>& params() const { return params_; }
  const SeriesPolicy& policy() const { return base_.policy(); }

  double log_pmf(std::uint64_t n) const;
  double pmf(std::uint64_t n) const;

  // The type 1 model with the same shape.
  InfDefDistribution equivalent_type1() const;

  std::string describe() const;

 private:
  MixtureModel(MixtureVariant variant, BaseDistribution base, std::vector<std::uint64_t> points,
               std::vector<double> params);

  MixtureVariant variant_;
  BaseDistribution base_;
  std::vector<std::uint64_t> points_;
  std::vector<double> params_;
  double log_keep_ = 0.0;  // log(1 - sum omega) or log(1 - pi)
  double log_scale_ = 0.0;  // Hurdle: log(1 - b(0)); Haslett: log(1 + (e^psi - 1) b(0))
};

// omega_n = (alpha_n - 1) b(n) / z for n in F.
std::vector<double> omega_from_alpha(const BaseDistribution& base, const InflationSpec& spec);

// Throws DomainError naming boundary line l1 (1 - sum omega <= 0) or l(i+2)
// (omega_i + (1 - sum omega) b(n_i) <= 0) when the omegas leave the admissible region.
std::vector<double> alpha_from_omega(const BaseDistribution& base,
                                     const std::vector<std::uint64_t>& points,
                                     const std::vector<double>& omegas);

// psi_n = log alpha_n.
std::vector<double> psi_from_omega(const BaseDistribution& base,
                                   const std::vector<std::uint64_t>& points,
                                   const std::vector<double>& omegas);
std::vector<double> omega_from_psi(const BaseDistribution& base,
                                   const std::vector<std::uint64_t>& points,
                                   const std::vector<double>& psis);

// Checks the mixing-proportion hypotheses; same errors as alpha_from_omega.
void check_omega_region(const BaseDistribution& base, const std::vector<std::uint64_t>& points,
                        const std::vector<double>& omegas);

}  // namespace bdstat
