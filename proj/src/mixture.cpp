#include "bdstat/mixture.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "bdstat/errors.hpp"

namespace bdstat {

namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

void check_points(const std::vector<std::uint64_t>& points, std::size_t n_params) {
  if (points.empty()) throw DomainError("mixture needs at least one inflation point");
  if (points.size() != n_params) {
    throw DomainError("mixture has " + std::to_string(points.size()) + " points but " +
                      std::to_string(n_params) + " weights");
  }
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i] <= points[i - 1]) throw DomainError("inflation points must be strictly increasing");
  }
}

}  // namespace

std::string_view to_string(MixtureVariant variant) {
  switch (variant) {
    case MixtureVariant::ZeroInflated: return "zero_inflated";
    case MixtureVariant::MultipleInflation: return "multiple";
    case MixtureVariant::Hurdle: return "hurdle";
    case MixtureVariant::Haslett: return "haslett";
  }
  return "unknown";
}

MixtureVariant parse_mixture_variant(std::string_view name) {
  if (name == "zero_inflated" || name == "zi") return MixtureVariant::ZeroInflated;
  if (name == "multiple" || name == "multiple_inflation") return MixtureVariant::MultipleInflation;
  if (name == "hurdle") return MixtureVariant::Hurdle;
  if (name == "haslett") return MixtureVariant::Haslett;
  throw DomainError("unknown mixture variant '" + std::string(name) + "'");
}

void check_omega_region(const BaseDistribution& base, const std::vector<std::uint64_t>& points,
                        const std::vector<double>& omegas) {
  check_points(points, omegas.size());
  double sum = 0.0;
  for (double w : omegas) {
    if (!std::isfinite(w)) throw DomainError("mixture weights must be finite");
    sum += w;
  }
  const double keep = 1.0 - sum;
  if (!(keep > 0.0)) {
    throw DomainError("boundary l1 violated: 1 - sum(omega) = " + num(keep) + " <= 0");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    // b(n) > 0, so only negative omegas can reach the boundary.
    if (omegas[i] >= 0.0) continue;
    const double p = omegas[i] + keep * base.pmf(points[i]);
    if (!(p > 0.0)) {
      throw DomainError("boundary l" + std::to_string(i + 2) + " violated: omega_" +
                        std::to_string(points[i]) + " + (1 - sum(omega)) b(" +
                        std::to_string(points[i]) + ") = " + num(p) + " <= 0");
    }
  }
}

MixtureModel::MixtureModel(MixtureVariant variant, BaseDistribution base,
                           std::vector<std::uint64_t> points, std::vector<double> params)
    : variant_(variant), base_(std::move(base)), points_(std::move(points)),
      params_(std::move(params)) {
  switch (variant_) {
    case MixtureVariant::ZeroInflated:
    case MixtureVariant::MultipleInflation: {
      if (variant_ == MixtureVariant::ZeroInflated &&
          (points_.size() != 1 || points_[0] != 0)) {
        throw DomainError("zero_inflated mixture must use F = {0}");
      }
      check_omega_region(base_, points_, params_);
      log_keep_ = std::log1p(-std::accumulate(params_.begin(), params_.end(), 0.0));
      break;
    }
    case MixtureVariant::Hurdle: {
      check_points(points_, params_.size());
      if (points_.size() != 1 || points_[0] != 0) throw DomainError("hurdle must use F = {0}");
      const double pi = params_[0];
      if (!(pi > 0.0 && pi < 1.0)) {
        throw DomainError("hurdle requires 0 < pi < 1, got pi=" + num(pi));
      }
      log_keep_ = std::log1p(-pi);
      log_scale_ = std::log1p(-base_.pmf(0));
      break;
    }
    case MixtureVariant::Haslett: {
      check_points(points_, params_.size());
      if (points_.size() != 1 || points_[0] != 0) throw DomainError("haslett must use F = {0}");
      const double psi = params_[0];
      if (!std::isfinite(psi)) throw DomainError("haslett requires a finite psi");
      log_scale_ = std::log1p(std::expm1(psi) * base_.pmf(0));
      break;
    }
  }
}

MixtureModel MixtureModel::zero_inflated(BaseDistribution base, double omega) {
  return MixtureModel(MixtureVariant::ZeroInflated, std::move(base), {0}, {omega});
}
MixtureModel MixtureModel::multiple(BaseDistribution base, std::vector<std::uint64_t> points,
                                    std::vector<double> omegas) {
  return MixtureModel(MixtureVariant::MultipleInflation, std::move(base), std::move(points),
                      std::move(omegas));
}
MixtureModel MixtureModel::hurdle(BaseDistribution base, double pi) {
  return MixtureModel(MixtureVariant::Hurdle, std::move(base), {0}, {pi});
}
MixtureModel MixtureModel::haslett(BaseDistribution base, double psi) {
  return MixtureModel(MixtureVariant::Haslett, std::move(base), {0}, {psi});
}
MixtureModel MixtureModel::make(MixtureVariant variant, BaseDistribution base,
                                std::vector<std::uint64_t> points, std::vector<double> params) {
  return MixtureModel(variant, std::move(base), std::move(points), std::move(params));
}

double MixtureModel::log_pmf(std::uint64_t n) const {
  switch (variant_) {
    case MixtureVariant::ZeroInflated:
    case MixtureVariant::MultipleInflation:
      for (std::size_t i = 0; i < points_.size(); ++i) {
        if (points_[i] == n) return std::log(params_[i] + std::exp(log_keep_) * base_.pmf(n));
      }
      return log_keep_ + base_.log_pmf(n);
    case MixtureVariant::Hurdle:
      if (n == 0) return std::log(params_[0]);
      return log_keep_ + base_.log_pmf(n) - log_scale_;
    case MixtureVariant::Haslett:
      return (n == 0 ? params_[0] : 0.0) + base_.log_pmf(n) - log_scale_;
  }
  return 0.0;
}

double MixtureModel::pmf(std::uint64_t n) const { return std::exp(log_pmf(n)); }

InfDefDistribution MixtureModel::equivalent_type1() const {
  std::vector<double> alphas;
  switch (variant_) {
    case MixtureVariant::ZeroInflated:
    case MixtureVariant::MultipleInflation:
      alphas = alpha_from_omega(base_, points_, params_);
      break;
    case MixtureVariant::Hurdle: {
      const double b0 = base_.pmf(0);
      const double pi = params_[0];
      alphas = {pi * (1.0 - b0) / ((1.0 - pi) * b0)};
      break;
    }
    case MixtureVariant::Haslett:
      alphas = {std::exp(params_[0])};
      break;
  }
  return InfDefDistribution(base_, InflationSpec::type1(points_, std::move(alphas)));
}

std::string MixtureModel::describe() const {
  std::ostringstream os;
  os.precision(12);
  os << to_string(variant_) << "{";
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (i) os << ", ";
    os << points_[i] << ":" << params_[i];
  }
  os << "} x " << base_.describe();
  return os.str();
}

std::vector<double> omega_from_alpha(const BaseDistribution& base, const InflationSpec& spec) {
  if (spec.family() != InflationFamily::Type1) {
    throw DomainError("omega_from_alpha needs a type 1 inflation spec");
  }
  const double z = inflation_normalizer(base, spec);
  std::vector<double> omegas(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    omegas[i] = (spec.factors()[i] - 1.0) * base.pmf(spec.points()[i]) / z;
  }
  return omegas;
}

std::vector<double> alpha_from_omega(const BaseDistribution& base,
                                     const std::vector<std::uint64_t>& points,
                                     const std::vector<double>& omegas) {
  check_omega_region(base, points, omegas);
  const double keep = 1.0 - std::accumulate(omegas.begin(), omegas.end(), 0.0);
  std::vector<double> alphas(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double kb = keep * base.pmf(points[i]);
    alphas[i] = (omegas[i] + kb) / kb;
  }
  return alphas;
}

std::vector<double> psi_from_omega(const BaseDistribution& base,
                                   const std::vector<std::uint64_t>& points,
                                   const std::vector<double>& omegas) {
  check_omega_region(base, points, omegas);
  const double keep = 1.0 - std::accumulate(omegas.begin(), omegas.end(), 0.0);
  std::vector<double> psis(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    psis[i] = std::log1p(omegas[i] / (keep * base.pmf(points[i])));
  }
  return psis;
}

std::vector<double> omega_from_psi(const BaseDistribution& base,
                                   const std::vector<std::uint64_t>& points,
                                   const std::vector<double>& psis) {
  std::vector<double> alphas(psis.size());
  for (std::size_t i = 0; i < psis.size(); ++i) {
    if (!std::isfinite(psis[i])) throw DomainError("psi values must be finite");
    alphas[i] = std::exp(psis[i]);
  }
  return omega_from_alpha(base, InflationSpec::type1(points, std::move(alphas)));
}

}  // namespace bdstat
