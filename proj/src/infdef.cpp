#include "bdstat/infdef.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bdstat/errors.hpp"

namespace bdstat {

std::string_view to_string(InflationFamily family) {
  return family == InflationFamily::Type1 ? "type1" : "type2";
}

InflationFamily parse_inflation_family(std::string_view name) {
  if (name == "type1") return InflationFamily::Type1;
  if (name == "type2") return InflationFamily::Type2;
  throw DomainError("unknown inflation family '" + std::string(name) + "'");
}

InflationSpec::InflationSpec(InflationFamily family, std::vector<std::uint64_t> points,
                             std::vector<double> factors)
    : family_(family), points_(std::move(points)), factors_(std::move(factors)) {
  if (points_.empty()) throw DomainError("inflation set F must be non-empty");
  if (points_.size() != factors_.size()) {
    throw DomainError("inflation set has " + std::to_string(points_.size()) + " points but " +
                      std::to_string(factors_.size()) + " factors");
  }
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (points_[i] <= points_[i - 1]) {
      throw DomainError("inflation points must be strictly increasing");
    }
  }
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (!(factors_[i] > 0.0) || !std::isfinite(factors_[i])) {
      std::ostringstream os;
      os << "inflation factor at n=" << points_[i] << " must satisfy 0 < factor < inf, got "
         << factors_[i];
      throw DomainError(os.str());
    }
  }
}

InflationSpec InflationSpec::type1(std::vector<std::uint64_t> points, std::vector<double> alphas) {
  return InflationSpec(InflationFamily::Type1, std::move(points), std::move(alphas));
}

InflationSpec InflationSpec::type2(std::vector<std::uint64_t> points, std::vector<double> phis) {
  return InflationSpec(InflationFamily::Type2, std::move(points), std::move(phis));
}

InflationSpec InflationSpec::make(InflationFamily family, std::vector<std::uint64_t> points,
                                  std::vector<double> factors) {
  return InflationSpec(family, std::move(points), std::move(factors));
}

InflationSpec InflationSpec::with_factors(std::vector<double> factors) const {
  return InflationSpec(family_, points_, std::move(factors));
}

double InflationSpec::log_weight(std::uint64_t n) const {
  double s = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (family_ == InflationFamily::Type1 ? n == points_[i] : n <= points_[i]) {
      s += std::log(factors_[i]);
    }
  }
  return s;
}

double InflationSpec::weight(std::uint64_t n) const { return std::exp(log_weight(n)); }

double InflationSpec::log_ratio_factor(std::uint64_t n) const {
  if (family_ == InflationFamily::Type2) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (points_[i] == n) return -std::log(factors_[i]);
    }
    return 0.0;
  }
  return log_weight(n + 1) - log_weight(n);
}

double InflationSpec::ratio_factor(std::uint64_t n) const {
  return std::exp(log_ratio_factor(n));
}

std::string InflationSpec::describe() const {
  std::ostringstream os;
  os.precision(12);
  os << to_string(family_) << "{";
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (i) os << ", ";
    os << points_[i] << ":" << factors_[i];
  }
  os << "}";
  return os.str();
}

double upper_tail(const BaseDistribution& base, std::uint64_t q,
                  const std::function<double(std::uint64_t)>& g) {
  const double mean = base.mean();
  const std::uint64_t cap = q + base.policy().max_terms;
  double acc = 0.0;
  for (std::uint64_t k = q + 1;; ++k) {
    const double b = base.pmf(k);
    const double t = b * g(k);
    acc += t;
    const double x = static_cast<double>(k);
    if (x > mean + 1.0) {
      const double reach = b * (1.0 + (x - mean) * (x - mean));
      if (b == 0.0 || reach <= 1e-18 * std::abs(acc)) break;
    }
    if (k >= cap) {
      throw SeriesCapError("upper tail of " + base.describe() + " did not settle within " +
                           std::to_string(base.policy().max_terms) + " terms");
    }
  }
  return acc;
}

double inflation_normalizer(const BaseDistribution& base, const InflationSpec& spec) {
  const auto& pts = spec.points();
  const auto& fac = spec.factors();
  double z = 1.0;
  if (spec.family() == InflationFamily::Type1) {
    for (std::size_t i = 0; i < pts.size(); ++i) z += (fac[i] - 1.0) * base.pmf(pts[i]);
  } else {
    // Block (n_{i-1}, n_i] carries weight prod_{j >= i} phi_j. Summing the
    // weighted blocks plus the upper tail avoids 1 - P(N <= q) cancelling.
    double tail_product = 1.0;
    std::vector<double> block_weight(pts.size());
    for (std::size_t i = pts.size(); i-- > 0;) {
      tail_product *= fac[i];
      block_weight[i] = tail_product;
    }
    std::uint64_t k = 0;
    z = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      double block_mass = 0.0;
      for (; k <= pts[i]; ++k) block_mass += base.pmf(k);
      z += block_weight[i] * block_mass;
    }
    z += upper_tail(base, spec.max_point(), [](std::uint64_t) { return 1.0; });
  }
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw std::logic_error("inflation normalizer is not positive for " + spec.describe());
  }
  return z;
}

InfDefDistribution::InfDefDistribution(BaseDistribution base, InflationSpec spec)
    : base_(std::move(base)), spec_(std::move(spec)) {
  log_z_ = std::log(inflation_normalizer(base_, spec_));
}

double InfDefDistribution::z() const { return std::exp(log_z_); }

double InfDefDistribution::log_pmf(std::uint64_t n) const {
  return spec_.log_weight(n) + base_.log_pmf(n) - log_z_;
}

double InfDefDistribution::pmf(std::uint64_t n) const { return std::exp(log_pmf(n)); }

LogRatioTerms InfDefDistribution::log_ratio_terms(std::uint64_t n) const {
  return {std::log(base_.ratio(n)), spec_.log_ratio_factor(n)};
}

double InfDefDistribution::ratio(std::uint64_t n) const {
  return spec_.ratio_factor(n) * base_.ratio(n);
}

RatioSequence InfDefDistribution::ratio_sequence() const {
  RatioSequence seq = base_.ratio_sequence();
  seq.eval = [self = *this](std::uint64_t n) { return self.ratio(n); };
  seq.regular_from = spec_.max_point() + 1;
  seq.label = describe();
  return seq;
}

std::string InfDefDistribution::describe() const {
  return spec_.describe() + " x " + base_.describe();
}

}  // namespace bdstat
