#include "bdstat/base.hpp"

#include <cmath>
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

void require(bool ok, const std::string& message) {
  if (!ok) throw DomainError(message);
}

}  // namespace

std::string_view to_string(BaseKind kind) {
  switch (kind) {
    case BaseKind::Geometric: return "geometric";
    case BaseKind::Poisson: return "poisson";
    case BaseKind::PoissonLindley: return "poisson_lindley";
    case BaseKind::NegativeBinomial: return "negative_binomial";
    case BaseKind::HyperPoisson: return "hyper_poisson";
    case BaseKind::CMP: return "cmp";
  }
  return "unknown";
}

BaseKind parse_base_kind(std::string_view name) {
  if (name == "geometric" || name == "geom") return BaseKind::Geometric;
  if (name == "poisson") return BaseKind::Poisson;
  if (name == "poisson_lindley" || name == "pl") return BaseKind::PoissonLindley;
  if (name == "negative_binomial" || name == "nb") return BaseKind::NegativeBinomial;
  if (name == "hyper_poisson" || name == "hp") return BaseKind::HyperPoisson;
  if (name == "cmp" || name == "conway_maxwell_poisson") return BaseKind::CMP;
  throw DomainError("unknown base distribution kind '" + std::string(name) + "'");
}

BaseDistribution::BaseDistribution(BaseKind kind, double lambda, double shape,
                                   const SeriesPolicy& policy)
    : kind_(kind), lambda_(lambda), shape_(shape), policy_(policy) {
  policy_.validate();
  const std::string name(to_string(kind));
  require(std::isfinite(lambda) && lambda > 0.0,
          name + " requires lambda > 0, got lambda=" + num(lambda));
  switch (kind) {
    case BaseKind::Geometric:
    case BaseKind::PoissonLindley:
      require(lambda < 1.0, name + " requires 0 < lambda < 1, got lambda=" + num(lambda));
      shape_ = 0.0;
      break;
    case BaseKind::Poisson:
      shape_ = 0.0;
      break;
    case BaseKind::NegativeBinomial:
      require(std::isfinite(shape) && shape > 0.0,
              "negative_binomial requires r > 0, got r=" + num(shape));
      require(lambda / shape < 1.0, "negative_binomial requires 0 < lambda/r < 1, got lambda/r=" +
                                        num(lambda / shape));
      break;
    case BaseKind::HyperPoisson:
      require(std::isfinite(shape) && shape > 0.0,
              "hyper_poisson requires tau > 0, got tau=" + num(shape));
      break;
    case BaseKind::CMP:
      require(std::isfinite(shape) && shape > 0.0, "cmp requires nu > 0, got nu=" + num(shape));
      break;
  }

  if (kind == BaseKind::HyperPoisson || kind == BaseKind::CMP) {
    const double log_lambda = std::log(lambda_);
    const double s = shape_;
    LogTermFn term;
    if (kind == BaseKind::HyperPoisson) {
      term = [=](std::uint64_t n) {
        return static_cast<double>(n) * log_lambda - log_rising_factorial(s, n);
      };
    } else {
      term = [=](std::uint64_t n) {
        return static_cast<double>(n) * log_lambda - s * log_factorial(n);
      };
    }
    log_z_ = sum_log_series(term, policy_, 0.0).log_sum;
  }
  if (kind == BaseKind::HyperPoisson || kind == BaseKind::CMP ||
      kind == BaseKind::PoissonLindley) {
    const auto probs = enumerate_support([this](std::uint64_t n) { return log_pmf(n); }, policy_);
    double m = 0.0;
    for (std::size_t n = 0; n < probs.size(); ++n) m += static_cast<double>(n) * probs[n];
    double v = 0.0;
    for (std::size_t n = 0; n < probs.size(); ++n) {
      const double d = static_cast<double>(n) - m;
      v += d * d * probs[n];
    }
    series_mean_ = m;
    series_var_ = v;
  }
}

BaseDistribution BaseDistribution::geometric(double lambda, const SeriesPolicy& policy) {
  return BaseDistribution(BaseKind::Geometric, lambda, 0.0, policy);
}
BaseDistribution BaseDistribution::poisson(double lambda, const SeriesPolicy& policy) {
  return BaseDistribution(BaseKind::Poisson, lambda, 0.0, policy);
}
BaseDistribution BaseDistribution::poisson_lindley(double lambda, const SeriesPolicy& policy) {
  return BaseDistribution(BaseKind::PoissonLindley, lambda, 0.0, policy);
}
BaseDistribution BaseDistribution::negative_binomial(double lambda, double r,
                                                     const SeriesPolicy& policy) {
  return BaseDistribution(BaseKind::NegativeBinomial, lambda, r, policy);
}
BaseDistribution BaseDistribution::hyper_poisson(double lambda, double tau,
                                                 const SeriesPolicy& policy) {
  return BaseDistribution(BaseKind::HyperPoisson, lambda, tau, policy);
}
BaseDistribution BaseDistribution::cmp(double lambda, double nu, const SeriesPolicy& policy) {
  return BaseDistribution(BaseKind::CMP, lambda, nu, policy);
}
BaseDistribution BaseDistribution::make(BaseKind kind, double lambda, double shape,
                                        const SeriesPolicy& policy) {
  return BaseDistribution(kind, lambda, shape, policy);
}

bool BaseDistribution::has_shape() const {
  return kind_ == BaseKind::NegativeBinomial || kind_ == BaseKind::HyperPoisson ||
         kind_ == BaseKind::CMP;
}

BaseDistribution BaseDistribution::with_lambda(double lambda) const {
  return BaseDistribution(kind_, lambda, shape_, policy_);
}

double BaseDistribution::ratio(std::uint64_t n) const {
  const double x = static_cast<double>(n);
  switch (kind_) {
    case BaseKind::Geometric: return lambda_;
    case BaseKind::Poisson: return lambda_ / (x + 1.0);
    case BaseKind::PoissonLindley:
      return (1.0 + (x + 2.0) * lambda_) * lambda_ / (1.0 + (x + 1.0) * lambda_);
    case BaseKind::NegativeBinomial: return (x / shape_ + 1.0) * lambda_ / (x + 1.0);
    case BaseKind::HyperPoisson: return lambda_ / (shape_ + x);
    case BaseKind::CMP: return lambda_ / std::pow(x + 1.0, shape_);
  }
  return 0.0;
}

RatioSequence BaseDistribution::ratio_sequence() const {
  RatioSequence seq;
  seq.eval = [self = *this](std::uint64_t n) { return self.ratio(n); };
  switch (kind_) {
    case BaseKind::Geometric:
    case BaseKind::PoissonLindley: seq.limit = lambda_; break;
    case BaseKind::NegativeBinomial: seq.limit = lambda_ / shape_; break;
    default: seq.limit = 0.0; break;
  }
  seq.label = describe();
  return seq;
}

double BaseDistribution::log_pmf(std::uint64_t n) const {
  const double x = static_cast<double>(n);
  const double ll = std::log(lambda_);
  switch (kind_) {
    case BaseKind::Geometric: return std::log1p(-lambda_) + x * ll;
    case BaseKind::Poisson: return x * ll - lambda_ - log_factorial(n);
    case BaseKind::PoissonLindley:
      return 2.0 * std::log1p(-lambda_) + std::log1p(lambda_ + x * lambda_) + x * ll;
    case BaseKind::NegativeBinomial: {
      const double p = lambda_ / shape_;
      return log_rising_factorial(shape_, n) - log_factorial(n) + x * std::log(p) +
             shape_ * std::log1p(-p);
    }
    case BaseKind::HyperPoisson: return x * ll - log_rising_factorial(shape_, n) - log_z_;
    case BaseKind::CMP: return x * ll - shape_ * log_factorial(n) - log_z_;
  }
  return 0.0;
}

double BaseDistribution::pmf(std::uint64_t n) const { return std::exp(log_pmf(n)); }

double BaseDistribution::mean() const {
  switch (kind_) {
    case BaseKind::Geometric: return lambda_ / (1.0 - lambda_);
    case BaseKind::Poisson: return lambda_;
    case BaseKind::NegativeBinomial: return lambda_ / (1.0 - lambda_ / shape_);
    default: return series_mean_;
  }
}

double BaseDistribution::variance() const {
  switch (kind_) {
    case BaseKind::Geometric: return lambda_ / ((1.0 - lambda_) * (1.0 - lambda_));
    case BaseKind::Poisson: return lambda_;
    case BaseKind::NegativeBinomial: {
      const double q = 1.0 - lambda_ / shape_;
      return lambda_ / (q * q);
    }
    default: return series_var_;
  }
}

std::string BaseDistribution::describe() const {
  std::string out = std::string(to_string(kind_)) + "(lambda=" + num(lambda_);
  switch (kind_) {
    case BaseKind::NegativeBinomial: out += ", r=" + num(shape_); break;
    case BaseKind::HyperPoisson: out += ", tau=" + num(shape_); break;
    case BaseKind::CMP: out += ", nu=" + num(shape_); break;
    default: break;
  }
  return out + ")";
}

double base_ratio(const BaseDistribution& base, std::uint64_t n) { return base.ratio(n); }
double base_pmf(const BaseDistribution& base, std::uint64_t n) { return base.pmf(n); }

}  // namespace bdstat
