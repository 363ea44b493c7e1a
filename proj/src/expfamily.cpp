#include "bdstat/expfamily.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "bdstat/errors.hpp"
#include "bdstat/stationary.hpp"

namespace bdstat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Base law and inflation spec encoded by a canonical vector.
struct Decoded {
  BaseDistribution base;
  std::optional<InflationSpec> spec;
};

Decoded decode(const CanonicalFamily& fam, const Eigen::VectorXd& eta,
               const SeriesPolicy& policy) {
  double lambda = std::exp(eta[0]);
  if (fam.kind == BaseKind::NegativeBinomial) lambda *= fam.shape;
  double shape = fam.shape;
  if (fam.kind == BaseKind::CMP) shape = -eta[1];
  Decoded out{BaseDistribution::make(fam.kind, lambda, shape, policy), std::nullopt};
  if (fam.inflation) {
    std::vector<double> factors(fam.points.size());
    for (std::size_t i = 0; i < factors.size(); ++i) {
      factors[i] = std::exp(eta[static_cast<Eigen::Index>(fam.base_dim() + i)]);
    }
    out.spec = InflationSpec::make(*fam.inflation, fam.points, std::move(factors));
  }
  return out;
}

}  // namespace

void CanonicalFamily::validate() const {
  if (kind == BaseKind::PoissonLindley) {
    throw UnsupportedFamilyError(
        "poisson_lindley has no canonical exponential-family form");
  }
  if ((kind == BaseKind::NegativeBinomial || kind == BaseKind::HyperPoisson) &&
      !(shape > 0.0 && std::isfinite(shape))) {
    throw DomainError("canonical " + std::string(to_string(kind)) +
                      " needs a fixed positive shape constant");
  }
  if (inflation && points.empty()) throw DomainError("inflation family needs points");
  if (!inflation && !points.empty()) throw DomainError("points given without an inflation family");
}

std::string CanonicalFamily::describe() const {
  std::ostringstream os;
  os << to_string(kind);
  if (kind == BaseKind::NegativeBinomial) os << "(r=" << shape << ")";
  if (kind == BaseKind::HyperPoisson) os << "(tau=" << shape << ")";
  if (inflation) {
    os << " " << to_string(*inflation) << "{";
    for (std::size_t i = 0; i < points.size(); ++i) os << (i ? "," : "") << points[i];
    os << "}";
  }
  return os.str();
}

CanonicalForm::CanonicalForm(CanonicalFamily family, Eigen::VectorXd eta,
                             const SeriesPolicy& policy)
    : family_(std::move(family)), eta_(std::move(eta)), policy_(policy) {
  family_.validate();
  if (static_cast<std::size_t>(eta_.size()) != family_.dim()) {
    throw DomainError("canonical vector has length " + std::to_string(eta_.size()) +
                      ", family needs " + std::to_string(family_.dim()));
  }
  A_ = A_at(eta_);
}

std::vector<Interval> CanonicalForm::space() const {
  std::vector<Interval> s(family_.dim(), Interval{-kInf, kInf});
  if (family_.kind == BaseKind::Geometric || family_.kind == BaseKind::NegativeBinomial) {
    s[0].hi = 0.0;
  }
  if (family_.kind == BaseKind::CMP) s[1].hi = 0.0;
  return s;
}

bool CanonicalForm::in_space(const Eigen::VectorXd& eta) const {
  if (static_cast<std::size_t>(eta.size()) != family_.dim()) return false;
  const auto s = space();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isfinite(eta[static_cast<Eigen::Index>(i)]) ||
        !s[i].contains(eta[static_cast<Eigen::Index>(i)])) {
      return false;
    }
  }
  return true;
}

double CanonicalForm::A_at(const Eigen::VectorXd& eta) const {
  if (!in_space(eta)) throw DomainError("canonical vector outside the canonical space");
  const Decoded d = decode(family_, eta, policy_);
  // T(0) = 0 and h(0) = 1 for every base, so A_b = -log b(0).
  double a = -d.base.log_pmf(0);
  if (d.spec) a += std::log(inflation_normalizer(d.base, *d.spec));
  return a;
}

double CanonicalForm::log_h(std::uint64_t n) const {
  switch (family_.kind) {
    case BaseKind::Geometric:
    case BaseKind::CMP: return 0.0;
    case BaseKind::Poisson: return -log_factorial(n);
    case BaseKind::NegativeBinomial: return log_rising_factorial(family_.shape, n) - log_factorial(n);
    case BaseKind::HyperPoisson: return -log_rising_factorial(family_.shape, n);
    case BaseKind::PoissonLindley: break;
  }
  throw UnsupportedFamilyError("poisson_lindley has no canonical exponential-family form");
}

Eigen::VectorXd CanonicalForm::T(std::uint64_t n) const {
  Eigen::VectorXd t = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(family_.dim()));
  t[0] = static_cast<double>(n);
  if (family_.kind == BaseKind::CMP) t[1] = log_factorial(n);
  for (std::size_t i = 0; i < family_.points.size(); ++i) {
    const std::uint64_t p = family_.points[i];
    const bool hit = *family_.inflation == InflationFamily::Type1 ? n == p : n <= p;
    t[static_cast<Eigen::Index>(family_.base_dim() + i)] = hit ? 1.0 : 0.0;
  }
  return t;
}

double CanonicalForm::log_q(std::uint64_t n) const { return log_h(n) + T(n).dot(eta_) - A_; }

void CanonicalForm::T_moments(Eigen::VectorXd& mean, Eigen::MatrixXd& cov) const {
  const auto probs = enumerate_support([this](std::uint64_t n) { return log_q(n); }, policy_,
                                       family_.points.empty() ? 0 : family_.points.back() + 1);
  const auto d = static_cast<Eigen::Index>(family_.dim());
  mean = Eigen::VectorXd::Zero(d);
  double mass = 0.0;
  for (std::size_t n = 0; n < probs.size(); ++n) {
    mean += probs[n] * T(n);
    mass += probs[n];
  }
  mean /= mass;
  cov = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t n = 0; n < probs.size(); ++n) {
    const Eigen::VectorXd c = T(n) - mean;
    cov.noalias() += probs[n] * c * c.transpose();
  }
  cov /= mass;
}

Eigen::VectorXd CanonicalForm::grad_A() const {
  Eigen::VectorXd m;
  Eigen::MatrixXd c;
  T_moments(m, c);
  return m;
}

Eigen::MatrixXd CanonicalForm::hess_A() const {
  Eigen::VectorXd m;
  Eigen::MatrixXd c;
  T_moments(m, c);
  return c;
}

BaseDistribution CanonicalForm::base() const { return decode(family_, eta_, policy_).base; }

CountModel CanonicalForm::to_model() const {
  Decoded d = decode(family_, eta_, policy_);
  if (d.spec) return InfDefDistribution(std::move(d.base), std::move(*d.spec));
  return std::move(d.base);
}

namespace {

Eigen::VectorXd base_eta(const BaseDistribution& base, std::size_t extra) {
  const std::size_t bd = base.kind() == BaseKind::CMP ? 2 : 1;
  Eigen::VectorXd eta(static_cast<Eigen::Index>(bd + extra));
  eta[0] = base.kind() == BaseKind::NegativeBinomial ? std::log(base.lambda() / base.r())
                                                      : std::log(base.lambda());
  if (base.kind() == BaseKind::CMP) eta[1] = -base.nu();
  return eta;
}

CanonicalFamily base_family(const BaseDistribution& base) {
  CanonicalFamily fam;
  fam.kind = base.kind();
  if (base.kind() == BaseKind::NegativeBinomial || base.kind() == BaseKind::HyperPoisson) {
    fam.shape = base.shape();
  }
  fam.validate();
  return fam;
}

}  // namespace

CanonicalForm canonicalize(const BaseDistribution& base) {
  return CanonicalForm(base_family(base), base_eta(base, 0), base.policy());
}

CanonicalForm canonicalize(const InfDefDistribution& dist) {
  CanonicalFamily fam = base_family(dist.base());
  fam.inflation = dist.spec().family();
  fam.points = dist.spec().points();
  Eigen::VectorXd eta = base_eta(dist.base(), fam.points.size());
  for (std::size_t i = 0; i < fam.points.size(); ++i) {
    eta[static_cast<Eigen::Index>(fam.base_dim() + i)] = std::log(dist.spec().factors()[i]);
  }
  return CanonicalForm(std::move(fam), std::move(eta), dist.policy());
}

CanonicalForm canonicalize(const CountModel& model) {
  if (const auto* b = model.as<BaseDistribution>()) return canonicalize(*b);
  if (const auto* d = model.as<InfDefDistribution>()) return canonicalize(*d);
  throw UnsupportedFamilyError("only base and type 1/type 2 models have a canonical form");
}

double cumulant_identity_residual(const CanonicalForm& cf, const RatioSequence& ratios,
                                  const SeriesPolicy& policy) {
  const StationaryPmf pmf(ratios, policy);
  return cf.A() - cf.log_h(0) - cf.T(0).dot(cf.eta()) - pmf.log_series_sum();
}

}  // namespace bdstat
