#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bdstat/base.hpp"
#include "bdstat/infdef.hpp"
#include "bdstat/model.hpp"
#include "bdstat/series.hpp"

namespace bdstat {

// Which canonical family: a base kind (not PL), its fixed nuisance constant
// (r for NB, tau for HP), and optionally the inflation points.
//
// Coordinates: [log lambda or log(lambda/r)], then -nu for CMP, then one
// log-factor per inflation point.
struct CanonicalFamily {
  BaseKind kind = BaseKind::Poisson;
  double shape = 0.0;
  std::optional<InflationFamily> inflation;
  std::vector<std::uint64_t> points;

  std::size_t base_dim() const { return kind == BaseKind::CMP ? 2 : 1; }
  std::size_t dim() const { return base_dim() + points.size(); }
  void validate() const;
  std::string describe() const;
};

struct Interval {
  double lo;
  double hi;
  bool contains(double x) const { return x > lo && x < hi; }
};

class CanonicalForm {
 public:
  CanonicalForm(CanonicalFamily family, Eigen::VectorXd eta, const SeriesPolicy& policy = {});

  const CanonicalFamily& family() const { return family_; }
  const Eigen::VectorXd& eta() const { return eta_; }
  std::size_t dim() const { return family_.dim(); }
  const SeriesPolicy& policy() const { return policy_; }

  double log_h(std::uint64_t n) const;
  Eigen::VectorXd T(std::uint64_t n) const;
  std::vector<Interval> space() const;
  bool in_space(const Eigen::VectorXd& eta) const;

  // Cumulant at the stored eta, and at any other eta in the space.
  double A() const { return A_; }
  double A_at(const Eigen::VectorXd& eta) const;

  // log q(n, eta) = log h(n) + T(n).eta - A(eta).
  double log_q(std::uint64_t n) const;

  // E[T] and Cov[T] by summation over the support.
  Eigen::VectorXd grad_A() const;
  Eigen::MatrixXd hess_A() const;
  void T_moments(Eigen::VectorXd& mean, Eigen::MatrixXd& cov) const;

  BaseDistribution base() const;
  CountModel to_model() const;

 private:
  CanonicalFamily family_;
  Eigen::VectorXd eta_;
  SeriesPolicy policy_;
  double A_ = 0.0;
};

// Throws UnsupportedFamilyError for Poisson-Lindley bases.
CanonicalForm canonicalize(const BaseDistribution& base);
CanonicalForm canonicalize(const InfDefDistribution& dist);
CanonicalForm canonicalize(const CountModel& model);

// A - log h(0) - T(0).eta - log(1 + lambda_0 + lambda_0 lambda_1 + ...).
double cumulant_identity_residual(const CanonicalForm& cf, const RatioSequence& ratios,
                                  const SeriesPolicy& policy);

}  // namespace bdstat
