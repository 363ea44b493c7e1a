#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bdstat/base.hpp"
#include "bdstat/expfamily.hpp"
#include "bdstat/infdef.hpp"
#include "bdstat/mixture.hpp"
#include "bdstat/model.hpp"

namespace bdstat {

// Observed counts as value -> frequency. Frequencies may be fractional.
class CountSample {
 public:
  static CountSample from_counts(const std::vector<std::uint64_t>& counts);
  static CountSample from_frequencies(const std::map<std::uint64_t, double>& table);

  const std::map<std::uint64_t, double>& table() const { return table_; }
  double size() const { return size_; }
  double mean() const;
  double variance() const;
  double frequency(std::uint64_t n) const;  // relative frequency
  std::size_t distinct() const { return table_.size(); }
  std::uint64_t max_value() const { return table_.rbegin()->first; }

 private:
  std::map<std::uint64_t, double> table_;
  double size_ = 0.0;
};

struct LoglikReport {
  double value = 0.0;
  // First observed value with zero probability; value is -inf then.
  std::optional<std::uint64_t> zero_at;
};

LoglikReport loglik_report(const CountModel& model, const CountSample& sample);
double loglik(const CountModel& model, const CountSample& sample);

// What to fit. shape is the fixed r (NB) or tau (HP); CMP nu is estimated.
struct FitTemplate {
  BaseKind kind = BaseKind::Poisson;
  double shape = 0.0;
  std::optional<InflationFamily> inflation;
  std::optional<MixtureVariant> mixture;
  std::vector<std::uint64_t> points;
  SeriesPolicy policy{};

  void validate() const;
  std::string describe() const;
  CanonicalFamily canonical_family() const;
};

struct FitOptions {
  std::size_t max_iter = 500;
  double grad_tol = 1e-8;
  double armijo = 1e-4;
  double backtrack = 0.5;
  bool standard_errors = true;
  // Fit type 1 inflation factors alpha directly instead of their logs.
  bool direct_alpha = false;
};

using NamedValues = std::vector<std::pair<std::string, double>>;

// An equal-likelihood parameterization of the fitted shape.
struct EquivalentFit {
  std::string family;
  NamedValues params;
};

struct FitResult {
  std::optional<CountModel> model;
  Eigen::VectorXd eta_hat;  // empty for mixture templates
  NamedValues params;
  std::optional<std::vector<double>> standard_errors;  // aligned with params
  double loglik = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double grad_norm = 0.0;
  std::string diagnostic;
  std::vector<double> trajectory;  // loglik after each accepted step
  std::vector<EquivalentFit> equivalents;
  std::size_t n_params = 0;
};

FitResult fit_mle(const FitTemplate& tmpl, const CountSample& sample,
                  const FitOptions& options = {});

// Outer search over r (NB) or tau (HP): grid argmax, then golden-section refinement.
FitResult profile_fit(const FitTemplate& tmpl, const CountSample& sample,
                      const std::vector<double>& grid, const FitOptions& options = {},
                      double tol = 1e-4);

}  // namespace bdstat
