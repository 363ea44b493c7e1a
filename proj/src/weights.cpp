#include "bdstat/weights.hpp"

#include <cmath>

#include "bdstat/errors.hpp"
#include "bdstat/series.hpp"

namespace bdstat {

namespace {

double param(const std::map<std::string, double>& params, const std::string& entry,
             const std::string& key) {
  auto it = params.find(key);
  if (it == params.end() || !std::isfinite(it->second)) {
    throw DomainError("weight '" + entry + "' needs a finite parameter '" + key + "'");
  }
  return it->second;
}

double positive(const std::map<std::string, double>& params, const std::string& entry,
                const std::string& key) {
  const double v = param(params, entry, key);
  if (!(v > 0.0)) throw DomainError("weight '" + entry + "' requires " + key + " > 0");
  return v;
}

}  // namespace

double WeightFunction::eval(std::uint64_t n) const { return std::exp(log_eval(n)); }

double WeightFunction::ratio(std::uint64_t n) const {
  return std::exp(log_eval(n + 1) - log_eval(n));
}

WeightFunction identity_weight() {
  return {"identity", {}, [](std::uint64_t) { return 0.0; }};
}

std::vector<std::string> catalogue_entries() {
  return {"identity", "geometric", "poisson",          "poisson_lindley", "negative_binomial",
          "hyper_poisson", "cmp",   "weighted_poisson", "puig",            "bohning"};
}

WeightFunction catalogue_weight(std::string_view entry_view, WeightColumn column,
                                const std::map<std::string, double>& params) {
  const std::string entry(entry_view);
  // Poisson-column weights are the geometric-column ones times n!.
  const double fact_power = column == WeightColumn::Poisson ? 1.0 : 0.0;
  WeightFunction w;
  w.name = entry + (column == WeightColumn::Poisson ? "/poisson" : "/geometric");
  std::function<double(std::uint64_t)> geo;

  if (entry == "identity") {
    return identity_weight();
  } else if (entry == "geometric") {
    geo = [](std::uint64_t) { return 0.0; };
  } else if (entry == "poisson") {
    geo = [](std::uint64_t n) { return -log_factorial(n); };
  } else if (entry == "poisson_lindley") {
    const double lambda = positive(params, entry, "lambda");
    w.params["lambda"] = lambda;
    geo = [lambda](std::uint64_t n) {
      return std::log1p((static_cast<double>(n) + 1.0) * lambda);
    };
  } else if (entry == "negative_binomial") {
    const double r = positive(params, entry, "r");
    w.params["r"] = r;
    geo = [r](std::uint64_t n) {
      return log_rising_factorial(r, n) - static_cast<double>(n) * std::log(r) - log_factorial(n);
    };
  } else if (entry == "hyper_poisson") {
    const double tau = positive(params, entry, "tau");
    w.params["tau"] = tau;
    geo = [tau](std::uint64_t n) { return -log_rising_factorial(tau, n); };
  } else if (entry == "cmp") {
    const double nu = positive(params, entry, "nu");
    w.params["nu"] = nu;
    geo = [nu](std::uint64_t n) { return -nu * log_factorial(n); };
  } else if (entry == "weighted_poisson") {
    const double r = param(params, entry, "r");
    const double tau = positive(params, entry, "tau");
    w.params["r"] = r;
    w.params["tau"] = tau;
    geo = [r, tau](std::uint64_t n) {
      return r * std::log(static_cast<double>(n) + tau) - log_factorial(n);
    };
  } else if (entry == "puig") {
    const double tau = param(params, entry, "tau");
    w.params["tau"] = tau;
    geo = [tau](std::uint64_t n) {
      const double x = static_cast<double>(n);
      return -x * x * tau - log_factorial(n);
    };
  } else if (entry == "bohning") {
    const double tau = param(params, entry, "tau");
    const double nu = positive(params, entry, "nu");
    w.params["tau"] = tau;
    w.params["nu"] = nu;
    geo = [tau, nu](std::uint64_t n) {
      const double x = static_cast<double>(n);
      return -x * x * tau - nu * log_factorial(n);
    };
  } else {
    throw DomainError("unknown weight catalogue entry '" + entry + "'");
  }
  w.log_eval = [geo, fact_power](std::uint64_t n) {
    return geo(n) + fact_power * log_factorial(n);
  };
  return w;
}

StationaryPmf weighted_pmf(const BaseDistribution& base, const WeightFunction& w,
                           const SeriesPolicy& policy) {
  RatioSequence seq;
  seq.eval = [base, w](std::uint64_t n) { return w.ratio(n) * base.ratio(n); };
  seq.label = w.name + " x " + base.describe();
  return StationaryPmf(std::move(seq), policy);
}

}  // namespace bdstat
