#include "bdstat/moments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "bdstat/errors.hpp"
#include "bdstat/series.hpp"

namespace bdstat {

ClosedMoments moments_closed(const InfDefDistribution& dist) {
  const BaseDistribution& base = dist.base();
  if (base.kind() == BaseKind::PoissonLindley) {
    const MomentSummary m = moments_direct(CountModel(dist));
    return {m.mean, m.variance, true};
  }
  const double eb = base.mean();
  const double vb = base.variance();
  const double z = dist.z();
  const auto& pts = dist.spec().points();
  const auto& fac = dist.spec().factors();

  double first = 0.0;
  double second = 0.0;
  if (dist.spec().family() == InflationFamily::Type1) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double d = static_cast<double>(pts[i]) - eb;
      const double w = (fac[i] - 1.0) * base.pmf(pts[i]);
      first += w * d;
      second += w * (d * d - vb);
    }
  } else {
    std::vector<double> block_weight(pts.size());
    double tail = 1.0;
    for (std::size_t i = pts.size(); i-- > 0;) {
      tail *= fac[i];
      block_weight[i] = tail;
    }
    std::uint64_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      double s1 = 0.0, s2 = 0.0;
      for (; k <= pts[i]; ++k) {
        const double b = base.pmf(k);
        const double d = static_cast<double>(k) - eb;
        s1 += b * d;
        s2 += b * (d * d - vb);
      }
      first += block_weight[i] * s1;
      second += block_weight[i] * s2;
    }
    // The unweighted remainder is the upper tail, since the base terms sum to 0.
    const std::uint64_t q = dist.spec().max_point();
    first += upper_tail(base, q, [eb](std::uint64_t j) { return static_cast<double>(j) - eb; });
    second += upper_tail(base, q, [eb, vb](std::uint64_t j) {
      const double d = static_cast<double>(j) - eb;
      return d * d - vb;
    });
  }
  const double shift = first / z;
  return {eb + shift, vb - shift * shift + second / z, false};
}

MomentSummary moments_from_probabilities(const std::vector<double>& probs) {
  MomentSummary s;
  double mass = 0.0, m1 = 0.0;
  for (std::size_t n = 0; n < probs.size(); ++n) {
    mass += probs[n];
    m1 += static_cast<double>(n) * probs[n];
  }
  const double mean = m1 / mass;
  double c2 = 0.0, c3 = 0.0, c4 = 0.0;
  for (std::size_t n = 0; n < probs.size(); ++n) {
    const double d = static_cast<double>(n) - mean;
    const double d2 = d * d;
    c2 += d2 * probs[n];
    c3 += d2 * d * probs[n];
    c4 += d2 * d2 * probs[n];
  }
  c2 /= mass;
  c3 /= mass;
  c4 /= mass;
  const double sd = std::sqrt(c2);
  double band = 0.0;
  for (std::size_t n = 0; n < probs.size(); ++n) {
    const double d = static_cast<double>(n) - mean;
    if (std::abs(d) <= sd) band += d * d * d * d * probs[n];
  }
  s.mean = mean;
  s.variance = c2;
  s.dispersion_index = mean > 0.0 ? c2 / mean : std::nan("");
  s.skewness = c3 / (c2 * sd);
  s.kurtosis = c4 / (c2 * c2);
  s.kurtosis_central_band = band / mass / (c2 * c2);
  return s;
}

MomentSummary moments_direct(const CountModel& model) {
  return moments_from_probabilities(model.probabilities());
}

double equidispersion_phi(double lambda, std::uint64_t q) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("equidispersion phi requires lambda > 0");
  }
  if (q < 1) throw DomainError("equidispersion phi requires q >= 1");
  if (lambda == static_cast<double>(q)) return 1.0;
  // phi = sum_{k>q} (k-q) p_k / sum_{k<q} (q-k) p_k with Poisson p_k. The
  // numerator equals lambda - q + denominator but has no cancellation.
  const double ll = std::log(lambda);
  auto log_p = [&](std::uint64_t k) {
    return static_cast<double>(k) * ll - lambda - log_factorial(k);
  };
  double log_den = -std::numeric_limits<double>::infinity();
  for (std::uint64_t k = 0; k < q; ++k) {
    log_den = log_add(log_den, std::log(static_cast<double>(q - k)) + log_p(k));
  }
  double log_num = -std::numeric_limits<double>::infinity();
  for (std::uint64_t k = q + 1;; ++k) {
    const double t = std::log(static_cast<double>(k - q)) + log_p(k);
    log_num = log_add(log_num, t);
    if (static_cast<double>(k) > lambda + 1.0 && t < log_num - 40.0) break;
  }
  return std::exp(log_num - log_den);
}

InfDefDistribution DispersionFamily::model(double lambda, double factor) const {
  return InfDefDistribution(BaseDistribution::make(kind, lambda, shape, policy),
                            InflationSpec::make(inflation, {q}, {factor}));
}

double DispersionFamily::dispersion_index(double lambda, double factor) const {
  const ClosedMoments m = moments_closed(model(lambda, factor));
  return m.variance / m.mean;
}

DispersionSurface dispersion_surface(const DispersionFamily& family,
                                     const std::vector<double>& lambdas,
                                     const std::vector<double>& factors) {
  DispersionSurface s{lambdas, factors, {}, {}};
  s.index.assign(lambdas.size(), std::vector<std::optional<double>>(factors.size()));
  s.errors.assign(lambdas.size(), std::vector<std::string>(factors.size()));
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    for (std::size_t j = 0; j < factors.size(); ++j) {
      try {
        s.index[i][j] = family.dispersion_index(lambdas[i], factors[j]);
      } catch (const std::exception& e) {
        s.errors[i][j] = e.what();
      }
    }
  }
  return s;
}

Contour equidispersion_contour(const DispersionFamily& family, double factor, double lo,
                               double hi, std::size_t scan_intervals, double tol) {
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError("contour range must satisfy lo < hi");
  }
  if (scan_intervals < 1) throw DomainError("contour scan needs at least one interval");
  auto excess = [&](double lambda) -> std::optional<double> {
    try {
      return family.dispersion_index(lambda, factor) - 1.0;
    } catch (const DomainError&) {
      return std::nullopt;
    }
  };

  std::vector<double> xs(scan_intervals + 1);
  std::vector<std::optional<double>> fs(scan_intervals + 1);
  bool flat = true;
  std::size_t evaluated = 0;
  for (std::size_t k = 0; k <= scan_intervals; ++k) {
    xs[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(scan_intervals);
    fs[k] = excess(xs[k]);
    if (fs[k]) {
      ++evaluated;
      if (std::abs(*fs[k]) > 1e-10) flat = false;
    }
  }
  Contour c;
  if (evaluated > 0 && flat) {
    c.degenerate = true;
    return c;
  }
  for (std::size_t k = 0; k < scan_intervals; ++k) {
    if (!fs[k] || !fs[k + 1]) continue;
    double fa = *fs[k], fb = *fs[k + 1];
    if (fa == 0.0) {
      c.roots.push_back(xs[k]);
      continue;
    }
    if (fa * fb > 0.0) continue;
    if (fb == 0.0) continue;  // picked up as the left end of the next interval
    double a = xs[k], b = xs[k + 1];
    while (b - a > tol) {
      const double m = 0.5 * (a + b);
      const auto fm = excess(m);
      if (!fm) break;
      if (*fm == 0.0) {
        a = b = m;
        break;
      }
      if ((*fm < 0.0) == (fa < 0.0)) {
        a = m;
        fa = *fm;
      } else {
        b = m;
      }
    }
    c.roots.push_back(0.5 * (a + b));
  }
  if (fs[scan_intervals] && *fs[scan_intervals] == 0.0) c.roots.push_back(xs[scan_intervals]);
  return c;
}

std::string to_string(SequenceTrend trend) {
  switch (trend) {
    case SequenceTrend::Constant: return "constant";
    case SequenceTrend::Increasing: return "increasing";
    case SequenceTrend::Decreasing: return "decreasing";
    case SequenceTrend::NonMonotonic: return "non-monotonic";
  }
  return "unknown";
}

std::string to_string(DispersionKind kind) {
  switch (kind) {
    case DispersionKind::Equidispersed: return "equidispersed";
    case DispersionKind::Overdispersed: return "overdispersed";
    case DispersionKind::Underdispersed: return "underdispersed";
    case DispersionKind::Undetermined: return "undetermined";
  }
  return "unknown";
}

SequenceVerdict classify_sequence(const RatioSequence& ratios, std::uint64_t horizon) {
  bool up = false, down = false;
  double prev = ratios(0);
  for (std::uint64_t n = 1; n < horizon; ++n) {
    const double a = static_cast<double>(n + 1) * ratios(n);
    const double scale = std::max(std::abs(a), std::abs(prev));
    if (a > prev + 1e-12 * scale) up = true;
    if (a < prev - 1e-12 * scale) down = true;
    prev = a;
  }
  if (up && down) return {SequenceTrend::NonMonotonic, DispersionKind::Undetermined};
  if (up) return {SequenceTrend::Increasing, DispersionKind::Overdispersed};
  if (down) return {SequenceTrend::Decreasing, DispersionKind::Underdispersed};
  return {SequenceTrend::Constant, DispersionKind::Equidispersed};
}

SequenceVerdict classify_sequence(const CountModel& model, std::uint64_t horizon) {
  return classify_sequence(model.ratio_sequence(), horizon);
}

}  // namespace bdstat
