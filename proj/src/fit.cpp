#include "bdstat/fit.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "bdstat/errors.hpp"
#include "bdstat/optimize.hpp"

namespace bdstat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMaxCondition = 1e10;

std::string num(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

bool negative_half_line(BaseKind kind) {
  return kind == BaseKind::Geometric || kind == BaseKind::NegativeBinomial ||
         kind == BaseKind::PoissonLindley;
}

std::string factor_name(InflationFamily family, std::uint64_t point) {
  return (family == InflationFamily::Type1 ? "alpha_" : "phi_") + std::to_string(point);
}

// Fills params, AIC/BIC and the equivalent parameterizations shared by every path.
void finish(FitResult& r, const CountSample& sample);

}  // namespace

// ---- samples and likelihood ----

CountSample CountSample::from_counts(const std::vector<std::uint64_t>& counts) {
  std::map<std::uint64_t, double> table;
  for (auto c : counts) table[c] += 1.0;
  return from_frequencies(table);
}

CountSample CountSample::from_frequencies(const std::map<std::uint64_t, double>& table) {
  CountSample s;
  for (const auto& [n, w] : table) {
    if (!std::isfinite(w) || w < 0.0) {
      throw DomainError("frequency for value " + std::to_string(n) + " must be finite and >= 0");
    }
    if (w > 0.0) {
      s.table_[n] = w;
      s.size_ += w;
    }
  }
  if (!(s.size_ > 0.0)) throw DomainError("sample is empty: total frequency must be positive");
  return s;
}

double CountSample::mean() const {
  double m = 0.0;
  for (const auto& [n, w] : table_) m += static_cast<double>(n) * w;
  return m / size_;
}

double CountSample::variance() const {
  const double m = mean();
  double v = 0.0;
  for (const auto& [n, w] : table_) v += (static_cast<double>(n) - m) * (static_cast<double>(n) - m) * w;
  return v / size_;
}

double CountSample::frequency(std::uint64_t n) const {
  auto it = table_.find(n);
  return it == table_.end() ? 0.0 : it->second / size_;
}

LoglikReport loglik_report(const CountModel& model, const CountSample& sample) {
  LoglikReport r;
  for (const auto& [n, w] : sample.table()) {
    const double lp = model.log_pmf(n);
    if (!(lp > -kInf) || std::isnan(lp)) {
      r.value = -kInf;
      r.zero_at = n;
      return r;
    }
    r.value += w * lp;
  }
  return r;
}

double loglik(const CountModel& model, const CountSample& sample) {
  return loglik_report(model, sample).value;
}

// ---- templates ----

void FitTemplate::validate() const {
  policy.validate();
  if (inflation && mixture) throw DomainError("template cannot be both inflation and mixture");
  if ((inflation || mixture) && points.empty()) throw DomainError("template needs inflation points");
  if (!inflation && !mixture && !points.empty()) {
    throw DomainError("points given for a plain base template");
  }
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i] <= points[i - 1]) throw DomainError("inflation points must be strictly increasing");
  }
  if (mixture && *mixture != MixtureVariant::MultipleInflation &&
      (points.size() != 1 || points[0] != 0)) {
    throw DomainError(std::string(to_string(*mixture)) + " template must use F = {0}");
  }
  if ((kind == BaseKind::NegativeBinomial || kind == BaseKind::HyperPoisson) &&
      !(shape > 0.0 && std::isfinite(shape))) {
    throw DomainError(std::string(to_string(kind)) + " template needs a fixed shape > 0 (" +
                      (kind == BaseKind::NegativeBinomial ? "r" : "tau") + ")");
  }
}

std::string FitTemplate::describe() const {
  std::ostringstream os;
  os << to_string(kind);
  if (kind == BaseKind::NegativeBinomial) os << "(r=" << shape << ")";
  if (kind == BaseKind::HyperPoisson) os << "(tau=" << shape << ")";
  if (inflation || mixture) {
    os << " " << (inflation ? std::string(to_string(*inflation)) : std::string(to_string(*mixture)))
       << "{";
    for (std::size_t i = 0; i < points.size(); ++i) os << (i ? "," : "") << points[i];
    os << "}";
  }
  return os.str();
}

CanonicalFamily FitTemplate::canonical_family() const {
  CanonicalFamily fam;
  fam.kind = kind;
  fam.shape = (kind == BaseKind::NegativeBinomial || kind == BaseKind::HyperPoisson) ? shape : 0.0;
  fam.inflation = inflation;
  fam.points = inflation ? points : std::vector<std::uint64_t>{};
  fam.validate();
  return fam;
}

namespace {

// ---- boundary detection ----

std::optional<std::string> boundary_diagnostic(const FitTemplate& t, const CountSample& s) {
  if (s.mean() == 0.0) {
    return "boundary: every observation is 0, so the rate estimate lies on lambda -> 0";
  }
  const bool one_dim = !t.inflation && !t.mixture && t.kind != BaseKind::CMP;
  if (s.distinct() == 1 && !one_dim) {
    return "boundary: the sample has a single distinct value (" +
           std::to_string(s.table().begin()->first) + "); no interior maximum exists";
  }
  if (t.kind == BaseKind::CMP && s.max_value() <= 1) {
    return "boundary: all observations are 0 or 1, so the CMP nu estimate is unbounded";
  }
  if (t.inflation) {
    double in_f = 0.0;
    for (auto p : t.points) {
      double stat = 0.0;
      for (const auto& [n, w] : s.table()) {
        if (*t.inflation == InflationFamily::Type1 ? n == p : n <= p) stat += w;
      }
      stat /= s.size();
      if (*t.inflation == InflationFamily::Type1) in_f += stat;
      if (stat == 0.0 || stat == 1.0) {
        return "boundary: the " + std::string(to_string(*t.inflation)) + " statistic at n=" +
               std::to_string(p) + " has sample mean " + num(stat) +
               ", so its factor estimate is 0 or infinite";
      }
    }
    if (*t.inflation == InflationFamily::Type1 && in_f >= 1.0) {
      return "boundary: every observation lies in F, so the base parameters are not identified";
    }
  }
  if (t.mixture) {
    double in_f = 0.0;
    for (std::size_t i = 0; i < t.points.size(); ++i) {
      const double f = s.frequency(t.points[i]);
      in_f += f;
      if (f == 0.0 && *t.mixture != MixtureVariant::Haslett) {
        return "boundary: no observations at n=" + std::to_string(t.points[i]) +
               ", so the estimate lies on boundary line l" + std::to_string(i + 2);
      }
      if (f == 0.0) return "boundary: no zeros observed, so psi -> -infinity";
    }
    if (in_f >= 1.0) {
      return "boundary: every observation lies in F, so the estimate lies on boundary line l1";
    }
  }
  return std::nullopt;
}

// ---- starting values ----

double floored_frequency(const CountSample& s, std::uint64_t n) {
  return std::max(s.frequency(n), 0.5 / s.size());
}

double base_start_lambda(const FitTemplate& t, const CountSample& s) {
  const double m = s.mean();
  switch (t.kind) {
    case BaseKind::Geometric: return m / (1.0 + m);
    case BaseKind::Poisson: return m;
    case BaseKind::NegativeBinomial: return t.shape * m / (t.shape + m);
    case BaseKind::HyperPoisson: return std::max(m + t.shape - 1.0, 0.5 * m);
    case BaseKind::CMP: return m;
    case BaseKind::PoissonLindley: {
      // mean = lambda (1 + lambda) / (1 - lambda)
      const double b = 1.0 + m;
      return std::min(0.5 * (-b + std::sqrt(b * b + 4.0 * m)), 0.999);
    }
  }
  return m;
}

std::vector<double> inflation_start(const FitTemplate& t, const BaseDistribution& base,
                                    const CountSample& s) {
  std::vector<double> f(t.points.size());
  if (*t.inflation == InflationFamily::Type1) {
    double sum_f = 0.0, sum_b = 0.0;
    for (auto p : t.points) {
      sum_f += floored_frequency(s, p);
      sum_b += base.pmf(p);
    }
    const double c = std::max(1.0 - sum_f, 0.5 / s.size()) / std::max(1.0 - sum_b, 1e-300);
    for (std::size_t i = 0; i < f.size(); ++i) {
      f[i] = floored_frequency(s, t.points[i]) / (c * base.pmf(t.points[i]));
    }
  } else {
    for (std::size_t i = 0; i < f.size(); ++i) {
      const auto p = t.points[i];
      f[i] = floored_frequency(s, p) / floored_frequency(s, p + 1) * base.ratio(p);
    }
  }
  for (auto& v : f) v = std::clamp(v, 1e-6, 1e6);
  return f;
}

// ---- canonical Newton ----

struct CanonicalProblem {
  CanonicalFamily fam;
  SeriesPolicy policy;
  Eigen::VectorXd tbar;
  double size = 0.0;
  double sum_log_h = 0.0;
  std::vector<bool> negative;

  Eigen::VectorXd eta_of(const Eigen::VectorXd& u) const {
    Eigen::VectorXd eta = u;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      if (negative[static_cast<std::size_t>(i)]) eta[i] = -std::exp(u[i]);
    }
    return eta;
  }
  Eigen::VectorXd u_of(const Eigen::VectorXd& eta) const {
    Eigen::VectorXd u = eta;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      if (negative[static_cast<std::size_t>(i)]) u[i] = std::log(-eta[i]);
    }
    return u;
  }
  // Per-observation log-likelihood without the h term; -inf where A is unavailable.
  double objective(const Eigen::VectorXd& u) const {
    try {
      const Eigen::VectorXd eta = eta_of(u);
      if (!eta.allFinite()) return -kInf;
      const CanonicalForm cf(fam, eta, policy);
      const double v = tbar.dot(eta) - cf.A();
      return std::isfinite(v) ? v : -kInf;
    } catch (const std::exception&) {
      return -kInf;
    }
  }
  double total_loglik(double objective_value) const { return size * objective_value + sum_log_h; }
};

CanonicalProblem make_problem(const FitTemplate& t, const CountSample& s) {
  CanonicalProblem pr;
  pr.fam = t.canonical_family();
  pr.policy = t.policy;
  const CanonicalForm probe(pr.fam, [&] {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pr.fam.dim()));
    e[0] = -1.0;
    if (pr.fam.kind == BaseKind::CMP) e[1] = -1.0;
    return e;
  }(), t.policy);
  pr.tbar = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pr.fam.dim()));
  for (const auto& [n, w] : s.table()) {
    pr.tbar += w * probe.T(n);
    pr.sum_log_h += w * probe.log_h(n);
  }
  pr.size = s.size();
  pr.tbar /= s.size();
  const auto space = probe.space();
  for (const auto& iv : space) pr.negative.push_back(iv.hi == 0.0);
  return pr;
}

struct NewtonOutcome {
  Eigen::VectorXd eta;
  std::size_t iterations = 0;
  bool converged = false;
  double grad_norm = kInf;
  Eigen::MatrixXd cov_T;
  std::vector<double> trajectory;
  std::string note;
};

NewtonOutcome canonical_newton(const CanonicalProblem& pr, Eigen::VectorXd eta0,
                               const FitOptions& opt) {
  NewtonOutcome out;
  Eigen::VectorXd u = pr.u_of(eta0);
  double phi = pr.objective(u);
  if (!std::isfinite(phi)) {
    out.eta = eta0;
    out.note = "starting point has no finite likelihood";
    return out;
  }
  out.trajectory.push_back(pr.total_loglik(phi));
  const auto d = u.size();
  for (;;) {
    const Eigen::VectorXd eta = pr.eta_of(u);
    const CanonicalForm cf(pr.fam, eta, pr.policy);
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
    cf.T_moments(mean, cov);
    out.eta = eta;
    out.cov_T = cov;
    const Eigen::VectorXd g = pr.tbar - mean;
    out.grad_norm = g.lpNorm<Eigen::Infinity>();
    if (out.grad_norm < opt.grad_tol) {
      out.converged = true;
      break;
    }
    if (out.iterations >= opt.max_iter) {
      out.note = "iteration cap reached";
      break;
    }

    Eigen::VectorXd jac = Eigen::VectorXd::Ones(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      if (pr.negative[static_cast<std::size_t>(i)]) jac[i] = eta[i];
    }
    const Eigen::VectorXd gu = jac.cwiseProduct(g);
    Eigen::MatrixXd neg_h = jac.asDiagonal() * cov * jac.asDiagonal();
    for (Eigen::Index i = 0; i < d; ++i) {
      if (pr.negative[static_cast<std::size_t>(i)]) neg_h(i, i) -= g[i] * eta[i];
    }
    // Shift until positive definite.
    Eigen::VectorXd step;
    double mu = 0.0;
    const double scale = std::max(1e-12, neg_h.diagonal().cwiseAbs().maxCoeff());
    for (int k = 0; k < 60; ++k) {
      Eigen::LLT<Eigen::MatrixXd> llt(neg_h + mu * Eigen::MatrixXd::Identity(d, d));
      if (llt.info() == Eigen::Success) {
        step = llt.solve(gu);
        if (step.allFinite()) break;
      }
      mu = mu == 0.0 ? 1e-10 * scale : mu * 10.0;
    }
    if (step.size() == 0 || !step.allFinite()) step = gu;
    // Keep log-scale moves bounded.
    const double longest = step.lpNorm<Eigen::Infinity>();
    if (longest > 5.0) step *= 5.0 / longest;

    const double slope = gu.dot(step);
    double t = 1.0;
    bool accepted = false;
    double phi_new = -kInf;
    Eigen::VectorXd u_new;
    for (int k = 0; k < 60; ++k) {
      u_new = u + t * step;
      phi_new = pr.objective(u_new);
      if (phi_new >= phi + opt.armijo * t * slope - 1e-15 * (1.0 + std::abs(phi))) {
        accepted = true;
        break;
      }
      t *= opt.backtrack;
    }
    ++out.iterations;
    if (!accepted) {
      out.note = "line search stalled";
      break;
    }
    u = u_new;
    phi = phi_new;
    out.trajectory.push_back(pr.total_loglik(phi));
  }
  return out;
}

Eigen::VectorXd start_eta(const FitTemplate& t, const CountSample& s, const FitOptions& opt,
                          const CanonicalProblem& pr) {
  FitTemplate bt = t;
  bt.inflation.reset();
  bt.mixture.reset();
  bt.points.clear();
  const double lambda = base_start_lambda(t, s);
  Eigen::VectorXd base_eta(bt.kind == BaseKind::CMP ? 2 : 1);
  base_eta[0] = t.kind == BaseKind::NegativeBinomial ? std::log(lambda / t.shape) : std::log(lambda);
  if (t.kind == BaseKind::CMP) base_eta[1] = -1.0;
  if (t.inflation || t.kind == BaseKind::HyperPoisson || t.kind == BaseKind::CMP) {
    // Base fit first; its estimate seeds the inflation coordinates.
    const CanonicalProblem bp = make_problem(bt, s);
    const NewtonOutcome bo = canonical_newton(bp, base_eta, opt);
    if (bo.eta.allFinite() && std::isfinite(bp.objective(bp.u_of(bo.eta)))) base_eta = bo.eta;
  }
  if (!t.inflation) return base_eta;
  Eigen::VectorXd eta(static_cast<Eigen::Index>(pr.fam.dim()));
  eta.head(base_eta.size()) = base_eta;
  const CanonicalForm bcf(bt.canonical_family(), base_eta, t.policy);
  const auto factors = inflation_start(t, bcf.base(), s);
  for (std::size_t i = 0; i < factors.size(); ++i) {
    eta[base_eta.size() + static_cast<Eigen::Index>(i)] = std::log(factors[i]);
  }
  return eta;
}

std::optional<std::vector<double>> covariance_diagonal(const Eigen::MatrixXd& info) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(info);
  if (es.info() != Eigen::Success) return std::nullopt;
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo >= kMaxCondition) return std::nullopt;
  const Eigen::MatrixXd cov =
      es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
  std::vector<double> v(static_cast<std::size_t>(cov.rows()));
  for (Eigen::Index i = 0; i < cov.rows(); ++i) v[static_cast<std::size_t>(i)] = cov(i, i);
  return v;
}

FitResult fit_canonical(const FitTemplate& t, const CountSample& s, const FitOptions& opt) {
  const CanonicalProblem pr = make_problem(t, s);
  const Eigen::VectorXd eta0 = start_eta(t, s, opt, pr);
  NewtonOutcome no = canonical_newton(pr, eta0, opt);

  FitResult r;
  r.eta_hat = no.eta;
  r.iterations = no.iterations;
  r.converged = no.converged;
  r.grad_norm = no.grad_norm;
  r.trajectory = no.trajectory;
  r.diagnostic = no.converged ? "converged" : "not converged: " + no.note;
  const CanonicalForm cf(pr.fam, no.eta, t.policy);
  r.model = cf.to_model();

  // Natural parameters: lambda (times r for NB), nu, then inflation factors.
  const auto& e = no.eta;
  std::vector<double> jac;
  r.params.emplace_back("lambda", std::exp(e[0]) * (t.kind == BaseKind::NegativeBinomial ? t.shape : 1.0));
  jac.push_back(r.params.back().second);
  if (t.kind == BaseKind::CMP) {
    r.params.emplace_back("nu", -e[1]);
    jac.push_back(-1.0);
  }
  for (std::size_t i = 0; i < t.points.size() && t.inflation; ++i) {
    const double f = std::exp(e[static_cast<Eigen::Index>(pr.fam.base_dim() + i)]);
    r.params.emplace_back(factor_name(*t.inflation, t.points[i]), f);
    jac.push_back(f);
  }
  if (opt.standard_errors && no.cov_T.size() > 0) {
    if (auto var = covariance_diagonal(s.size() * no.cov_T)) {
      std::vector<double> se(var->size());
      for (std::size_t i = 0; i < se.size(); ++i) se[i] = std::abs(jac[i]) * std::sqrt((*var)[i]);
      r.standard_errors = se;
    } else {
      r.diagnostic += "; standard errors omitted (information matrix ill-conditioned)";
    }
  }
  finish(r, s);
  return r;
}

// ---- direct parameterization (PL, mixtures, alpha-scale type 1) ----

struct DirectProblem {
  FitTemplate t;
  std::size_t base_dim = 1;

  double base_lambda(const Eigen::VectorXd& x) const {
    const double eta = negative_half_line(t.kind) ? -std::exp(x[0]) : x[0];
    return std::exp(eta) * (t.kind == BaseKind::NegativeBinomial ? t.shape : 1.0);
  }
  BaseDistribution base(const Eigen::VectorXd& x) const {
    const double shape = t.kind == BaseKind::CMP ? std::exp(x[1]) : t.shape;
    return BaseDistribution::make(t.kind, base_lambda(x), shape, t.policy);
  }
  std::vector<double> extra(const Eigen::VectorXd& x) const {
    std::vector<double> v;
    for (Eigen::Index i = static_cast<Eigen::Index>(base_dim); i < x.size(); ++i) v.push_back(x[i]);
    return v;
  }
  CountModel build(const Eigen::VectorXd& x) const {
    BaseDistribution b = base(x);
    if (t.mixture) return MixtureModel::make(*t.mixture, std::move(b), t.points, extra(x));
    if (t.inflation) return InfDefDistribution(std::move(b), InflationSpec::make(*t.inflation, t.points, extra(x)));
    return b;
  }
  // Natural value of coordinate i.
  double natural(const Eigen::VectorXd& x, std::size_t i) const {
    if (i == 0) return base_lambda(x);
    if (i == 1 && t.kind == BaseKind::CMP) return std::exp(x[1]);
    return x[static_cast<Eigen::Index>(i)];
  }
  std::vector<std::string> names() const {
    std::vector<std::string> n{"lambda"};
    if (t.kind == BaseKind::CMP) n.push_back("nu");
    for (auto p : t.points) {
      if (t.inflation) {
        n.push_back(factor_name(*t.inflation, p));
      } else if (*t.mixture == MixtureVariant::Hurdle) {
        n.push_back("pi");
      } else if (*t.mixture == MixtureVariant::Haslett) {
        n.push_back("psi");
      } else {
        n.push_back("omega_" + std::to_string(p));
      }
    }
    return n;
  }
};

FitResult fit_direct(const FitTemplate& t, const CountSample& s, const FitOptions& opt) {
  DirectProblem pr{t, t.kind == BaseKind::CMP ? std::size_t{2} : std::size_t{1}};

  // Base start: canonical fit when available, otherwise moment matching.
  Eigen::VectorXd xb(static_cast<Eigen::Index>(pr.base_dim));
  {
    double lambda = base_start_lambda(t, s);
    double nu = 1.0;
    if (t.kind != BaseKind::PoissonLindley) {
      FitTemplate bt = t;
      bt.inflation.reset();
      bt.mixture.reset();
      bt.points.clear();
      FitOptions bo = opt;
      bo.standard_errors = false;
      bo.direct_alpha = false;
      const FitResult base_fit = fit_canonical(bt, s, bo);
      lambda = base_fit.params[0].second;
      if (t.kind == BaseKind::CMP) nu = base_fit.params[1].second;
    }
    const double eta = std::log(t.kind == BaseKind::NegativeBinomial ? lambda / t.shape : lambda);
    xb[0] = negative_half_line(t.kind) ? std::log(-eta) : eta;
    if (t.kind == BaseKind::CMP) xb[1] = std::log(nu);
  }
  Eigen::VectorXd x0(static_cast<Eigen::Index>(pr.base_dim + t.points.size()));
  x0.head(xb.size()) = xb;
  if (!t.points.empty()) {
    const BaseDistribution b0 = pr.base(x0);
    std::vector<double> extra(t.points.size(), 0.0);
    if (t.inflation) {
      extra = inflation_start(t, b0, s);
    } else if (*t.mixture == MixtureVariant::Hurdle) {
      extra[0] = std::clamp(s.frequency(0), 0.5 / s.size(), 1.0 - 0.5 / s.size());
    }
    for (std::size_t i = 0; i < extra.size(); ++i) x0[xb.size() + static_cast<Eigen::Index>(i)] = extra[i];
  }

  const double size = s.size();
  const Objective neg_ll = [&](const Eigen::VectorXd& x) {
    const double ll = loglik(pr.build(x), s);
    return std::isfinite(ll) ? -ll / size : kInf;
  };
  MinimizeOptions mo;
  mo.max_iter = opt.max_iter;
  mo.armijo = opt.armijo;
  mo.backtrack = opt.backtrack;
  mo.grad_tol = 1e-8;
  MinimizeResult mr = bfgs_minimize(neg_ll, x0, mo);

  FitResult r;
  r.iterations = mr.iterations;
  r.grad_norm = mr.grad_norm;
  // Finite-difference gradients carry noise near 1e-9 per observation.
  r.converged = mr.converged || (std::isfinite(mr.value) && mr.grad_norm < 1e-6);
  r.diagnostic = r.converged ? "converged" : "not converged: gradient norm " + num(mr.grad_norm);
  for (double v : mr.trajectory) r.trajectory.push_back(-v * size);
  r.model = pr.build(mr.x);

  const auto names = pr.names();
  std::vector<double> jac(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    r.params.emplace_back(names[i], pr.natural(mr.x, i));
    Eigen::VectorXd xp = mr.x, xm = mr.x;
    const double h = 1e-7 * std::max(1.0, std::abs(mr.x[static_cast<Eigen::Index>(i)]));
    xp[static_cast<Eigen::Index>(i)] += h;
    xm[static_cast<Eigen::Index>(i)] -= h;
    jac[i] = (pr.natural(xp, i) - pr.natural(xm, i)) / (2.0 * h);
  }
  if (opt.standard_errors) {
    const Eigen::MatrixXd H = size * fd_hessian(neg_ll, mr.x, 1e-4);
    std::optional<std::vector<double>> var;
    if (H.allFinite()) var = covariance_diagonal(0.5 * (H + H.transpose()));
    if (var) {
      std::vector<double> se(var->size());
      for (std::size_t i = 0; i < se.size(); ++i) se[i] = std::abs(jac[i]) * std::sqrt((*var)[i]);
      r.standard_errors = se;
    } else {
      r.diagnostic += "; standard errors omitted (information matrix ill-conditioned)";
    }
  }
  finish(r, s);
  return r;
}

void add_type1_equivalents(FitResult& r, const InfDefDistribution& d) {
  const auto& spec = d.spec();
  const auto& base = d.base();
  NamedValues psi, omega;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    psi.emplace_back("psi_" + std::to_string(spec.points()[i]), std::log(spec.factors()[i]));
  }
  const auto om = omega_from_alpha(base, spec);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    omega.emplace_back("omega_" + std::to_string(spec.points()[i]), om[i]);
  }
  r.equivalents.push_back({"type1_link", psi});
  r.equivalents.push_back({"multiple", omega});
  if (spec.size() == 1 && spec.points()[0] == 0) {
    r.equivalents.push_back({"zero_inflated", {{"omega", om[0]}}});
    r.equivalents.push_back({"hurdle", {{"pi", d.pmf(0)}}});
    r.equivalents.push_back({"haslett", {{"psi", std::log(spec.factors()[0])}}});
    r.equivalents.push_back({"type2", {{"phi_0", spec.factors()[0]}}});
  }
  bool full_interval = true;
  for (std::size_t i = 0; i < spec.size(); ++i) full_interval &= spec.points()[i] == i;
  if (full_interval && spec.size() > 1) {
    NamedValues phis;
    for (std::size_t i = 0; i < spec.size(); ++i) {
      const double next = i + 1 < spec.size() ? spec.factors()[i + 1] : 1.0;
      phis.emplace_back("phi_" + std::to_string(i), spec.factors()[i] / next);
    }
    r.equivalents.push_back({"type2", phis});
  }
}

void finish(FitResult& r, const CountSample& sample) {
  r.n_params = r.params.size();
  r.loglik = loglik(*r.model, sample);
  const double k = static_cast<double>(r.n_params);
  r.aic = 2.0 * k - 2.0 * r.loglik;
  r.bic = k * std::log(sample.size()) - 2.0 * r.loglik;

  if (const auto* d = r.model->as<InfDefDistribution>()) {
    const auto& spec = d->spec();
    if (spec.family() == InflationFamily::Type1) {
      add_type1_equivalents(r, *d);
    } else if (spec.size() == 1 && spec.points()[0] == 0) {
      add_type1_equivalents(r, InfDefDistribution(d->base(), InflationSpec::type1({0}, spec.factors())));
    } else {
      bool full_interval = true;
      for (std::size_t i = 0; i < spec.size(); ++i) full_interval &= spec.points()[i] == i;
      if (full_interval) {
        std::vector<double> alphas(spec.size());
        double tail = 1.0;
        for (std::size_t i = spec.size(); i-- > 0;) {
          tail *= spec.factors()[i];
          alphas[i] = tail;
        }
        NamedValues a;
        for (std::size_t i = 0; i < alphas.size(); ++i) a.emplace_back("alpha_" + std::to_string(i), alphas[i]);
        r.equivalents.push_back({"type1", a});
      }
    }
  } else if (const auto* m = r.model->as<MixtureModel>()) {
    const InfDefDistribution d = m->equivalent_type1();
    NamedValues a;
    for (std::size_t i = 0; i < d.spec().size(); ++i) {
      a.emplace_back("alpha_" + std::to_string(d.spec().points()[i]), d.spec().factors()[i]);
    }
    r.equivalents.push_back({"type1", a});
    add_type1_equivalents(r, d);
  }
}

FitResult boundary_result(const FitTemplate& t, const CountSample& s, std::string diagnostic) {
  FitResult r;
  r.converged = false;
  r.diagnostic = std::move(diagnostic);
  r.loglik = -kInf;
  r.aic = r.bic = kInf;
  try {
    r.model = BaseDistribution::make(t.kind, std::max(base_start_lambda(t, s), 1e-12),
                                     t.kind == BaseKind::CMP ? 1.0 : t.shape, t.policy);
    r.loglik = loglik(*r.model, s);
  } catch (const std::exception&) {
  }
  return r;
}

}  // namespace

FitResult fit_mle(const FitTemplate& tmpl, const CountSample& sample, const FitOptions& options) {
  tmpl.validate();
  if (auto diag = boundary_diagnostic(tmpl, sample)) return boundary_result(tmpl, sample, *diag);
  const bool canonical = tmpl.kind != BaseKind::PoissonLindley && !tmpl.mixture &&
                         !(options.direct_alpha && tmpl.inflation == InflationFamily::Type1);
  return canonical ? fit_canonical(tmpl, sample, options) : fit_direct(tmpl, sample, options);
}

FitResult profile_fit(const FitTemplate& tmpl, const CountSample& sample,
                      const std::vector<double>& grid, const FitOptions& options, double tol) {
  if (tmpl.kind != BaseKind::NegativeBinomial && tmpl.kind != BaseKind::HyperPoisson) {
    throw DomainError("profile fitting applies to negative_binomial (r) or hyper_poisson (tau)");
  }
  if (grid.empty()) throw DomainError("profile grid must be non-empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) throw DomainError("profile grid values must be positive");
    if (i && grid[i] <= grid[i - 1]) throw DomainError("profile grid must be strictly increasing");
  }
  const char* nuisance = tmpl.kind == BaseKind::NegativeBinomial ? "r" : "tau";
  FitOptions inner = options;
  inner.standard_errors = false;
  auto fit_at = [&](double shape, const FitOptions& o) {
    FitTemplate t = tmpl;
    t.shape = shape;
    return fit_mle(t, sample, o);
  };
  auto profile_ll = [&](double shape) {
    try {
      const double ll = fit_at(shape, inner).loglik;
      return std::isfinite(ll) ? ll : -kInf;
    } catch (const std::exception&) {
      return -kInf;
    }
  };

  std::vector<double> lls(grid.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    lls[i] = profile_ll(grid[i]);
    if (lls[i] > lls[best]) best = i;
  }
  double shape = grid[best];
  if (grid.size() > 1) {
    const double a = grid[best == 0 ? 0 : best - 1];
    const double b = grid[best + 1 < grid.size() ? best + 1 : best];
    const double refined = golden_section_max(profile_ll, a, b, tol);
    if (profile_ll(refined) >= lls[best]) shape = refined;
  }
  FitResult r = fit_at(shape, options);
  r.params.emplace_back(nuisance, shape);
  if (r.standard_errors) r.standard_errors->push_back(std::nan(""));
  if (grid.size() > 1) {
    r.n_params += 1;
    const double k = static_cast<double>(r.n_params);
    r.aic = 2.0 * k - 2.0 * r.loglik;
    r.bic = k * std::log(sample.size()) - 2.0 * r.loglik;
    r.diagnostic += std::string("; ") + nuisance + " profiled over " + std::to_string(grid.size()) +
                    " grid points";
  }
  return r;
}

}  // namespace bdstat
