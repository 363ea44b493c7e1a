// bdstat: command-line front end for the birth-death count distribution library.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bdstat/errors.hpp"
#include "bdstat/expfamily.hpp"
#include "bdstat/fit.hpp"
#include "bdstat/model_io.hpp"
#include "bdstat/moments.hpp"
#include "bdstat/simulate.hpp"

using namespace bdstat;
using nlohmann::json;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitGuard = 4;

std::string g12(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

json jnum(double x) {
  if (!std::isfinite(x)) return json(g12(x));
  return json(x);
}

struct Common {
  std::string out;
  std::string format = "csv";
  std::optional<double> rel_tol;
  std::optional<std::size_t> max_terms;

  PolicyOverride override() const { return {rel_tol, max_terms}; }
  SeriesPolicy policy() const {
    SeriesPolicy p;
    if (rel_tol) p.rel_tol = *rel_tol;
    if (max_terms) p.max_terms = *max_terms;
    p.validate();
    return p;
  }
};

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw DomainError("cannot write output file '" + c.out + "'");
  f << text;
}

void add_common(CLI::App* sub, Common& c, const std::vector<std::string>& formats) {
  sub->add_option("--out", c.out, "Write output to this file instead of stdout");
  sub->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember(formats))
      ->default_str(formats.front());
  sub->add_option("--rel-tol", c.rel_tol, "Series relative tolerance");
  sub->add_option("--max-terms", c.max_terms, "Series term cap");
}

std::vector<std::uint64_t> parse_points(const std::string& text) {
  std::vector<std::uint64_t> pts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    long long v = -1;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
    }
    if (v < 0 || used != item.size()) throw DomainError("bad inflation point '" + item + "'");
    pts.push_back(static_cast<std::uint64_t>(v));
  }
  return pts;
}

std::vector<double> parse_reals(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || !std::isfinite(v)) throw DomainError("bad " + what + " value '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t steps, const std::string& what) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi >= lo) || steps < 1) {
    throw DomainError("bad " + what + " grid: need finite min <= max and steps >= 1");
  }
  std::vector<double> v(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    v[i] = steps == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
  return v;
}

// ---- pmf ----

int cmd_pmf(const Common& c, const std::string& spec, std::optional<std::uint64_t> n_max) {
  const CountModel model = load_model_spec(spec, c.override());
  const auto probs = model.probabilities();
  const MomentSummary m = moments_from_probabilities(probs);
  const std::uint64_t last = n_max ? *n_max : probs.size() - 1;
  std::vector<double> p(last + 1), cdf(last + 1);
  double acc = 0.0;
  for (std::uint64_t n = 0; n <= last; ++n) {
    p[n] = model.pmf(n);
    cdf[n] = (acc += p[n]);
  }
  if (c.format == "json") {
    json j{{"model", model.describe()}, {"p", p}, {"cdf", cdf}, {"mean", m.mean}, {"variance", m.variance}};
    emit(c, j.dump(2) + "\n");
    return 0;
  }
  std::string s = "n,p,cdf\n";
  for (std::uint64_t n = 0; n <= last; ++n) s += std::to_string(n) + "," + g12(p[n]) + "," + g12(cdf[n]) + "\n";
  s += "# mean=" + g12(m.mean) + " variance=" + g12(m.variance) + "\n";
  emit(c, s);
  return 0;
}

// ---- moments ----

int cmd_moments(const Common& c, const std::string& spec) {
  const CountModel model = load_model_spec(spec, c.override());
  const MomentSummary m = moments_direct(model);
  const SequenceVerdict v = classify_sequence(model);
  std::optional<ClosedMoments> closed;
  if (const auto* d = model.as<InfDefDistribution>()) closed = moments_closed(*d);
  if (c.format == "json") {
    json j{{"model", model.describe()},
           {"mean", m.mean},
           {"variance", m.variance},
           {"dispersion_index", jnum(m.dispersion_index)},
           {"skewness", m.skewness},
           {"kurtosis", m.kurtosis},
           {"kurtosis_central_band", m.kurtosis_central_band},
           {"a_n_trend", to_string(v.trend)},
           {"implication", to_string(v.implication)}};
    if (closed) {
      j["closed_mean"] = closed->mean;
      j["closed_variance"] = closed->variance;
      j["closed_series_fallback"] = closed->series_fallback;
    }
    emit(c, j.dump(2) + "\n");
    return 0;
  }
  std::string s =
      "mean,variance,dispersion_index,skewness,kurtosis,kurtosis_central_band,a_n_trend,implication\n";
  s += g12(m.mean) + "," + g12(m.variance) + "," + g12(m.dispersion_index) + "," + g12(m.skewness) +
       "," + g12(m.kurtosis) + "," + g12(m.kurtosis_central_band) + "," + to_string(v.trend) + "," +
       to_string(v.implication) + "\n";
  if (closed) {
    s += "# closed_mean=" + g12(closed->mean) + " closed_variance=" + g12(closed->variance) +
         (closed->series_fallback ? " (series fallback)" : "") + "\n";
  }
  emit(c, s);
  return 0;
}

// ---- fit ----

struct FitFlags {
  std::string data;
  std::string base = "poisson";
  double shape = 0.0;
  std::string family = "base";
  std::string variant = "multiple";
  std::string points;
  std::string profile_grid;
  bool direct_alpha = false;
  std::size_t max_iter = 500;
};

json named(const NamedValues& v) {
  json j = json::object();
  for (const auto& [k, x] : v) j[k] = jnum(x);
  return j;
}

int cmd_fit(const Common& c, const FitFlags& f) {
  const CountSample sample = read_count_sample_file(f.data);
  FitTemplate t;
  t.kind = parse_base_kind(f.base);
  t.shape = f.shape;
  t.policy = c.policy();
  if (f.family == "type1" || f.family == "type2") {
    t.inflation = parse_inflation_family(f.family);
  } else if (f.family == "mixture") {
    t.mixture = parse_mixture_variant(f.variant);
  } else if (f.family != "base") {
    throw DomainError("unknown fit family '" + f.family + "'");
  }
  t.points = parse_points(f.points);
  if (t.mixture && t.points.empty() && *t.mixture != MixtureVariant::MultipleInflation) t.points = {0};
  FitOptions o;
  o.direct_alpha = f.direct_alpha;
  o.max_iter = f.max_iter;
  FitResult r;
  if (!f.profile_grid.empty()) {
    t.shape = t.shape > 0.0 ? t.shape : 1.0;
    r = profile_fit(t, sample, parse_reals(f.profile_grid, "profile grid"), o);
  } else {
    r = fit_mle(t, sample, o);
  }
  json j;
  j["template"] = t.describe();
  j["sample_size"] = sample.size();
  j["sample_mean"] = sample.mean();
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["gradient_norm"] = jnum(r.grad_norm);
  j["diagnostic"] = r.diagnostic;
  j["loglik"] = jnum(r.loglik);
  j["aic"] = jnum(r.aic);
  j["bic"] = jnum(r.bic);
  j["params"] = named(r.params);
  if (r.standard_errors) {
    NamedValues se;
    for (std::size_t i = 0; i < r.params.size(); ++i) se.emplace_back(r.params[i].first, (*r.standard_errors)[i]);
    j["standard_errors"] = named(se);
  } else {
    j["standard_errors"] = nullptr;
  }
  j["eta_hat"] = std::vector<double>(r.eta_hat.data(), r.eta_hat.data() + r.eta_hat.size());
  json eq = json::array();
  for (const auto& e : r.equivalents) eq.push_back({{"family", e.family}, {"params", named(e.params)}});
  j["equivalents"] = eq;
  if (r.model) {
    j["model"] = model_to_json(*r.model);
    j["fitted_mean"] = moments_direct(*r.model).mean;
  }
  emit(c, j.dump(2) + "\n");
  return r.converged ? 0 : kExitNoConvergence;
}

// ---- surface / contour ----

struct DispFlags {
  std::string base = "poisson";
  double shape = 0.0;
  std::string family = "type2";
  std::uint64_t q = 2;
  double lambda_min = 0.1, lambda_max = 8.0;
  std::size_t lambda_steps = 80;
  double phi_min = 0.1, phi_max = 3.0;
  std::size_t phi_steps = 30;
  double phi = 1.0;
  std::size_t scan = 400;
  bool curve = false;
  std::string lambdas;
};

DispersionFamily dispersion_family(const Common& c, const DispFlags& f) {
  DispersionFamily fam;
  fam.kind = parse_base_kind(f.base);
  fam.shape = f.shape;
  fam.inflation = parse_inflation_family(f.family);
  fam.q = f.q;
  fam.policy = c.policy();
  // Probe once so bad shapes fail before the grid loop.
  (void)BaseDistribution::make(fam.kind, fam.kind == BaseKind::Geometric || fam.kind == BaseKind::PoissonLindley ? 0.5 : 1.0,
                               fam.shape, fam.policy);
  return fam;
}

std::string heat_colour(double index) {
  // blue (under) through white (1) to red (over), saturating at 0.5 and 2.
  const double t = std::clamp(std::log2(index), -1.0, 1.0);
  int r = 255, g = 255, b = 255;
  if (t < 0) {
    r = g = static_cast<int>(255 * (1 + t));
  } else {
    g = b = static_cast<int>(255 * (1 - t));
  }
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

std::string surface_svg(const DispersionSurface& s, const DispersionFamily& fam) {
  const double W = 640, H = 480, L = 60, B = 40, T = 20, R = 20;
  const double pw = W - L - R, ph = H - T - B;
  const double x0 = s.lambdas.front(), x1 = s.lambdas.back();
  const double y0 = s.factors.front(), y1 = s.factors.back();
  auto X = [&](double x) { return L + (x1 > x0 ? (x - x0) / (x1 - x0) : 0.5) * pw; };
  auto Y = [&](double y) { return T + ph - (y1 > y0 ? (y - y0) / (y1 - y0) : 0.5) * ph; };
  const double cw = pw / static_cast<double>(s.lambdas.size());
  const double chh = ph / static_cast<double>(s.factors.size());
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  for (std::size_t i = 0; i < s.lambdas.size(); ++i) {
    for (std::size_t j = 0; j < s.factors.size(); ++j) {
      if (!s.index[i][j]) continue;
      o << "<rect x=\"" << g12(X(s.lambdas[i]) - cw / 2) << "\" y=\"" << g12(Y(s.factors[j]) - chh / 2)
        << "\" width=\"" << g12(cw) << "\" height=\"" << g12(chh) << "\" fill=\""
        << heat_colour(*s.index[i][j]) << "\"/>\n";
    }
  }
  // Equidispersion contour: one polyline per root rank.
  std::vector<std::vector<std::pair<double, double>>> lines;
  for (double phi : s.factors) {
    const Contour c = equidispersion_contour(fam, phi, x0, x1, 200);
    for (std::size_t k = 0; k < c.roots.size(); ++k) {
      if (lines.size() <= k) lines.emplace_back();
      lines[k].emplace_back(c.roots[k], phi);
    }
  }
  for (const auto& line : lines) {
    o << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : line) o << g12(X(x)) << "," << g12(Y(y)) << " ";
    o << "\"/>\n";
  }
  o << "<line x1=\"" << L << "\" y1=\"" << T + ph << "\" x2=\"" << L + pw << "\" y2=\"" << T + ph
    << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << T + ph
    << "\" stroke=\"black\"/>\n";
  o << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 8 << "\" text-anchor=\"middle\">lambda ["
    << g12(x0) << ", " << g12(x1) << "]</text>\n";
  o << "<text x=\"14\" y=\"" << T + ph / 2 << "\" transform=\"rotate(-90 14 " << T + ph / 2
    << ")\" text-anchor=\"middle\">factor [" << g12(y0) << ", " << g12(y1) << "]</text>\n";
  o << "</svg>\n";
  return o.str();
}

int cmd_surface(const Common& c, const DispFlags& f) {
  const DispersionFamily fam = dispersion_family(c, f);
  const auto lambdas = linspace(f.lambda_min, f.lambda_max, f.lambda_steps, "lambda");
  const auto phis = linspace(f.phi_min, f.phi_max, f.phi_steps, "phi");
  if (lambdas.front() <= 0.0 || phis.front() <= 0.0) throw DomainError("grids must be positive");
  const DispersionSurface s = dispersion_surface(fam, lambdas, phis);
  if (c.format == "svg") {
    emit(c, surface_svg(s, fam));
    return 0;
  }
  if (c.format == "json") {
    json rows = json::array();
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      for (std::size_t j = 0; j < phis.size(); ++j) {
        rows.push_back({{"lambda", lambdas[i]},
                        {"phi", phis[j]},
                        {"index", s.index[i][j] ? json(*s.index[i][j]) : json(nullptr)}});
      }
    }
    emit(c, rows.dump(2) + "\n");
    return 0;
  }
  std::string out = "lambda,phi,index\n";
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    for (std::size_t j = 0; j < phis.size(); ++j) {
      out += g12(lambdas[i]) + "," + g12(phis[j]) + "," + (s.index[i][j] ? g12(*s.index[i][j]) : "") + "\n";
    }
  }
  emit(c, out);
  return 0;
}

int cmd_contour(const Common& c, const DispFlags& f) {
  if (f.curve) {
    if (f.base != "poisson" || f.family != "type2") {
      throw DomainError("--curve samples the equidispersion curve of the type2 poisson model only");
    }
    const auto lambdas = f.lambdas.empty() ? linspace(f.lambda_min, f.lambda_max, f.lambda_steps, "lambda")
                                           : parse_reals(f.lambdas, "lambda");
    std::string out = "lambda,phi\n";
    json rows = json::array();
    for (double l : lambdas) {
      const double phi = equidispersion_phi(l, f.q);
      out += g12(l) + "," + (phi > 0.0 ? g12(phi) : "") + "\n";
      rows.push_back({{"lambda", l}, {"phi", phi > 0.0 ? json(phi) : json(nullptr)}});
    }
    emit(c, c.format == "json" ? rows.dump(2) + "\n" : out);
    return 0;
  }
  const DispersionFamily fam = dispersion_family(c, f);
  const Contour ct = equidispersion_contour(fam, f.phi, f.lambda_min, f.lambda_max, f.scan);
  if (c.format == "json") {
    emit(c, json{{"phi", f.phi}, {"roots", ct.roots}, {"degenerate", ct.degenerate}}.dump(2) + "\n");
    return 0;
  }
  std::string out = "phi,lambda_root\n";
  for (double r : ct.roots) out += g12(f.phi) + "," + g12(r) + "\n";
  if (ct.degenerate) out += "# degenerate: dispersion index equals 1 for every lambda in range\n";
  emit(c, out);
  return 0;
}

// ---- simulate ----

struct SimFlags {
  std::string spec;
  std::uint64_t seed = 1;
  double sample_time = 1e5;
  std::optional<double> burn_in;
  double thinning = 1.0;
  std::string clock = "linear";
  std::optional<std::uint64_t> state_cap;
};

int cmd_simulate(const Common& c, const SimFlags& f) {
  const CountModel model = load_model_spec(f.spec, c.override());
  const auto target = model.probabilities();
  const RatioSequence ratios = model.ratio_sequence();
  const DeathClock clock = f.clock == "constant" ? DeathClock::Constant : DeathClock::Linear;
  const BirthDeathRates rates = canonical_rates(ratios, clock);
  SimConfig cfg;
  cfg.seed = f.seed;
  cfg.sample_time = f.sample_time;
  cfg.burn_in_time = f.burn_in;
  cfg.thinning_interval = f.thinning;
  cfg.state_cap = f.state_cap ? *f.state_cap : explosion_cap(model);
  const SimResult r = run_ctmc(rates, cfg);
  const double tv = total_variation(r.occupancy, target);
  json meta{{"model", model.describe()},
            {"rng", kRngAlgorithm},
            {"seed", f.seed},
            {"burn_in_time", r.burn_in_time},
            {"sample_time", r.sample_time},
            {"thinning_interval", f.thinning},
            {"events", r.events},
            {"state_cap", *cfg.state_cap},
            {"rates", rates.provenance}};
  if (c.format == "json") {
    emit(c, json{{"metadata", meta}, {"occupancy", r.occupancy}, {"tv_distance", tv}}.dump(2) + "\n");
    return 0;
  }
  std::string out = "# " + meta.dump() + "\nstate,weight\n";
  for (std::size_t n = 0; n < r.occupancy.size(); ++n) out += std::to_string(n) + "," + g12(r.occupancy[n]) + "\n";
  out += "# tv_distance=" + g12(tv) + "\n";
  emit(c, out);
  return 0;
}

// ---- equiphi ----

int cmd_equiphi(const Common& c, const std::string& lambdas, std::uint64_t q) {
  const auto ls = parse_reals(lambdas, "lambda");
  if (ls.empty()) throw DomainError("--lambda needs at least one value");
  std::string out = "lambda,q,phi\n";
  std::string notes;
  json rows = json::array();
  for (double l : ls) {
    const double phi = equidispersion_phi(l, q);
    out += g12(l) + "," + std::to_string(q) + "," + g12(phi) + "\n";
    if (phi <= 0.0) notes += "# phi <= 0 at lambda=" + g12(l) + ": no admissible type2 model\n";
    rows.push_back({{"lambda", l}, {"q", q}, {"phi", phi}});
  }
  out += notes;
  emit(c, c.format == "json" ? rows.dump(2) + "\n" : out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bdstat: stationary birth-death count distributions"};
  app.require_subcommand(1);
  Common common;

  std::string spec;
  std::optional<std::uint64_t> n_max;
  auto* pmf = app.add_subcommand("pmf", "Print p(n) and the cumulative mass for a model spec");
  pmf->add_option("--spec", spec, "Model spec JSON")->required();
  pmf->add_option("--n-max", n_max, "Largest n to print (default: effective support)");
  add_common(pmf, common, {"csv", "json"});

  auto* mom = app.add_subcommand("moments", "Mean, variance, skewness and kurtosis of a model");
  mom->add_option("--spec", spec, "Model spec JSON")->required();
  add_common(mom, common, {"csv", "json"});

  FitFlags ff;
  auto* fit = app.add_subcommand("fit", "Maximum-likelihood fit to count data");
  fit->add_option("--data", ff.data, "Counts CSV (one per line) or value,count CSV")->required();
  fit->add_option("--base", ff.base, "Base kind")->capture_default_str();
  fit->add_option("--shape", ff.shape, "Fixed r (NB) or tau (HP)");
  fit->add_option("--family", ff.family, "base, type1, type2 or mixture")->capture_default_str();
  fit->add_option("--variant", ff.variant, "Mixture variant")->capture_default_str();
  fit->add_option("--points", ff.points, "Inflation points, comma separated");
  fit->add_option("--profile-grid", ff.profile_grid, "Profile r or tau over these values");
  fit->add_flag("--direct-alpha", ff.direct_alpha, "Fit type 1 factors on the alpha scale");
  fit->add_option("--max-iter", ff.max_iter, "Iteration cap")->capture_default_str();
  add_common(fit, common, {"json"});

  DispFlags df;
  auto add_disp = [&](CLI::App* sub) {
    sub->add_option("--base", df.base, "Base kind")->capture_default_str();
    sub->add_option("--shape,--nu", df.shape, "Shape parameter (nu for CMP)");
    sub->add_option("--family", df.family, "type1 or type2")->capture_default_str();
    sub->add_option("--q", df.q, "Inflation point")->capture_default_str();
    sub->add_option("--lambda-min", df.lambda_min)->capture_default_str();
    sub->add_option("--lambda-max", df.lambda_max)->capture_default_str();
    sub->add_option("--lambda-steps", df.lambda_steps)->capture_default_str();
  };
  auto* surf = app.add_subcommand("surface", "Dispersion index over a lambda x factor grid");
  add_disp(surf);
  surf->add_option("--phi-min", df.phi_min)->capture_default_str();
  surf->add_option("--phi-max", df.phi_max)->capture_default_str();
  surf->add_option("--phi-steps", df.phi_steps)->capture_default_str();
  add_common(surf, common, {"csv", "json", "svg"});

  auto* cont = app.add_subcommand("contour", "Lambda roots of dispersion index = 1 at a fixed factor");
  add_disp(cont);
  cont->add_option("--phi", df.phi, "Fixed inflation factor")->capture_default_str();
  cont->add_option("--scan", df.scan, "Scan intervals before bisection")->capture_default_str();
  cont->add_flag("--curve", df.curve, "Sample the equidispersion curve phi(lambda) instead");
  cont->add_option("--lambdas", df.lambdas, "Lambda values for --curve, comma separated");
  add_common(cont, common, {"csv", "json"});

  SimFlags sf;
  auto* sim = app.add_subcommand("simulate", "Gillespie simulation of the birth-death process");
  sim->add_option("--spec", sf.spec, "Model spec JSON")->required();
  sim->add_option("--seed", sf.seed)->capture_default_str();
  sim->add_option("--sample-time", sf.sample_time)->capture_default_str();
  sim->add_option("--burn-in", sf.burn_in, "Default 50 / min(mu_1, gamma_0)");
  sim->add_option("--thinning", sf.thinning)->capture_default_str();
  sim->add_option("--death-clock", sf.clock, "linear (mu_n = n) or constant (mu_n = 1)")
      ->check(CLI::IsMember({"linear", "constant"}))
      ->capture_default_str();
  sim->add_option("--state-cap", sf.state_cap, "Abort above this state (default 10 (mean + 12 sd))");
  add_common(sim, common, {"csv", "json"});

  std::string eq_lambda;
  std::uint64_t eq_q = 2;
  auto* eq = app.add_subcommand("equiphi", "phi giving an equidispersed type 2 Poisson model");
  eq->add_option("--lambda", eq_lambda, "Lambda values, comma separated")->required();
  eq->add_option("--q", eq_q)->capture_default_str();
  add_common(eq, common, {"csv", "json"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }
  if (fit->parsed()) common.format = "json";

  try {
    if (pmf->parsed()) return cmd_pmf(common, spec, n_max);
    if (mom->parsed()) return cmd_moments(common, spec);
    if (fit->parsed()) return cmd_fit(common, ff);
    if (surf->parsed()) return cmd_surface(common, df);
    if (cont->parsed()) return cmd_contour(common, df);
    if (sim->parsed()) return cmd_simulate(common, sf);
    if (eq->parsed()) return cmd_equiphi(common, eq_lambda, eq_q);
  } catch (const StateExplosionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitGuard;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
