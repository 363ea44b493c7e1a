#include "bdstat/model_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "bdstat/errors.hpp"

namespace bdstat {

using nlohmann::json;

namespace {

double number(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw DomainError(where + " is missing field '" + key + "'");
  const json& v = obj.at(key);
  if (!v.is_number()) throw DomainError(where + "." + key + " must be a number");
  return v.get<double>();
}

void only_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw DomainError(where + " must be a JSON object");
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.count(k)) throw DomainError(where + " has unknown field '" + k + "'");
  }
}

std::vector<double> numbers(const json& doc, const std::string& key) {
  if (!doc.contains(key)) throw DomainError("model spec is missing field '" + key + "'");
  const json& arr = doc.at(key);
  if (!arr.is_array()) throw DomainError("'" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : arr) {
    if (!v.is_number()) throw DomainError("'" + key + "' must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<std::uint64_t> points_of(const json& doc) {
  if (!doc.contains("points")) throw DomainError("model spec is missing field 'points'");
  const json& arr = doc.at("points");
  if (!arr.is_array()) throw DomainError("'points' must be an array of non-negative integers");
  std::vector<std::uint64_t> out;
  for (const auto& v : arr) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
      throw DomainError("'points' must be an array of non-negative integers");
    }
    out.push_back(v.get<std::uint64_t>());
  }
  return out;
}

BaseDistribution parse_base(const json& b, const SeriesPolicy& policy) {
  only_keys(b, {"kind", "lambda", "r", "tau", "nu"}, "base");
  if (!b.contains("kind") || !b.at("kind").is_string()) {
    throw DomainError("base.kind must be a string");
  }
  const BaseKind kind = parse_base_kind(b.at("kind").get<std::string>());
  const double lambda = number(b, "lambda", "base");
  double shape = 0.0;
  switch (kind) {
    case BaseKind::NegativeBinomial: shape = number(b, "r", "base"); break;
    case BaseKind::HyperPoisson: shape = number(b, "tau", "base"); break;
    case BaseKind::CMP: shape = number(b, "nu", "base"); break;
    default: break;
  }
  return BaseDistribution::make(kind, lambda, shape, policy);
}

}  // namespace

SeriesPolicy parse_policy(const json& doc, const PolicyOverride& override) {
  SeriesPolicy p;
  if (doc.contains("series")) {
    const json& s = doc.at("series");
    only_keys(s, {"rel_tol", "max_terms"}, "series");
    if (s.contains("rel_tol")) p.rel_tol = number(s, "rel_tol", "series");
    if (s.contains("max_terms")) {
      if (!s.at("max_terms").is_number_integer() || s.at("max_terms").get<std::int64_t>() < 1) {
        throw DomainError("series.max_terms must be a positive integer");
      }
      p.max_terms = s.at("max_terms").get<std::size_t>();
    }
  }
  if (override.rel_tol) p.rel_tol = *override.rel_tol;
  if (override.max_terms) p.max_terms = *override.max_terms;
  p.validate();
  return p;
}

CountModel parse_model_spec(const json& doc, const PolicyOverride& override) {
  only_keys(doc,
            {"family", "base", "points", "factors", "variant", "omegas", "pi", "psi", "ratios",
             "tail_ratio", "series"},
            "model spec");
  if (!doc.contains("family") || !doc.at("family").is_string()) {
    throw DomainError("model spec needs a string field 'family'");
  }
  const std::string family = doc.at("family").get<std::string>();
  const SeriesPolicy policy = parse_policy(doc, override);

  if (family == "custom") {
    std::vector<double> ratios = numbers(doc, "ratios");
    const double tail = number(doc, "tail_ratio", "model spec");
    return StationaryPmf(RatioSequence::from_values(std::move(ratios), tail), policy);
  }
  if (!doc.contains("base")) throw DomainError("model spec is missing field 'base'");
  BaseDistribution base = parse_base(doc.at("base"), policy);
  if (family == "base") return base;
  if (family == "type1" || family == "type2") {
    return InfDefDistribution(std::move(base),
                              InflationSpec::make(parse_inflation_family(family), points_of(doc),
                                                  numbers(doc, "factors")));
  }
  if (family == "mixture") {
    if (!doc.contains("variant") || !doc.at("variant").is_string()) {
      throw DomainError("mixture spec needs a string field 'variant'");
    }
    const MixtureVariant v = parse_mixture_variant(doc.at("variant").get<std::string>());
    switch (v) {
      case MixtureVariant::Hurdle:
        return MixtureModel::hurdle(std::move(base), number(doc, "pi", "model spec"));
      case MixtureVariant::Haslett:
        return MixtureModel::haslett(std::move(base), number(doc, "psi", "model spec"));
      case MixtureVariant::ZeroInflated: {
        const auto om = numbers(doc, "omegas");
        if (om.size() != 1) throw DomainError("zero_inflated spec needs exactly one omega");
        return MixtureModel::zero_inflated(std::move(base), om[0]);
      }
      case MixtureVariant::MultipleInflation:
        return MixtureModel::multiple(std::move(base), points_of(doc), numbers(doc, "omegas"));
    }
  }
  throw DomainError("unknown family '" + family + "' (expected base, type1, type2, mixture or custom)");
}

CountModel load_model_spec(const std::string& path, const PolicyOverride& override) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open spec file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw DomainError("spec file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_model_spec(doc, override);
}

json model_to_json(const CountModel& model) {
  json doc;
  auto base_json = [](const BaseDistribution& b) {
    json j{{"kind", std::string(to_string(b.kind()))}, {"lambda", b.lambda()}};
    if (b.kind() == BaseKind::NegativeBinomial) j["r"] = b.r();
    if (b.kind() == BaseKind::HyperPoisson) j["tau"] = b.tau();
    if (b.kind() == BaseKind::CMP) j["nu"] = b.nu();
    return j;
  };
  if (const auto* b = model.as<BaseDistribution>()) {
    doc = {{"family", "base"}, {"base", base_json(*b)}};
  } else if (const auto* d = model.as<InfDefDistribution>()) {
    doc = {{"family", std::string(to_string(d->spec().family()))},
           {"base", base_json(d->base())},
           {"points", d->spec().points()},
           {"factors", d->spec().factors()}};
  } else if (const auto* m = model.as<MixtureModel>()) {
    doc = {{"family", "mixture"},
           {"variant", std::string(to_string(m->variant()))},
           {"base", base_json(m->base())}};
    switch (m->variant()) {
      case MixtureVariant::Hurdle: doc["pi"] = m->params()[0]; break;
      case MixtureVariant::Haslett: doc["psi"] = m->params()[0]; break;
      case MixtureVariant::MultipleInflation: doc["points"] = m->points(); [[fallthrough]];
      case MixtureVariant::ZeroInflated: doc["omegas"] = m->params(); break;
    }
  } else {
    doc = {{"family", "custom"}, {"label", model.describe()}};
  }
  doc["series"] = {{"rel_tol", model.policy().rel_tol}, {"max_terms", model.policy().max_terms}};
  return doc;
}

CountSample read_count_sample(std::istream& in) {
  std::map<std::uint64_t, double> table;
  std::string line;
  std::size_t lineno = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    line = line.substr(first);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
      line.pop_back();
    }
    const auto comma = line.find(',');
    const std::string value_text = line.substr(0, comma);
    std::size_t used = 0;
    long long value = 0;
    bool ok = true;
    try {
      value = std::stoll(value_text, &used);
      ok = used == value_text.size();
    } catch (const std::exception&) {
      ok = false;
    }
    if (!ok) {
      if (!seen_data) {
        seen_data = true;  // header line
        continue;
      }
      throw DomainError("line " + std::to_string(lineno) + ": '" + value_text +
                        "' is not a non-negative integer");
    }
    seen_data = true;
    if (value < 0) {
      throw DomainError("line " + std::to_string(lineno) + ": counts must be non-negative");
    }
    double weight = 1.0;
    if (comma != std::string::npos) {
      std::string w = line.substr(comma + 1);
      w = w.substr(0, w.find(','));
      try {
        weight = std::stod(w, &used);
        if (used != w.size()) throw std::invalid_argument(w);
      } catch (const std::exception&) {
        throw DomainError("line " + std::to_string(lineno) + ": frequency '" + w + "' is not a number");
      }
    }
    table[static_cast<std::uint64_t>(value)] += weight;
  }
  if (table.empty()) throw DomainError("count data is empty");
  return CountSample::from_frequencies(table);
}

CountSample read_count_sample_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open data file '" + path + "'");
  return read_count_sample(in);
}

}  // namespace bdstat
