#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"

#include "bdstat/fit.hpp"
#include "bdstat/model.hpp"
#include "bdstat/series.hpp"

namespace bdstat {

// Overrides applied on top of the document's "series" block.
struct PolicyOverride {
  std::optional<double> rel_tol;
  std::optional<std::size_t> max_terms;
};

// Model document:
//   {"family": "base" | "type1" | "type2" | "mixture" | "custom",
//    "base": {"kind": ..., "lambda": ..., "r"|"tau"|"nu": ...},
//    "points": [...], "factors": [...],                 type1/type2
//    "variant": ..., "omegas" | "pi" | "psi": ...,       mixture
//    "ratios": [...], "tail_ratio": ...,                 custom
//    "series": {"rel_tol": ..., "max_terms": ...}}
// Malformed documents throw DomainError.
CountModel parse_model_spec(const nlohmann::json& doc, const PolicyOverride& override = {});
CountModel load_model_spec(const std::string& path, const PolicyOverride& override = {});
nlohmann::json model_to_json(const CountModel& model);

SeriesPolicy parse_policy(const nlohmann::json& doc, const PolicyOverride& override);

// One integer per line, or "value,count" rows (extra columns ignored); blank lines, '#' comments and a
// non-numeric header line are skipped.
CountSample read_count_sample(std::istream& in);
CountSample read_count_sample_file(const std::string& path);

}  // namespace bdstat
