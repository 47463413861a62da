#pragma once

#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "uwarma/fit.hpp"
#include "uwarma/forecast.hpp"
#include "uwarma/mc.hpp"
#include "uwarma/model.hpp"
#include "uwarma/version.hpp"

namespace uwarma {

using ordered_json = nlohmann::ordered_json;

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

namespace detail {

inline ordered_json param_block(const ParamVector& g) {
  return ordered_json{{"alpha", g.alpha},
                      {"beta", g.beta},
                      {"phi", g.phi},
                      {"theta", g.theta},
                      {"lambda", g.lambda}};
}

/// Slice a flat per-parameter vector back into named blocks.
inline ordered_json flat_block(const ModelSpec& spec, const std::vector<double>& v) {
  std::size_t k = 0;
  ordered_json j;
  j["alpha"] = v[k++];
  j["beta"] = std::vector<double>(v.begin() + k, v.begin() + k + spec.r);
  k += spec.r;
  j["phi"] = std::vector<double>(v.begin() + k, v.begin() + k + spec.p);
  k += spec.p;
  j["theta"] = std::vector<double>(v.begin() + k, v.begin() + k + spec.q);
  k += spec.q;
  j["lambda"] = v[k];
  return j;
}

}  // namespace detail

/// Everything needed to reproduce and reuse a fit: spec echo, estimates,
/// uncertainty, criteria and convergence diagnostics.
inline ordered_json fit_result_to_json(const FitResult& fit,
                                       const std::vector<std::string>& covariate_names,
                                       double ci_level, const std::string& command,
                                       std::optional<std::uint64_t> seed = {},
                                       const ordered_json& extra = ordered_json::object()) {
  const auto ci = standard_errors_ci(fit, ci_level);
  std::vector<double> lo(ci.size()), hi(ci.size());
  for (std::size_t j = 0; j < ci.size(); ++j) {
    lo[j] = ci[j].lo;
    hi[j] = ci[j].hi;
  }
  const auto crit = info_criteria(fit);

  ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = command;
  j["spec"] = ordered_json{{"p", fit.spec.p},
                           {"q", fit.spec.q},
                           {"r", fit.spec.r},
                           {"rho", fit.spec.rho},
                           {"link", to_string(fit.spec.link)}};
  j["data"] = ordered_json{{"n", fit.n}, {"covariates", covariate_names}};
  j["estimates"] = detail::param_block(fit.gamma_hat);
  j["se"] = detail::flat_block(fit.spec, fit.se);
  j["ci"] = ordered_json{{"level", ci_level},
                         {"lower", detail::flat_block(fit.spec, lo)},
                         {"upper", detail::flat_block(fit.spec, hi)}};
  j["loglik"] = fit.loglik;
  j["criteria"] = ordered_json{{"aic", crit.aic}, {"bic", crit.bic}, {"hqc", crit.hqc}};
  j["diagnostics"] = ordered_json{{"converged", fit.converged},
                                  {"iterations", fit.iterations},
                                  {"score_max_norm", fit.score_max_norm},
                                  {"clamp_events", fit.clamp_events},
                                  {"condition_number", fit.condition_number},
                                  {"flat_likelihood", fit.flat_likelihood},
                                  {"warnings", fit.warnings}};
  if (seed) j["seed"] = *seed;
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  return j;
}

struct LoadedModel {
  ModelSpec spec;
  ParamVector gamma;
  std::vector<std::string> covariate_names;
};

/// Reads back the subset of a result file needed to filter and forecast.
inline LoadedModel model_from_json(const ordered_json& j) {
  const auto& s = j.at("spec");
  LoadedModel out;
  out.spec = ModelSpec(s.at("p").get<int>(), s.at("q").get<int>(), s.at("rho").get<double>(),
                       link_from_string(s.at("link").get<std::string>()), s.at("r").get<int>());
  const auto& e = j.at("estimates");
  out.gamma = ParamVector(e.at("alpha").get<double>(), e.at("beta").get<std::vector<double>>(),
                          e.at("phi").get<std::vector<double>>(),
                          e.at("theta").get<std::vector<double>>(), e.at("lambda").get<double>());
  if (j.contains("data") && j.at("data").contains("covariates")) {
    out.covariate_names = j.at("data").at("covariates").get<std::vector<std::string>>();
  }
  if (!out.gamma.conforms(out.spec)) {
    throw std::runtime_error("model file is inconsistent: estimate blocks do not match spec");
  }
  return out;
}

inline LoadedModel load_model_file(const std::string& path) {
  return model_from_json(ordered_json::parse(read_text_file(path)));
}

inline ordered_json forecast_to_json(const ForecastResult& fc, const std::string& model_path) {
  ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = "forecast";
  j["model"] = model_path;
  j["horizon"] = fc.horizon;
  j["yhat"] = fc.yhat;
  j["mu_insample"] = fc.mu_insample;
  return j;
}

inline ordered_json study_summary_to_json(const StudySummary& s) {
  ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = "mc";
  j["config"] = ordered_json{{"replicas", s.config.replicas},
                             {"n", s.config.n},
                             {"rho", s.config.rho},
                             {"lambda", s.config.lambda},
                             {"alpha", s.config.alpha},
                             {"phi", s.config.phi},
                             {"theta", s.config.theta},
                             {"beta", s.config.beta ? ordered_json(*s.config.beta)
                                                    : ordered_json(nullptr)},
                             {"link", to_string(s.config.link)},
                             {"burnin", s.config.burnin},
                             {"base_seed", s.config.base_seed}};
  j["failures"] = s.failures;
  ordered_json params = ordered_json::array();
  for (std::size_t k = 0; k < s.param_names.size(); ++k) {
    params.push_back(ordered_json{{"parameter", s.param_names[k]},
                                  {"truth", s.truth[k]},
                                  {"mean", s.mean[k]},
                                  {"sd", s.sd[k]},
                                  {"bias", s.bias[k]}});
  }
  j["parameters"] = params;
  return j;
}

/// Per-replica estimates, one row per (replica, parameter); the layout used
/// for joint-distribution plots.
inline void write_study_replicas_csv(const std::string& path, const StudySummary& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "replica,seed,converged,parameter,estimate,se\n";
  for (const auto& rec : s.replicas) {
    for (std::size_t k = 0; k < s.param_names.size(); ++k) {
      out << rec.index << ',' << rec.seed << ',' << (rec.ok ? 1 : 0) << ','
          << s.param_names[k] << ',';
      if (rec.ok) {
        out << format_double(rec.estimate[k]) << ','
            << (k < rec.se.size() ? format_double(rec.se[k]) : "");
      } else {
        out << ',';
      }
      out << '\n';
    }
  }
}

inline void write_study_summary_csv(const std::string& path, const StudySummary& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "parameter,mean,sd\n";
  for (std::size_t k = 0; k < s.param_names.size(); ++k) {
    out << s.param_names[k] << ',' << format_double(s.mean[k]) << ',' << format_double(s.sd[k])
        << '\n';
  }
}

/// Minimal JSON-schema subset checker: 'type' tags plus recursive 'required'
/// through 'properties'. Enough to pin the documented result layout.
inline bool validate_against_schema(const ordered_json& value, const ordered_json& schema,
                                    std::string* error, const std::string& where = "$") {
  auto fail = [&](const std::string& msg) {
    if (error) *error = where + ": " + msg;
    return false;
  };
  if (schema.contains("type")) {
    const std::string t = schema.at("type").get<std::string>();
    const bool ok = (t == "object" && value.is_object()) ||
                    (t == "array" && value.is_array()) ||
                    (t == "string" && value.is_string()) ||
                    (t == "number" && (value.is_number() || value.is_null())) ||
                    (t == "integer" && value.is_number_integer()) ||
                    (t == "boolean" && value.is_boolean());
    if (!ok) return fail("expected type '" + t + "'");
  }
  if (schema.contains("required")) {
    for (const auto& key : schema.at("required")) {
      if (!value.contains(key.get<std::string>())) {
        return fail("missing required field '" + key.get<std::string>() + "'");
      }
    }
  }
  if (schema.contains("properties") && value.is_object()) {
    for (auto it = schema.at("properties").begin(); it != schema.at("properties").end(); ++it) {
      if (value.contains(it.key())) {
        if (!validate_against_schema(value.at(it.key()), it.value(), error,
                                     where + "." + it.key())) {
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace uwarma
