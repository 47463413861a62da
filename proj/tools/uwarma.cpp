// uwarma: simulate, fit, forecast and evaluate Unit-Weibull ARMA models for
// time series on (0,1). Subcommands: simulate, fit, forecast, select, mc,
// rollfc. Exit codes: 0 success, 2 usage, 3 data validation, 4 fit did not
// converge (results are still written, flagged accordingly).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uwarma/uwarma.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNoConvergence = 4;

struct DataValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int default_jobs() {
  if (const char* env = std::getenv("UWARMA_JOBS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

/// Covariate-only CSV (header + numeric columns); used for --xfile/--xfuture.
struct CovariateFile {
  uwarma::Matrix X;
  std::vector<std::string> names;
};

CovariateFile load_covariates_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw uwarma::CsvError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw uwarma::CsvError("'" + path + "': empty file");
  CovariateFile out;
  auto header = uwarma::detail::split_csv_line(line);
  std::vector<std::size_t> cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "date") continue;
    cols.push_back(c);
    out.names.push_back(header[c]);
  }
  if (cols.empty()) throw uwarma::CsvError("'" + path + "': no covariate columns");
  std::vector<std::vector<double>> data(cols.size());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = uwarma::detail::split_csv_line(line);
    if (fields.size() != header.size()) {
      throw uwarma::CsvError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " fields");
    }
    for (std::size_t k = 0; k < cols.size(); ++k) {
      data[k].push_back(
          uwarma::detail::parse_double_field(fields[cols[k]], line_no, header[cols[k]]));
    }
  }
  if (data[0].empty()) throw uwarma::CsvError("'" + path + "': no data rows");
  out.X = uwarma::Matrix(data[0].size(), cols.size());
  for (std::size_t t = 0; t < out.X.rows; ++t)
    for (std::size_t k = 0; k < cols.size(); ++k) out.X(t, k) = data[k][t];
  return out;
}

// -------------------------------------------------------------- simulate --

struct SimulateArgs {
  std::size_t n = 0;
  std::size_t burnin = 1000;
  double rho = 0.5;
  double lambda = 0.0;
  double alpha = 0.0;
  std::vector<double> phi, theta, beta;
  std::string link = "logit";
  std::uint64_t seed = 1;
  std::string xfile, out;
  bool force_small_lambda = false;
  bool allow_clamp = false;
};

int run_simulate(const SimulateArgs& a) {
  uwarma::ModelSpec spec(static_cast<int>(a.phi.size()), static_cast<int>(a.theta.size()),
                         a.rho, uwarma::link_from_string(a.link),
                         static_cast<int>(a.beta.size()));
  uwarma::ParamVector gamma(a.alpha, a.beta, a.phi, a.theta, a.lambda);

  uwarma::Matrix X;
  std::vector<std::string> names;
  if (spec.r > 0) {
    if (a.xfile.empty()) {
      throw DataValidationError("simulate: --beta given but no --xfile with covariate values");
    }
    CovariateFile cf = load_covariates_csv(a.xfile);
    if (cf.X.rows != a.n + a.burnin || cf.X.cols != static_cast<std::size_t>(spec.r)) {
      throw DataValidationError(
          "simulate: --xfile must provide n+burnin rows (" + std::to_string(a.n + a.burnin) +
          ") and one column per beta (" + std::to_string(spec.r) + "); found " +
          std::to_string(cf.X.rows) + "x" + std::to_string(cf.X.cols));
    }
    X = std::move(cf.X);
    names = std::move(cf.names);
  }

  uwarma::SimulateOptions opts;
  opts.burnin = a.burnin;
  opts.force_small_lambda = a.force_small_lambda;
  opts.allow_boundary_clamp = a.allow_clamp;
  uwarma::SimOutput sim = uwarma::simulate(spec, gamma, X, a.n, a.seed, opts);

  uwarma::LoadedSeries series;
  series.data = std::move(sim.data);
  series.covariate_names = names;
  uwarma::save_series_csv(a.out, series);

  // replay metadata next to the data
  uwarma::ordered_json meta;
  meta["tool"] = uwarma::kToolName;
  meta["version"] = uwarma::kToolVersion;
  meta["command"] = "simulate";
  meta["n"] = a.n;
  meta["burnin"] = a.burnin;
  meta["rho"] = a.rho;
  meta["lambda"] = a.lambda;
  meta["alpha"] = a.alpha;
  meta["phi"] = a.phi;
  meta["theta"] = a.theta;
  meta["beta"] = a.beta;
  meta["link"] = a.link;
  meta["seed"] = a.seed;
  meta["xfile"] = a.xfile;
  meta["clamp_events"] = sim.clamp_events;
  uwarma::write_text_file(a.out + ".meta.json", meta.dump(2) + "\n");

  std::cerr << "wrote " << a.n << " observations to " << a.out;
  if (sim.clamp_events > 0) std::cerr << " (" << sim.clamp_events << " boundary clamps)";
  std::cerr << "\n";
  return kExitOk;
}

// ------------------------------------------------------------------- fit --

struct FitArgs {
  std::string data;
  int p = 0, q = 0;
  double rho = 0.5;
  std::string link = "logit";
  double level = 0.95;
  bool rescale_percent = false;
  std::string out;
  int max_iter = 500;
  double grad_tol = 1e-6;
  double loglik_tol = 1e-10;
  bool verbose = false;
};

uwarma::FitOptions fit_options(const FitArgs& a) {
  uwarma::FitOptions o;
  o.max_iter = a.max_iter;
  o.grad_tol = a.grad_tol;
  o.loglik_rel_tol = a.loglik_tol;
  o.verbosity = a.verbose ? 1 : 0;
  return o;
}

int run_fit(const FitArgs& a) {
  uwarma::CsvLoadOptions lo;
  lo.rescale_percent = a.rescale_percent;
  uwarma::LoadedSeries series = uwarma::load_series_csv(a.data, lo);
  uwarma::ModelSpec spec(a.p, a.q, a.rho, uwarma::link_from_string(a.link),
                         static_cast<int>(series.data.X.cols));

  uwarma::FitResult fit = uwarma::fit_pmle(spec, series.data, fit_options(a));
  uwarma::ordered_json j = uwarma::fit_result_to_json(
      fit, series.covariate_names, a.level, "fit", {},
      uwarma::ordered_json{{"data_file", a.data}});
  if (a.out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    uwarma::write_text_file(a.out, j.dump(2) + "\n");
  }
  for (const auto& w : fit.warnings) std::cerr << "warning: " << w << "\n";
  return fit.converged ? kExitOk : kExitNoConvergence;
}

// -------------------------------------------------------------- forecast --

struct ForecastArgs {
  std::string model, data, xfuture, out;
  std::size_t h = 0;
  bool rescale_percent = false;
};

int run_forecast(const ForecastArgs& a) {
  uwarma::LoadedModel model = uwarma::load_model_file(a.model);
  uwarma::CsvLoadOptions lo;
  lo.rescale_percent = a.rescale_percent;
  uwarma::LoadedSeries series = uwarma::load_series_csv(a.data, lo);
  if (static_cast<int>(series.data.X.cols) != model.spec.r) {
    throw DataValidationError("forecast: data has " + std::to_string(series.data.X.cols) +
                              " covariates but the model expects " +
                              std::to_string(model.spec.r));
  }
  uwarma::Matrix xf;
  if (model.spec.r > 0) {
    if (a.xfuture.empty()) {
      throw DataValidationError(
          "forecast: the model uses covariates; pass --xfuture with h rows of future values");
    }
    CovariateFile cf = load_covariates_csv(a.xfuture);
    if (cf.X.rows < a.h || cf.X.cols != static_cast<std::size_t>(model.spec.r)) {
      throw DataValidationError("forecast: --xfuture needs at least h rows and r columns");
    }
    xf = std::move(cf.X);
  }
  uwarma::ForecastResult fc =
      uwarma::forecast_ahead(model.spec, model.gamma, series.data, a.h, xf);
  uwarma::ordered_json j = uwarma::forecast_to_json(fc, a.model);
  j["data_file"] = a.data;
  j["xfuture_file"] = a.xfuture;
  if (a.out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    uwarma::write_text_file(a.out, j.dump(2) + "\n");
  }
  return kExitOk;
}

// ---------------------------------------------------------------- select --

struct SelectArgs {
  FitArgs fit;
  double pmax = 0.05;
  int lags = 3;
  std::vector<int> tcodes;
};

int run_select(const SelectArgs& a) {
  uwarma::CsvLoadOptions lo;
  lo.rescale_percent = a.fit.rescale_percent;
  uwarma::LoadedSeries series = uwarma::load_series_csv(a.fit.data, lo);

  uwarma::FrameOptions fo;
  fo.tcodes = a.tcodes;
  fo.lags = a.lags;
  uwarma::PreparedFrame frame = uwarma::prepare_frame(series, fo);

  uwarma::ModelSpec spec(a.fit.p, a.fit.q, a.fit.rho, uwarma::link_from_string(a.fit.link),
                         static_cast<int>(frame.data.X.cols));
  uwarma::EliminationResult res = uwarma::backward_eliminate(
      spec, frame.data, frame.covariate_names, a.pmax, fit_options(a.fit));

  uwarma::ordered_json trace = uwarma::ordered_json::array();
  for (const auto& rm : res.trace) {
    trace.push_back(uwarma::ordered_json{
        {"step", rm.step}, {"removed", rm.name}, {"p_value", rm.p_value}});
  }
  uwarma::ordered_json extra;
  extra["selection"] = uwarma::ordered_json{{"p_threshold", a.pmax},
                                            {"lags", a.lags},
                                            {"dropped_front_rows", frame.dropped_front},
                                            {"kept", res.kept_names},
                                            {"trace", trace}};
  extra["data_file"] = a.fit.data;
  uwarma::ordered_json j = uwarma::fit_result_to_json(res.fit, res.kept_names, a.fit.level,
                                                      "select", {}, extra);
  if (a.fit.out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    uwarma::write_text_file(a.fit.out, j.dump(2) + "\n");
  }
  return res.fit.converged ? kExitOk : kExitNoConvergence;
}

// -------------------------------------------------------------------- mc --

struct McArgs {
  std::string config, out = "mc";
  int jobs = default_jobs();
};

std::map<std::string, std::string> parse_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataValidationError("cannot open config '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DataValidationError("config line " + std::to_string(line_no) +
                                ": expected key=value");
    }
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  if (s.empty()) return out;
  for (const auto& tok : split(s, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

int run_mc(const McArgs& a) {
  auto kv = parse_kv_file(a.config);
  auto get = [&](const std::string& key, const std::string& fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
  };

  uwarma::StudyConfig cfg;
  cfg.replicas = std::stoul(get("replicas", "100"));
  cfg.n = std::stoul(get("n", "1000"));
  cfg.rho = std::stod(get("rho", "0.5"));
  cfg.lambda = std::stod(get("lambda", "5"));
  cfg.alpha = std::stod(get("alpha", "0"));
  cfg.phi = parse_double_list(get("phi", "0.6"));
  cfg.theta = parse_double_list(get("theta", "0.4"));
  auto betas = parse_double_list(get("beta", ""));
  if (betas.size() > 1) {
    throw DataValidationError("mc config: beta takes at most one value (the single seasonal "
                              "covariate coefficient)");
  }
  if (!betas.empty()) cfg.beta = betas[0];
  cfg.link = uwarma::link_from_string(get("link", "logit"));
  cfg.burnin = std::stoul(get("burnin", "1000"));
  cfg.base_seed = std::stoull(get("seed", "20210401"));
  cfg.jobs = a.jobs;

  const std::string study = get("study", "estimation");
  if (study == "estimation") {
    uwarma::StudySummary s = uwarma::run_estimation_study(cfg);
    uwarma::write_study_replicas_csv(a.out + "_replicas.csv", s);
    uwarma::write_study_summary_csv(a.out + "_summary.csv", s);
    uwarma::write_text_file(a.out + "_summary.json",
                            uwarma::study_summary_to_json(s).dump(2) + "\n");
    std::cerr << "estimation study: " << cfg.replicas << " replicas, " << s.failures
              << " failures\n";
  } else if (study == "forecast") {
    std::vector<int> horizons;
    for (double h : parse_double_list(get("horizons", "1,6,12,18,24"))) {
      horizons.push_back(static_cast<int>(h));
    }
    if (!cfg.beta) cfg.beta = 0.5;  // the forecast design includes the covariate
    uwarma::ForecastStudyResult r = uwarma::run_forecast_study(cfg, horizons);
    uwarma::write_study_replicas_csv(a.out + "_replicas.csv", r.estimates);
    uwarma::write_study_summary_csv(a.out + "_summary.csv", r.estimates);
    std::ofstream mf(a.out + "_mape.csv");
    mf << "horizon,avg_mape\n";
    for (std::size_t c = 0; c < horizons.size(); ++c) {
      mf << horizons[c] << ',' << uwarma::format_double(r.avg_mape[c]) << '\n';
    }
    uwarma::ordered_json j = uwarma::study_summary_to_json(r.estimates);
    j["command"] = "mc";
    j["mape"] = uwarma::ordered_json::object();
    for (std::size_t c = 0; c < horizons.size(); ++c) {
      j["mape"]["h" + std::to_string(horizons[c])] = r.avg_mape[c];
    }
    uwarma::write_text_file(a.out + "_summary.json", j.dump(2) + "\n");
    std::cerr << "forecast study: " << cfg.replicas << " replicas, " << r.failures
              << " failures\n";
  } else {
    throw DataValidationError("mc config: study must be 'estimation' or 'forecast'");
  }
  return kExitOk;
}

// ---------------------------------------------------------------- rollfc --

struct RollArgs {
  std::string data, out = "rollfc";
  std::size_t window = 0;
  std::size_t h = 0;
  int p = 1, q = 0;
  double rho = 0.5;
  std::string link = "logit";
  int lags = 0;
  double pmax = 1.0;  // 1.0 disables per-window elimination
  std::vector<int> tcodes;
  bool rescale_percent = false;
  int jobs = default_jobs();
};

int run_rollfc(const RollArgs& a) {
  uwarma::CsvLoadOptions lo;
  lo.rescale_percent = a.rescale_percent;
  uwarma::LoadedSeries series = uwarma::load_series_csv(a.data, lo);
  uwarma::FrameOptions fo;
  fo.tcodes = a.tcodes;
  fo.lags = a.lags;
  uwarma::PreparedFrame frame = uwarma::prepare_frame(series, fo);

  const std::size_t n = frame.data.y.size();
  if (n < a.window + a.h) {
    throw DataValidationError("rollfc: series too short for window + horizon (" +
                              std::to_string(n) + " usable rows after transforms)");
  }
  const std::size_t n_windows = n - a.window - a.h + 1;
  const std::size_t r = frame.data.X.cols;
  const uwarma::LinkKind link = uwarma::link_from_string(a.link);

  uwarma::Matrix ape(n_windows, a.h, std::numeric_limits<double>::quiet_NaN());
  std::vector<int> ok(n_windows, 0);

  uwarma::parallel_for(n_windows, a.jobs, [&](std::size_t w) {
    try {
      uwarma::SeriesData train;
      train.y.assign(frame.data.y.begin() + w, frame.data.y.begin() + w + a.window);
      if (r > 0) {
        train.X = uwarma::Matrix(a.window, r);
        for (std::size_t t = 0; t < a.window; ++t)
          for (std::size_t c = 0; c < r; ++c) train.X(t, c) = frame.data.X(w + t, c);
      }

      uwarma::ModelSpec spec(a.p, a.q, a.rho, link, static_cast<int>(r));
      uwarma::FitResult fit;
      std::vector<std::size_t> kept(r);
      for (std::size_t c = 0; c < r; ++c) kept[c] = c;
      if (a.pmax < 1.0 && r > 0) {
        auto elim = uwarma::backward_eliminate(spec, train, frame.covariate_names, a.pmax);
        fit = elim.fit;
        kept = elim.kept_original;
        train = elim.data;
        spec.r = static_cast<int>(kept.size());
      } else {
        fit = uwarma::fit_pmle(spec, train);
      }
      if (!fit.converged) return;

      uwarma::Matrix xf;
      if (spec.r > 0) {
        xf = uwarma::Matrix(a.h, kept.size());
        for (std::size_t k = 0; k < a.h; ++k)
          for (std::size_t c = 0; c < kept.size(); ++c)
            xf(k, c) = frame.data.X(w + a.window + k, kept[c]);
      }
      auto fc = uwarma::forecast_ahead(spec, fit.gamma_hat, train, a.h, xf);
      for (std::size_t k = 0; k < a.h; ++k) {
        double actual = frame.data.y[w + a.window + k];
        ape(w, k) = std::abs(actual - fc.yhat[k]) / actual;
      }
      ok[w] = 1;
    } catch (const std::exception&) {
      // window recorded as failed; aggregate skips it
    }
  });

  std::size_t n_ok = 0;
  std::vector<double> avg(a.h, 0.0);
  for (std::size_t w = 0; w < n_windows; ++w) {
    if (!ok[w]) continue;
    ++n_ok;
    for (std::size_t k = 0; k < a.h; ++k) avg[k] += ape(w, k);
  }
  if (n_ok > 0) {
    for (auto& v : avg) v /= static_cast<double>(n_ok);
  }

  // Average-MAPE table: one row per model, one column per horizon.
  {
    std::ofstream mf(a.out + "_mape.csv");
    if (!mf) throw std::runtime_error("cannot open '" + a.out + "_mape.csv' for writing");
    mf << "model";
    for (std::size_t k = 1; k <= a.h; ++k) mf << ",t+" << k;
    mf << '\n';
    mf << "\"UWARMA(" << a.p << ',' << a.q << ")\"";  // quoted: label holds a comma
    char buf[32];
    for (std::size_t k = 0; k < a.h; ++k) {
      std::snprintf(buf, sizeof(buf), "%.6f", avg[k]);
      mf << ',' << buf;
    }
    mf << '\n';
  }
  {
    std::ofstream wf(a.out + "_windows.csv");
    wf << "window,origin,converged";
    for (std::size_t k = 1; k <= a.h; ++k) wf << ",ape_t+" << k;
    wf << '\n';
    for (std::size_t w = 0; w < n_windows; ++w) {
      wf << w + 1 << ',' << w + a.window << ',' << ok[w];
      for (std::size_t k = 0; k < a.h; ++k) {
        wf << ',';
        if (ok[w]) wf << uwarma::format_double(ape(w, k));
      }
      wf << '\n';
    }
  }
  {
    uwarma::ordered_json meta;
    meta["tool"] = uwarma::kToolName;
    meta["version"] = uwarma::kToolVersion;
    meta["command"] = "rollfc";
    meta["data_file"] = a.data;
    meta["window"] = a.window;
    meta["h"] = a.h;
    meta["p"] = a.p;
    meta["q"] = a.q;
    meta["rho"] = a.rho;
    meta["link"] = a.link;
    meta["lags"] = a.lags;
    meta["pmax"] = a.pmax;
    meta["tcodes"] = a.tcodes;
    meta["rescale_percent"] = a.rescale_percent;
    meta["windows"] = n_windows;
    meta["failed_windows"] = n_windows - n_ok;
    uwarma::write_text_file(a.out + "_meta.json", meta.dump(2) + "\n");
  }
  std::cerr << "rollfc: " << n_windows << " windows, " << (n_windows - n_ok)
            << " failed; average MAPE written to " << a.out << "_mape.csv\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unit-Weibull ARMA toolkit for (0,1)-valued time series"};
  app.set_version_flag("--version", std::string(uwarma::kToolVersion));
  // help stays on --help only; -h would collide with the --h horizon flag
  app.set_help_flag("--help", "print help and exit");
  app.require_subcommand(1);

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "simulate a UWARMA path to CSV");
  sim->set_help_flag("--help", "print help and exit");
  sim->add_option("--n", sa.n, "series length to emit")->required();
  sim->add_option("--burnin", sa.burnin, "discarded initial segment")->capture_default_str();
  sim->add_option("--rho", sa.rho, "quantile level in (0,1)")->capture_default_str();
  sim->add_option("--lambda", sa.lambda, "shape parameter")->required();
  sim->add_option("--phi", sa.phi, "AR coefficients")->delimiter(',');
  sim->add_option("--theta", sa.theta, "MA coefficients")->delimiter(',');
  sim->add_option("--alpha", sa.alpha, "intercept")->capture_default_str();
  sim->add_option("--beta", sa.beta, "covariate coefficients")->delimiter(',');
  sim->add_option("--link", sa.link, "logit|probit|loglog|cloglog")->capture_default_str();
  sim->add_option("--seed", sa.seed, "RNG seed")->capture_default_str();
  sim->add_option("--xfile", sa.xfile, "CSV with n+burnin rows of covariates");
  sim->add_option("--out", sa.out, "output CSV path")->required();
  sim->add_flag("--force-small-lambda", sa.force_small_lambda,
                "allow lambda < 1 despite numerical risk");
  sim->add_flag("--allow-clamp", sa.allow_clamp, "continue when mu saturates at a boundary");

  FitArgs fa;
  auto* fit = app.add_subcommand("fit", "fit by partial maximum likelihood");
  fit->set_help_flag("--help", "print help and exit");
  auto add_fit_opts = [](CLI::App* cmd, FitArgs& f) {
    cmd->add_option("--data", f.data, "input CSV with a 'y' column")->required();
    cmd->add_option("--p", f.p, "AR order")->capture_default_str();
    cmd->add_option("--q", f.q, "MA order")->capture_default_str();
    cmd->add_option("--rho", f.rho, "quantile level")->capture_default_str();
    cmd->add_option("--link", f.link, "link function")->capture_default_str();
    cmd->add_option("--level", f.level, "confidence level")->capture_default_str();
    cmd->add_flag("--rescale-percent", f.rescale_percent, "divide y by 100 on load");
    cmd->add_option("--out", f.out, "result JSON path (stdout when omitted)");
    cmd->add_option("--max-iter", f.max_iter, "optimizer iteration cap")->capture_default_str();
    cmd->add_option("--grad-tol", f.grad_tol, "score max-norm tolerance")->capture_default_str();
    cmd->add_option("--loglik-tol", f.loglik_tol, "relative log-likelihood tolerance")
        ->capture_default_str();
    cmd->add_flag("--verbose", f.verbose, "print optimizer progress to stderr");
  };
  add_fit_opts(fit, fa);

  ForecastArgs fca;
  auto* fc = app.add_subcommand("forecast", "h-step-ahead forecasts from a saved fit");
  fc->set_help_flag("--help", "print help and exit");
  fc->add_option("--model", fca.model, "result JSON from fit/select")->required();
  fc->add_option("--data", fca.data, "observed series CSV")->required();
  fc->add_option("--h", fca.h, "forecast horizon")->required();
  fc->add_option("--xfuture", fca.xfuture, "CSV with h rows of future covariates");
  fc->add_flag("--rescale-percent", fca.rescale_percent, "divide y by 100 on load");
  fc->add_option("--out", fca.out, "output JSON path (stdout when omitted)");

  SelectArgs sea;
  auto* sel = app.add_subcommand("select",
                                 "lag-expand covariates and backward-eliminate by p-value");
  sel->set_help_flag("--help", "print help and exit");
  add_fit_opts(sel, sea.fit);
  sel->add_option("--pmax", sea.pmax, "largest admissible p-value")->capture_default_str();
  sel->add_option("--lags", sea.lags, "covariate lags to include")->capture_default_str();
  sel->add_option("--tcode", sea.tcodes,
                  "per-covariate transformation codes (1 level, 2 diff, 5 dlog, 6 d2log)")
      ->delimiter(',');

  McArgs ma;
  auto* mc = app.add_subcommand("mc", "Monte Carlo study driven by a key=value config");
  mc->set_help_flag("--help", "print help and exit");
  mc->add_option("--config", ma.config, "flat key=value config file")->required();
  mc->add_option("--out", ma.out, "output file prefix")->capture_default_str();
  mc->add_option("--jobs", ma.jobs, "worker threads (default: UWARMA_JOBS or 1)");

  RollArgs ra;
  auto* roll = app.add_subcommand("rollfc", "rolling-window fit and forecast evaluation");
  roll->set_help_flag("--help", "print help and exit");
  roll->add_option("--data", ra.data, "input CSV")->required();
  roll->add_option("--window", ra.window, "rolling window length")->required();
  roll->add_option("--h", ra.h, "forecast horizon per window")->required();
  roll->add_option("--p", ra.p, "AR order")->capture_default_str();
  roll->add_option("--q", ra.q, "MA order")->capture_default_str();
  roll->add_option("--rho", ra.rho, "quantile level")->capture_default_str();
  roll->add_option("--link", ra.link, "link function")->capture_default_str();
  roll->add_option("--lags", ra.lags, "covariate lag expansion (0 = as-is)")
      ->capture_default_str();
  roll->add_option("--pmax", ra.pmax,
                   "per-window backward-elimination threshold (1 = no elimination)")
      ->capture_default_str();
  roll->add_option("--tcode", ra.tcodes, "per-covariate transformation codes")->delimiter(',');
  roll->add_flag("--rescale-percent", ra.rescale_percent, "divide y by 100 on load");
  roll->add_option("--out", ra.out, "output file prefix")->capture_default_str();
  roll->add_option("--jobs", ra.jobs, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*sim) return run_simulate(sa);
    if (*fit) return run_fit(fa);
    if (*fc) return run_forecast(fca);
    if (*sel) return run_select(sea);
    if (*mc) return run_mc(ma);
    if (*roll) return run_rollfc(ra);
  } catch (const uwarma::CsvError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const DataValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}
