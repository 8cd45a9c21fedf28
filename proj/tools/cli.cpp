#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "dualpredict/duality.hpp"
#include "dualpredict/predictors.hpp"
#include "dualpredict/verify.hpp"

namespace dualpredict::cli {

using json = nlohmann::ordered_json;

namespace {

constexpr double kAgreementTolerance = 1e-9;
constexpr double kBiorthogonalityTolerance = 1e-10;

std::string command_name(Command c) {
  switch (c) {
    case Command::predict: return "predict";
    case Command::interpolate: return "interpolate";
    case Command::dual: return "dual";
    case Command::converge: return "converge";
    case Command::verify: return "verify";
  }
  return "unknown";
}

Complex parse_complex(const json& value, const std::string& field) {
  if (value.is_number()) {
    return {value.get<double>(), 0.0};
  }
  if (value.is_array() && value.size() == 2 && value[0].is_number() && value[1].is_number()) {
    return {value[0].get<double>(), value[1].get<double>()};
  }
  throw ValidationError("model field '" + field + "': expected a number or an [re, im] pair, got " + value.dump());
}

ComplexVector parse_complex_list(const json& doc, const std::string& field) {
  if (!doc.contains(field)) {
    return {};
  }
  const json& list = doc.at(field);
  if (!list.is_array()) {
    throw ValidationError("model field '" + field + "': expected an array");
  }
  ComplexVector out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    out.push_back(parse_complex(list[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

void reject_unknown_fields(const json& doc, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : doc.items()) {
    bool known = false;
    for (const char* a : allowed) {
      known = known || key == a;
    }
    if (!known) {
      throw ValidationError("model field '" + key + "' is not recognised");
    }
  }
}

json complex_json(const Complex& c) { return json::array({c.real(), c.imag()}); }

json indexed(const std::vector<long>& indices, const ComplexVector& values) {
  json out = json::array();
  for (std::size_t k = 0; k < indices.size(); ++k) {
    out.push_back(json::array({indices[k], values[k].real(), values[k].imag()}));
  }
  return out;
}

json check(const std::string& name, double value, double tolerance) {
  return json{{"name", name}, {"value", value}, {"tolerance", tolerance}, {"passed", value <= tolerance}};
}

bool all_passed(const json& checks) {
  for (const json& c : checks) {
    if (!c.at("passed").get<bool>()) {
      return false;
    }
  }
  return true;
}

double tolerance_or(const RunConfig& config, double fallback) { return config.tolerance.value_or(fallback); }

void render_value(const json& value, int depth, std::string& out);

void render_scalar(const json& value, std::string& out) {
  if (value.is_number_float()) {
    const double v = value.get<double>();
    out += std::isfinite(v) ? fmt::format("{:.17g}", v == 0.0 ? 0.0 : v) : "null";
  } else {
    out += value.dump();
  }
}

void render_value(const json& value, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  if (value.is_object()) {
    if (value.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (const auto& [key, item] : value.items()) {
      out += first ? "" : ",\n";
      first = false;
      out += pad + json(key).dump() + ": ";
      render_value(item, depth + 1, out);
    }
    out += "\n" + close + "}";
  } else if (value.is_array()) {
    bool flat = true;
    for (const json& item : value) {
      flat = flat && item.is_primitive();
    }
    if (value.empty() || flat) {
      out += "[";
      for (std::size_t i = 0; i < value.size(); ++i) {
        out += i == 0 ? "" : ", ";
        render_scalar(value[i], out);
      }
      out += "]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < value.size(); ++i) {
      out += i == 0 ? "" : ",\n";
      out += pad;
      render_value(value[i], depth + 1, out);
    }
    out += "\n" + close + "]";
  } else {
    render_scalar(value, out);
  }
}

std::string csv_cell(const json& value) {
  if (value.is_null()) {
    return "";
  }
  if (value.is_string()) {
    return value.get<std::string>();
  }
  std::string out;
  render_scalar(value, out);
  return out;
}

void csv_row(std::string& out, const std::string& field, const std::string& index, const json& re, const json& im) {
  out += field + "," + index + "," + csv_cell(re) + "," + csv_cell(im) + "\n";
}

void csv_field(std::string& out, const std::string& field, const json& value) {
  if (!value.is_array()) {
    if (value.is_object()) {
      for (const auto& [key, item] : value.items()) {
        csv_field(out, field + "." + key, item);
      }
    } else {
      csv_row(out, field, "", value, nullptr);
    }
    return;
  }
  if (value.size() == 2 && value[0].is_number_float() && value[1].is_number_float()) {
    csv_row(out, field, "", value[0], value[1]);  // complex scalar
    return;
  }
  for (std::size_t i = 0; i < value.size(); ++i) {
    const json& row = value[i];
    if (row.is_array() && row.size() == 4) {  // i, j, re, im
      csv_row(out, field, csv_cell(row[0]) + ":" + csv_cell(row[1]), row[2], row[3]);
    } else if (row.is_array() && row.size() == 3) {  // index, re, im
      csv_row(out, field, csv_cell(row[0]), row[1], row[2]);
    } else if (row.is_array() && row.size() == 2) {  // m, value
      csv_row(out, field, csv_cell(row[0]), row[1], nullptr);
    } else if (row.is_object()) {
      csv_field(out, field + "[" + std::to_string(i) + "]", row);
    } else {
      csv_row(out, field, std::to_string(i), row, nullptr);
    }
  }
}

IndexWindow window_of(const RunConfig& config) { return IndexWindow(config.m, config.n); }

LimitPolicy policy_of(const RunConfig& config) {
  LimitPolicy policy;
  policy.tolerance = tolerance_or(config, policy.tolerance);
  return policy;
}

json limit_json(const LimitReport& report) {
  json values = json::array();
  for (const auto& [m, v] : report.values) {
    values.push_back(json::array({m, v}));
  }
  json out{{"values", values},
           {"extrapolated", report.extrapolated},
           {"achieved_delta", report.achieved_delta},
           {"converged", report.converged}};
  out["reference"] = report.reference ? json(*report.reference) : json(nullptr);
  if (report.tail_mass) {
    out["tail_mass"] = *report.tail_mass;
    out["kolmogorov"] = report.kolmogorov;
  }
  return out;
}

json predict_report(const RunConfig& config, const ProcessModel& model, json& checks) {
  const IndexWindow window = window_of(config);
  const IndexPartition part = IndexPartition::from_missing(window, config.target, config.missing);
  const CovarianceMatrix cov = build_covariance(model, window);
  const PredictionResult result = predict_via_duality(cov, part);
  const PredictionResult normal = predict_via_normal_equations(cov, part);

  double alpha_gap = 0.0;
  double alpha_scale = 1.0;
  for (std::size_t k = 0; k < result.alpha.size(); ++k) {
    alpha_gap = std::max(alpha_gap, std::abs(result.alpha[k] - normal.alpha[k]));
    alpha_scale = std::max(alpha_scale, std::abs(normal.alpha[k]));
  }
  const double tol = tolerance_or(config, kAgreementTolerance);
  checks.push_back(check("normal_equations_sigma2", std::abs(result.sigma2 - normal.sigma2) / normal.sigma2, tol));
  checks.push_back(check("normal_equations_alpha", alpha_gap / alpha_scale, tol));
  checks.push_back(check("orthogonality", result.orthogonality_residual(cov.entries()), tol));

  std::vector<long> window_indices;
  for (long k = -window.m; k <= window.n; ++k) {
    window_indices.push_back(k);
  }
  return json{{"method", "duality"},
              {"sigma2", result.sigma2},
              {"alpha", indexed(result.observed, result.alpha)},
              {"alpha_prime", indexed(result.dual_indices, result.alpha_prime)},
              {"innovation_error", indexed(window_indices, result.innovation_error)}};
}

json interpolate_report(const RunConfig& config, const ProcessModel& model, json& checks) {
  if (config.m < 1) {
    throw ValidationError("interpolate needs a positive truncation --m");
  }
  // Stationarity: shift the problem so the target sits at 0.
  std::vector<long> missing;
  for (const long i : config.missing) {
    missing.push_back(i - config.target);
  }
  const SeriesPredictor series = interpolator_series(model, missing, config.m);
  std::vector<long> indices;
  ComplexVector coefficients;
  for (const auto& [j, c] : series.observed_coefficients) {
    indices.push_back(j + config.target);
    coefficients.push_back(c);
  }
  std::vector<long> dual_indices;
  for (const long i : series.dual_indices) {
    dual_indices.push_back(i + config.target);
  }
  checks.push_back(check("missing_weight", series.missing_weight, tolerance_or(config, kAgreementTolerance)));
  return json{{"sigma2", series.sigma2},
              {"truncation", series.truncation},
              {"coefficients", indexed(indices, coefficients)},
              {"alpha_prime", indexed(dual_indices, series.error_dual_coefficients)},
              {"tail_magnitude", series.tail_magnitude},
              {"tail_warning", series.tail_warning}};
}

json dual_report(const RunConfig& config, const ProcessModel& model, json& checks) {
  const IndexWindow window = window_of(config);
  const CovarianceMatrix cov = build_covariance(model, window);
  const DualRepresentation d = dual(cov);
  std::vector<std::pair<long, long>> pairs = config.pairs;
  if (pairs.empty()) {
    for (long i = -window.m; i <= window.n; ++i) {
      for (long j = -window.m; j <= window.n; ++j) {
        pairs.emplace_back(i, j);
      }
    }
  }
  json entries = json::array();
  for (const auto& [i, j] : pairs) {
    if (!window.contains(i) || !window.contains(j)) {
      throw ValidationError("pair " + std::to_string(i) + ":" + std::to_string(j) + " is outside the window");
    }
    const Complex v = inverse_entries(cov, i, j);
    entries.push_back(json::array({i, j, v.real(), v.imag()}));
  }
  checks.push_back(check("dense_inverse_discrepancy", inverse_discrepancy(cov), tolerance_or(config, kAgreementTolerance)));
  checks.push_back(check("biorthogonality", d.biorthogonality_residual(cov.entries()),
                         tolerance_or(config, kBiorthogonalityTolerance)));
  return json{{"entries", entries}, {"min_relative_pivot", cov.min_relative_pivot()}};
}

json converge_report(const RunConfig& config, const ProcessModel& model, json& checks, int& exit_code) {
  const LimitPolicy policy = policy_of(config);
  LimitReport report;
  if (config.problem == "nakazi") {
    report = nakazi_limit(model, config.n, policy);
  } else if (config.problem == "single-missing") {
    report = single_missing_sweep(model, config.u, policy);
  } else if (config.problem == "wold") {
    report = wold_msteps_sweep(model, config.n, policy);
  } else {
    throw ValidationError("unknown convergence problem '" + config.problem + "' (nakazi, single-missing, wold)");
  }
  checks.push_back(check("achieved_delta", report.achieved_delta, policy.tolerance));
  if (!report.converged) {
    exit_code = kConvergenceFailure;
  }
  json out{{"problem", config.problem}};
  out.update(limit_json(report));
  return out;
}

json verify_report(const RunConfig& config, json& checks, json& tolerances) {
  VerifyOptions options;
  options.seed = config.seed;
  options.instances = config.instances;
  options.tolerance = tolerance_or(config, options.tolerance);
  options.biorthogonality_tolerance = tolerance_or(config, options.biorthogonality_tolerance);
  tolerances = json{{"agreement", options.tolerance}, {"biorthogonality", options.biorthogonality_tolerance}};
  const VerifySummary s = run_verification(options);
  checks.push_back(check("sigma2_deviation", s.max_sigma2_deviation, options.tolerance));
  checks.push_back(check("alpha_deviation", s.max_alpha_deviation, options.tolerance));
  checks.push_back(check("duality_product_deviation", s.max_product_deviation, options.tolerance));
  checks.push_back(check("biorthogonality", s.max_biorthogonality, options.biorthogonality_tolerance));
  checks.push_back(check("involution", s.max_involution, options.tolerance));
  checks.push_back(check("interpolation_row_deviation", s.max_row_deviation, options.tolerance));
  checks.push_back(check("factorization_failures", static_cast<double>(s.factorization_failures), 0.0));
  return json{{"seed", options.seed},
              {"instances", s.instances},
              {"sizes", json::array({options.min_size, options.max_size})},
              {"max_missing", options.max_missing},
              {"partitions", s.partitions},
              {"passed", s.passed(options)}};
}

std::vector<std::pair<long, long>> parse_pairs(const std::string& text) {
  std::vector<std::pair<long, long>> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const auto colon = item.find(':');
    try {
      if (colon == std::string::npos) {
        throw std::invalid_argument(item);
      }
      std::size_t used_i = 0;
      std::size_t used_j = 0;
      const long i = std::stol(item.substr(0, colon), &used_i);
      const long j = std::stol(item.substr(colon + 1), &used_j);
      if (used_i != colon || used_j != item.size() - colon - 1) {
        throw std::invalid_argument(item);
      }
      out.emplace_back(i, j);
    } catch (const std::logic_error&) {
      throw ValidationError("--pairs: expected i:j entries, got '" + item + "'");
    }
  }
  return out;
}

}  // namespace

ProcessModel parse_model(const json& doc) {
  if (!doc.is_object() || !doc.contains("type") || !doc.at("type").is_string()) {
    throw ValidationError("model: expected an object with a string field 'type'");
  }
  const std::string type = doc.at("type").get<std::string>();
  if (type == "arma") {
    reject_unknown_fields(doc, {"type", "ar", "ma", "sigma2"});
    double sigma2 = 1.0;
    if (doc.contains("sigma2")) {
      if (!doc.at("sigma2").is_number()) {
        throw ValidationError("model field 'sigma2': expected a number");
      }
      sigma2 = doc.at("sigma2").get<double>();
    }
    return ArmaModel(parse_complex_list(doc, "ar"), parse_complex_list(doc, "ma"), sigma2);
  }
  if (type == "acvf") {
    reject_unknown_fields(doc, {"type", "gamma"});
    if (!doc.contains("gamma")) {
      throw ValidationError("model field 'gamma' is required for type acvf");
    }
    return AutocovarianceModel(parse_complex_list(doc, "gamma"));
  }
  if (type == "spectrum") {
    reject_unknown_fields(doc, {"type", "values"});
    if (!doc.contains("values") || !doc.at("values").is_array()) {
      throw ValidationError("model field 'values': expected an array of positive numbers");
    }
    std::vector<double> values;
    for (std::size_t i = 0; i < doc.at("values").size(); ++i) {
      const json& v = doc.at("values")[i];
      if (!v.is_number()) {
        throw ValidationError("model field 'values[" + std::to_string(i) + "]': expected a number");
      }
      values.push_back(v.get<double>());
    }
    return SpectrumModel(std::move(values));
  }
  throw ValidationError("model field 'type': unknown model type '" + type + "' (arma, acvf, spectrum)");
}

ProcessModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open model file '" + path + "'");
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("model file '" + path + "': " + e.what());
  }
  return parse_model(doc);
}

json model_to_json(const ProcessModel& model) {
  const auto list = [](const ComplexVector& v) {
    json out = json::array();
    for (const Complex& c : v) {
      out.push_back(complex_json(c));
    }
    return out;
  };
  if (const auto* arma = model.arma()) {
    return json{{"type", "arma"}, {"ar", list(arma->ar())}, {"ma", list(arma->ma())}, {"sigma2", arma->sigma2()}};
  }
  if (const auto* acvf = std::get_if<AutocovarianceModel>(&model.variant())) {
    return json{{"type", "acvf"}, {"gamma", list(acvf->gamma())}};
  }
  const auto& spectrum = std::get<SpectrumModel>(model.variant());
  return json{{"type", "spectrum"}, {"values", spectrum.values()}};
}

std::string render_json(const json& doc) {
  std::string out;
  render_value(doc, 0, out);
  out += "\n";
  return out;
}

std::string render_csv(const json& report) {
  std::string out = "field,index,re,im\n";
  csv_row(out, "schema", "", report.at("schema"), nullptr);
  csv_row(out, "command", "", report.at("command"), nullptr);
  csv_row(out, "status", "", report.at("status"), nullptr);
  for (const auto& [key, value] : report.at("result").items()) {
    csv_field(out, key, value);
  }
  for (const json& c : report.at("checks")) {
    csv_row(out, "check." + c.at("name").get<std::string>(), c.at("passed").get<bool>() ? "passed" : "failed",
            c.at("value"), c.at("tolerance"));
  }
  return out;
}

json build_report(const RunConfig& config, int& exit_code) {
  exit_code = kOk;
  json report{{"schema", kSchema}, {"command", command_name(config.command)}};
  std::optional<ProcessModel> model;
  if (config.command != Command::verify) {
    if (config.model_path.empty()) {
      throw ValidationError("--model is required for " + command_name(config.command));
    }
    model = load_model(config.model_path);
    report["model"] = model_to_json(*model);
  }
  json parameters{{"m", config.m}, {"n", config.n}, {"target", config.target}, {"missing", config.missing}};
  if (config.command == Command::converge) {
    parameters["problem"] = config.problem;
    parameters["u"] = config.u;
  }
  if (config.command == Command::verify) {
    parameters = json{{"seed", config.seed}, {"instances", config.instances}};
  }
  report["parameters"] = parameters;

  json checks = json::array();
  json tolerances;
  json result;
  switch (config.command) {
    case Command::predict:
      result = predict_report(config, *model, checks);
      break;
    case Command::interpolate:
      result = interpolate_report(config, *model, checks);
      break;
    case Command::dual:
      result = dual_report(config, *model, checks);
      break;
    case Command::converge:
      result = converge_report(config, *model, checks, exit_code);
      break;
    case Command::verify:
      result = verify_report(config, checks, tolerances);
      break;
  }
  if (tolerances.is_null()) {
    tolerances = json::object();
    for (const json& c : checks) {
      tolerances[c.at("name").get<std::string>()] = c.at("tolerance");
    }
  }
  if (exit_code == kOk && !all_passed(checks)) {
    exit_code = kVerificationFailure;
  }
  report["tolerances"] = tolerances;
  report["result"] = result;
  report["checks"] = checks;
  report["status"] = exit_code == kOk                    ? "ok"
                     : exit_code == kConvergenceFailure ? "convergence_failure"
                                                        : "verification_failure";
  return report;
}

RunOutcome run(const RunConfig& config) {
  RunOutcome outcome;
  try {
    const json report = build_report(config, outcome.exit_code);
    outcome.artifact = config.format == Format::json ? render_json(report) : render_csv(report);
  } catch (const ValidationError& e) {
    outcome.exit_code = kValidationFailure;
    outcome.artifact = std::string("error: ") + e.what() + "\n";
  } catch (const PositiveDefinitenessError& e) {
    outcome.exit_code = kValidationFailure;
    outcome.artifact = std::string("error: ") + e.what() + "\n";
  } catch (const ConvergenceError& e) {
    outcome.exit_code = kConvergenceFailure;
    outcome.artifact = fmt::format("error: {} (achieved {:.17g})\n", e.what(), e.achieved());
  }
  return outcome;
}

int main(int argc, char** argv) {
  CLI::App app{"Linear prediction and interpolation of stationary processes through dual vectors."};
  app.name("dualpredict");
  RunConfig config;
  std::string command;
  std::string format = "json";
  std::string pairs;
  std::string out;
  app.add_option("command", command, "predict | interpolate | dual | converge | verify")
      ->required()
      ->check(CLI::IsMember({"predict", "interpolate", "dual", "converge", "verify"}));
  app.add_option("--model", config.model_path, "Model specification (JSON)");
  app.add_option("--m", config.m, "Past extent of the window (truncation for interpolate)")->capture_default_str();
  app.add_option("--n", config.n, "Future extent of the window")->capture_default_str();
  app.add_option("--missing", config.missing, "Missing indices, comma separated")->delimiter(',');
  app.add_option("--target", config.target, "Target index")->capture_default_str();
  app.add_option("--out", out, "Write the report here instead of stdout");
  app.add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--seed", config.seed, "Seed of the verification corpus")->capture_default_str();
  app.add_option("--tol", config.tolerance, "Override the tolerance of every check in the report");
  app.add_option("--problem", config.problem, "converge: nakazi | single-missing | wold")->capture_default_str();
  app.add_option("--u", config.u, "converge single-missing: lag of the missing value")->capture_default_str();
  app.add_option("--instances", config.instances, "verify: corpus size")->capture_default_str();
  app.add_option("--pairs", pairs, "dual: index pairs i:j,k:l (default: the whole window)");
  try {
    app.parse(argc, argv);
    config.pairs = parse_pairs(pairs);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kValidationFailure;
  } catch (const ValidationError& e) {
    std::cerr << "dualpredict: " << e.what() << "\n";
    return kValidationFailure;
  }
  config.command = command == "predict"       ? Command::predict
                   : command == "interpolate" ? Command::interpolate
                   : command == "dual"        ? Command::dual
                   : command == "converge"    ? Command::converge
                                              : Command::verify;
  config.format = format == "csv" ? Format::csv : Format::json;
  if (!out.empty()) {
    config.out = out;
  }

  const RunOutcome outcome = run(config);
  if (outcome.exit_code == kValidationFailure ||
      (outcome.exit_code == kConvergenceFailure && outcome.artifact.rfind("error:", 0) == 0)) {
    std::cerr << "dualpredict: " << outcome.artifact;
    return outcome.exit_code;
  }
  if (config.out) {
    std::ofstream file(*config.out, std::ios::binary);
    if (!file || !(file << outcome.artifact)) {
      std::cerr << "dualpredict: cannot write '" << *config.out << "'\n";
      return kValidationFailure;
    }
  } else {
    std::cout << outcome.artifact;
  }
  if (outcome.exit_code != kOk) {
    std::cerr << "dualpredict: " << (outcome.exit_code == kConvergenceFailure ? "limit did not converge"
                                                                              : "verification checks failed")
              << "\n";
  }
  return outcome.exit_code;
}

}  // namespace dualpredict::cli
