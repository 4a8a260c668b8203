#include "claimcast/bundle.hpp"

#include <fstream>

#include "claimcast/errors.hpp"

namespace claimcast {

namespace {

using nlohmann::json;

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& context) {
  if (!j.is_object()) throw InputError(context + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* candidate : allowed)
      if (key == candidate) {
        ok = true;
        break;
      }
    if (!ok) throw InputError("unknown key '" + key + "' in " + context);
  }
}

json require(const json& j, const char* key, const std::string& context) {
  if (!j.contains(key))
    throw InputError("missing key '" + std::string(key) + "' in " + context);
  return j.at(key);
}

std::vector<double> number_array(const json& j, const std::string& context) {
  if (!j.is_array()) throw InputError(context + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw InputError(context + " must contain numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InputError("invalid JSON in '" + path + "': " + e.what());
  }
  return j;
}

void write_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
  if (!out) throw InputError("failed writing '" + path + "'");
}

void check_schema_version(const json& j, const std::string& context) {
  const json v = require(j, "schema_version", context);
  if (!v.is_number_integer() || v.get<int>() != 1)
    throw InputError(context + " has unsupported schema_version");
}

}  // namespace

json to_json(const IntensityModel& m) {
  if (m.family() == IntensityFamily::custom)
    throw InputError("custom intensity models are not serializable");
  return json{{"family", family_name(m.family())}, {"params", m.params()}};
}

IntensityModel intensity_from_json(const json& j) {
  check_keys(j, {"family", "params"}, "intensity model");
  const auto family = intensity_family_from_name(
      require(j, "family", "intensity model").get<std::string>());
  return IntensityModel(
      family, number_array(require(j, "params", "intensity model"),
                           "intensity params"));
}

json to_json(const MarkIntensityModel& m) {
  if (m.family() == MarkFamily::custom)
    throw InputError("custom mark models are not serializable");
  return json{{"family", family_name(m.family())}, {"params", m.params()}};
}

MarkIntensityModel mark_from_json(const json& j) {
  check_keys(j, {"family", "params"}, "mark model");
  const auto family = mark_family_from_name(
      require(j, "family", "mark model").get<std::string>());
  return MarkIntensityModel(
      family,
      number_array(require(j, "params", "mark model"), "mark params"));
}

json to_json(const CondDistModel& m) {
  return json{{"family", family_name(m.family())},
              {"L", m.fourier_order()},
              {"trend", m.trend_enabled()},
              {"theta1", m.theta1()},
              {"theta2", m.theta2()},
              {"xi_fixed", m.xi_fixed()}};
}

CondDistModel cond_dist_from_json(const json& j) {
  check_keys(j, {"family", "L", "trend", "theta1", "theta2", "xi_fixed"},
             "conditional distribution model");
  return CondDistModel(
      cond_dist_family_from_name(
          require(j, "family", "cond dist").get<std::string>()),
      require(j, "L", "cond dist").get<int>(),
      require(j, "trend", "cond dist").get<bool>(),
      number_array(require(j, "theta1", "cond dist"), "theta1"),
      number_array(require(j, "theta2", "cond dist"), "theta2"),
      j.contains("xi_fixed") ? j.at("xi_fixed").get<bool>() : true);
}

json to_json(const FitResult& f) {
  json j{{"estimate", f.estimate},
         {"loglik", f.loglik},
         {"information", f.information},
         {"converged", f.converged},
         {"iterations", f.iterations},
         {"gradient_norm", f.gradient_norm},
         {"warnings", f.warnings}};
  if (f.std_errors_available)
    j["std_errors"] = f.std_errors;
  else
    j["std_errors"] = nullptr;
  return j;
}

FitResult fit_result_from_json(const json& j) {
  check_keys(j,
             {"estimate", "loglik", "information", "converged", "iterations",
              "gradient_norm", "warnings", "std_errors"},
             "fit result");
  FitResult f;
  f.estimate = number_array(require(j, "estimate", "fit result"), "estimate");
  f.loglik = require(j, "loglik", "fit result").get<double>();
  f.information =
      number_array(require(j, "information", "fit result"), "information");
  f.converged = require(j, "converged", "fit result").get<bool>();
  f.iterations = require(j, "iterations", "fit result").get<int>();
  f.gradient_norm = require(j, "gradient_norm", "fit result").get<double>();
  for (const auto& w : require(j, "warnings", "fit result"))
    f.warnings.push_back(w.get<std::string>());
  const json se = require(j, "std_errors", "fit result");
  if (!se.is_null()) {
    f.std_errors = number_array(se, "std_errors");
    f.std_errors_available = true;
  }
  return f;
}

json to_json(const PredictiveDistribution& d, const DistributionSummary& s) {
  json summary{{"mean", s.mean},
               {"median", s.median},
               {"pct_lo", s.pct_lo},
               {"pct_hi", s.pct_hi}};
  summary["sd"] = s.sd ? json(*s.sd) : json(nullptr);
  summary["cv"] = s.cv ? json(*s.cv) : json(nullptr);
  return json{{"window", {d.window_lo, d.window_hi}},
              {"S", d.totals.size()},
              {"totals", d.totals},
              {"summary", summary}};
}

FitConfig load_fit_config(const std::string& path) {
  const json j = read_json_file(path);
  check_keys(j,
             {"schema_version", "origin_date", "horizon_a", "claim_type",
              "constraint_extension_days", "reporting", "delay", "mark",
              "amounts"},
             "fit config");
  check_schema_version(j, "fit config");

  FitConfig cfg;
  cfg.origin =
      parse_date(require(j, "origin_date", "fit config").get<std::string>());
  if (j.contains("horizon_a"))
    cfg.horizon_a = j.at("horizon_a").get<double>();
  if (j.contains("claim_type"))
    cfg.claim_type = j.at("claim_type").get<std::string>();
  if (j.contains("constraint_extension_days"))
    cfg.constraint_extension_days =
        j.at("constraint_extension_days").get<double>();

  const json rep = require(j, "reporting", "fit config");
  check_keys(rep, {"family", "init", "period_grid"}, "reporting config");
  cfg.reporting_family = intensity_family_from_name(
      require(rep, "family", "reporting config").get<std::string>());
  if (rep.contains("init"))
    cfg.reporting_init = number_array(rep.at("init"), "reporting init");
  if (rep.contains("period_grid"))
    cfg.reporting_period_grid =
        number_array(rep.at("period_grid"), "reporting period_grid");

  auto read_cond = [&](const char* key, CondDistFamily& family, int& order,
                       bool& trend, bool& free_xi) {
    const json c = require(j, key, "fit config");
    check_keys(c, {"family", "L", "trend", "free_xi"},
               std::string(key) + " config");
    family = cond_dist_family_from_name(
        require(c, "family", std::string(key) + " config")
            .get<std::string>());
    order = require(c, "L", std::string(key) + " config").get<int>();
    trend = require(c, "trend", std::string(key) + " config").get<bool>();
    free_xi = c.contains("free_xi") ? c.at("free_xi").get<bool>() : false;
  };
  read_cond("delay", cfg.delay_family, cfg.delay_order, cfg.delay_trend,
            cfg.delay_free_xi);
  read_cond("amounts", cfg.amounts_family, cfg.amounts_order,
            cfg.amounts_trend, cfg.amounts_free_xi);

  const json mark = require(j, "mark", "fit config");
  check_keys(mark, {"family", "init"}, "mark config");
  cfg.mark_family = mark_family_from_name(
      require(mark, "family", "mark config").get<std::string>());
  if (mark.contains("init"))
    cfg.mark_init = number_array(mark.at("init"), "mark init");

  return cfg;
}

void save_bundle(const Bundle& bundle, const std::string& path) {
  json j{{"schema_version", 1},
         {"origin_date", format_date(bundle.origin)},
         {"horizon_a", bundle.horizon_a},
         {"reporting",
          {{"model", to_json(bundle.reporting)},
           {"fit", to_json(bundle.reporting_fit)}}},
         {"delay",
          {{"model", to_json(bundle.delay)}, {"fit", to_json(bundle.delay_fit)}}},
         {"mark",
          {{"model", to_json(bundle.mark)}, {"fit", to_json(bundle.mark_fit)}}},
         {"amounts",
          {{"model", to_json(bundle.amounts)},
           {"fit", to_json(bundle.amounts_fit)}}}};
  write_json_file(j, path);
}

Bundle load_bundle(const std::string& path) {
  const json j = read_json_file(path);
  check_keys(j,
             {"schema_version", "origin_date", "horizon_a", "reporting",
              "delay", "mark", "amounts"},
             "bundle");
  check_schema_version(j, "bundle");

  Bundle b;
  b.origin =
      parse_date(require(j, "origin_date", "bundle").get<std::string>());
  b.horizon_a = require(j, "horizon_a", "bundle").get<double>();

  auto section = [&](const char* key) {
    const json s = require(j, key, "bundle");
    check_keys(s, {"model", "fit"}, std::string("bundle.") + key);
    return s;
  };
  {
    const json s = section("reporting");
    b.reporting = intensity_from_json(require(s, "model", "reporting"));
    b.reporting_fit = fit_result_from_json(require(s, "fit", "reporting"));
  }
  {
    const json s = section("delay");
    b.delay = cond_dist_from_json(require(s, "model", "delay"));
    b.delay_fit = fit_result_from_json(require(s, "fit", "delay"));
  }
  {
    const json s = section("mark");
    b.mark = mark_from_json(require(s, "model", "mark"));
    b.mark_fit = fit_result_from_json(require(s, "fit", "mark"));
  }
  {
    const json s = section("amounts");
    b.amounts = cond_dist_from_json(require(s, "model", "amounts"));
    b.amounts_fit = fit_result_from_json(require(s, "fit", "amounts"));
  }
  return b;
}

GroundTruth load_ground_truth(const std::string& path) {
  const json j = read_json_file(path);
  check_keys(j,
             {"schema_version", "seed", "horizon_a", "origin_date",
              "reporting", "delay", "mark", "amounts"},
             "ground truth spec");
  check_schema_version(j, "ground truth spec");

  GroundTruth gt;
  gt.seed = require(j, "seed", "ground truth spec").get<std::uint64_t>();
  gt.horizon_a = require(j, "horizon_a", "ground truth spec").get<double>();
  if (j.contains("origin_date"))
    gt.origin = parse_date(j.at("origin_date").get<std::string>());
  gt.reporting =
      intensity_from_json(require(j, "reporting", "ground truth spec"));
  gt.delay = cond_dist_from_json(require(j, "delay", "ground truth spec"));
  gt.mark = mark_from_json(require(j, "mark", "ground truth spec"));
  gt.amounts = cond_dist_from_json(require(j, "amounts", "ground truth spec"));
  return gt;
}

}  // namespace claimcast
