#ifndef CLAIMCAST_BUNDLE_HPP
#define CLAIMCAST_BUNDLE_HPP

#include <optional>
#include <string>
#include <vector>

#include "claimcast/cond_dist.hpp"
#include "claimcast/dates.hpp"
#include "claimcast/fit_result.hpp"
#include "claimcast/forecast.hpp"
#include "claimcast/intensity.hpp"
#include "claimcast/synth.hpp"
#include "json.hpp"

namespace claimcast {

// model/result serialization (decimal doubles, exact round trip)
nlohmann::json to_json(const IntensityModel& m);
IntensityModel intensity_from_json(const nlohmann::json& j);
nlohmann::json to_json(const MarkIntensityModel& m);
MarkIntensityModel mark_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CondDistModel& m);
CondDistModel cond_dist_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FitResult& f);
FitResult fit_result_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PredictiveDistribution& d,
                       const DistributionSummary& s);

// Fit configuration (the `fit` subcommand input). Unknown keys anywhere in
// the document are rejected.
struct FitConfig {
  CalendarDate origin = std::chrono::year{2000} / 1 / 1;
  std::optional<double> horizon_a;          // truncate the data when given
  std::optional<std::string> claim_type;    // keep only this claim type
  double constraint_extension_days = 366.0; // delay/amount positivity window

  IntensityFamily reporting_family = IntensityFamily::constant;
  std::optional<std::vector<double>> reporting_init;
  std::vector<double> reporting_period_grid;

  CondDistFamily delay_family = CondDistFamily::lognormal;
  int delay_order = 0;
  bool delay_trend = false;
  bool delay_free_xi = false;

  MarkFamily mark_family = MarkFamily::constant_mark;
  std::optional<std::vector<double>> mark_init;

  CondDistFamily amounts_family = CondDistFamily::lognormal;
  int amounts_order = 0;
  bool amounts_trend = false;
  bool amounts_free_xi = false;
};

FitConfig load_fit_config(const std::string& path);

// The fitted-model bundle written by `fit` and consumed by the prediction
// commands.
struct Bundle {
  CalendarDate origin = std::chrono::year{2000} / 1 / 1;
  double horizon_a = 0.0;
  IntensityModel reporting;
  FitResult reporting_fit;
  CondDistModel delay;
  FitResult delay_fit;
  MarkIntensityModel mark;
  FitResult mark_fit;
  CondDistModel amounts;
  FitResult amounts_fit;
};

void save_bundle(const Bundle& bundle, const std::string& path);
Bundle load_bundle(const std::string& path);

// Ground-truth specification for the synth subcommand.
GroundTruth load_ground_truth(const std::string& path);

}  // namespace claimcast

#endif  // CLAIMCAST_BUNDLE_HPP
