#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "claimcast/bundle.hpp"
#include "claimcast/cli.hpp"
#include "claimcast/errors.hpp"
#include "doctest.h"

using namespace claimcast;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& contents) {
  std::ofstream out(path);
  out << contents;
}

struct CliRun {
  int exit_code;
  std::string err;
};

CliRun run_cli(const std::string& args) {
  const std::string err_path = "cli_stderr.tmp";
  const std::string cmd =
      std::string(CLAIMCAST_CLI_PATH) + " " + args + " 2> " + err_path;
  const int raw = std::system(cmd.c_str());
  CliRun r;
  r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.err = slurp(err_path);
  std::remove(err_path.c_str());
  return r;
}

// twelve claims reported on days 1..12 with horizon 16: the constant-rate
// estimate is exactly 12/16 = 0.75
void write_toy_csv(const std::string& path) {
  std::ostringstream csv;
  csv << "claim_id,claim_type,occurrence_date,reporting_date,payment_date,"
         "payment_amount\n";
  const char* amounts[12] = {"12.5", "8.0",  "101.0", "55.5", "9.75", "33.0",
                             "47.2", "18.9", "72.4",  "5.6",  "60.1", "24.3"};
  for (int i = 1; i <= 12; ++i) {
    char occurrence[16], reporting[16], pay1[16], pay2[16];
    std::snprintf(reporting, sizeof reporting, "2020-01-%02d", i + 1);
    std::snprintf(occurrence, sizeof occurrence, "2020-01-%02d",
                  std::max(1, i + 1 - (i % 3 + 1)));
    std::snprintf(pay1, sizeof pay1, "2020-01-%02d", i + 3);
    std::snprintf(pay2, sizeof pay2, "2020-01-%02d", i + 5);
    csv << "c" << i << ",material," << occurrence << "," << reporting << ","
        << pay1 << "," << amounts[i - 1] << "\n";
    csv << "c" << i << ",material," << occurrence << "," << reporting << ","
        << pay2 << "," << amounts[(i + 5) % 12] << "\n";
  }
  spit(path, csv.str());
}

std::string constant_config(const char* extra = "") {
  std::ostringstream cfg;
  cfg << "{\n"
      << "  \"schema_version\": 1,\n"
      << "  \"origin_date\": \"2020-01-01\",\n"
      << "  \"horizon_a\": 16.0,\n"
      << "  \"reporting\": {\"family\": \"constant\"},\n"
      << "  \"delay\": {\"family\": \"lognormal\", \"L\": 0, \"trend\": false},\n"
      << "  \"mark\": {\"family\": \"constant_mark\"},\n"
      << "  \"amounts\": {\"family\": \"lognormal\", \"L\": 0, \"trend\": "
         "false}"
      << extra << "\n}\n";
  return cfg.str();
}

Bundle zero_bundle() {
  Bundle b;
  b.origin = std::chrono::year{2020} / 1 / 1;
  b.horizon_a = 16.0;
  b.reporting = IntensityModel(IntensityFamily::constant, {0.0});
  b.mark = MarkIntensityModel(MarkFamily::constant_mark, {0.0});
  b.delay = CondDistModel::constant(CondDistFamily::lognormal, 1.0, 0.5);
  b.amounts = CondDistModel::constant(CondDistFamily::lognormal, 0.0, 1.0);
  FitResult dummy;
  dummy.estimate = {0.0};
  dummy.converged = true;
  b.reporting_fit = b.mark_fit = b.delay_fit = b.amounts_fit = dummy;
  return b;
}

}  // namespace

TEST_CASE("fit on the toy file recovers the closed-form rate") {
  write_toy_csv("cli_toy.csv");
  spit("cli_cfg.json", constant_config());
  const int code = cmd_fit("cli_cfg.json", "cli_toy.csv", "cli_bundle.json",
                           false);
  CHECK(code == kExitOk);
  Bundle b = load_bundle("cli_bundle.json");
  CHECK(std::abs(b.reporting.params()[0] - 0.75) <= 1e-8);
  CHECK(b.reporting_fit.converged);

  std::remove("cli_toy.csv");
  std::remove("cli_cfg.json");
  std::remove("cli_bundle.json");
}

TEST_CASE("unknown family names and unknown keys fail fast") {
  write_toy_csv("cli_toy2.csv");
  spit("cli_bad_family.json",
       "{\"schema_version\":1,\"origin_date\":\"2020-01-01\","
       "\"reporting\":{\"family\":\"quux\"},"
       "\"delay\":{\"family\":\"lognormal\",\"L\":0,\"trend\":false},"
       "\"mark\":{\"family\":\"constant_mark\"},"
       "\"amounts\":{\"family\":\"lognormal\",\"L\":0,\"trend\":false}}");
  auto bad_family = run_cli("fit cli_bad_family.json cli_toy2.csv out.json");
  CHECK(bad_family.exit_code == kExitInput);
  CHECK(bad_family.err.find("quux") != std::string::npos);

  spit("cli_bad_key.json", constant_config(",\n  \"surprise\": 3"));
  auto bad_key = run_cli("fit cli_bad_key.json cli_toy2.csv out.json");
  CHECK(bad_key.exit_code == kExitInput);
  CHECK(bad_key.err.find("surprise") != std::string::npos);

  std::remove("cli_toy2.csv");
  std::remove("cli_bad_family.json");
  std::remove("cli_bad_key.json");
}

TEST_CASE("degenerate delays flag partial convergence but still write the "
          "bundle") {
  // every claim has the same one-day delay: the delay scale runs to its
  // boundary and the fit reports non-convergence
  std::ostringstream csv;
  csv << "claim_id,claim_type,occurrence_date,reporting_date,payment_date,"
         "payment_amount\n";
  const char* amounts[12] = {"12.5", "8.0",  "101.0", "55.5", "9.75", "33.0",
                             "47.2", "18.9", "72.4",  "5.6",  "60.1", "24.3"};
  for (int i = 1; i <= 12; ++i) {
    char occurrence[16], reporting[16], pay[16];
    std::snprintf(occurrence, sizeof occurrence, "2020-01-%02d", i);
    std::snprintf(reporting, sizeof reporting, "2020-01-%02d", i + 1);
    std::snprintf(pay, sizeof pay, "2020-01-%02d", i + 3);
    csv << "c" << i << ",material," << occurrence << "," << reporting << ","
        << pay << "," << amounts[i - 1] << "\n";
  }
  spit("cli_degenerate.csv", csv.str());
  spit("cli_cfg2.json", constant_config());
  const int code =
      cmd_fit("cli_cfg2.json", "cli_degenerate.csv", "cli_bundle2.json",
              false);
  CHECK(code == kExitPartial);
  Bundle b = load_bundle("cli_bundle2.json");
  CHECK_FALSE(b.delay_fit.converged);
  CHECK(b.reporting_fit.converged);

  std::remove("cli_degenerate.csv");
  std::remove("cli_cfg2.json");
  std::remove("cli_bundle2.json");
}

TEST_CASE("prediction on a zero-intensity bundle produces all-zero totals") {
  save_bundle(zero_bundle(), "cli_zero_bundle.json");
  write_toy_csv("cli_toy3.csv");

  int code = cmd_predict("cli_zero_bundle.json", "cli_toy3.csv", "30.0", 25, 9,
                         1, "cli_pred.json", false);
  CHECK(code == kExitOk);
  auto j = nlohmann::json::parse(slurp("cli_pred.json"));
  CHECK(j.at("S").get<long>() == 25);
  for (const auto& v : j.at("totals")) CHECK(v.get<double>() == 0.0);
  CHECK(j.at("summary").at("mean").get<double>() == 0.0);
  CHECK(j.at("summary").at("cv").is_null());

  // a single replicate is a point distribution
  code = cmd_predict("cli_zero_bundle.json", "cli_toy3.csv", "30.0", 1, 9, 1,
                     "cli_pred1.json", false);
  CHECK(code == kExitOk);
  auto j1 = nlohmann::json::parse(slurp("cli_pred1.json"));
  CHECK(j1.at("totals").size() == 1);

  // window end at or before the horizon is rejected
  code = cmd_predict("cli_zero_bundle.json", "cli_toy3.csv", "16.0", 5, 9, 1,
                     "cli_pred2.json", false);
  CHECK(code == kExitInput);

  std::remove("cli_zero_bundle.json");
  std::remove("cli_toy3.csv");
  std::remove("cli_pred.json");
  std::remove("cli_pred1.json");
}

TEST_CASE("prediction output is byte-identical for equal seeds and across "
          "thread counts") {
  write_toy_csv("cli_toy4.csv");
  spit("cli_cfg4.json", constant_config());
  REQUIRE(cmd_fit("cli_cfg4.json", "cli_toy4.csv", "cli_bundle4.json",
                  false) == kExitOk);

  auto a = run_cli(
      "predict cli_bundle4.json cli_toy4.csv cli_p_a.json --until 40 "
      "--sims 64 --seed 77 --threads 1");
  auto b = run_cli(
      "predict cli_bundle4.json cli_toy4.csv cli_p_b.json --until 40 "
      "--sims 64 --seed 77 --threads 8");
  auto c = run_cli(
      "predict cli_bundle4.json cli_toy4.csv cli_p_c.json --until 40 "
      "--sims 64 --seed 78 --threads 1");
  CHECK(a.exit_code == kExitOk);
  CHECK(b.exit_code == kExitOk);
  CHECK(slurp("cli_p_a.json") == slurp("cli_p_b.json"));
  CHECK(slurp("cli_p_a.json") != slurp("cli_p_c.json"));

  for (const char* f : {"cli_toy4.csv", "cli_cfg4.json", "cli_bundle4.json",
                        "cli_p_a.json", "cli_p_b.json", "cli_p_c.json"})
    std::remove(f);
}

TEST_CASE("synth with a zero-rate spec writes only the header") {
  spit("cli_synth_spec.json",
       "{\"schema_version\":1,\"seed\":5,\"horizon_a\":100.0,"
       "\"reporting\":{\"family\":\"constant\",\"params\":[0.0]},"
       "\"delay\":{\"family\":\"lognormal\",\"L\":0,\"trend\":false,"
       "\"theta1\":[1.0,0],\"theta2\":[0.5,0],\"xi_fixed\":true},"
       "\"mark\":{\"family\":\"constant_mark\",\"params\":[0.1]},"
       "\"amounts\":{\"family\":\"lognormal\",\"L\":0,\"trend\":false,"
       "\"theta1\":[0.0,0],\"theta2\":[1.0,0],\"xi_fixed\":true}}");
  const int code = cmd_synth("cli_synth_spec.json", "cli_synth.csv", 0, false,
                             false);
  CHECK(code == kExitOk);
  CHECK(slurp("cli_synth.csv") ==
        "claim_id,claim_type,occurrence_date,reporting_date,payment_date,"
        "payment_amount\n");
  std::remove("cli_synth_spec.json");
  std::remove("cli_synth.csv");
}

TEST_CASE("end-to-end: synth, fit, diagnose, backpredict, simulate") {
  spit("cli_gt.json",
       "{\"schema_version\":1,\"seed\":11,\"horizon_a\":365.0,"
       "\"origin_date\":\"2020-01-01\","
       "\"reporting\":{\"family\":\"constant\",\"params\":[0.6]},"
       "\"delay\":{\"family\":\"lognormal\",\"L\":0,\"trend\":false,"
       "\"theta1\":[1.2,0],\"theta2\":[0.6,0],\"xi_fixed\":true},"
       "\"mark\":{\"family\":\"constant_mark\",\"params\":[0.02]},"
       "\"amounts\":{\"family\":\"lognormal\",\"L\":0,\"trend\":false,"
       "\"theta1\":[0.8,0],\"theta2\":[0.9,0],\"xi_fixed\":true}}");
  REQUIRE(cmd_synth("cli_gt.json", "cli_data.csv", 0, false, false) ==
          kExitOk);

  spit("cli_cfg5.json",
       "{\"schema_version\":1,\"origin_date\":\"2020-01-01\","
       "\"reporting\":{\"family\":\"constant\"},"
       "\"delay\":{\"family\":\"lognormal\",\"L\":0,\"trend\":false},"
       "\"mark\":{\"family\":\"constant_mark\"},"
       "\"amounts\":{\"family\":\"lognormal\",\"L\":0,\"trend\":false}}");
  REQUIRE(cmd_fit("cli_cfg5.json", "cli_data.csv", "cli_bundle5.json",
                  false) == kExitOk);

  // recovered parameters sit within four standard errors of the truth
  Bundle b = load_bundle("cli_bundle5.json");
  CHECK(std::abs(b.reporting.params()[0] - 0.6) <=
        4.0 * b.reporting_fit.std_errors[0]);
  CHECK(std::abs(b.mark.params()[0] - 0.02) <= 4.0 * b.mark_fit.std_errors[0]);

  CHECK(cmd_diagnose("cli_bundle5.json", "cli_data.csv", "cli_diag", false) ==
        kExitOk);
  for (const char* f :
       {"cli_diag/intensity_fit.csv", "cli_diag/delay_backtest.csv",
        "cli_diag/independence_samples.csv",
        "cli_diag/independence_correlations.csv"}) {
    std::ifstream probe(f);
    CHECK(probe.good());
  }

  CHECK(cmd_backpredict("cli_bundle5.json", "60:300:6", "cli_back.csv",
                        "cli_back_intensity.csv", -1.0, false) == kExitOk);
  {
    std::ifstream in("cli_back.csv");
    std::string header, row;
    std::getline(in, header);
    CHECK(header == "bin_lo,bin_hi,expected_count");
    int rows = 0;
    while (std::getline(in, row)) ++rows;
    CHECK(rows == 6);
  }

  CHECK(cmd_simulate("cli_bundle5.json", "cli_data.csv", "365:465", 13,
                     "cli_sim_a.csv", false) == kExitOk);
  CHECK(cmd_simulate("cli_bundle5.json", "cli_data.csv", "365:465", 13,
                     "cli_sim_b.csv", false) == kExitOk);
  CHECK(slurp("cli_sim_a.csv") == slurp("cli_sim_b.csv"));
  CHECK(slurp("cli_sim_a.csv").find("simulated") != std::string::npos);

  for (const char* f :
       {"cli_gt.json", "cli_data.csv", "cli_cfg5.json", "cli_bundle5.json",
        "cli_back.csv", "cli_back_intensity.csv", "cli_sim_a.csv",
        "cli_sim_b.csv", "cli_diag/intensity_fit.csv",
        "cli_diag/delay_backtest.csv", "cli_diag/independence_samples.csv",
        "cli_diag/independence_correlations.csv"})
    std::remove(f);
}
