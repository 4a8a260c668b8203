#include <cstdint>
#include <string>

#include "CLI11.hpp"
#include "claimcast/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"micro-level claims forecasting: marked Poisson processes "
               "with Poisson-process marks"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  int threads = 1;
  bool verbose = false;

  auto add_shared = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "master random seed")->capture_default_str();
    cmd->add_option("--threads", threads, "worker thread cap")
        ->capture_default_str();
    cmd->add_flag("--verbose", verbose, "progress output on stderr");
  };

  // fit
  std::string fit_config, fit_data, fit_out;
  auto* fit = app.add_subcommand("fit", "fit the four model components");
  fit->add_option("config", fit_config, "fit configuration JSON")->required();
  fit->add_option("data", fit_data, "claims CSV")->required();
  fit->add_option("out", fit_out, "output bundle JSON")->required();
  add_shared(fit);

  // predict
  std::string pred_bundle, pred_data, pred_until, pred_out;
  long pred_sims = 10000;
  auto* predict = app.add_subcommand(
      "predict", "Monte Carlo distribution of future total payments");
  predict->add_option("bundle", pred_bundle, "fitted bundle JSON")->required();
  predict->add_option("data", pred_data, "claims CSV")->required();
  predict->add_option("out", pred_out, "output JSON")->required();
  predict->add_option("--until", pred_until,
                      "window end (days since origin or YYYY-MM-DD)")
      ->required();
  predict->add_option("--sims", pred_sims, "Monte Carlo replicates")
      ->capture_default_str();
  add_shared(predict);

  // backpredict
  std::string back_bundle, back_bins, back_out, back_intensity_out;
  double back_zcap = -1.0;
  auto* backpredict = app.add_subcommand(
      "backpredict", "occurrence-time intensity and expected counts");
  backpredict->add_option("bundle", back_bundle, "fitted bundle JSON")
      ->required();
  backpredict->add_option("out", back_out, "per-bin expected counts CSV")
      ->required();
  backpredict->add_option("--bins", back_bins, "start:end:count")->required();
  backpredict->add_option("--intensity-out", back_intensity_out,
                          "intensity grid CSV (default: <out>.intensity.csv)");
  backpredict->add_option(
      "--zmax", back_zcap,
      "integrate reports only up to this time (default: unrestricted)");
  add_shared(backpredict);

  // synth
  std::string synth_spec, synth_out;
  auto* synth =
      app.add_subcommand("synth", "generate a synthetic portfolio CSV");
  synth->add_option("spec", synth_spec, "ground-truth spec JSON")->required();
  synth->add_option("out", synth_out, "output claims CSV")->required();
  add_shared(synth);

  // diagnose
  std::string diag_bundle, diag_data, diag_dir;
  auto* diagnose =
      app.add_subcommand("diagnose", "model-fit diagnostic tables");
  diagnose->add_option("bundle", diag_bundle, "fitted bundle JSON")
      ->required();
  diagnose->add_option("data", diag_data, "claims CSV")->required();
  diagnose->add_option("out", diag_dir, "output directory")->required();
  add_shared(diagnose);

  // simulate
  std::string sim_bundle, sim_data, sim_window, sim_out;
  auto* simulate = app.add_subcommand(
      "simulate", "one marked-process draw on a future window");
  simulate->add_option("bundle", sim_bundle, "fitted bundle JSON")->required();
  simulate->add_option("data", sim_data, "claims CSV")->required();
  simulate->add_option("out", sim_out, "output claims CSV")->required();
  simulate->add_option("--window", sim_window, "lo:hi window")->required();
  add_shared(simulate);

  CLI11_PARSE(app, argc, argv);

  if (fit->parsed())
    return claimcast::cmd_fit(fit_config, fit_data, fit_out, verbose);
  if (predict->parsed())
    return claimcast::cmd_predict(pred_bundle, pred_data, pred_until,
                                  pred_sims, seed, threads, pred_out, verbose);
  if (backpredict->parsed()) {
    std::string intensity_out = back_intensity_out.empty()
                                    ? back_out + ".intensity.csv"
                                    : back_intensity_out;
    return claimcast::cmd_backpredict(back_bundle, back_bins, back_out,
                                      intensity_out, back_zcap, verbose);
  }
  if (synth->parsed())
    return claimcast::cmd_synth(synth_spec, synth_out, seed,
                                synth->count("--seed") > 0, verbose);
  if (diagnose->parsed())
    return claimcast::cmd_diagnose(diag_bundle, diag_data, diag_dir, verbose);
  if (simulate->parsed())
    return claimcast::cmd_simulate(sim_bundle, sim_data, sim_window, seed,
                                   sim_out, verbose);
  return claimcast::kExitInput;
}
