#include "claimcast/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>

#include "claimcast/bundle.hpp"
#include "claimcast/claims_data.hpp"
#include "claimcast/diagnostics.hpp"
#include "claimcast/errors.hpp"
#include "claimcast/poisson_fit.hpp"
#include "claimcast/simulate.hpp"

namespace claimcast {

namespace {

constexpr std::uint64_t kTagSimDelay = 4;

int run_guarded(bool verbose, const std::function<int()>& body) {
  try {
    return body();
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    if (verbose) std::cerr << "(unexpected exception type)\n";
    return kExitNumerical;
  }
}

double parse_time_arg(const std::string& text, CalendarDate origin,
                      const std::string& what) {
  if (text.size() == 10 && text[4] == '-' && text[7] == '-')
    return parse_time_point(text, origin);
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0')
    throw InputError(what + ": expected days-since-origin or YYYY-MM-DD, got '" +
                     text + "'");
  return v;
}

Portfolio filter_claim_type(const Portfolio& p, const std::string& type) {
  std::vector<ClaimRecord> kept;
  for (const auto& rec : p.records())
    if (rec.claim_type == type) kept.push_back(rec);
  return Portfolio(std::move(kept), p.horizon_a(), p.origin_date());
}

std::vector<std::pair<double, double>> delay_observations(const Portfolio& p,
                                                          long& dropped) {
  std::vector<std::pair<double, double>> obs;
  dropped = 0;
  for (const auto& rec : p.records()) {
    const double w = rec.reporting_delay();
    if (w > 0.0)
      obs.emplace_back(rec.reporting_time, w);
    else
      ++dropped;
  }
  return obs;
}

std::vector<std::pair<double, double>> amount_observations(const Portfolio& p) {
  std::vector<std::pair<double, double>> obs;
  for (const auto& rec : p.records())
    for (const auto& pay : rec.payments)
      obs.emplace_back(rec.reporting_time, pay.amount);
  return obs;
}

// in-domain placeholder parameters; fit_reporting/fit_marks compute their
// own data-driven initial values
std::vector<double> placeholder_params(IntensityFamily family) {
  switch (family) {
    case IntensityFamily::constant: return {1.0};
    case IntensityFamily::exponential: return {0.0, 0.0};
    case IntensityFamily::log_periodic: return {0, 0, 0, 0, 364.0};
    case IntensityFamily::quad_periodic: return {0, 0, 0, 0, 0, 364.0};
    case IntensityFamily::custom: break;
  }
  throw InputError("custom intensity families cannot be fitted from a config");
}

std::vector<double> placeholder_params(MarkFamily family) {
  switch (family) {
    case MarkFamily::constant_mark: return {1.0};
    case MarkFamily::weibull_baseline: return {1.0, 1.0, 0.0};
    case MarkFamily::exp_trend_periodic: return {0, 0, 0, 0, 364.0};
    case MarkFamily::custom: break;
  }
  throw InputError("custom mark families cannot be fitted from a config");
}

}  // namespace

int cmd_fit(const std::string& config_path, const std::string& data_path,
            const std::string& out_path, bool verbose) {
  return run_guarded(verbose, [&] {
    const FitConfig cfg = load_fit_config(config_path);
    Portfolio data = load_csv(data_path, cfg.origin);
    if (cfg.claim_type) data = filter_claim_type(data, *cfg.claim_type);
    if (cfg.horizon_a) data = truncate(data, *cfg.horizon_a);
    if (data.empty()) throw InputError("no claims left to fit");
    const double a = data.horizon_a();
    if (verbose)
      std::cerr << "fitting " << data.size() << " claims, "
                << data.total_payments() << " payments, horizon " << a
                << " days\n";

    Bundle bundle;
    bundle.origin = cfg.origin;
    bundle.horizon_a = a;

    FitOptions rep_opts;
    rep_opts.init = cfg.reporting_init;
    rep_opts.period_grid = cfg.reporting_period_grid;
    IntensityModel rep_proto(cfg.reporting_family,
                             cfg.reporting_init
                                 ? *cfg.reporting_init
                                 : placeholder_params(cfg.reporting_family));
    bundle.reporting_fit = fit_reporting(data, rep_proto, rep_opts);
    bundle.reporting = rep_proto.with_params(bundle.reporting_fit.estimate);

    long dropped = 0;
    auto delay_obs = delay_observations(data, dropped);
    if (verbose && dropped > 0)
      std::cerr << "note: " << dropped
                << " claims with zero reporting delay excluded from the "
                   "delay fit\n";
    CondFitOptions delay_opts;
    delay_opts.free_xi = cfg.delay_free_xi;
    delay_opts.constraint_window = {a, a + cfg.constraint_extension_days};
    auto delay_fit = fit_cond_dist(delay_obs, cfg.delay_family,
                                   cfg.delay_order, cfg.delay_trend,
                                   delay_opts);
    bundle.delay = delay_fit.model;
    bundle.delay_fit = delay_fit.fit;

    FitOptions mark_opts;
    mark_opts.init = cfg.mark_init;
    MarkIntensityModel mark_proto(
        cfg.mark_family, cfg.mark_init ? *cfg.mark_init
                                       : placeholder_params(cfg.mark_family));
    bundle.mark_fit = fit_marks(data, mark_proto, mark_opts);
    bundle.mark = mark_proto.with_params(bundle.mark_fit.estimate);

    CondFitOptions amount_opts;
    amount_opts.free_xi = cfg.amounts_free_xi;
    amount_opts.constraint_window = {a, a + cfg.constraint_extension_days};
    auto amounts_fit =
        fit_cond_dist(amount_observations(data), cfg.amounts_family,
                      cfg.amounts_order, cfg.amounts_trend, amount_opts);
    bundle.amounts = amounts_fit.model;
    bundle.amounts_fit = amounts_fit.fit;

    save_bundle(bundle, out_path);

    const bool all_converged =
        bundle.reporting_fit.converged && bundle.delay_fit.converged &&
        bundle.mark_fit.converged && bundle.amounts_fit.converged;
    if (!all_converged) {
      std::cerr << "warning: at least one fit did not converge; bundle "
                   "written with flags\n";
      return kExitPartial;
    }
    return kExitOk;
  });
}

int cmd_predict(const std::string& bundle_path, const std::string& data_path,
                const std::string& until, long sims, std::uint64_t seed,
                int threads, const std::string& out_path, bool verbose) {
  return run_guarded(verbose, [&] {
    const Bundle bundle = load_bundle(bundle_path);
    Portfolio data = load_csv(data_path, bundle.origin);
    data = truncate(data, bundle.horizon_a);
    const double b = parse_time_arg(until, bundle.origin, "--until");
    if (!(b > bundle.horizon_a))
      throw InputError("--until must lie beyond the bundle horizon");
    if (sims < 1) throw InputError("--sims must be at least 1");

    auto dist = predict_total(data, bundle.reporting, bundle.mark,
                              bundle.amounts, b, sims, RngStream(seed),
                              threads);
    auto summary = summarize(dist);
    if (verbose)
      std::cerr << "predicted mean " << summary.mean << ", median "
                << summary.median << " over " << sims << " replicates\n";
    std::ofstream out(out_path);
    if (!out) throw InputError("cannot write '" + out_path + "'");
    out << to_json(dist, summary).dump(2) << "\n";
    return kExitOk;
  });
}

int cmd_backpredict(const std::string& bundle_path, const std::string& bins,
                    const std::string& out_path,
                    const std::string& intensity_out, double z_cap,
                    bool verbose) {
  return run_guarded(verbose, [&] {
    const Bundle bundle = load_bundle(bundle_path);

    double lo = 0, hi = 0;
    long count = 0;
    if (std::sscanf(bins.c_str(), "%lf:%lf:%ld", &lo, &hi, &count) != 3 ||
        !(hi > lo) || count < 1)
      throw InputError("--bins must be start:end:count with end > start");

    std::vector<std::pair<double, double>> intervals;
    for (long i = 0; i < count; ++i)
      intervals.emplace_back(lo + (hi - lo) * i / count,
                             lo + (hi - lo) * (i + 1) / count);

    std::optional<double> cap;
    if (z_cap > 0.0) cap = z_cap;
    auto counts = backpredict_counts(bundle.reporting, bundle.delay, intervals,
                                     bundle.horizon_a, cap);
    {
      std::ofstream out(out_path);
      if (!out) throw InputError("cannot write '" + out_path + "'");
      out << "bin_lo,bin_hi,expected_count\n";
      char buf[128];
      for (std::size_t i = 0; i < intervals.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n",
                      intervals[i].first, intervals[i].second, counts[i]);
        out << buf;
      }
    }
    {
      // intensity on a grid of 4 points per bin
      std::vector<double> grid;
      for (long i = 0; i <= 4 * count; ++i)
        grid.push_back(lo + (hi - lo) * i / (4.0 * count));
      auto occ = occurrence_intensity(bundle.reporting, bundle.delay, grid,
                                      bundle.horizon_a, cap);
      std::ofstream out(intensity_out);
      if (!out) throw InputError("cannot write '" + intensity_out + "'");
      out << "t,value,extrapolated\n";
      char buf[96];
      for (std::size_t i = 0; i < occ.grid.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%d\n", occ.grid[i],
                      occ.values[i], occ.extrapolated[i] ? 1 : 0);
        out << buf;
      }
    }
    return kExitOk;
  });
}

int cmd_synth(const std::string& spec_path, const std::string& out_path,
              std::uint64_t seed_override, bool has_seed_override,
              bool verbose) {
  return run_guarded(verbose, [&] {
    GroundTruth gt = load_ground_truth(spec_path);
    if (has_seed_override) gt.seed = seed_override;
    Portfolio generated = generate(gt);
    if (verbose)
      std::cerr << "generated " << generated.size() << " claims with "
                << generated.total_payments() << " payments\n";
    write_csv(generated, out_path);
    return kExitOk;
  });
}

int cmd_diagnose(const std::string& bundle_path, const std::string& data_path,
                 const std::string& out_dir, bool verbose) {
  return run_guarded(verbose, [&] {
    const Bundle bundle = load_bundle(bundle_path);
    Portfolio data = load_csv(data_path, bundle.origin);
    data = truncate(data, bundle.horizon_a);
    std::filesystem::create_directories(out_dir);
    const auto dir = std::filesystem::path(out_dir);

    std::vector<double> grid;
    for (int i = 0; i <= 100; ++i)
      grid.push_back(bundle.horizon_a * i / 100.0);
    write_intensity_fit_csv(
        intensity_fit_series(data, bundle.reporting, grid),
        (dir / "intensity_fit.csv").string());

    auto quarters =
        calendar_quarters(bundle.origin, 0.0, bundle.horizon_a);
    write_delay_backtest_csv(
        quarterly_delay_backtest(data, bundle.delay, quarters),
        (dir / "delay_backtest.csv").string());

    write_independence_csv(
        independence_grid(data, bundle.delay, bundle.amounts, 4),
        (dir / "independence_samples.csv").string(),
        (dir / "independence_correlations.csv").string());
    if (verbose) std::cerr << "diagnostics written to " << out_dir << "\n";
    return kExitOk;
  });
}

int cmd_simulate(const std::string& bundle_path, const std::string& data_path,
                 const std::string& window, std::uint64_t seed,
                 const std::string& out_path, bool verbose) {
  return run_guarded(verbose, [&] {
    const Bundle bundle = load_bundle(bundle_path);
    Portfolio data = load_csv(data_path, bundle.origin);

    const auto colon = window.find(':');
    if (colon == std::string::npos)
      throw InputError("--window must be lo:hi");
    const double lo = parse_time_arg(window.substr(0, colon), bundle.origin,
                                     "--window lo");
    const double hi = parse_time_arg(window.substr(colon + 1), bundle.origin,
                                     "--window hi");
    if (!(hi > lo)) throw InputError("--window needs hi > lo");

    data = truncate(data, lo);
    RngStream rng(seed);
    auto claims =
        sample_marked(bundle.reporting, bundle.mark, bundle.amounts, hi, data,
                      rng);

    // keep existing claims only when they produced future payments; new
    // claims always appear, with an occurrence time drawn from the delay
    // model so the output is a well-formed claims file
    std::vector<ClaimRecord> records;
    for (const auto& sim : claims) {
      if (sim.source_index >= 0 && sim.payment_times.empty()) continue;
      ClaimRecord rec;
      rec.claim_id = sim.claim_id;
      rec.reporting_time = sim.reporting_time;
      if (sim.source_index >= 0) {
        const auto& src = data.records()[sim.source_index];
        rec.claim_type = src.claim_type;
        rec.occurrence_time = src.occurrence_time;
      } else {
        rec.claim_type = "simulated";
        RngStream delay_rng = rng.derive(
            kTagSimDelay,
            static_cast<std::uint64_t>(&sim - claims.data()));
        rec.occurrence_time =
            sim.reporting_time - bundle.delay.sample(delay_rng,
                                                     sim.reporting_time);
      }
      for (std::size_t k = 0; k < sim.payment_times.size(); ++k)
        rec.payments.push_back({sim.payment_times[k], sim.payment_amounts[k]});
      records.push_back(std::move(rec));
    }
    Portfolio out(std::move(records), hi, bundle.origin);
    write_csv(out, out_path);
    if (verbose)
      std::cerr << "simulated " << out.size() << " claims with "
                << out.total_payments() << " payments on (" << lo << ", "
                << hi << "]\n";
    return kExitOk;
  });
}

}  // namespace claimcast
