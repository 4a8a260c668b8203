#ifndef CLAIMCAST_FORECAST_HPP
#define CLAIMCAST_FORECAST_HPP

#include <optional>
#include <vector>

#include "claimcast/claims_data.hpp"
#include "claimcast/cond_dist.hpp"
#include "claimcast/intensity.hpp"
#include "claimcast/rng.hpp"

namespace claimcast {

struct PredictiveDistribution {
  double window_lo = 0.0, window_hi = 0.0;
  std::vector<double> totals;  // sorted ascending, one per replicate
};

struct DistributionSummary {
  double mean = 0.0;
  double median = 0.0;
  std::optional<double> sd, cv;  // absent when sims < 2 (cv also when mean 0)
  double pct_lo = 0.0;           // 0.5th percentile
  double pct_hi = 0.0;           // 99.5th percentile
};

// Monte Carlo predictive distribution of the total payments on
// (p.horizon_a(), b]: `sims` replicates of sample_marked, each replicate's
// amounts summed. Replicates use streams derived from the replicate index,
// so any thread count produces identical output.
PredictiveDistribution predict_total(const Portfolio& p,
                                     const IntensityModel& reporting,
                                     const MarkIntensityModel& mark,
                                     const CondDistModel& amounts, double b,
                                     long sims, RngStream rng,
                                     int threads = 1);

DistributionSummary summarize(const PredictiveDistribution& d);

// type-7 order-statistic quantile of a sorted sample
double sorted_quantile(const std::vector<double>& sorted, double u);

struct OccurrenceIntensity {
  std::vector<double> grid;
  std::vector<double> values;
  // true where the displacement integral reached past horizon_a, i.e. the
  // reporting intensity was extrapolated
  std::vector<bool> extrapolated;
};

// Back-predicted occurrence-time intensity: for each grid time t,
// integrates rate(z) * delay_density(z - t; z) over reporting times
// z in [t, z_max]. z_max defaults to t plus a 1 - 1e-8 delay quantile and
// can be capped (z_cap) to restrict to reports before a given time.
OccurrenceIntensity occurrence_intensity(const IntensityModel& reporting,
                                         const CondDistModel& delay,
                                         const std::vector<double>& grid,
                                         double horizon_a,
                                         std::optional<double> z_cap = {});

// Expected occurrence counts per [lo, hi) bin: the integral of the
// back-predicted intensity over each bin.
std::vector<double> backpredict_counts(
    const IntensityModel& reporting, const CondDistModel& delay,
    const std::vector<std::pair<double, double>>& bins, double horizon_a,
    std::optional<double> z_cap = {});

}  // namespace claimcast

#endif  // CLAIMCAST_FORECAST_HPP
