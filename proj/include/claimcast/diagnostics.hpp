#ifndef CLAIMCAST_DIAGNOSTICS_HPP
#define CLAIMCAST_DIAGNOSTICS_HPP

#include <optional>
#include <string>
#include <vector>

#include "claimcast/claims_data.hpp"
#include "claimcast/cond_dist.hpp"
#include "claimcast/intensity.hpp"

namespace claimcast {

struct IntensityFitRow {
  double t = 0.0;
  std::optional<long> observed_count;  // absent beyond the horizon
  double fitted_cumulative = 0.0;
  double fitted_rate = 0.0;
  bool extrapolated = false;  // t > horizon_a
};

// Observed counting path against the fitted cumulative intensity; the grid
// may extend past horizon_a to inspect extrapolation.
std::vector<IntensityFitRow> intensity_fit_series(
    const Portfolio& p, const IntensityModel& model,
    const std::vector<double>& grid);

struct DelayBacktestRow {
  double quarter_lo = 0.0, quarter_hi = 0.0;
  long claim_count = 0;
  std::optional<double> observed_mean_delay;
  std::optional<double> predicted_mean_delay;
};

// Observed vs model-implied mean reporting delay per [lo, hi) interval,
// claims grouped by reporting time.
std::vector<DelayBacktestRow> quarterly_delay_backtest(
    const Portfolio& p, const CondDistModel& delay,
    const std::vector<std::pair<double, double>>& quarters);

// Calendar quarters (derived from the origin date) covering [from, to].
std::vector<std::pair<double, double>> calendar_quarters(CalendarDate origin,
                                                         double from_day,
                                                         double to_day);

struct IndependencePair {
  std::string var_a, var_b;
  long pair_count = 0;
  std::optional<double> correlation;  // absent when pair_count < 5
  bool flagged = false;               // |corr| > 3/sqrt(n)
};

struct IndependenceGrid {
  std::vector<std::string> variables;  // "W", "X1", ..., "Xk"
  std::vector<std::string> claim_ids;
  // one row per claim, one column per variable; absent when the claim has
  // no such payment
  std::vector<std::vector<std::optional<double>>> transformed;
  std::vector<IndependencePair> pairs;
  long clamped = 0;
};

// Normal-quantile transforms of the reporting delay and the first
// max_payments payment amounts, with all pairwise correlations. Under a
// correct model with independence the transformed columns are standard
// normal and uncorrelated.
IndependenceGrid independence_grid(const Portfolio& p,
                                   const CondDistModel& delay,
                                   const CondDistModel& amounts,
                                   int max_payments);

// CSV emitters for the three tables (headers included).
void write_intensity_fit_csv(const std::vector<IntensityFitRow>& rows,
                             const std::string& path);
void write_delay_backtest_csv(const std::vector<DelayBacktestRow>& rows,
                              const std::string& path);
void write_independence_csv(const IndependenceGrid& grid,
                            const std::string& samples_path,
                            const std::string& correlations_path);

}  // namespace claimcast

#endif  // CLAIMCAST_DIAGNOSTICS_HPP
