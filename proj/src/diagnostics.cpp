#include "claimcast/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "claimcast/errors.hpp"

namespace claimcast {

std::vector<IntensityFitRow> intensity_fit_series(
    const Portfolio& p, const IntensityModel& model,
    const std::vector<double>& grid) {
  std::vector<double> reports;
  reports.reserve(p.size());
  for (const auto& rec : p.records()) reports.push_back(rec.reporting_time);

  std::vector<IntensityFitRow> rows;
  rows.reserve(grid.size());
  for (double t : grid) {
    IntensityFitRow row;
    row.t = t;
    row.extrapolated = t > p.horizon_a();
    if (!row.extrapolated)
      row.observed_count = static_cast<long>(
          std::upper_bound(reports.begin(), reports.end(), t) -
          reports.begin());
    row.fitted_cumulative = model.cumulative(t);
    row.fitted_rate = model.eval(t);
    rows.push_back(row);
  }
  return rows;
}

std::vector<DelayBacktestRow> quarterly_delay_backtest(
    const Portfolio& p, const CondDistModel& delay,
    const std::vector<std::pair<double, double>>& quarters) {
  std::vector<DelayBacktestRow> rows;
  rows.reserve(quarters.size());
  for (const auto& [lo, hi] : quarters) {
    DelayBacktestRow row;
    row.quarter_lo = lo;
    row.quarter_hi = hi;
    double observed_sum = 0.0, predicted_sum = 0.0;
    for (const auto& rec : p.records()) {
      if (rec.reporting_time < lo || rec.reporting_time >= hi) continue;
      ++row.claim_count;
      observed_sum += rec.reporting_delay();
      predicted_sum += delay.mean(rec.reporting_time);
    }
    if (row.claim_count > 0) {
      row.observed_mean_delay = observed_sum / row.claim_count;
      row.predicted_mean_delay = predicted_sum / row.claim_count;
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::pair<double, double>> calendar_quarters(CalendarDate origin,
                                                         double from_day,
                                                         double to_day) {
  if (to_day < from_day) throw InputError("quarter range end precedes start");
  std::vector<std::pair<double, double>> quarters;
  double cursor = from_day;
  for (int guard = 0; guard < 100000; ++guard) {
    auto [lo, hi] = quarter_bounds(cursor, origin);
    quarters.emplace_back(lo, hi);
    if (hi > to_day) break;
    cursor = hi;
  }
  return quarters;
}

IndependenceGrid independence_grid(const Portfolio& p,
                                   const CondDistModel& delay,
                                   const CondDistModel& amounts,
                                   int max_payments) {
  if (max_payments < 2)
    throw InputError("independence grid needs at least two payment columns");

  IndependenceGrid grid;
  grid.variables.push_back("W");
  for (int k = 1; k <= max_payments; ++k)
    grid.variables.push_back("X" + std::to_string(k));

  auto clamp_pit = [&grid](double u) {
    if (u < 1e-12 || u > 1.0 - 1e-12) {
      u = std::clamp(u, 1e-12, 1.0 - 1e-12);
      ++grid.clamped;
    }
    return std_normal_quantile(u);
  };

  for (const auto& rec : p.records()) {
    std::vector<std::optional<double>> row(grid.variables.size());
    row[0] = clamp_pit(delay.cdf(rec.reporting_delay(), rec.reporting_time));
    for (int k = 0; k < max_payments; ++k)
      if (static_cast<std::size_t>(k) < rec.payments.size())
        row[k + 1] = clamp_pit(
            amounts.cdf(rec.payments[k].amount, rec.reporting_time));
    grid.claim_ids.push_back(rec.claim_id);
    grid.transformed.push_back(std::move(row));
  }

  const std::size_t nvar = grid.variables.size();
  for (std::size_t a = 0; a < nvar; ++a)
    for (std::size_t b = a + 1; b < nvar; ++b) {
      IndependencePair pair;
      pair.var_a = grid.variables[a];
      pair.var_b = grid.variables[b];
      double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
      for (const auto& row : grid.transformed) {
        if (!row[a] || !row[b]) continue;
        const double x = *row[a], y = *row[b];
        ++pair.pair_count;
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
      }
      if (pair.pair_count >= 5) {
        const double n = static_cast<double>(pair.pair_count);
        const double cov = sxy / n - (sx / n) * (sy / n);
        const double vx = sxx / n - (sx / n) * (sx / n);
        const double vy = syy / n - (sy / n) * (sy / n);
        if (vx > 0.0 && vy > 0.0) {
          pair.correlation = cov / std::sqrt(vx * vy);
          pair.flagged = std::abs(*pair.correlation) > 3.0 / std::sqrt(n);
        }
      }
      grid.pairs.push_back(std::move(pair));
    }
  return grid;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  return out;
}

void print_number(std::ofstream& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  out << buf;
}

}  // namespace

void write_intensity_fit_csv(const std::vector<IntensityFitRow>& rows,
                             const std::string& path) {
  auto out = open_out(path);
  out << "t,observed_count,fitted_cumulative,fitted_rate,extrapolated\n";
  for (const auto& row : rows) {
    print_number(out, row.t);
    out << ',';
    if (row.observed_count) out << *row.observed_count;
    out << ',';
    print_number(out, row.fitted_cumulative);
    out << ',';
    print_number(out, row.fitted_rate);
    out << ',' << (row.extrapolated ? 1 : 0) << '\n';
  }
}

void write_delay_backtest_csv(const std::vector<DelayBacktestRow>& rows,
                              const std::string& path) {
  auto out = open_out(path);
  out << "quarter_lo,quarter_hi,claim_count,observed_mean_delay,"
         "predicted_mean_delay\n";
  for (const auto& row : rows) {
    print_number(out, row.quarter_lo);
    out << ',';
    print_number(out, row.quarter_hi);
    out << ',' << row.claim_count << ',';
    if (row.observed_mean_delay) print_number(out, *row.observed_mean_delay);
    out << ',';
    if (row.predicted_mean_delay) print_number(out, *row.predicted_mean_delay);
    out << '\n';
  }
}

void write_independence_csv(const IndependenceGrid& grid,
                            const std::string& samples_path,
                            const std::string& correlations_path) {
  {
    auto out = open_out(samples_path);
    out << "claim_id";
    for (const auto& var : grid.variables) out << ',' << var;
    out << '\n';
    for (std::size_t i = 0; i < grid.claim_ids.size(); ++i) {
      out << grid.claim_ids[i];
      for (const auto& cell : grid.transformed[i]) {
        out << ',';
        if (cell) print_number(out, *cell);
      }
      out << '\n';
    }
  }
  {
    auto out = open_out(correlations_path);
    out << "var_a,var_b,pair_count,correlation,flagged,insufficient\n";
    for (const auto& pair : grid.pairs) {
      out << pair.var_a << ',' << pair.var_b << ',' << pair.pair_count << ',';
      if (pair.correlation) print_number(out, *pair.correlation);
      out << ',' << (pair.flagged ? 1 : 0) << ','
          << (pair.pair_count < 5 ? 1 : 0) << '\n';
    }
  }
}

}  // namespace claimcast
