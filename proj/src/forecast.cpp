#include "claimcast/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <thread>

#include "claimcast/errors.hpp"
#include "claimcast/quadrature.hpp"
#include "claimcast/simulate.hpp"
#include "optimizer.hpp"

namespace claimcast {

PredictiveDistribution predict_total(const Portfolio& p,
                                     const IntensityModel& reporting,
                                     const MarkIntensityModel& mark,
                                     const CondDistModel& amounts, double b,
                                     long sims, RngStream rng, int threads) {
  if (sims < 1) throw InputError("need at least one simulation replicate");
  if (!(b > p.horizon_a()))
    throw InputError("prediction window end must exceed the data horizon");

  PredictiveDistribution dist;
  dist.window_lo = p.horizon_a();
  dist.window_hi = b;
  dist.totals.assign(sims, 0.0);

  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run_replicate = [&](long s) {
    std::vector<double> amounts_flat;
    auto claims = sample_marked(reporting, mark, amounts, b, p,
                                rng.derive(static_cast<std::uint64_t>(s)));
    for (const auto& claim : claims)
      for (double x : claim.payment_amounts) amounts_flat.push_back(x);
    dist.totals[s] = detail::pairwise_sum(amounts_flat);
  };

  const int workers = std::max(1, threads);
  if (workers == 1) {
    for (long s = 0; s < sims; ++s) run_replicate(s);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (long s = w; s < sims; s += workers) run_replicate(s);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  std::sort(dist.totals.begin(), dist.totals.end());
  return dist;
}

double sorted_quantile(const std::vector<double>& sorted, double u) {
  if (sorted.empty()) throw InputError("quantile of an empty sample");
  if (sorted.size() == 1) return sorted[0];
  const double h = (static_cast<double>(sorted.size()) - 1.0) * u;
  const auto lo = static_cast<std::size_t>(
      std::clamp(std::floor(h), 0.0, double(sorted.size() - 2)));
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

DistributionSummary summarize(const PredictiveDistribution& d) {
  if (d.totals.empty()) throw InputError("summarize needs at least one total");
  DistributionSummary s;
  const double n = static_cast<double>(d.totals.size());
  s.mean = detail::pairwise_sum(d.totals) / n;
  s.median = sorted_quantile(d.totals, 0.5);
  s.pct_lo = sorted_quantile(d.totals, 0.005);
  s.pct_hi = sorted_quantile(d.totals, 0.995);
  if (d.totals.size() >= 2) {
    std::vector<double> sq;
    sq.reserve(d.totals.size());
    for (double v : d.totals) sq.push_back((v - s.mean) * (v - s.mean));
    s.sd = std::sqrt(detail::pairwise_sum(sq) / (n - 1.0));
    if (s.mean != 0.0) s.cv = *s.sd / s.mean;
  }
  return s;
}

namespace {

// a robust upper delay quantile across the z range, for truncating the
// displacement integral
double max_delay_quantile(const CondDistModel& delay, double horizon_a) {
  double q = 0.0;
  for (int i = 0; i <= 8; ++i)
    q = std::max(q, delay.quantile(1.0 - 1e-8, horizon_a * i / 8.0));
  return q;
}

// Displacement integrand: reporting rate at z times the delay density of
// z - t. The delay density can be arbitrarily concentrated, so the z-range
// splits at delay quantiles; a single adaptive pass over the whole range
// would never see a narrow spike between its nodes.
double displaced_rate(const IntensityModel& reporting,
                      const CondDistModel& delay, double t, double tail,
                      double rate_floor, std::optional<double> z_cap) {
  double z_lo = std::max(t, rate_floor);
  double z_hi = t + tail;
  if (z_cap) z_hi = std::min(z_hi, *z_cap);
  if (z_hi <= z_lo) return 0.0;

  static constexpr double kLevels[] = {1e-6, 1e-3, 0.01, 0.05, 0.25, 0.5,
                                       0.75, 0.95, 0.99,  0.999};
  std::vector<double> breaks{z_lo};
  const double q_ref = std::max(t, 0.0);
  for (double p : kLevels) {
    const double zb = t + delay.quantile(p, q_ref);
    if (zb > breaks.back() && zb < z_hi) breaks.push_back(zb);
  }
  breaks.push_back(z_hi);

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    total += integrate_value(
        [&](double z) { return reporting.eval(z) * delay.density(z - t, z); },
        breaks[i], breaks[i + 1], QuadratureOptions{1e-14, 1e-7, 4000});
  return total;
}

}  // namespace

OccurrenceIntensity occurrence_intensity(const IntensityModel& reporting,
                                         const CondDistModel& delay,
                                         const std::vector<double>& grid,
                                         double horizon_a,
                                         std::optional<double> z_cap) {
  OccurrenceIntensity out;
  out.grid = grid;
  out.values.reserve(grid.size());
  out.extrapolated.reserve(grid.size());

  const double tail = max_delay_quantile(delay, horizon_a);
  const double rate_floor =
      reporting.family() == IntensityFamily::log_periodic ? 1e-9 : 0.0;

  for (double t : grid) {
    out.values.push_back(
        displaced_rate(reporting, delay, t, tail, rate_floor, z_cap));
    const double z_hi = z_cap ? std::min(t + tail, *z_cap) : t + tail;
    out.extrapolated.push_back(z_hi > horizon_a);
  }
  return out;
}

std::vector<double> backpredict_counts(
    const IntensityModel& reporting, const CondDistModel& delay,
    const std::vector<std::pair<double, double>>& bins, double horizon_a,
    std::optional<double> z_cap) {
  const double tail = max_delay_quantile(delay, horizon_a);
  const double rate_floor =
      reporting.family() == IntensityFamily::log_periodic ? 1e-9 : 0.0;

  std::vector<double> counts;
  counts.reserve(bins.size());
  for (const auto& [lo, hi] : bins) {
    if (!(hi > lo)) throw InputError("backpredict bins need lo < hi");
    counts.push_back(integrate_value(
        [&](double t) {
          return displaced_rate(reporting, delay, t, tail, rate_floor, z_cap);
        },
        lo, hi, QuadratureOptions{1e-10, 1e-5, 600}));
  }
  return counts;
}

}  // namespace claimcast
