#include <cmath>
#include <vector>

#include "claimcast/claims_data.hpp"
#include "claimcast/errors.hpp"
#include "claimcast/forecast.hpp"
#include "claimcast/synth.hpp"
#include "doctest.h"

using namespace claimcast;

namespace {

const CalendarDate kOrigin = std::chrono::year{2020} / 1 / 1;

PredictiveDistribution dist_of(std::vector<double> totals) {
  PredictiveDistribution d;
  d.window_lo = 0.0;
  d.window_hi = 1.0;
  std::sort(totals.begin(), totals.end());
  d.totals = std::move(totals);
  return d;
}

}  // namespace

TEST_CASE("summary of small hand samples") {
  auto s = summarize(dist_of({1, 2, 3, 4, 5}));
  CHECK(s.mean == doctest::Approx(3.0));
  CHECK(s.median == doctest::Approx(3.0));

  auto flat = summarize(dist_of(std::vector<double>(8, 7.0)));
  CHECK(flat.mean == doctest::Approx(7.0));
  REQUIRE(flat.sd);
  CHECK(*flat.sd == doctest::Approx(0.0));
  REQUIRE(flat.cv);
  CHECK(*flat.cv == doctest::Approx(0.0));
  CHECK(flat.pct_lo == doctest::Approx(7.0));
  CHECK(flat.pct_hi == doctest::Approx(7.0));

  auto single = summarize(dist_of({4.0}));
  CHECK_FALSE(single.sd);
  CHECK_FALSE(single.cv);

  auto zero_mean = summarize(dist_of({0.0, 0.0}));
  CHECK_FALSE(zero_mean.cv);  // undefined at mean zero
}

TEST_CASE("percentile interpolation matches a direct order-statistic "
          "computation") {
  std::vector<double> grid(10000);
  for (int i = 0; i < 10000; ++i) grid[i] = i + 1.0;
  auto s = summarize(dist_of(grid));
  // direct type-7: h = (n-1)u = 9999 * 0.005 = 49.995 -> 50 + 0.995
  CHECK(s.pct_lo == doctest::Approx(50.995).epsilon(1e-12));
  CHECK(s.pct_hi == doctest::Approx(9950.005).epsilon(1e-12));
  CHECK(s.median == doctest::Approx(5000.5).epsilon(1e-12));

  // generic oracle on a random sorted sample
  RngStream rng(6);
  std::vector<double> sample(137);
  for (auto& v : sample) v = rng.uniform01() * 100.0;
  std::sort(sample.begin(), sample.end());
  for (double u : {0.005, 0.25, 0.5, 0.75, 0.995}) {
    const double h = (sample.size() - 1.0) * u;
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const double direct =
        sample[lo] + (h - lo) * (sample[lo + 1 < sample.size() ? lo + 1 : lo] -
                                 sample[lo]);
    CHECK(sorted_quantile(sample, u) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("summary ordering always holds") {
  RngStream rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> totals(50);
    for (auto& v : totals) v = rng.uniform01() * 1000.0;
    auto s = summarize(dist_of(totals));
    CHECK(s.pct_hi >= s.median);
    CHECK(s.median >= s.pct_lo);
  }
}

TEST_CASE("zero models give all-zero totals; one replicate is a point mass") {
  IntensityModel zero_rep(IntensityFamily::constant, {0.0});
  MarkIntensityModel zero_mark(MarkFamily::constant_mark, {0.0});
  auto amounts = CondDistModel::constant(CondDistFamily::lognormal, 0.0, 1.0);
  std::vector<ClaimRecord> recs{{"c1", "m", 0.0, 3.0, {}}};
  Portfolio p(recs, 10.0, kOrigin);

  auto d = predict_total(p, zero_rep, zero_mark, amounts, 20.0, 50,
                         RngStream(1));
  for (double v : d.totals) CHECK(v == 0.0);

  IntensityModel rep(IntensityFamily::constant, {0.5});
  MarkIntensityModel mark(MarkFamily::constant_mark, {0.1});
  auto point = predict_total(p, rep, mark, amounts, 20.0, 1, RngStream(2));
  CHECK(point.totals.size() == 1);
}

TEST_CASE("predictive mean matches the analytic expectation for constant "
          "models") {
  const double rep_rate = 0.2, mark_rate = 0.04, a = 20.0, b = 40.0;
  const double log_mean = 0.3, log_sd = 0.8;
  IntensityModel rep(IntensityFamily::constant, {rep_rate});
  MarkIntensityModel mark(MarkFamily::constant_mark, {mark_rate});
  auto amounts =
      CondDistModel::constant(CondDistFamily::lognormal, log_mean, log_sd);

  std::vector<ClaimRecord> recs;
  for (int i = 0; i < 8; ++i)
    recs.push_back({"c" + std::to_string(i), "m", 0.0, 2.0 * i + 1.0, {}});
  Portfolio p(recs, a, kOrigin);

  const double expected_payments =
      mark_rate * (b - a) * 8.0 + rep_rate * mark_rate * (b - a) * (b - a) / 2;
  const double expected_total =
      expected_payments * std::exp(log_mean + log_sd * log_sd / 2.0);

  auto d = predict_total(p, rep, mark, amounts, b, 10000, RngStream(99));
  auto s = summarize(d);
  const double se = *s.sd / std::sqrt(10000.0);
  CHECK(std::abs(s.mean - expected_total) <= 2.0 * se);
}

TEST_CASE("prediction is bit-identical across thread counts") {
  IntensityModel rep(IntensityFamily::exponential, {-1.0, 0.01});
  MarkIntensityModel mark(MarkFamily::exp_trend_periodic,
                          {-2.5, -0.01, 0.2, 0.1, 364.0});
  auto amounts = CondDistModel::constant(CondDistFamily::lognormal, 0.5, 0.6);
  std::vector<ClaimRecord> recs;
  for (int i = 0; i < 12; ++i)
    recs.push_back({"c" + std::to_string(i), "m", 0.0, 5.0 * i + 0.5, {}});
  Portfolio p(recs, 60.0, kOrigin);

  auto one = predict_total(p, rep, mark, amounts, 120.0, 200, RngStream(5), 1);
  auto eight =
      predict_total(p, rep, mark, amounts, 120.0, 200, RngStream(5), 8);
  REQUIRE(one.totals.size() == eight.totals.size());
  for (std::size_t i = 0; i < one.totals.size(); ++i)
    CHECK(one.totals[i] == eight.totals[i]);
}

TEST_CASE("displaced constant process keeps its rate") {
  IntensityModel rep(IntensityFamily::constant, {1.7});
  auto delay = CondDistModel::constant(CondDistFamily::lognormal, 2.0, 0.6);
  std::vector<double> grid{50.0, 120.0, 300.0};
  auto occ = occurrence_intensity(rep, delay, grid, 1000.0);
  for (double v : occ.values)
    CHECK(std::abs(v - 1.7) <= 1e-6 * 1.7);
}

TEST_CASE("a nearly degenerate delay shifts the intensity") {
  IntensityModel rep(IntensityFamily::exponential, {0.1, 0.01});
  const double shift = 30.0;
  auto delay = CondDistModel::constant(CondDistFamily::lognormal,
                                       std::log(shift), 1e-6);
  std::vector<double> grid{5.0, 25.0, 60.0};
  auto occ = occurrence_intensity(rep, delay, grid, 500.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double want = rep.eval(grid[i] + shift);
    CHECK(std::abs(occ.values[i] - want) <= 1e-3 * want);
  }
}

TEST_CASE("back-predicted counts are additive over bins") {
  IntensityModel rep(IntensityFamily::constant, {0.8});
  auto delay = CondDistModel::constant(CondDistFamily::lognormal, 1.5, 0.5);
  std::vector<std::pair<double, double>> split{{10, 20}, {20, 30}, {30, 40}};
  std::vector<std::pair<double, double>> whole{{10, 40}};
  auto parts = backpredict_counts(rep, delay, split, 1000.0);
  auto one = backpredict_counts(rep, delay, whole, 1000.0);
  CHECK(std::abs(parts[0] + parts[1] + parts[2] - one[0]) <=
        1e-4 * std::abs(one[0]));
  // interior constant case: rate times width per bin
  for (double c : parts) CHECK(std::abs(c - 8.0) <= 1e-4 * 8.0);
}

TEST_CASE("extrapolation beyond the horizon is flagged") {
  IntensityModel rep(IntensityFamily::constant, {1.0});
  auto delay = CondDistModel::constant(CondDistFamily::lognormal, 2.0, 0.6);
  // delays reach ~ exp(2 + 5.6*0.6) ~ 220 days; t near the horizon needs
  // reports beyond it, t far from the horizon does not
  auto occ = occurrence_intensity(rep, delay, {100.0, 995.0}, 1000.0);
  CHECK_FALSE(occ.extrapolated[0]);
  CHECK(occ.extrapolated[1]);

  auto capped =
      occurrence_intensity(rep, delay, {100.0, 995.0}, 1000.0, 1000.0);
  CHECK_FALSE(capped.extrapolated[1]);
  // capping at the horizon lowers the value near the boundary
  CHECK(capped.values[1] < occ.values[1]);
}

TEST_CASE("occurrence histogram of simulated data matches the integral") {
  // simulate reports + delays, histogram occurrence times, compare with
  // the displacement integral restricted to observed reports
  GroundTruth gt;
  gt.reporting = IntensityModel(IntensityFamily::constant, {30.0});
  gt.delay = CondDistModel(CondDistFamily::lognormal, 0, true, {1.2, 0.01},
                           {0.5, 0.0});
  gt.mark = MarkIntensityModel(MarkFamily::constant_mark, {0.0});
  gt.amounts = CondDistModel::constant(CondDistFamily::lognormal, 0.0, 1.0);
  gt.horizon_a = 400.0;
  gt.seed = 515;
  Portfolio p = generate(gt);
  REQUIRE(p.size() > 10000);

  std::vector<std::pair<double, double>> bins;
  for (int i = 0; i < 8; ++i) bins.emplace_back(40.0 * i + 20.0, 40.0 * i + 60.0);
  auto expected =
      backpredict_counts(gt.reporting, gt.delay, bins, gt.horizon_a,
                         gt.horizon_a);

  const double m = static_cast<double>(p.size());
  for (std::size_t bin = 0; bin < bins.size(); ++bin) {
    long observed = 0;
    for (const auto& rec : p.records()) {
      const double t = rec.occurrence_time;
      if (t >= bins[bin].first && t < bins[bin].second) ++observed;
    }
    const double prob = expected[bin] / m;
    const double sigma = std::sqrt(m * prob * (1.0 - prob));
    CHECK(std::abs(observed - expected[bin]) <= 4.0 * sigma);
  }
}
