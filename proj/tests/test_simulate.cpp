#include <cmath>
#include <memory>
#include <vector>

#include "claimcast/claims_data.hpp"
#include "claimcast/errors.hpp"
#include "claimcast/simulate.hpp"
#include "doctest.h"

using namespace claimcast;

namespace {

const CalendarDate kOrigin = std::chrono::year{2020} / 1 / 1;

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / (static_cast<double>(v.size()) - 1.0));
}

}  // namespace

TEST_CASE("zero intensity produces an empty path") {
  CustomIntensityHooks hooks;
  hooks.eval = [](double, std::span<const double>) { return 0.0; };
  auto zero = IntensityModel::custom(hooks, {});
  auto path = sample_nhpp(zero, 0.0, 10.0, RngStream(1));
  CHECK(path.arrivals.empty());

  IntensityModel zero_constant(IntensityFamily::constant, {0.0});
  CHECK(sample_nhpp(zero_constant, 0.0, 10.0, RngStream(1)).arrivals.empty());
}

TEST_CASE("identical seeds reproduce paths; different streams differ") {
  IntensityModel m(IntensityFamily::exponential, {0.5, 0.01});
  auto a = sample_nhpp(m, 0.0, 50.0, RngStream(42, 7));
  auto b = sample_nhpp(m, 0.0, 50.0, RngStream(42, 7));
  CHECK(a.arrivals == b.arrivals);
  auto c = sample_nhpp(m, 0.0, 50.0, RngStream(42, 8));
  CHECK(a.arrivals != c.arrivals);
}

TEST_CASE("arrivals are strictly increasing within the window") {
  IntensityModel m(IntensityFamily::log_periodic, {1.0, 0.3, 0.4, -0.2, 14.0});
  auto path = sample_nhpp(m, 0.5, 60.0, RngStream(5));
  REQUIRE(!path.arrivals.empty());
  double prev = 0.5;
  for (double t : path.arrivals) {
    CHECK(t > prev);
    CHECK(t <= 60.0);
    prev = t;
  }
}

TEST_CASE("constant intensity accepts every proposal") {
  // with rate == bound the thinning test is u <= 1, so the arrival count
  // equals the raw proposal count of a homogeneous process
  IntensityModel m(IntensityFamily::constant, {2.0});
  NhppSampler sampler(m, 0.0, 25.0);
  long total = 0;
  const int reps = 4000;
  RngStream rng(99);
  for (int r = 0; r < reps; ++r)
    total += static_cast<long>(sampler.sample(rng).arrivals.size());
  const double mean = static_cast<double>(total) / reps;
  CHECK(std::abs(mean - 50.0) <= 3.0 * std::sqrt(50.0 / reps));
}

TEST_CASE("thinned counts match the cumulative intensity in expectation") {
  IntensityModel m(IntensityFamily::exponential, {0.1, 0.001});
  const double expected = m.cumulative(100.0);
  NhppSampler sampler(m, 0.0, 100.0);
  RngStream rng(1234);
  const int reps = 10000;
  long total = 0;
  for (int r = 0; r < reps; ++r)
    total += static_cast<long>(sampler.sample(rng).arrivals.size());
  const double mean = static_cast<double>(total) / reps;
  CHECK(std::abs(mean - expected) <= 3.0 * std::sqrt(expected / reps));
}

TEST_CASE("a rate exceeding its majorant aborts rather than biasing") {
  // the hook lies: it reports a low rate while the bound is computed, then
  // spikes during sampling
  auto lying = std::make_shared<bool>(false);
  CustomIntensityHooks hooks;
  hooks.eval = [lying](double, std::span<const double>) {
    return *lying ? 10.0 : 1.0;
  };
  auto m = IntensityModel::custom(hooks, {});
  NhppSampler sampler(m, 0.0, 50.0);
  *lying = true;
  RngStream rng(3);
  CHECK_THROWS_AS(sampler.sample(rng), MajorantViolation);
}

TEST_CASE("superposition: sampling a summed rate matches merged samples") {
  IntensityModel m1(IntensityFamily::exponential, {0.2, 0.01});
  IntensityModel m2(IntensityFamily::constant, {1.5});
  CustomIntensityHooks hooks;
  hooks.eval = [&](double t, std::span<const double>) {
    return m1.eval(t) + m2.eval(t);
  };
  auto summed = IntensityModel::custom(hooks, {});

  const double lo = 0.0, hi = 40.0;
  const int reps = 10000;
  NhppSampler sum_sampler(summed, lo, hi);
  NhppSampler s1(m1, lo, hi);
  NhppSampler s2(m2, lo, hi);

  long sum_counts[2] = {0, 0}, merged_counts[2] = {0, 0};
  RngStream rng_sum(777), rng_a(778), rng_b(779);
  for (int r = 0; r < reps; ++r) {
    for (double t : sum_sampler.sample(rng_sum).arrivals)
      ++sum_counts[t > 20.0 ? 1 : 0];
    for (double t : s1.sample(rng_a).arrivals)
      ++merged_counts[t > 20.0 ? 1 : 0];
    for (double t : s2.sample(rng_b).arrivals)
      ++merged_counts[t > 20.0 ? 1 : 0];
  }
  for (int bin = 0; bin < 2; ++bin) {
    const double mean_sum = double(sum_counts[bin]) / reps;
    const double mean_merged = double(merged_counts[bin]) / reps;
    const double sigma = std::sqrt((mean_sum + mean_merged) / reps);
    CHECK(std::abs(mean_sum - mean_merged) <= 3.0 * sigma);
  }
}

TEST_CASE("marked sampling with zero rates yields nothing") {
  IntensityModel zero_rep(IntensityFamily::constant, {0.0});
  MarkIntensityModel zero_mark(MarkFamily::constant_mark, {0.0});
  auto amounts = CondDistModel::constant(CondDistFamily::lognormal, 0.0, 1.0);
  std::vector<ClaimRecord> recs{{"c1", "m", 0.0, 3.0, {}}};
  Portfolio existing(recs, 10.0, kOrigin);
  auto claims = sample_marked(zero_rep, zero_mark, amounts, 20.0, existing,
                              RngStream(1));
  REQUIRE(claims.size() == 1);  // the existing claim, with no new payments
  CHECK(claims[0].payment_times.empty());
}

TEST_CASE("an empty portfolio still gets newly reported claims") {
  IntensityModel rep(IntensityFamily::constant, {0.5});
  MarkIntensityModel mark(MarkFamily::constant_mark, {0.2});
  auto amounts = CondDistModel::constant(CondDistFamily::lognormal, 0.0, 0.5);
  Portfolio existing({}, 10.0, kOrigin);
  auto claims =
      sample_marked(rep, mark, amounts, 30.0, existing, RngStream(21));
  REQUIRE(!claims.empty());
  for (const auto& claim : claims) {
    CHECK(claim.source_index == -1);
    CHECK(claim.reporting_time > 10.0);
    CHECK(claim.reporting_time <= 30.0);
    CHECK(claim.payment_times.size() == claim.payment_amounts.size());
    for (double t : claim.payment_times) {
      CHECK(t > claim.reporting_time);
      CHECK(t <= 30.0);
    }
    for (double x : claim.payment_amounts) CHECK(x > 0.0);
  }
}

TEST_CASE("expected simulated payment count matches the analytic formula") {
  // constant rates: old claims contribute mark_rate * (b-a) each; new
  // claims arrive at rate rep_rate and pay for half the window on average
  const double rep_rate = 0.3, mark_rate = 0.05, a = 10.0, b = 18.0;
  IntensityModel rep(IntensityFamily::constant, {rep_rate});
  MarkIntensityModel mark(MarkFamily::constant_mark, {mark_rate});
  auto amounts = CondDistModel::constant(CondDistFamily::lognormal, 0.0, 1.0);

  std::vector<ClaimRecord> recs;
  for (int i = 1; i <= 5; ++i)
    recs.push_back({"c" + std::to_string(i), "m", 0.0, double(i), {}});
  Portfolio existing(recs, a, kOrigin);

  const double expected = mark_rate * (b - a) * 5.0 +
                          rep_rate * mark_rate * (b - a) * (b - a) / 2.0;
  const int reps = 5000;
  std::vector<double> counts;
  counts.reserve(reps);
  RngStream rng(4711);
  for (int r = 0; r < reps; ++r) {
    long n = 0;
    for (const auto& claim :
         sample_marked(rep, mark, amounts, b, existing, rng.derive(r)))
      n += static_cast<long>(claim.payment_times.size());
    counts.push_back(static_cast<double>(n));
  }
  const double se = sd_of(counts) / std::sqrt(double(reps));
  CHECK(std::abs(mean_of(counts) - expected) <= 3.0 * se);
}

TEST_CASE("marked sampling is invariant to how the parent stream was used") {
  IntensityModel rep(IntensityFamily::constant, {0.4});
  MarkIntensityModel mark(MarkFamily::constant_mark, {0.1});
  auto amounts = CondDistModel::constant(CondDistFamily::lognormal, 0.5, 0.7);
  std::vector<ClaimRecord> recs{{"c1", "m", 0.0, 2.0, {}},
                                {"c2", "m", 0.0, 7.0, {}}};
  Portfolio existing(recs, 12.0, kOrigin);

  RngStream fresh(2025, 3);
  auto first = sample_marked(rep, mark, amounts, 25.0, existing, fresh);
  RngStream consumed(2025, 3);
  for (int i = 0; i < 1000; ++i) consumed.next_u64();  // parent draws
  auto second = sample_marked(rep, mark, amounts, 25.0, existing, consumed);
  REQUIRE(first.size() == second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].reporting_time == second[i].reporting_time);
    CHECK(first[i].payment_times == second[i].payment_times);
    CHECK(first[i].payment_amounts == second[i].payment_amounts);
  }
}
