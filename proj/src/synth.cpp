#include "claimcast/synth.hpp"

#include <cmath>
#include <cstdio>

#include "claimcast/errors.hpp"
#include "claimcast/rng.hpp"
#include "claimcast/simulate.hpp"

namespace claimcast {

namespace {

constexpr std::uint64_t kTagReporting = 11;
constexpr std::uint64_t kTagDelay = 12;
constexpr std::uint64_t kTagPayments = 13;
constexpr std::uint64_t kTagAmounts = 14;

// Simulates the full generative process on (0, until]: reporting times,
// per-claim delay, payment times, and amounts.
std::vector<ClaimRecord> simulate_claims(const GroundTruth& gt, double until) {
  RngStream root(gt.seed);
  SimulatedPath reports =
      sample_nhpp(gt.reporting, 0.0, until, root.derive(kTagReporting, 0));

  std::vector<ClaimRecord> claims;
  claims.reserve(reports.arrivals.size());
  for (std::size_t i = 0; i < reports.arrivals.size(); ++i) {
    const double z = reports.arrivals[i];
    ClaimRecord rec;
    char id[24];
    std::snprintf(id, sizeof id, "s%06zu", i + 1);
    rec.claim_id = id;
    rec.claim_type = "synthetic";
    rec.reporting_time = z;
    RngStream delay_rng = root.derive(kTagDelay, i);
    const double delay = gt.delay.sample(delay_rng, z);
    rec.occurrence_time = z - delay;  // may precede the origin

    if (z < until) {
      RngStream pay_rng = root.derive(kTagPayments, i);
      auto times = sample_nhpp(gt.mark, z, z, until, pay_rng).arrivals;
      RngStream amount_rng = root.derive(kTagAmounts, i);
      rec.payments.reserve(times.size());
      for (double t : times)
        rec.payments.push_back({t, gt.amounts.sample(amount_rng, z)});
    }
    claims.push_back(std::move(rec));
  }
  return claims;
}

}  // namespace

Portfolio generate(const GroundTruth& gt) {
  if (!(gt.horizon_a > 0.0))
    throw InputError("ground truth requires a positive horizon");
  return Portfolio(simulate_claims(gt, gt.horizon_a), gt.horizon_a, gt.origin);
}

HoldoutResult generate_holdout(const GroundTruth& gt, double b) {
  if (!(gt.horizon_a > 0.0))
    throw InputError("ground truth requires a positive horizon");
  if (b < gt.horizon_a)
    throw InputError("holdout end must not precede the horizon");

  auto full = simulate_claims(gt, b);

  HoldoutResult out;
  std::vector<ClaimRecord> observed;
  for (const ClaimRecord& rec : full) {
    for (const Payment& pay : rec.payments) {
      if (pay.time > gt.horizon_a && pay.time <= b) {
        out.realized_total += pay.amount;
        ++out.realized_payments;
      }
    }
    if (rec.reporting_time <= gt.horizon_a) {
      ClaimRecord kept = rec;
      std::erase_if(kept.payments, [&](const Payment& pay) {
        return pay.time > gt.horizon_a;
      });
      observed.push_back(std::move(kept));
    }
  }
  out.observed = Portfolio(std::move(observed), gt.horizon_a, gt.origin);
  return out;
}

}  // namespace claimcast
