#ifndef CLAIMCAST_SYNTH_HPP
#define CLAIMCAST_SYNTH_HPP

#include <cstdint>

#include "claimcast/claims_data.hpp"
#include "claimcast/cond_dist.hpp"
#include "claimcast/intensity.hpp"

namespace claimcast {

// Fully specified generative model: the test oracle. Reporting times come
// from `reporting` on (0, horizon_a]; each claim draws a delay from `delay`
// at its reporting time (occurrence = reporting - delay, possibly before
// day zero), payment times from `mark`, and amounts from `amounts`.
struct GroundTruth {
  IntensityModel reporting;
  CondDistModel delay;
  MarkIntensityModel mark;
  CondDistModel amounts;
  double horizon_a = 0.0;
  std::uint64_t seed = 0;
  CalendarDate origin = std::chrono::year{2000} / 1 / 1;
};

// Simulates the full process on (0, horizon_a] and returns it truncated at
// the horizon, mimicking observed data.
Portfolio generate(const GroundTruth& gt);

struct HoldoutResult {
  Portfolio observed;            // truncated at gt.horizon_a
  double realized_total = 0.0;   // paid in (horizon_a, b], all claims
  long realized_payments = 0;
};

// Simulates out to b > horizon_a; the observed part is what a fit sees and
// the realized total is the prediction target it should cover.
HoldoutResult generate_holdout(const GroundTruth& gt, double b);

}  // namespace claimcast

#endif  // CLAIMCAST_SYNTH_HPP
