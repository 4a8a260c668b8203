#ifndef CLAIMCAST_SIMULATE_HPP
#define CLAIMCAST_SIMULATE_HPP

#include <string>
#include <vector>

#include "claimcast/claims_data.hpp"
#include "claimcast/cond_dist.hpp"
#include "claimcast/intensity.hpp"
#include "claimcast/rng.hpp"

namespace claimcast {

struct SimulatedPath {
  double lo = 0.0, hi = 0.0;
  std::vector<double> arrivals;  // strictly increasing, within (lo, hi]
};

// Lewis-Shedler thinning with a piecewise majorant: the window splits into
// up to max_cells equal cells, each bounded separately, which keeps the
// rejection rate low for strongly varying rates. Every proposal asserts
// rate <= bound and aborts the replicate on violation.
class NhppSampler {
 public:
  NhppSampler(const IntensityModel& model, double lo, double hi,
              int max_cells = 32);
  NhppSampler(const MarkIntensityModel& model, double z, double lo, double hi,
              int max_cells = 32);

  SimulatedPath sample(RngStream& rng) const;
  double window_lo() const { return lo_; }
  double window_hi() const { return hi_; }

 private:
  struct Cell {
    double lo, hi, bound;
  };
  void build_cells(int max_cells,
                   const std::function<double(double, double)>& bound_fn);

  std::function<double(double)> rate_;
  double lo_ = 0.0, hi_ = 0.0;
  std::vector<Cell> cells_;
};

SimulatedPath sample_nhpp(const IntensityModel& model, double lo, double hi,
                          RngStream rng);
SimulatedPath sample_nhpp(const MarkIntensityModel& model, double z, double lo,
                          double hi, RngStream rng);

// One simulated claim trajectory on a future window: either the future
// payments of an existing claim (source_index >= 0) or a newly reported
// claim (source_index == -1).
struct SimulatedClaim {
  long source_index = -1;
  std::string claim_id;
  double reporting_time = 0.0;
  std::vector<double> payment_times;
  std::vector<double> payment_amounts;
};

// Simulates the marked process on (a, b]: new reporting times from
// `reporting`, future payment times for every existing and new claim from
// `mark` conditioned on each claim's reporting time, and payment amounts
// from `amounts`. Streams derive from (purpose, claim ordinal) so the
// loops may run in any order.
std::vector<SimulatedClaim> sample_marked(const IntensityModel& reporting,
                                          const MarkIntensityModel& mark,
                                          const CondDistModel& amounts,
                                          double b, const Portfolio& existing,
                                          RngStream rng);

}  // namespace claimcast

#endif  // CLAIMCAST_SIMULATE_HPP
