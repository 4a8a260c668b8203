#include "claimcast/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "claimcast/errors.hpp"

namespace claimcast {

namespace {

// stream-purpose tags for derived substreams
constexpr std::uint64_t kTagReporting = 1;
constexpr std::uint64_t kTagPayments = 2;
constexpr std::uint64_t kTagAmounts = 3;

}  // namespace

void NhppSampler::build_cells(
    int max_cells, const std::function<double(double, double)>& bound_fn) {
  if (!(lo_ < hi_)) throw InputError("sampling window requires lo < hi");
  if (max_cells < 1) max_cells = 1;
  cells_.reserve(max_cells);
  for (int i = 0; i < max_cells; ++i) {
    Cell cell;
    cell.lo = lo_ + (hi_ - lo_) * i / max_cells;
    cell.hi = lo_ + (hi_ - lo_) * (i + 1) / max_cells;
    cell.bound = bound_fn(cell.lo, cell.hi);
    if (!std::isfinite(cell.bound) || cell.bound < 0.0)
      throw NumericalError("non-finite thinning bound on sampling window");
    cells_.push_back(cell);
  }
}

NhppSampler::NhppSampler(const IntensityModel& model, double lo, double hi,
                         int max_cells)
    : rate_([model](double t) { return model.eval(t); }), lo_(lo), hi_(hi) {
  // a constant rate needs no cell splitting; its bound is exact
  if (model.family() == IntensityFamily::constant) max_cells = 1;
  build_cells(max_cells, [&model](double a, double b) {
    return model.upper_bound(a, b);
  });
}

NhppSampler::NhppSampler(const MarkIntensityModel& model, double z, double lo,
                         double hi, int max_cells)
    : rate_([model, z](double tau) { return model.eval(tau, z); }),
      lo_(lo),
      hi_(hi) {
  if (model.family() == MarkFamily::constant_mark) max_cells = 1;
  build_cells(max_cells, [&model, z](double a, double b) {
    return model.upper_bound(a, b, z);
  });
}

SimulatedPath NhppSampler::sample(RngStream& rng) const {
  SimulatedPath path{lo_, hi_, {}};
  for (const Cell& cell : cells_) {
    if (cell.bound <= 0.0) continue;
    double t = cell.lo;
    while (true) {
      t += rng.exponential(cell.bound);
      if (t > cell.hi) break;
      const double rate = rate_(t);
      if (!(rate <= cell.bound * (1.0 + 1e-9))) {
        std::ostringstream msg;
        msg << "thinning majorant violated: rate " << rate << " > bound "
            << cell.bound << " at t = " << t;
        throw MajorantViolation(msg.str());
      }
      if (rng.uniform01() * cell.bound <= rate) path.arrivals.push_back(t);
    }
  }
  return path;
}

SimulatedPath sample_nhpp(const IntensityModel& model, double lo, double hi,
                          RngStream rng) {
  return NhppSampler(model, lo, hi).sample(rng);
}

SimulatedPath sample_nhpp(const MarkIntensityModel& model, double z, double lo,
                          double hi, RngStream rng) {
  return NhppSampler(model, z, lo, hi).sample(rng);
}

std::vector<SimulatedClaim> sample_marked(const IntensityModel& reporting,
                                          const MarkIntensityModel& mark,
                                          const CondDistModel& amounts,
                                          double b, const Portfolio& existing,
                                          RngStream rng) {
  const double a = existing.horizon_a();
  if (!(b > a)) throw InputError("prediction window end must exceed horizon_a");

  std::vector<SimulatedClaim> out;

  // new reporting times on (a, b]
  RngStream reporting_rng = rng.derive(kTagReporting, 0);
  SimulatedPath new_reports = sample_nhpp(reporting, a, b, reporting_rng);

  // future payments of already reported claims
  const auto& records = existing.records();
  for (std::size_t i = 0; i < records.size(); ++i) {
    SimulatedClaim claim;
    claim.source_index = static_cast<long>(i);
    claim.claim_id = records[i].claim_id;
    claim.reporting_time = records[i].reporting_time;
    RngStream pay_rng = rng.derive(kTagPayments, i);
    claim.payment_times =
        sample_nhpp(mark, claim.reporting_time, a, b, pay_rng).arrivals;
    RngStream amount_rng = rng.derive(kTagAmounts, i);
    claim.payment_amounts.reserve(claim.payment_times.size());
    for (std::size_t j = 0; j < claim.payment_times.size(); ++j)
      claim.payment_amounts.push_back(
          amounts.sample(amount_rng, claim.reporting_time));
    out.push_back(std::move(claim));
  }

  // newly reported claims and their payments; the payment rate vanishes
  // before the reporting time, so sampling starts there
  for (std::size_t j = 0; j < new_reports.arrivals.size(); ++j) {
    const std::uint64_t ordinal = records.size() + j;
    SimulatedClaim claim;
    claim.source_index = -1;
    char id[24];
    std::snprintf(id, sizeof id, "sim%06zu", j + 1);
    claim.claim_id = id;
    claim.reporting_time = new_reports.arrivals[j];
    RngStream pay_rng = rng.derive(kTagPayments, ordinal);
    if (claim.reporting_time < b)
      claim.payment_times =
          sample_nhpp(mark, claim.reporting_time, claim.reporting_time, b,
                      pay_rng)
              .arrivals;
    RngStream amount_rng = rng.derive(kTagAmounts, ordinal);
    claim.payment_amounts.reserve(claim.payment_times.size());
    for (std::size_t k = 0; k < claim.payment_times.size(); ++k)
      claim.payment_amounts.push_back(
          amounts.sample(amount_rng, claim.reporting_time));
    out.push_back(std::move(claim));
  }
  return out;
}

}  // namespace claimcast
