#ifndef CLAIMCAST_CLAIMS_DATA_HPP
#define CLAIMCAST_CLAIMS_DATA_HPP

#include <string>
#include <vector>

#include "claimcast/dates.hpp"

namespace claimcast {

struct Payment {
  double time;    // days since origin, >= reporting time
  double amount;  // > 0
};

// One claim: occurrence, reporting, and the observed payment stream.
// Times are fractional days since the portfolio origin.
struct ClaimRecord {
  std::string claim_id;
  std::string claim_type;
  double occurrence_time = 0.0;  // may be negative (occurred before origin)
  double reporting_time = 0.0;   // >= occurrence_time
  std::vector<Payment> payments;  // strictly increasing times, all >= reporting

  double reporting_delay() const { return reporting_time - occurrence_time; }
};

// Immutable collection of claims observed up to horizon_a, sorted by
// reporting time (ties broken by claim_id).
class Portfolio {
 public:
  Portfolio() = default;
  Portfolio(std::vector<ClaimRecord> records, double horizon_a,
            CalendarDate origin);

  const std::vector<ClaimRecord>& records() const { return records_; }
  double horizon_a() const { return horizon_a_; }
  CalendarDate origin_date() const { return origin_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  std::size_t total_payments() const;
  double total_paid() const;

 private:
  std::vector<ClaimRecord> records_;
  double horizon_a_ = 0.0;
  CalendarDate origin_ = std::chrono::year{2000} / 1 / 1;
};

// Reads the one-row-per-payment CSV format. horizon_a defaults to the
// largest observed date in the file (0 for an empty file) unless
// horizon_override >= 0 is given.
Portfolio load_csv(const std::string& path, CalendarDate origin,
                   double horizon_override = -1.0);

void write_csv(const Portfolio& p, const std::string& path);

// Drops claims reported after `a` and payments made after `a`; the result
// has horizon_a = a.
Portfolio truncate(const Portfolio& p, double a);

// M(t) at each grid point: the number of claims with reporting time <= t.
// Grid must be nondecreasing and within [0, horizon_a].
std::vector<long> counting_path(const Portfolio& p,
                                const std::vector<double>& grid);

}  // namespace claimcast

#endif  // CLAIMCAST_CLAIMS_DATA_HPP
