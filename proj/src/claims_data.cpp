#include "claimcast/claims_data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "claimcast/errors.hpp"

namespace claimcast {

namespace {

constexpr const char* kHeader =
    "claim_id,claim_type,occurrence_date,reporting_date,payment_date,"
    "payment_amount";

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

void validate_record(const ClaimRecord& rec) {
  if (rec.occurrence_time > rec.reporting_time)
    throw ValidationError("claim '" + rec.claim_id +
                          "': reporting time precedes occurrence time");
  double prev = -std::numeric_limits<double>::infinity();
  for (const Payment& pay : rec.payments) {
    if (pay.time < rec.reporting_time)
      throw ValidationError("claim '" + rec.claim_id +
                            "': payment precedes reporting time");
    if (pay.time <= prev)
      throw ValidationError("claim '" + rec.claim_id +
                            "': payment times not strictly increasing");
    if (!(pay.amount > 0.0))
      throw ValidationError("claim '" + rec.claim_id +
                            "': non-positive payment amount");
    prev = pay.time;
  }
}

}  // namespace

Portfolio::Portfolio(std::vector<ClaimRecord> records, double horizon_a,
                     CalendarDate origin)
    : records_(std::move(records)), horizon_a_(horizon_a), origin_(origin) {
  for (ClaimRecord& rec : records_) {
    std::sort(rec.payments.begin(), rec.payments.end(),
              [](const Payment& a, const Payment& b) { return a.time < b.time; });
    validate_record(rec);
    if (rec.reporting_time > horizon_a_)
      throw ValidationError("claim '" + rec.claim_id +
                            "' reported after the observation horizon");
    if (!rec.payments.empty() && rec.payments.back().time > horizon_a_)
      throw ValidationError("claim '" + rec.claim_id +
                            "' has a payment after the observation horizon");
  }
  std::sort(records_.begin(), records_.end(),
            [](const ClaimRecord& a, const ClaimRecord& b) {
              if (a.reporting_time != b.reporting_time)
                return a.reporting_time < b.reporting_time;
              return a.claim_id < b.claim_id;
            });
}

std::size_t Portfolio::total_payments() const {
  std::size_t n = 0;
  for (const auto& rec : records_) n += rec.payments.size();
  return n;
}

double Portfolio::total_paid() const {
  double sum = 0.0;
  for (const auto& rec : records_)
    for (const auto& pay : rec.payments) sum += pay.amount;
  return sum;
}

Portfolio load_csv(const std::string& path, CalendarDate origin,
                   double horizon_override) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw InputError("'" + path + "' is empty");
  {
    auto fields = split_fields(line);
    std::string joined;
    for (std::size_t i = 0; i < fields.size(); ++i)
      joined += (i ? "," : "") + fields[i];
    if (joined != kHeader)
      throw ParseError("unexpected header, want '" + std::string(kHeader) + "'",
                       1);
  }

  // keyed by claim_id; insertion order does not matter, Portfolio re-sorts
  std::map<std::string, ClaimRecord> by_id;
  double max_time = 0.0;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_fields(line);
    if (fields.size() != 6)
      throw ParseError("expected 6 fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    double occ, rep;
    try {
      occ = parse_time_point(fields[2], origin);
      rep = parse_time_point(fields[3], origin);
    } catch (const InputError& e) {
      throw ParseError(e.what(), line_no);
    }
    const std::string& id = fields[0];
    if (id.empty()) throw ParseError("empty claim_id", line_no);

    auto [it, inserted] = by_id.try_emplace(id);
    ClaimRecord& rec = it->second;
    if (inserted) {
      rec.claim_id = id;
      rec.claim_type = fields[1];
      rec.occurrence_time = occ;
      rec.reporting_time = rep;
    } else if (rec.occurrence_time != occ || rec.reporting_time != rep ||
               rec.claim_type != fields[1]) {
      throw ValidationError("claim '" + id +
                            "': rows disagree on claim attributes");
    }

    bool has_date = !fields[4].empty();
    bool has_amount = !fields[5].empty();
    if (has_date != has_amount)
      throw ParseError("payment_date and payment_amount must both be set or "
                       "both be empty",
                       line_no);
    if (has_date) {
      Payment pay;
      try {
        pay.time = parse_time_point(fields[4], origin);
      } catch (const InputError& e) {
        throw ParseError(e.what(), line_no);
      }
      char* end = nullptr;
      pay.amount = std::strtod(fields[5].c_str(), &end);
      if (end == fields[5].c_str() || *end != '\0')
        throw ParseError("bad payment_amount '" + fields[5] + "'", line_no);
      rec.payments.push_back(pay);
      max_time = std::max(max_time, pay.time);
    }
    max_time = std::max(max_time, rep);
  }

  std::vector<ClaimRecord> records;
  records.reserve(by_id.size());
  for (auto& [id, rec] : by_id) records.push_back(std::move(rec));

  double horizon = horizon_override >= 0.0 ? horizon_override : max_time;
  return Portfolio(std::move(records), horizon, origin);
}

void write_csv(const Portfolio& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << kHeader << "\n";
  char buf[64];
  for (const ClaimRecord& rec : p.records()) {
    std::string prefix = rec.claim_id + "," + rec.claim_type + "," +
                         format_time_point(rec.occurrence_time, p.origin_date()) +
                         "," +
                         format_time_point(rec.reporting_time, p.origin_date());
    if (rec.payments.empty()) {
      out << prefix << ",,\n";
      continue;
    }
    for (const Payment& pay : rec.payments) {
      std::snprintf(buf, sizeof buf, "%.9f", pay.amount);
      out << prefix << ','
          << format_time_point(pay.time, p.origin_date()) << ',' << buf
          << "\n";
    }
  }
  if (!out) throw InputError("failed writing '" + path + "'");
}

Portfolio truncate(const Portfolio& p, double a) {
  if (a < 0.0) throw InputError("truncation horizon must be >= 0");
  std::vector<ClaimRecord> kept;
  for (const ClaimRecord& rec : p.records()) {
    if (rec.reporting_time > a) continue;
    ClaimRecord copy = rec;
    std::erase_if(copy.payments,
                  [a](const Payment& pay) { return pay.time > a; });
    kept.push_back(std::move(copy));
  }
  return Portfolio(std::move(kept), a, p.origin_date());
}

std::vector<long> counting_path(const Portfolio& p,
                                const std::vector<double>& grid) {
  std::vector<double> reporting;
  reporting.reserve(p.size());
  for (const auto& rec : p.records()) reporting.push_back(rec.reporting_time);

  std::vector<long> counts;
  counts.reserve(grid.size());
  double prev = -std::numeric_limits<double>::infinity();
  for (double t : grid) {
    if (t < prev) throw InputError("counting_path grid must be nondecreasing");
    if (t > p.horizon_a() + 1e-9)
      throw InputError("counting_path grid point beyond horizon_a");
    prev = t;
    counts.push_back(static_cast<long>(
        std::upper_bound(reporting.begin(), reporting.end(), t) -
        reporting.begin()));
  }
  return counts;
}

}  // namespace claimcast
