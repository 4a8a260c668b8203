#ifndef CLAIMCAST_DATES_HPP
#define CLAIMCAST_DATES_HPP

#include <chrono>
#include <string>

namespace claimcast {

using CalendarDate = std::chrono::year_month_day;

// Parses "YYYY-MM-DD"; throws InputError on anything else.
CalendarDate parse_date(const std::string& text);

// Parses "YYYY-MM-DD" or "YYYY-MM-DDTHH:MM:SS[.ffffff]" into fractional
// days since `origin`. A bare date lands on the day midpoint (+0.0 days).
double parse_time_point(const std::string& text, CalendarDate origin);

// Inverse of parse_time_point. Whole days render as bare dates; fractional
// times render as timestamps with microsecond resolution.
std::string format_time_point(double days, CalendarDate origin);

std::string format_date(CalendarDate date);

// Days from origin to the start of the calendar quarter containing
// origin+days, and to the start of the following quarter.
std::pair<double, double> quarter_bounds(double days, CalendarDate origin);

}  // namespace claimcast

#endif  // CLAIMCAST_DATES_HPP
