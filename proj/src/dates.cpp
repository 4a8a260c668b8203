#include "claimcast/dates.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "claimcast/errors.hpp"

namespace claimcast {

namespace {

std::chrono::sys_days to_sys_days(CalendarDate d) {
  return std::chrono::sys_days{d};
}

bool all_digits(const std::string& s, size_t lo, size_t hi) {
  if (hi > s.size()) return false;
  for (size_t i = lo; i < hi; ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

}  // namespace

CalendarDate parse_date(const std::string& text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
      !all_digits(text, 0, 4) || !all_digits(text, 5, 7) ||
      !all_digits(text, 8, 10)) {
    throw InputError("expected ISO-8601 date (YYYY-MM-DD), got '" + text + "'");
  }
  int y = std::atoi(text.substr(0, 4).c_str());
  unsigned m = static_cast<unsigned>(std::atoi(text.substr(5, 2).c_str()));
  unsigned d = static_cast<unsigned>(std::atoi(text.substr(8, 2).c_str()));
  CalendarDate date = std::chrono::year{y} / m / d;
  if (!date.ok()) throw InputError("invalid calendar date '" + text + "'");
  return date;
}

double parse_time_point(const std::string& text, CalendarDate origin) {
  std::string date_part = text.substr(0, 10);
  CalendarDate date = parse_date(date_part);
  double day = static_cast<double>(
      (to_sys_days(date) - to_sys_days(origin)).count());
  if (text.size() == 10) return day;

  if (text.size() < 19 || text[10] != 'T' || text[13] != ':' ||
      text[16] != ':' || !all_digits(text, 11, 13) ||
      !all_digits(text, 14, 16) || !all_digits(text, 17, 19)) {
    throw InputError("expected timestamp YYYY-MM-DDTHH:MM:SS[.ffffff], got '" +
                     text + "'");
  }
  int hh = std::atoi(text.substr(11, 2).c_str());
  int mm = std::atoi(text.substr(14, 2).c_str());
  int ss = std::atoi(text.substr(17, 2).c_str());
  double frac = 0.0;
  if (text.size() > 19) {
    if (text[19] != '.' || text.size() == 20 ||
        !all_digits(text, 20, text.size()))
      throw InputError("bad fractional seconds in '" + text + "'");
    frac = std::atof(("0" + text.substr(19)).c_str());
  }
  if (hh > 23 || mm > 59 || ss > 60)
    throw InputError("time of day out of range in '" + text + "'");
  return day + ((hh * 3600.0 + mm * 60.0 + ss + frac) / 86400.0);
}

std::string format_date(CalendarDate date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(date.year()),
                unsigned(date.month()), unsigned(date.day()));
  return buf;
}

std::string format_time_point(double days, CalendarDate origin) {
  double whole = std::floor(days);
  double frac = days - whole;
  auto date = CalendarDate{to_sys_days(origin) +
                           std::chrono::days{static_cast<long>(whole)}};
  if (frac == 0.0) return format_date(date);
  // round to whole microseconds of the day
  long long usec = std::llround(frac * 86400.0 * 1e6);
  if (usec >= 86400000000LL) {  // rounded up to next midnight
    usec = 0;
    date = CalendarDate{to_sys_days(date) + std::chrono::days{1}};
  }
  long long sec = usec / 1000000;
  usec %= 1000000;
  int hh = static_cast<int>(sec / 3600);
  int mm = static_cast<int>((sec / 60) % 60);
  int ss = static_cast<int>(sec % 60);
  char buf[40];
  if (usec == 0)
    std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02d",
                  format_date(date).c_str(), hh, mm, ss);
  else
    std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02d.%06lld",
                  format_date(date).c_str(), hh, mm, ss, usec);
  return buf;
}

std::pair<double, double> quarter_bounds(double days, CalendarDate origin) {
  auto sys = to_sys_days(origin) +
             std::chrono::days{static_cast<long>(std::floor(days))};
  CalendarDate date{sys};
  unsigned m = unsigned(date.month());
  unsigned q_start_month = 1 + 3 * ((m - 1) / 3);
  CalendarDate q_start = date.year() / q_start_month / 1;
  CalendarDate q_next = (q_start_month == 10)
                            ? CalendarDate{(date.year() + std::chrono::years{1}) / 1 / 1}
                            : CalendarDate{date.year() / (q_start_month + 3) / 1};
  auto o = to_sys_days(origin);
  return {static_cast<double>((to_sys_days(q_start) - o).count()),
          static_cast<double>((to_sys_days(q_next) - o).count())};
}

}  // namespace claimcast
