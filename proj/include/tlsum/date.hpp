#pragma once

#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace tlsum {

// Calendar date with whole-day arithmetic.
class Date {
 public:
  constexpr Date() = default;
  explicit Date(std::chrono::sys_days days) : days_(days.time_since_epoch().count()) {}

  // Strict yyyy-mm-dd; returns nullopt for malformed or impossible dates.
  static std::optional<Date> parse(std::string_view text);
  // Throws Error(kInvalidDate).
  static Date from_string(std::string_view text);
  static Date from_ymd(int year, unsigned month, unsigned day);

  std::string to_string() const;
  std::chrono::sys_days sys_days() const { return std::chrono::sys_days{std::chrono::days{days_}}; }
  long days_since_epoch() const { return days_; }

  Date plus_days(long n) const {
    Date d;
    d.days_ = days_ + n;
    return d;
  }

  auto operator<=>(const Date&) const = default;

 private:
  long days_ = 0;
};

inline long days_between(Date a, Date b) { return b.days_since_epoch() - a.days_since_epoch(); }

inline long abs_days_between(Date a, Date b) {
  const long d = days_between(a, b);
  return d < 0 ? -d : d;
}

}  // namespace tlsum
