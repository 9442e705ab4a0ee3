#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace volnet {

/// Calendar date stored as days since 1970-01-01. No time zone or exchange
/// calendar semantics.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(int days_since_epoch) : days_(days_since_epoch) {}

  static Date from_ymd(int year, unsigned month, unsigned day);

  /// Parses `YYYY-MM-DD`. Returns nullopt on malformed or impossible dates.
  static std::optional<Date> parse_iso(std::string_view text);

  [[nodiscard]] std::string iso() const;
  [[nodiscard]] constexpr int days() const noexcept { return days_; }
  [[nodiscard]] bool is_weekend() const;
  [[nodiscard]] Date next_weekday() const;

  friend constexpr auto operator<=>(const Date&, const Date&) = default;

 private:
  int days_ = 0;
};

}  // namespace volnet
