#pragma once

#include <cstdint>
#include <string>

namespace occuflow {

// Calendar day, stored as days since 1970-01-01 (civil). Supports the daily
// stepping and weekday logic needed for panel validation and dummy coding.
class Date {
  public:
    Date() = default;
    explicit Date(std::int64_t days_since_epoch) : days_(days_since_epoch) {}

    static Date from_ymd(int year, int month, int day);
    // Parses "YYYY-MM-DD". Throws SchemaError on malformed input.
    static Date parse_iso(const std::string& text);

    std::string to_iso() const;

    std::int64_t days_since_epoch() const { return days_; }

    // 0 = Sunday, 1 = Monday, ..., 6 = Saturday.
    int weekday() const;

    Date operator+(std::int64_t days) const { return Date(days_ + days); }
    std::int64_t operator-(const Date& other) const { return days_ - other.days_; }
    bool operator==(const Date& other) const { return days_ == other.days_; }
    bool operator!=(const Date& other) const { return days_ != other.days_; }
    bool operator<(const Date& other) const { return days_ < other.days_; }
    bool operator<=(const Date& other) const { return days_ <= other.days_; }

  private:
    std::int64_t days_ = 0;
};

enum class Weekday : int {
    kSunday = 0,
    kMonday = 1,
    kTuesday = 2,
    kWednesday = 3,
    kThursday = 4,
    kFriday = 5,
    kSaturday = 6,
};

}  // namespace occuflow
