#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "decimal.hpp"
#include "operators.hpp"

namespace graphq {

struct CalendarDate {
  std::int64_t year = 0;
  int month = 1;
  int day = 1;

  auto operator<=>(const CalendarDate&) const = default;
};

struct TimeOfDay {
  int hour = 0;
  int minute = 0;
  int second = 0;

  auto operator<=>(const TimeOfDay&) const = default;
};

// A typed literal. `raw` is the surface text between <V> and </V>; exactly
// the field matching `vtype` is populated (strings carry only `raw`).
struct ValueLiteral {
  VType vtype = VType::String;
  std::string raw;
  std::optional<Decimal> magnitude;
  std::optional<std::string> unit;
  std::optional<std::int64_t> year;
  std::optional<CalendarDate> date;
  std::optional<TimeOfDay> time;

  bool operator==(const ValueLiteral&) const = default;

  // Magnitude text as written (number only).
  std::string magnitude_text() const;
};

// Builds a literal from its surface text; the error string explains why the
// text does not fit the type.
struct ValueParse {
  std::optional<ValueLiteral> value;
  std::string error;
};
ValueParse parse_value_literal(VType vtype, std::string_view raw);

// Convenience for tests and generators; aborts on malformed input.
ValueLiteral make_value(VType vtype, std::string_view raw);

// Number literal from a computed magnitude.
ValueLiteral make_number(const Decimal& magnitude, std::optional<std::string> unit);

// Empty when the literal satisfies its invariants, otherwise a reason.
std::string check_value_invariants(const ValueLiteral& v);

// Typed comparison `lhs op rhs`. Numbers compare only when units match,
// years widen against dates, incomparable pairs yield false for every op.
bool compare_values(const ValueLiteral& lhs, Cop op, const ValueLiteral& rhs);

// Three-way order when the pair is comparable.
std::optional<std::partial_ordering> order_values(const ValueLiteral& lhs,
                                                  const ValueLiteral& rhs);

// Key identifying a value up to semantic equality (110 == 110.0).
std::string value_key(const ValueLiteral& v);

bool is_valid_calendar_date(std::int64_t year, int month, int day);

}  // namespace graphq
