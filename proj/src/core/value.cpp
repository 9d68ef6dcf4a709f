#include "value.hpp"

#include <cctype>
#include <cstdlib>
#include <stdexcept>

namespace graphq {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s) || s.size() > 17) return std::nullopt;
  std::int64_t v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return negative ? -v : v;
}

std::optional<CalendarDate> parse_date(std::string_view s) {
  bool negative = !s.empty() && s[0] == '-';
  if (negative) s.remove_prefix(1);
  auto first = s.find('-');
  if (first == std::string_view::npos) return std::nullopt;
  auto second = s.find('-', first + 1);
  if (second == std::string_view::npos) return std::nullopt;
  auto y = s.substr(0, first);
  auto m = s.substr(first + 1, second - first - 1);
  auto d = s.substr(second + 1);
  if (!all_digits(y) || y.size() > 9 || m.size() != 2 || d.size() != 2 || !all_digits(m) ||
      !all_digits(d))
    return std::nullopt;
  CalendarDate date{*parse_int(y), std::atoi(std::string(m).c_str()),
                    std::atoi(std::string(d).c_str())};
  if (negative) date.year = -date.year;
  if (!is_valid_calendar_date(date.year, date.month, date.day)) return std::nullopt;
  return date;
}

std::optional<TimeOfDay> parse_time(std::string_view s) {
  auto two = [](std::string_view p) -> std::optional<int> {
    if (p.size() != 2 || !all_digits(p)) return std::nullopt;
    return (p[0] - '0') * 10 + (p[1] - '0');
  };
  if (s.size() != 5 && s.size() != 8) return std::nullopt;
  if (s[2] != ':' || (s.size() == 8 && s[5] != ':')) return std::nullopt;
  auto h = two(s.substr(0, 2));
  auto m = two(s.substr(3, 2));
  auto sec = s.size() == 8 ? two(s.substr(6, 2)) : std::optional<int>(0);
  if (!h || !m || !sec || *h > 23 || *m > 59 || *sec > 59) return std::nullopt;
  return TimeOfDay{*h, *m, *sec};
}

// Calendar component used when comparing a year against a date.
std::optional<std::int64_t> year_component(const ValueLiteral& v) {
  if (v.vtype == VType::Year && v.year) return *v.year;
  if (v.vtype == VType::Date && v.date) return v.date->year;
  return std::nullopt;
}

}  // namespace

bool is_valid_calendar_date(std::int64_t year, int month, int day) {
  if (month < 1 || month > 12 || day < 1) return false;
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  int limit = kDays[month - 1];
  bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
  if (month == 2 && leap) limit = 29;
  return day <= limit;
}

std::string ValueLiteral::magnitude_text() const {
  if (vtype != VType::Number) return raw;
  auto space = raw.find(' ');
  return space == std::string::npos ? raw : raw.substr(0, space);
}

ValueParse parse_value_literal(VType vtype, std::string_view raw) {
  ValueLiteral v;
  v.vtype = vtype;
  v.raw = std::string(raw);
  switch (vtype) {
    case VType::String:
      return {v, {}};
    case VType::Number: {
      auto space = raw.find(' ');
      auto mag_text = raw.substr(0, space);
      auto mag = Decimal::parse(mag_text);
      if (!mag) return {std::nullopt, "'" + std::string(mag_text) + "' is not a decimal number"};
      v.magnitude = *mag;
      if (space != std::string_view::npos) {
        auto unit = raw.substr(space + 1);
        if (unit.empty() || unit.front() == ' ' || unit.back() == ' ')
          return {std::nullopt, "malformed unit in '" + std::string(raw) + "'"};
        v.unit = std::string(unit);
      }
      return {v, {}};
    }
    case VType::Year: {
      auto y = parse_int(raw);
      if (!y) return {std::nullopt, "'" + std::string(raw) + "' is not a year"};
      v.year = *y;
      return {v, {}};
    }
    case VType::Date: {
      auto d = parse_date(raw);
      if (!d) return {std::nullopt, "'" + std::string(raw) + "' is not an ISO-8601 date"};
      v.date = *d;
      return {v, {}};
    }
    case VType::Time: {
      auto t = parse_time(raw);
      if (!t) return {std::nullopt, "'" + std::string(raw) + "' is not an ISO-8601 time"};
      v.time = *t;
      return {v, {}};
    }
  }
  return {std::nullopt, "unknown value type"};
}

ValueLiteral make_value(VType vtype, std::string_view raw) {
  auto parsed = parse_value_literal(vtype, raw);
  if (!parsed.value) throw std::invalid_argument(parsed.error);
  return *parsed.value;
}

ValueLiteral make_number(const Decimal& magnitude, std::optional<std::string> unit) {
  std::string raw = magnitude.to_string();
  if (unit) raw += " " + *unit;
  return make_value(VType::Number, raw);
}

std::string check_value_invariants(const ValueLiteral& v) {
  auto reparsed = parse_value_literal(v.vtype, v.raw);
  if (!reparsed.value) return reparsed.error;
  if (!(*reparsed.value == v)) return "typed fields disagree with raw text '" + v.raw + "'";
  return {};
}

std::optional<std::partial_ordering> order_values(const ValueLiteral& lhs,
                                                  const ValueLiteral& rhs) {
  if (lhs.vtype == VType::Number && rhs.vtype == VType::Number) {
    if (lhs.unit != rhs.unit || !lhs.magnitude || !rhs.magnitude) return std::nullopt;
    return *lhs.magnitude <=> *rhs.magnitude;
  }
  if (lhs.vtype == VType::Date && rhs.vtype == VType::Date && lhs.date && rhs.date)
    return *lhs.date <=> *rhs.date;
  if (lhs.vtype == VType::Time && rhs.vtype == VType::Time && lhs.time && rhs.time)
    return *lhs.time <=> *rhs.time;
  if ((lhs.vtype == VType::Year || rhs.vtype == VType::Year)) {
    auto a = year_component(lhs);
    auto b = year_component(rhs);
    if (a && b) return *a <=> *b;
  }
  return std::nullopt;
}

bool compare_values(const ValueLiteral& lhs, Cop op, const ValueLiteral& rhs) {
  if (lhs.vtype == VType::String || rhs.vtype == VType::String) {
    if (lhs.vtype != rhs.vtype) return false;
    if (op == Cop::Is) return lhs.raw == rhs.raw;
    if (op == Cop::IsNot) return lhs.raw != rhs.raw;
    return false;
  }
  auto ord = order_values(lhs, rhs);
  if (!ord) return false;
  switch (op) {
    case Cop::Is: return *ord == 0;
    case Cop::IsNot: return *ord != 0;
    case Cop::LargerThan: return *ord > 0;
    case Cop::SmallerThan: return *ord < 0;
    case Cop::AtLeast: return *ord >= 0;
    case Cop::AtMost: return *ord <= 0;
  }
  return false;
}

std::string value_key(const ValueLiteral& v) {
  switch (v.vtype) {
    case VType::String: return "s:" + v.raw;
    case VType::Number:
      return "n:" + (v.magnitude ? v.magnitude->canonical() : v.raw) + "|" +
             v.unit.value_or("");
    case VType::Year: return "y:" + std::to_string(v.year.value_or(0));
    case VType::Date:
      if (v.date)
        return "d:" + std::to_string(v.date->year) + "-" + std::to_string(v.date->month) + "-" +
               std::to_string(v.date->day);
      return "d:" + v.raw;
    case VType::Time:
      if (v.time)
        return "t:" + std::to_string(v.time->hour) + ":" + std::to_string(v.time->minute) + ":" +
               std::to_string(v.time->second);
      return "t:" + v.raw;
  }
  return v.raw;
}

}  // namespace graphq
