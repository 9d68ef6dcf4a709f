#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace graphq {

// Exact rational number used for numeric magnitudes. Literals such as "110",
// "-2.25" or "1.5e6" parse without rounding; arithmetic stays exact.
//
// The representation is the reduced fraction in canonical text form, so
// equality is string equality and the header stays free of bignum includes.
class Decimal {
 public:
  Decimal() : canonical_("0") {}

  static std::optional<Decimal> parse(std::string_view text);
  static Decimal from_int(std::int64_t v);

  std::strong_ordering operator<=>(const Decimal& other) const;
  bool operator==(const Decimal& other) const { return canonical_ == other.canonical_; }

  Decimal operator+(const Decimal& other) const;
  Decimal divided_by(std::int64_t n) const;

  bool is_integer() const;
  int sign() const;

  // Exact decimal expansion when it terminates, otherwise rounded to 12
  // fractional digits.
  std::string to_string() const;

  const std::string& canonical() const { return canonical_; }

 private:
  explicit Decimal(std::string canonical) : canonical_(std::move(canonical)) {}
  std::string canonical_;
};

}  // namespace graphq
