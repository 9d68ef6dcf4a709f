#include "decimal.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>

namespace graphq {

namespace mp = boost::multiprecision;

namespace {

constexpr int kMaxExponent = 400;

mp::cpp_rational to_rational(const std::string& canonical) {
  auto slash = canonical.find('/');
  if (slash == std::string::npos) return mp::cpp_rational(mp::cpp_int(canonical));
  return mp::cpp_rational(mp::cpp_int(canonical.substr(0, slash)),
                          mp::cpp_int(canonical.substr(slash + 1)));
}

std::string to_canonical(const mp::cpp_rational& r) {
  auto num = mp::numerator(r);
  auto den = mp::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

mp::cpp_int pow10(int n) {
  mp::cpp_int p = 1;
  for (int i = 0; i < n; ++i) p *= 10;
  return p;
}

}  // namespace

std::optional<Decimal> Decimal::parse(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  std::string digits;
  int frac_digits = 0;
  bool any_digit = false;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    digits += text[i++];
    any_digit = true;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      digits += text[i++];
      ++frac_digits;
      any_digit = true;
    }
  }
  if (!any_digit) return std::nullopt;
  int exponent = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool exp_negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      exp_negative = text[i] == '-';
      ++i;
    }
    bool any_exp = false;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      exponent = exponent * 10 + (text[i++] - '0');
      any_exp = true;
      if (exponent > kMaxExponent) return std::nullopt;
    }
    if (!any_exp) return std::nullopt;
    if (exp_negative) exponent = -exponent;
  }
  if (i != text.size()) return std::nullopt;

  // cpp_int reads a leading 0 as an octal prefix.
  digits.erase(0, digits.find_first_not_of('0'));
  mp::cpp_int mantissa(digits.empty() ? std::string("0") : digits);
  if (negative) mantissa = -mantissa;
  int scale = exponent - frac_digits;
  mp::cpp_rational value = scale >= 0 ? mp::cpp_rational(mantissa * pow10(scale))
                                      : mp::cpp_rational(mantissa, pow10(-scale));
  return Decimal(to_canonical(value));
}

Decimal Decimal::from_int(std::int64_t v) { return Decimal(std::to_string(v)); }

std::strong_ordering Decimal::operator<=>(const Decimal& other) const {
  if (canonical_ == other.canonical_) return std::strong_ordering::equal;
  auto a = to_rational(canonical_);
  auto b = to_rational(other.canonical_);
  if (a < b) return std::strong_ordering::less;
  if (a > b) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Decimal Decimal::operator+(const Decimal& other) const {
  return Decimal(to_canonical(to_rational(canonical_) + to_rational(other.canonical_)));
}

Decimal Decimal::divided_by(std::int64_t n) const {
  return Decimal(to_canonical(to_rational(canonical_) / mp::cpp_rational(n)));
}

bool Decimal::is_integer() const { return canonical_.find('/') == std::string::npos; }

int Decimal::sign() const {
  if (canonical_ == "0") return 0;
  return canonical_[0] == '-' ? -1 : 1;
}

std::string Decimal::to_string() const {
  auto r = to_rational(canonical_);
  mp::cpp_int num = mp::numerator(r);
  mp::cpp_int den = mp::denominator(r);
  if (den == 1) return num.str();

  bool negative = num < 0;
  if (negative) num = -num;

  // Terminating iff the denominator has no prime factors besides 2 and 5.
  mp::cpp_int rest = den;
  int twos = 0, fives = 0;
  while (rest % 2 == 0) rest /= 2, ++twos;
  while (rest % 5 == 0) rest /= 5, ++fives;
  bool terminating = rest == 1;
  int places = terminating ? std::max(twos, fives) : 12;

  mp::cpp_int scaled = num * pow10(places);
  mp::cpp_int q = scaled / den;
  if (!terminating && (scaled % den) * 2 >= den) q += 1;

  std::string digits = q.str();
  if (static_cast<int>(digits.size()) <= places)
    digits.insert(0, static_cast<std::size_t>(places) - digits.size() + 1, '0');
  std::string out = digits.substr(0, digits.size() - places) + "." +
                    digits.substr(digits.size() - places);
  while (!out.empty() && out.back() == '0') out.pop_back();
  if (!out.empty() && out.back() == '.') out.pop_back();
  if (negative && out != "0") out.insert(out.begin(), '-');
  return out;
}

}  // namespace graphq
