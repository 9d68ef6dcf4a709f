#include "operators.hpp"

namespace graphq {

namespace {

template <typename E, std::size_t N>
std::optional<E> lookup(std::string_view text, const std::array<E, N>& all) {
  for (E e : all)
    if (keyword(e) == text) return e;
  return std::nullopt;
}

}  // namespace

std::string_view keyword(Lop op) {
  switch (op) {
    case Lop::And: return "and";
    case Lop::Or: return "or";
    case Lop::Not: return "not";
  }
  return {};
}

std::string_view keyword(Cop op) {
  switch (op) {
    case Cop::Is: return "is";
    case Cop::IsNot: return "is not";
    case Cop::LargerThan: return "larger than";
    case Cop::SmallerThan: return "smaller than";
    case Cop::AtLeast: return "at least";
    case Cop::AtMost: return "at most";
  }
  return {};
}

std::string_view keyword(Sop op) { return op == Sop::Largest ? "largest" : "smallest"; }

std::string_view keyword(Vop op) {
  switch (op) {
    case Vop::Sum: return "sum";
    case Vop::Average: return "average";
    case Vop::Maximum: return "maximum";
    case Vop::Minimum: return "minimum";
  }
  return {};
}

std::string_view keyword(Dir dir) { return dir == Dir::Forward ? "forward" : "backward"; }

std::string_view keyword(VType type) {
  switch (type) {
    case VType::String: return "string";
    case VType::Number: return "number";
    case VType::Year: return "year";
    case VType::Date: return "date";
    case VType::Time: return "time";
  }
  return {};
}

std::optional<Lop> parse_lop(std::string_view t) { return lookup(t, kAllLops); }
std::optional<Cop> parse_cop(std::string_view t) { return lookup(t, kAllCops); }
std::optional<Sop> parse_sop(std::string_view t) { return lookup(t, kAllSops); }
std::optional<Vop> parse_vop(std::string_view t) { return lookup(t, kAllVops); }
std::optional<Dir> parse_dir(std::string_view t) { return lookup(t, kAllDirs); }
std::optional<VType> parse_vtype(std::string_view t) { return lookup(t, kAllVTypes); }

std::string_view symbol(Cop op) {
  switch (op) {
    case Cop::Is: return "=";
    case Cop::IsNot: return "!=";
    case Cop::LargerThan: return ">";
    case Cop::SmallerThan: return "<";
    case Cop::AtLeast: return ">=";
    case Cop::AtMost: return "<=";
  }
  return {};
}

std::optional<Cop> parse_cop_symbol(std::string_view text) {
  for (Cop op : kAllCops)
    if (symbol(op) == text) return op;
  return std::nullopt;
}

}  // namespace graphq
