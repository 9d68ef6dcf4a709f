#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace graphq {

enum class Lop { And, Or, Not };
enum class Cop { Is, IsNot, LargerThan, SmallerThan, AtLeast, AtMost };
enum class Sop { Largest, Smallest };
enum class Vop { Sum, Average, Maximum, Minimum };
enum class Dir { Forward, Backward };
enum class VType { String, Number, Year, Date, Time };

inline constexpr std::array kAllLops{Lop::And, Lop::Or, Lop::Not};
inline constexpr std::array kAllCops{Cop::Is,      Cop::IsNot,   Cop::LargerThan,
                                     Cop::SmallerThan, Cop::AtLeast, Cop::AtMost};
inline constexpr std::array kAllSops{Sop::Largest, Sop::Smallest};
inline constexpr std::array kAllVops{Vop::Sum, Vop::Average, Vop::Maximum, Vop::Minimum};
inline constexpr std::array kAllDirs{Dir::Forward, Dir::Backward};
inline constexpr std::array kAllVTypes{VType::String, VType::Number, VType::Year, VType::Date,
                                       VType::Time};

// Surface keywords as they appear in IR text.
std::string_view keyword(Lop op);
std::string_view keyword(Cop op);
std::string_view keyword(Sop op);
std::string_view keyword(Vop op);
std::string_view keyword(Dir dir);
std::string_view keyword(VType type);

std::optional<Lop> parse_lop(std::string_view text);
std::optional<Cop> parse_cop(std::string_view text);
std::optional<Sop> parse_sop(std::string_view text);
std::optional<Vop> parse_vop(std::string_view text);
std::optional<Dir> parse_dir(std::string_view text);
std::optional<VType> parse_vtype(std::string_view text);

// Symbolic comparison operator: = != > < >= <=
std::string_view symbol(Cop op);
std::optional<Cop> parse_cop_symbol(std::string_view text);

// Ordering comparisons (everything except is / is not).
inline bool is_ordering(Cop op) { return op != Cop::Is && op != Cop::IsNot; }

}  // namespace graphq
