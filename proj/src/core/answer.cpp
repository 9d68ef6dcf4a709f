#include <algorithm>

#include <json.hpp>

#include "evaluator.hpp"

namespace graphq {

namespace {

std::vector<std::string> sorted_unique(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<std::string> keys(const std::vector<ValueLiteral>& values) {
  std::vector<std::string> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(value_key(v));
  std::sort(out.begin(), out.end());
  return out;
}

std::string display(const ValueLiteral& v) {
  if (v.vtype != VType::Number || !v.magnitude) return v.raw;
  return v.magnitude->to_string() + (v.unit ? " " + *v.unit : "");
}

}  // namespace

std::string_view kind_name(Answer::Kind kind) {
  switch (kind) {
    case Answer::Kind::Entities: return "entities";
    case Answer::Kind::Count: return "count";
    case Answer::Kind::Boolean: return "boolean";
    case Answer::Kind::Values: return "values";
    case Answer::Kind::Predicates: return "predicates";
  }
  return {};
}

Answer Answer::entities(std::vector<std::string> names) {
  Answer a;
  a.kind = Kind::Entities;
  a.names = sorted_unique(std::move(names));
  return a;
}

Answer Answer::predicates(std::vector<std::string> names) {
  Answer a;
  a.kind = Kind::Predicates;
  a.names = sorted_unique(std::move(names));
  return a;
}

Answer Answer::number(std::int64_t count) {
  Answer a;
  a.kind = Kind::Count;
  a.count = count;
  return a;
}

Answer Answer::boolean(bool truth) {
  Answer a;
  a.kind = Kind::Boolean;
  a.truth = truth;
  return a;
}

Answer Answer::of_values(std::vector<ValueLiteral> values) {
  Answer a;
  a.kind = Kind::Values;
  a.values = std::move(values);
  return a;
}

bool Answer::operator==(const Answer& other) const {
  if (kind != other.kind) return false;
  switch (kind) {
    case Kind::Entities:
    case Kind::Predicates: return names == other.names;
    case Kind::Count: return count == other.count;
    case Kind::Boolean: return truth == other.truth;
    case Kind::Values: return keys(values) == keys(other.values);
  }
  return false;
}

std::string Answer::to_json() const {
  nlohmann::json out;
  out["kind"] = std::string(kind_name(kind));
  switch (kind) {
    case Kind::Entities:
    case Kind::Predicates: out["answer"] = names; break;
    case Kind::Count: out["answer"] = count; break;
    case Kind::Boolean: out["answer"] = truth; break;
    case Kind::Values: {
      auto arr = nlohmann::json::array();
      for (const auto& v : values) {
        nlohmann::json o;
        o["type"] = std::string(keyword(v.vtype));
        o["value"] = display(v);
        arr.push_back(std::move(o));
      }
      out["answer"] = std::move(arr);
      break;
    }
  }
  return out.dump();
}

std::string Answer::to_text() const {
  switch (kind) {
    case Kind::Entities:
    case Kind::Predicates: {
      std::string out;
      for (const auto& n : names) out += (out.empty() ? "" : "; ") + n;
      return out;
    }
    case Kind::Count: return std::to_string(count);
    case Kind::Boolean: return truth ? "yes" : "no";
    case Kind::Values: {
      std::string out;
      for (const auto& v : values) out += (out.empty() ? "" : "; ") + display(v);
      return out;
    }
  }
  return {};
}

std::vector<ValueLiteral> aggregate_values(Vop vop, const std::vector<ValueLiteral>& values) {
  std::vector<const ValueLiteral*> nums;
  for (const auto& v : values)
    if (v.vtype == VType::Number && v.magnitude) nums.push_back(&v);
  if (nums.empty()) return {};
  for (const auto* v : nums)
    if (v->unit != nums.front()->unit) return {};
  const auto& unit = nums.front()->unit;

  Decimal result = *nums.front()->magnitude;
  switch (vop) {
    case Vop::Sum:
    case Vop::Average:
      for (std::size_t i = 1; i < nums.size(); ++i) result = result + *nums[i]->magnitude;
      if (vop == Vop::Average) result = result.divided_by(static_cast<std::int64_t>(nums.size()));
      break;
    case Vop::Maximum:
      for (const auto* v : nums) result = std::max(result, *v->magnitude);
      break;
    case Vop::Minimum:
      for (const auto* v : nums) result = std::min(result, *v->magnitude);
      break;
  }
  return {make_number(result, unit)};
}

}  // namespace graphq
