#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace graphq {

enum class Severity { Error, Warning };

// Half-open range of 0-based character offsets into the input text.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const Span&) const = default;
};

struct Diagnostic {
  std::string code;
  Severity severity = Severity::Error;
  Span span;
  std::string message;
};

inline Diagnostic error(std::string code, Span span, std::string message) {
  return Diagnostic{std::move(code), Severity::Error, span, std::move(message)};
}

using Diagnostics = std::vector<Diagnostic>;

// Either a value or a non-empty list of diagnostics.
template <typename T>
class Result {
 public:
  Result(T value) : state_(std::move(value)) {}
  Result(Diagnostic diag) : state_(Diagnostics{std::move(diag)}) {}
  Result(Diagnostics diags) : state_(std::move(diags)) {}

  bool ok() const { return std::holds_alternative<T>(state_); }
  explicit operator bool() const { return ok(); }

  const T& value() const& { return std::get<T>(state_); }
  T& value() & { return std::get<T>(state_); }
  T&& value() && { return std::get<T>(std::move(state_)); }

  const T& operator*() const& { return value(); }
  const T* operator->() const { return &value(); }

  const Diagnostics& diagnostics() const { return std::get<Diagnostics>(state_); }
  Diagnostics&& take_diagnostics() { return std::get<Diagnostics>(std::move(state_)); }

 private:
  std::variant<T, Diagnostics> state_;
};

}  // namespace graphq
