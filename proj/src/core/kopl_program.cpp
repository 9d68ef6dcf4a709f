#include "kopl_program.hpp"

#include <cctype>

namespace graphq {

namespace {

Diagnostic syntax_error(std::size_t at, std::string message) {
  return error("E_KOPL_SYNTAX", Span{at, at + 1}, std::move(message));
}

bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string trim(std::string s) {
  auto b = s.find_first_not_of(' ');
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(' ');
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string escape_kopl_arg(std::string_view arg) {
  std::string out;
  out.reserve(arg.size());
  for (char c : arg) {
    if (c == '\\' || c == ',' || c == '(' || c == ')') out += '\\';
    out += c;
  }
  return out;
}

Result<KoplProgram> parse_kopl_program(std::string_view text) {
  KoplProgram program;
  program.segments.emplace_back();
  std::size_t i = 0;
  auto skip_space = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };

  skip_space();
  if (i == text.size()) return syntax_error(0, "empty program");
  while (true) {
    skip_space();
    std::size_t start = i;
    while (i < text.size() && is_name_char(text[i])) ++i;
    if (i == start) return syntax_error(i, "expected a function name");
    KoplStep step;
    step.function = std::string(text.substr(start, i - start));
    if (i >= text.size() || text[i] != '(')
      return syntax_error(i, "expected '(' after " + step.function);
    ++i;

    // Arguments up to the first unescaped ')'.
    std::string current;
    bool any_char = false;
    bool closed = false;
    while (i < text.size()) {
      char c = text[i++];
      if (c == '\\') {
        if (i >= text.size()) return syntax_error(i - 1, "dangling escape");
        current += text[i++];
        any_char = true;
      } else if (c == ',') {
        step.args.push_back(trim(current));
        current.clear();
        any_char = true;
      } else if (c == ')') {
        closed = true;
        break;
      } else if (c == '(') {
        return syntax_error(i - 1, "unescaped '(' inside arguments");
      } else {
        current += c;
        if (c != ' ') any_char = true;
      }
    }
    if (!closed) return syntax_error(start, "unterminated argument list");
    if (any_char) step.args.push_back(trim(current));
    step.span = Span{start, i};
    program.segments.back().steps.push_back(std::move(step));

    skip_space();
    if (i == text.size()) break;
    if (text[i] == '.') {
      ++i;
    } else if (text[i] == '|') {
      ++i;
      program.segments.emplace_back();
    } else {
      return syntax_error(i, "expected ' . ' or ' | ' between steps");
    }
  }
  return program;
}

std::string format_kopl(const KoplProgram& program) {
  std::string out;
  for (std::size_t s = 0; s < program.segments.size(); ++s) {
    if (s) out += " | ";
    const auto& steps = program.segments[s].steps;
    for (std::size_t k = 0; k < steps.size(); ++k) {
      if (k) out += " . ";
      out += steps[k].function + "(";
      for (std::size_t a = 0; a < steps[k].args.size(); ++a) {
        if (a) out += ", ";
        out += escape_kopl_arg(steps[k].args[a]);
      }
      out += ")";
    }
  }
  return out;
}

}  // namespace graphq
