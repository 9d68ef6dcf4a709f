#include <array>
#include <utility>

#include "ir_syntax.hpp"

namespace graphq {

namespace {

struct MarkerSpelling {
  std::string_view text;
  MarkerTag tag;
  bool open;
};

constexpr std::array<MarkerSpelling, 14> kMarkers{{
    {"<ES>", MarkerTag::ES, true},  {"</ES>", MarkerTag::ES, false},
    {"<E>", MarkerTag::E, true},    {"</E>", MarkerTag::E, false},
    {"<C>", MarkerTag::C, true},    {"</C>", MarkerTag::C, false},
    {"<A>", MarkerTag::A, true},    {"</A>", MarkerTag::A, false},
    {"<R>", MarkerTag::R, true},    {"</R>", MarkerTag::R, false},
    {"<Q>", MarkerTag::Q, true},    {"</Q>", MarkerTag::Q, false},
    {"<V>", MarkerTag::V, true},    {"</V>", MarkerTag::V, false},
}};

constexpr std::array<std::string_view, 38> kKeywords{
    "what",     "is",     "the",     "how",     "many",      "whose",    "that",
    "whether",  "of",     "from",    "to",      "and",       "or",       "not",
    "forward",  "backward", "largest", "smallest", "sum",     "average",  "maximum",
    "minimum",  "string", "number",  "year",    "date",      "time",     "relation",
    "attribute", "qualifier", "which", "one",   "has",       "among",    "have",
    "ones",     "(",      ")"};

// Two-word operators fused into a single Keyword token.
constexpr std::array<std::pair<std::string_view, std::string_view>, 5> kFusions{{
    {"is", "not"},
    {"larger", "than"},
    {"smaller", "than"},
    {"at", "least"},
    {"at", "most"},
}};

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

bool is_keyword(std::string_view piece) {
  for (auto k : kKeywords)
    if (k == piece) return true;
  return false;
}

struct Piece {
  std::string_view text;
  std::size_t begin;  // code points
  std::size_t end;
  const MarkerSpelling* marker;
};

// Cuts the input into whitespace-free pieces, separating marker spellings.
std::vector<Piece> pieces(std::string_view text) {
  std::vector<Piece> out;
  std::size_t cp = 0;  // code point index of text[i]
  std::size_t i = 0;
  std::size_t start = 0, start_cp = 0;
  bool in_piece = false;

  auto flush = [&](std::size_t end, std::size_t end_cp) {
    if (in_piece && end > start)
      out.push_back({text.substr(start, end - start), start_cp, end_cp, nullptr});
    in_piece = false;
  };

  while (i < text.size()) {
    char c = text[i];
    if (is_space(c)) {
      flush(i, cp);
      ++i;
      ++cp;
      continue;
    }
    if (c == '<') {
      const MarkerSpelling* hit = nullptr;
      for (const auto& m : kMarkers)
        if (text.compare(i, m.text.size(), m.text) == 0) {
          hit = &m;
          break;
        }
      if (hit) {
        flush(i, cp);
        out.push_back({hit->text, cp, cp + hit->text.size(), hit});
        i += hit->text.size();
        cp += hit->text.size();
        continue;
      }
    }
    if (!in_piece) {
      in_piece = true;
      start = i;
      start_cp = cp;
    }
    // Advance one UTF-8 code point; continuation bytes never start one.
    ++i;
    while (i < text.size() && (static_cast<unsigned char>(text[i]) & 0xC0) == 0x80) ++i;
    ++cp;
  }
  flush(i, cp);
  return out;
}

}  // namespace

std::string_view tag_name(MarkerTag tag) {
  switch (tag) {
    case MarkerTag::ES: return "ES";
    case MarkerTag::E: return "E";
    case MarkerTag::C: return "C";
    case MarkerTag::A: return "A";
    case MarkerTag::R: return "R";
    case MarkerTag::Q: return "Q";
    case MarkerTag::V: return "V";
  }
  return {};
}

std::vector<Token> tokenize(std::string_view text) {
  auto ps = pieces(text);
  std::vector<Token> out;
  out.reserve(ps.size());
  bool in_payload = false;
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const Piece& p = ps[k];
    if (p.marker) {
      out.push_back({p.marker->open ? TokenKind::MarkerOpen : TokenKind::MarkerClose,
                     p.marker->tag, std::string(p.text), Span{p.begin, p.end}});
      in_payload = p.marker->open && p.marker->tag != MarkerTag::ES;
      continue;
    }
    if (in_payload) {
      out.push_back({TokenKind::Word, std::nullopt, std::string(p.text), Span{p.begin, p.end}});
      continue;
    }
    if (k + 1 < ps.size() && !ps[k + 1].marker) {
      bool fused = false;
      for (auto [first, second] : kFusions) {
        if (p.text == first && ps[k + 1].text == second) {
          out.push_back({TokenKind::Keyword, std::nullopt,
                         std::string(first) + " " + std::string(second),
                         Span{p.begin, ps[k + 1].end}});
          ++k;
          fused = true;
          break;
        }
      }
      if (fused) continue;
    }
    out.push_back({is_keyword(p.text) ? TokenKind::Keyword : TokenKind::Word, std::nullopt,
                   std::string(p.text), Span{p.begin, p.end}});
  }
  return out;
}

}  // namespace graphq
