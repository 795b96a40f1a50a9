#pragma once

// UTF-8 iteration, simple case folding, token/punctuation handling.
// All corpus transforms rebuild lines from byte spans so that untouched
// text (including whitespace runs) survives byte-identically.

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dialup {

inline bool is_utf8_continuation(unsigned char b) { return (b & 0xC0) == 0x80; }

// Byte length of the UTF-8 sequence starting at s[pos]. Invalid leads count as 1.
inline std::size_t utf8_seq_len(std::string_view s, std::size_t pos) {
  unsigned char b = static_cast<unsigned char>(s[pos]);
  std::size_t len = 1;
  if ((b & 0x80) == 0x00) len = 1;
  else if ((b & 0xE0) == 0xC0) len = 2;
  else if ((b & 0xF0) == 0xE0) len = 3;
  else if ((b & 0xF8) == 0xF0) len = 4;
  if (pos + len > s.size()) return 1;
  for (std::size_t i = 1; i < len; ++i)
    if (!is_utf8_continuation(static_cast<unsigned char>(s[pos + i]))) return 1;
  return len;
}

// Decodes the code point at s[pos]; stray bytes decode as themselves.
inline char32_t utf8_cp_at(std::string_view s, std::size_t pos, std::size_t len) {
  unsigned char b = static_cast<unsigned char>(s[pos]);
  if (len == 1) return b;
  char32_t cp = b & (0x7F >> len);
  for (std::size_t i = 1; i < len; ++i)
    cp = (cp << 6) | (static_cast<unsigned char>(s[pos + i]) & 0x3F);
  return cp;
}

inline std::vector<char32_t> utf8_decode(std::string_view s) {
  std::vector<char32_t> out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t len = utf8_seq_len(s, pos);
    out.push_back(utf8_cp_at(s, pos, len));
    pos += len;
  }
  return out;
}

inline void utf8_append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline std::string utf8_encode(const std::vector<char32_t>& cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) utf8_append(out, cp);
  return out;
}

inline std::size_t cp_length(std::string_view s) {
  std::size_t n = 0, pos = 0;
  while (pos < s.size()) { pos += utf8_seq_len(s, pos); ++n; }
  return n;
}

// ---------------------------------------------------------------------------
// Simple case folding. Covers ASCII, Latin-1, Latin Extended-A and the
// Extended-B letters used by our shipped languages, Greek and Cyrillic.
// Uncased scripts fold to themselves.
// ---------------------------------------------------------------------------

inline char32_t fold_cp(char32_t c) {
  if (c >= U'A' && c <= U'Z') return c + 0x20;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 0x20;
  if (c == 0x130) return U'i';  // LATIN CAPITAL LETTER I WITH DOT ABOVE
  if (c == 0x178) return 0xFF;
  if ((c >= 0x100 && c <= 0x137) || (c >= 0x14A && c <= 0x177) ||
      (c >= 0x1DE && c <= 0x1EF) || (c >= 0x1F8 && c <= 0x21F) ||
      (c >= 0x222 && c <= 0x233)) {
    return (c % 2 == 0) ? c + 1 : c;
  }
  if ((c >= 0x139 && c <= 0x148) || (c >= 0x179 && c <= 0x17E) ||
      (c >= 0x1CD && c <= 0x1DC)) {
    return (c % 2 == 1) ? c + 1 : c;
  }
  if (c == 0x18F) return 0x259;  // Ə -> ə
  if (c == 0x1A0 || c == 0x1AF) return c + 1;
  if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return c + 0x20;
  if (c >= 0x410 && c <= 0x42F) return c + 0x20;
  if (c >= 0x400 && c <= 0x40F) return c + 0x50;
  return c;
}

// Uppercase counterpart where fold_cp has a two-way pair; identity otherwise.
inline char32_t upper_cp(char32_t c) {
  if (c >= U'a' && c <= U'z') return c - 0x20;
  if (c >= 0xE0 && c <= 0xFE && c != 0xF7) return c - 0x20;
  if (c == 0xFF) return 0x178;
  if ((c >= 0x100 && c <= 0x137) || (c >= 0x14A && c <= 0x177) ||
      (c >= 0x1DE && c <= 0x1EF) || (c >= 0x1F8 && c <= 0x21F) ||
      (c >= 0x222 && c <= 0x233)) {
    return (c % 2 == 1) ? c - 1 : c;
  }
  if ((c >= 0x139 && c <= 0x148) || (c >= 0x179 && c <= 0x17E) ||
      (c >= 0x1CD && c <= 0x1DC)) {
    return (c % 2 == 0) ? c - 1 : c;
  }
  if (c == 0x259) return 0x18F;
  if (c == 0x1A1 || c == 0x1B0) return c - 1;
  if (c == 0x3C2) return 0x3A3;
  if (c >= 0x3B1 && c <= 0x3C9) return c - 0x20;
  if (c >= 0x430 && c <= 0x44F) return c - 0x20;
  if (c >= 0x450 && c <= 0x45F) return c - 0x50;
  return c;
}

inline bool is_upper_cp(char32_t c) { return fold_cp(c) != c; }

inline std::string casefold(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t len = utf8_seq_len(s, pos);
    utf8_append(out, fold_cp(utf8_cp_at(s, pos, len)));
    pos += len;
  }
  return out;
}

// Uppercases the first code point if it has an uppercase pair.
inline std::string capitalize_first(std::string_view s) {
  if (s.empty()) return std::string(s);
  std::size_t len = utf8_seq_len(s, 0);
  char32_t first = upper_cp(utf8_cp_at(s, 0, len));
  std::string out;
  out.reserve(s.size());
  utf8_append(out, first);
  out.append(s.substr(len));
  return out;
}

// ---------------------------------------------------------------------------
// Character classes used by tokenization.
// ---------------------------------------------------------------------------

inline bool is_space_cp(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\v' ||
         c == U'\f' || c == 0xA0 || (c >= 0x2000 && c <= 0x200A) || c == 0x3000;
}

inline bool is_punct_cp(char32_t c) {
  if (c < 0x80) return (c >= U'!' && c <= U'/') || (c >= U':' && c <= U'@') ||
                       (c >= U'[' && c <= U'`') || (c >= U'{' && c <= U'~');
  switch (c) {
    case 0xA1: case 0xAB: case 0xBB: case 0xBF:          // inverted marks, guillemets
    case 0x60C: case 0x61B: case 0x61F: case 0x6D4:      // Arabic comma/semicolon/qmark/stop
    case 0x964: case 0x965:                              // Devanagari danda
    case 0x3001: case 0x3002:                            // CJK comma/stop
      return true;
    default:
      return (c >= 0x2010 && c <= 0x205E);               // general punctuation block
  }
}

inline bool is_digit_cp(char32_t c) {
  return (c >= U'0' && c <= U'9') || (c >= 0x660 && c <= 0x669) ||
         (c >= 0x966 && c <= 0x96F);
}

// Alphabetic for our purposes: ASCII letters, or any non-ASCII code point
// that is not whitespace, punctuation, a digit, or a symbol-block character.
inline bool is_alpha_cp(char32_t c) {
  if (c < 0x80) return (c >= U'A' && c <= U'Z') || (c >= U'a' && c <= U'z');
  if (is_space_cp(c) || is_punct_cp(c) || is_digit_cp(c)) return false;
  if (c >= 0x2070 && c <= 0x2BFF) return false;  // super/subscripts, currency, arrows, math
  return true;
}

inline bool has_alpha(std::string_view s) {
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t len = utf8_seq_len(s, pos);
    if (is_alpha_cp(utf8_cp_at(s, pos, len))) return true;
    pos += len;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Whitespace tokenization over byte spans.
// ---------------------------------------------------------------------------

struct TokenSpan {
  std::size_t begin = 0;  // byte offsets into the line
  std::size_t end = 0;
};

inline std::vector<TokenSpan> whitespace_tokens(std::string_view line) {
  std::vector<TokenSpan> spans;
  std::size_t pos = 0;
  while (pos < line.size()) {
    std::size_t len = utf8_seq_len(line, pos);
    if (is_space_cp(utf8_cp_at(line, pos, len))) { pos += len; continue; }
    std::size_t begin = pos;
    while (pos < line.size()) {
      std::size_t l = utf8_seq_len(line, pos);
      if (is_space_cp(utf8_cp_at(line, pos, l))) break;
      pos += l;
    }
    spans.push_back({begin, pos});
  }
  return spans;
}

// Leading/trailing punctuation detached from a token; core in the middle.
struct TokenParts {
  std::string_view lead;
  std::string_view core;
  std::string_view trail;
};

inline TokenParts detach_punctuation(std::string_view token) {
  std::size_t begin = 0, end = token.size();
  while (begin < end) {
    std::size_t len = utf8_seq_len(token, begin);
    if (!is_punct_cp(utf8_cp_at(token, begin, len))) break;
    begin += len;
  }
  // walk back over trailing punctuation code points
  while (end > begin) {
    std::size_t last = begin;
    for (std::size_t p = begin; p < end; p += utf8_seq_len(token, p)) last = p;
    std::size_t len = utf8_seq_len(token, last);
    if (!is_punct_cp(utf8_cp_at(token, last, len))) break;
    end = last;
  }
  return {token.substr(0, begin), token.substr(begin, end - begin), token.substr(end)};
}

// Rebuilds a line, replacing each whitespace token via fn; whitespace runs
// are copied through verbatim.
template <typename Fn>
std::string transform_tokens(std::string_view line, Fn&& fn) {
  std::string out;
  out.reserve(line.size() + line.size() / 4);
  std::vector<TokenSpan> spans = whitespace_tokens(line);
  std::size_t cursor = 0, index = 0;
  for (const TokenSpan& span : spans) {
    out.append(line.substr(cursor, span.begin - cursor));
    out.append(fn(index++, line.substr(span.begin, span.end - span.begin)));
    cursor = span.end;
  }
  out.append(line.substr(cursor));
  return out;
}

// ---------------------------------------------------------------------------
// Small string helpers shared by the file formats.
// ---------------------------------------------------------------------------

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t pos = 0;
  while (true) {
    std::size_t tab = line.find('\t', pos);
    if (tab == std::string_view::npos) { cols.push_back(line.substr(pos)); break; }
    cols.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
  return cols;
}

inline std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

inline bool ends_with_suffix(std::string_view word, std::string_view suffix) {
  return word.size() >= suffix.size() &&
         word.substr(word.size() - suffix.size()) == suffix;
}

// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace dialup
