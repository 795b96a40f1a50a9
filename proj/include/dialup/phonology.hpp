#pragma once

// Script<->phoneme transduction and the phonetic feature space that defines
// which phonemes count as plausible alternatives for one another.
//
// Tables are data: one grapheme/IPA pair per line, matched longest-grapheme-
// first. Feature bundles come from a built-in IPA catalog; symbols that are
// not in the catalog verbatim resolve by stripping modifier marks (aspiration,
// length, stress, dentalization, ...) and looking up the skeleton, so table
// authors can mint distinct-but-featureful symbols for orthographic units.

#include <algorithm>
#include <array>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dialup/errors.hpp"
#include "dialup/text.hpp"

namespace dialup {

enum class PhonemeClass { consonant, vowel };

enum class Place {
  bilabial, labiodental, dental, alveolar, postalveolar, retroflex,
  palatal, velar, uvular, pharyngeal, glottal
};

enum class Manner {
  plosive, nasal, trill, tap, fricative, lateral_fricative,
  affricate, approximant, lateral_approximant
};

enum class VowelHeight { close_v, near_close, close_mid, mid, open_mid, near_open, open_v };
enum class VowelBackness { front, central, back };

struct Phoneme {
  std::string symbol;
  PhonemeClass cls = PhonemeClass::consonant;
  // consonant features
  bool voiced = false;
  Place place = Place::alveolar;
  Manner manner = Manner::plosive;
  // vowel features
  VowelHeight height = VowelHeight::mid;
  VowelBackness backness = VowelBackness::central;
  bool rounded = false;

  bool operator==(const Phoneme& o) const { return symbol == o.symbol; }
};

// Number of differing features (0..3); phonemes must share a class.
inline int feature_distance(const Phoneme& a, const Phoneme& b) {
  int d = 0;
  if (a.cls == PhonemeClass::consonant) {
    d += a.voiced != b.voiced;
    d += a.place != b.place;
    d += a.manner != b.manner;
  } else {
    d += a.height != b.height;
    d += a.backness != b.backness;
    d += a.rounded != b.rounded;
  }
  return d;
}

namespace detail {

inline Phoneme consonant(std::string symbol, bool voiced, Place place, Manner manner) {
  Phoneme p;
  p.symbol = std::move(symbol);
  p.cls = PhonemeClass::consonant;
  p.voiced = voiced;
  p.place = place;
  p.manner = manner;
  return p;
}

inline Phoneme vowel(std::string symbol, VowelHeight h, VowelBackness b, bool rounded) {
  Phoneme p;
  p.symbol = std::move(symbol);
  p.cls = PhonemeClass::vowel;
  p.height = h;
  p.backness = b;
  p.rounded = rounded;
  return p;
}

inline const std::unordered_map<std::string, Phoneme>& ipa_catalog() {
  static const std::unordered_map<std::string, Phoneme> catalog = [] {
    using enum Place;
    using enum Manner;
    std::vector<Phoneme> list;
    auto C = [&](const char* s, bool v, Place pl, Manner m) { list.push_back(consonant(s, v, pl, m)); };
    auto V = [&](const char* s, VowelHeight h, VowelBackness b, bool r) { list.push_back(vowel(s, h, b, r)); };

    C("p", false, bilabial, plosive);     C("b", true, bilabial, plosive);
    C("t", false, alveolar, plosive);     C("d", true, alveolar, plosive);
    C("ʈ", false, retroflex, plosive);   // ʈ
    C("ɖ", true, retroflex, plosive);    // ɖ
    C("c", false, palatal, plosive);      C("ɟ", true, palatal, plosive);  // ɟ
    C("k", false, velar, plosive);        C("g", true, velar, plosive);
    C("ɡ", true, velar, plosive);        // ɡ (IPA glyph)
    C("q", false, uvular, plosive);       C("ɢ", true, uvular, plosive);   // ɢ
    C("ʔ", false, glottal, plosive);     // ʔ

    C("m", true, bilabial, nasal);        C("ɱ", true, labiodental, nasal);  // ɱ
    C("n", true, alveolar, nasal);        C("ɳ", true, retroflex, nasal);    // ɳ
    C("ɲ", true, palatal, nasal);    C("ŋ", true, velar, nasal);        // ɲ ŋ
    C("ɴ", true, uvular, nasal);         // ɴ

    C("ʙ", true, bilabial, trill);   C("r", true, alveolar, trill);          // ʙ
    C("ʀ", true, uvular, trill);         // ʀ
    C("ɾ", true, alveolar, tap);     C("ɽ", true, retroflex, tap);      // ɾ ɽ

    C("ɸ", false, bilabial, fricative);  C("β", true, bilabial, fricative);   // ɸ β
    C("f", false, labiodental, fricative);    C("v", true, labiodental, fricative);
    C("θ", false, dental, fricative);    C("ð", true, dental, fricative);     // θ ð
    C("s", false, alveolar, fricative);       C("z", true, alveolar, fricative);
    C("ʃ", false, postalveolar, fricative); C("ʒ", true, postalveolar, fricative); // ʃ ʒ
    C("ʂ", false, retroflex, fricative); C("ʐ", true, retroflex, fricative);  // ʂ ʐ
    C("ç", false, palatal, fricative);   C("ʝ", true, palatal, fricative);    // ç ʝ
    C("x", false, velar, fricative);          C("ɣ", true, velar, fricative);      // ɣ
    C("χ", false, uvular, fricative);    C("ʁ", true, uvular, fricative);     // χ ʁ
    C("ħ", false, pharyngeal, fricative); C("ʕ", true, pharyngeal, fricative); // ħ ʕ
    C("h", false, glottal, fricative);        C("ɦ", true, glottal, fricative);    // ɦ
    C("ɬ", false, alveolar, lateral_fricative); C("ɮ", true, alveolar, lateral_fricative); // ɬ ɮ

    C("ts", false, alveolar, affricate);      C("dz", true, alveolar, affricate);
    C("tʃ", false, postalveolar, affricate); C("dʒ", true, postalveolar, affricate); // tʃ dʒ
    C("tɕ", false, palatal, affricate);  C("dʑ", true, palatal, affricate);   // tɕ dʑ

    C("ʋ", true, labiodental, approximant);  // ʋ
    C("ɹ", true, alveolar, approximant);     // ɹ
    C("ɻ", true, retroflex, approximant);    // ɻ
    C("j", true, palatal, approximant);
    C("ɰ", true, velar, approximant);        // ɰ
    C("w", true, velar, approximant);
    C("l", true, alveolar, lateral_approximant);
    C("ɭ", true, retroflex, lateral_approximant);  // ɭ
    C("ʎ", true, palatal, lateral_approximant);    // ʎ
    C("ʟ", true, velar, lateral_approximant);      // ʟ

    using enum VowelHeight;
    using enum VowelBackness;
    V("i", close_v, front, false);   V("y", close_v, front, true);
    V("ɨ", close_v, central, false); V("ʉ", close_v, central, true);  // ɨ ʉ
    V("ɯ", close_v, back, false);    V("u", close_v, back, true);          // ɯ
    V("ɪ", near_close, front, false); V("ʏ", near_close, front, true); // ɪ ʏ
    V("ʊ", near_close, back, true);  // ʊ
    V("e", close_mid, front, false); V("ø", close_mid, front, true);       // ø
    V("ɘ", close_mid, central, false); V("ɵ", close_mid, central, true); // ɘ ɵ
    V("ɤ", close_mid, back, false);  V("o", close_mid, back, true);        // ɤ
    V("ə", mid, central, false);     // ə
    V("ɛ", open_mid, front, false);  V("œ", open_mid, front, true);   // ɛ œ
    V("ɜ", open_mid, central, false); V("ɞ", open_mid, central, true); // ɜ ɞ
    V("ʌ", open_mid, back, false);   V("ɔ", open_mid, back, true);    // ʌ ɔ
    V("æ", near_open, front, false); V("ɐ", near_open, central, false); // æ ɐ
    V("a", open_v, front, false);         V("ɶ", open_v, front, true);     // ɶ
    V("ɑ", open_v, back, false);     V("ɒ", open_v, back, true);      // ɑ ɒ

    std::unordered_map<std::string, Phoneme> map;
    for (auto& p : list) map.emplace(p.symbol, std::move(p));
    return map;
  }();
  return catalog;
}

// Modifier marks ignored when resolving a symbol to its feature skeleton.
inline bool is_ipa_modifier(char32_t c) {
  switch (c) {
    case 0x02B0: case 0x02B1: case 0x02B2: case 0x02B7:  // ʰ ʱ ʲ ʷ
    case 0x02E0: case 0x02E4: case 0x02BC:               // ˠ ˤ ʼ
    case 0x02C8: case 0x02CC: case 0x02D0: case 0x02D1:  // ˈ ˌ ː ˑ
    case 0x0303: case 0x0324: case 0x0325: case 0x0329:  // nasal, breathy, voiceless, syllabic
    case 0x032A: case 0x032C: case 0x032F: case 0x031A:  // dental, voiced, non-syllabic, unreleased
    case 0x031E: case 0x031F: case 0x0320: case 0x030D:  // lowered, advanced, retracted, vertical line
    case 0x0334:                                         // velarized tilde
      return true;
    default:
      return false;
  }
}

}  // namespace detail

// Resolves an IPA symbol to its feature bundle: exact catalog hit first, then
// the modifier-stripped skeleton. The returned Phoneme keeps the full symbol.
inline std::optional<Phoneme> ipa_lookup(std::string_view symbol) {
  const auto& catalog = detail::ipa_catalog();
  auto it = catalog.find(std::string(symbol));
  if (it != catalog.end()) return it->second;
  std::string skeleton;
  std::size_t pos = 0;
  while (pos < symbol.size()) {
    std::size_t len = utf8_seq_len(symbol, pos);
    char32_t cp = utf8_cp_at(symbol, pos, len);
    if (!detail::is_ipa_modifier(cp)) utf8_append(skeleton, cp);
    pos += len;
  }
  if (skeleton.empty() || skeleton == symbol) return std::nullopt;
  it = catalog.find(skeleton);
  if (it == catalog.end()) return std::nullopt;
  Phoneme p = it->second;
  p.symbol = std::string(symbol);
  return p;
}

// ---------------------------------------------------------------------------
// Inventory
// ---------------------------------------------------------------------------

class PhonemeInventory {
 public:
  PhonemeInventory() = default;

  explicit PhonemeInventory(std::vector<Phoneme> phonemes) {
    for (auto& p : phonemes) add(std::move(p));
  }

  void add(Phoneme p) {
    if (index_.count(p.symbol)) return;
    index_.emplace(p.symbol, phonemes_.size());
    phonemes_.push_back(std::move(p));
  }

  bool contains(std::string_view symbol) const {
    return index_.count(std::string(symbol)) > 0;
  }

  const Phoneme* find(std::string_view symbol) const {
    auto it = index_.find(std::string(symbol));
    return it == index_.end() ? nullptr : &phonemes_[it->second];
  }

  const std::vector<Phoneme>& phonemes() const { return phonemes_; }
  std::size_t size() const { return phonemes_.size(); }
  bool empty() const { return phonemes_.empty(); }

  // Inventories built from real tables must have both classes present.
  void validate() const {
    bool has_c = false, has_v = false;
    for (const auto& p : phonemes_) {
      (p.cls == PhonemeClass::consonant ? has_c : has_v) = true;
    }
    if (!has_c || !has_v)
      throw ValidationError("phoneme inventory needs at least one consonant and one vowel");
  }

 private:
  std::vector<Phoneme> phonemes_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Same-class phonemes within `radius` feature flips of p, excluding p itself.
// Sorted by symbol so that downstream uniform draws are reproducible.
inline std::vector<Phoneme> phonetic_neighbors(const Phoneme& p,
                                               const PhonemeInventory& inv,
                                               int radius = 1) {
  const Phoneme* self = inv.find(p.symbol);
  if (!self) throw PhonemeNotInInventory(p.symbol);
  std::vector<Phoneme> out;
  for (const Phoneme& q : inv.phonemes()) {
    if (q.symbol == p.symbol || q.cls != self->cls) continue;
    if (feature_distance(*self, q) <= radius) out.push_back(q);
  }
  std::sort(out.begin(), out.end(),
            [](const Phoneme& a, const Phoneme& b) { return a.symbol < b.symbol; });
  return out;
}

// ---------------------------------------------------------------------------
// Grapheme<->phoneme table
// ---------------------------------------------------------------------------

struct GraphemePhonemePair {
  std::string grapheme;
  std::string symbol;
  bool bijective = true;
};

class GraphemePhonemeTable {
 public:
  std::string script_id;

  void add_pair(std::string grapheme, std::string symbol, bool bijective = true) {
    if (grapheme.empty() || symbol.empty())
      throw ValidationError("table pairs need nonempty grapheme and symbol");
    if (forward_.count(grapheme))
      throw ValidationError("duplicate grapheme '" + grapheme + "' in table");
    if (bijective) {
      if (inverse_.count(symbol))
        throw ValidationError("duplicate inverse symbol '" + symbol + "' in table");
      inverse_.emplace(symbol, grapheme);
    }
    forward_.emplace(grapheme, pairs_.size());
    std::size_t len = grapheme.size();
    if (std::find(lengths_.begin(), lengths_.end(), len) == lengths_.end()) {
      lengths_.push_back(len);
      std::sort(lengths_.rbegin(), lengths_.rend());
    }
    pairs_.push_back({std::move(grapheme), std::move(symbol), bijective});
  }

  const std::vector<GraphemePhonemePair>& pairs() const { return pairs_; }
  bool empty() const { return pairs_.empty(); }

  // Longest grapheme matching text at byte offset pos; nullptr if none.
  const GraphemePhonemePair* match_at(std::string_view text, std::size_t pos) const {
    for (std::size_t len : lengths_) {
      if (pos + len > text.size()) continue;
      auto it = forward_.find(std::string(text.substr(pos, len)));
      if (it != forward_.end()) return &pairs_[it->second];
    }
    return nullptr;
  }

  bool has_inverse(std::string_view symbol) const {
    return inverse_.count(std::string(symbol)) > 0;
  }

  const std::string* inverse(std::string_view symbol) const {
    auto it = inverse_.find(std::string(symbol));
    return it == inverse_.end() ? nullptr : &it->second;
  }

  // Feature-resolved inventory over every symbol the table can emit.
  PhonemeInventory inventory() const {
    PhonemeInventory inv;
    for (const auto& pair : pairs_) {
      if (inv.contains(pair.symbol)) continue;
      auto p = ipa_lookup(pair.symbol);
      if (!p) throw UnknownPhonemeSymbol(pair.symbol);
      inv.add(std::move(*p));
    }
    return inv;
  }

  // File format: `grapheme <TAB> ipa_symbol [<TAB> oneway]`, `#` comments.
  static GraphemePhonemeTable load(std::istream& in, std::string script_id = {}) {
    GraphemePhonemeTable table;
    table.script_id = std::move(script_id);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      std::string_view line = strip_cr(raw);
      if (line.empty() || line.front() == '#') continue;
      auto cols = split_tabs(line);
      if (cols.size() < 2 || cols.size() > 3 || cols[0].empty() || cols[1].empty())
        throw MalformedLine(line_no, "expected 'grapheme<TAB>ipa[<TAB>oneway]'");
      bool bijective = true;
      if (cols.size() == 3) {
        if (cols[2] != "oneway") throw MalformedLine(line_no, "unknown flag '" + std::string(cols[2]) + "'");
        bijective = false;
      }
      table.add_pair(std::string(cols[0]), std::string(cols[1]), bijective);
    }
    return table;
  }

  void save(std::ostream& out) const {
    out << "# grapheme<TAB>ipa[<TAB>oneway]\n";
    for (const auto& pair : pairs_) {
      out << pair.grapheme << '\t' << pair.symbol;
      if (!pair.bijective) out << "\toneway";
      out << '\n';
    }
  }

 private:
  std::vector<GraphemePhonemePair> pairs_;
  std::unordered_map<std::string, std::size_t> forward_;
  std::unordered_map<std::string, std::string> inverse_;
  std::vector<std::size_t> lengths_;  // descending byte lengths
};

// ---------------------------------------------------------------------------
// Transduction
// ---------------------------------------------------------------------------

struct Segment {
  bool is_phoneme = false;
  std::string source;  // matched grapheme, or the unmapped character verbatim
  std::string symbol;  // empty for residue
};

// Greedy longest-match left-to-right; unmapped code points become residue.
// Concatenating segment sources always reproduces the input exactly.
inline std::vector<Segment> to_phonemes(std::string_view text,
                                        const GraphemePhonemeTable& table) {
  std::vector<Segment> segments;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (const GraphemePhonemePair* pair = table.match_at(text, pos)) {
      segments.push_back({true, pair->grapheme, pair->symbol});
      pos += pair->grapheme.size();
    } else {
      std::size_t len = utf8_seq_len(text, pos);
      segments.push_back({false, std::string(text.substr(pos, len)), {}});
      pos += len;
    }
  }
  return segments;
}

// Strict inverse: every phoneme segment must have a bijective table entry.
inline std::string from_phonemes(const std::vector<Segment>& segments,
                                 const GraphemePhonemeTable& table) {
  std::string out;
  for (const Segment& seg : segments) {
    if (!seg.is_phoneme) {
      out += seg.source;
      continue;
    }
    const std::string* grapheme = table.inverse(seg.symbol);
    if (!grapheme) throw UnmappedPhoneme(seg.symbol);
    out += *grapheme;
  }
  return out;
}

}  // namespace dialup
