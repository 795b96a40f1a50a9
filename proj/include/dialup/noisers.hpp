#pragma once

// Artificial-language sampling and application. A language is a frozen map of
// changes: phoneme substitutions, suffix rewrites, function-word rewrites and
// a lazily populated content-word map. Every decision flows from one 64-bit
// seed through named derivation, so sampling and application are independent
// of iteration order and thread count.
//
// Selection coins compare a per-unit uniform draw against the dial, and the
// draw depends only on (seed, kind, unit). Raising a dial with the seed held
// fixed therefore grows the affected set monotonically — sweeps over one
// dimension yield nested noise sets by construction.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dialup/errors.hpp"
#include "dialup/phonology.hpp"
#include "dialup/resources.hpp"
#include "dialup/rng.hpp"
#include "dialup/text.hpp"

namespace dialup {

struct NoiseDials {
  double theta_p = 0.0;
  double theta_m = 0.0;
  double theta_f = 0.0;
  double theta_c = 0.0;

  void validate() const {
    for (double v : {theta_p, theta_m, theta_f, theta_c})
      if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("noise dials must lie in [0,1]");
  }
  bool all_zero() const {
    return theta_p == 0.0 && theta_m == 0.0 && theta_f == 0.0 && theta_c == 0.0;
  }
};

// Default operating points.
inline constexpr NoiseDials kShellDials{0.05, 0.3, 0.5, 0.001};
inline constexpr NoiseDials kCloudThetaMax{0.07, 0.5, 0.8, 0.001};
inline constexpr int kCloudHyperspheres = 10;
// Fixed high dial used internally when minting suffix / function-word targets.
inline constexpr double kInternalPhonologicalDial = 0.8;

struct RandaugDials {
  double theta_rc = 0.0;  // per-character replacement
  double theta_rw = 0.0;  // per-word replacement

  void validate() const {
    for (double v : {theta_rc, theta_rw})
      if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("randaug dials must lie in [0,1]");
  }
};

inline constexpr RandaugDials kRandaugShellDials{0.05, 0.001};
inline constexpr RandaugDials kRandaugCloudMax{0.07, 0.001};

// Immutable resource bundle shared by sampling and application.
struct NoiserResources {
  const PhonemeInventory* inventory = nullptr;
  const GraphemePhonemeTable* g2p = nullptr;
  const SuffixInventory* suffixes = nullptr;
  const FunctionWordList* function_words = nullptr;
  const CharNgramModel* charlm = nullptr;
  const Vocabulary* vocab = nullptr;

  void validate() const {
    if (!inventory || !g2p || !suffixes || !function_words || !charlm || !vocab)
      throw ValidationError("noiser resources are incomplete");
  }
};

namespace detail {
// Radius-1 neighbors that can be written back through the table's inverse.
inline std::vector<const Phoneme*> writable_neighbors(const Phoneme& p,
                                                      const PhonemeInventory& inv,
                                                      const GraphemePhonemeTable& g2p) {
  std::vector<const Phoneme*> out;
  std::vector<Phoneme> scratch = phonetic_neighbors(p, inv, 1);
  out.reserve(scratch.size());
  for (const Phoneme& q : scratch)
    if (g2p.has_inverse(q.symbol)) out.push_back(inv.find(q.symbol));
  return out;
}
}  // namespace detail

// Replaces each phoneme occurrence independently with probability
// internal_dial by a uniform radius-1 neighbor; residues pass through.
inline std::string noise_unit_phonologically(std::string_view unit, double internal_dial,
                                             const PhonemeInventory& inv,
                                             const GraphemePhonemeTable& g2p, Rng& rng) {
  if (!(internal_dial >= 0.0 && internal_dial <= 1.0))
    throw ValidationError("internal dial must lie in [0,1]");
  std::string out;
  for (const Segment& seg : to_phonemes(unit, g2p)) {
    if (!seg.is_phoneme) {
      out += seg.source;
      continue;
    }
    const Phoneme* p = inv.find(seg.symbol);
    if (!p || !rng.bernoulli(internal_dial)) {
      out += seg.source;
      continue;
    }
    auto candidates = detail::writable_neighbors(*p, inv, g2p);
    if (candidates.empty()) {
      out += seg.source;
      continue;
    }
    const Phoneme* target = candidates[rng.uniform_index(candidates.size())];
    out += *g2p.inverse(target->symbol);
  }
  return out;
}

// ---------------------------------------------------------------------------
// ArtificialLanguage
// ---------------------------------------------------------------------------

class ArtificialLanguage {
 public:
  NoiseDials dials;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> phoneme_map;        // non-identity entries only
  std::map<std::string, std::string> suffix_map;         // value may equal key
  std::map<std::string, std::string> function_word_map;  // value may equal key

  ArtificialLanguage() : content_mutex_(std::make_unique<std::mutex>()) {}

  // Rebuild lookup indices after the maps change (sampling or loading).
  void finalize() {
    suffix_lengths_.clear();
    for (const auto& [sfx, target] : suffix_map) {
      (void)target;
      std::size_t len = cp_length(sfx);
      if (std::find(suffix_lengths_.begin(), suffix_lengths_.end(), len) == suffix_lengths_.end())
        suffix_lengths_.push_back(len);
    }
    std::sort(suffix_lengths_.rbegin(), suffix_lengths_.rend());
  }

  const std::vector<std::size_t>& suffix_lengths() const { return suffix_lengths_; }

  // Per-word-type content decision: the replacement string, or the word
  // itself when the type keeps its identity. First consultation records the
  // decision; the decision is a pure function of (seed, word), so concurrent
  // first encounters agree.
  std::string content_decision(const std::string& word, const NoiserResources& res) const {
    {
      std::lock_guard<std::mutex> lock(*content_mutex_);
      auto it = content_word_map_.find(word);
      if (it != content_word_map_.end()) return it->second;
    }
    Rng rng(derive_seed(seed, "content", word));
    std::string decision = word;
    if (rng.bernoulli(dials.theta_c)) {
      std::size_t len = cp_length(word);
      decision = generate_nonword(*res.charlm, len == 0 ? 1 : len, *res.vocab, rng);
    }
    std::lock_guard<std::mutex> lock(*content_mutex_);
    return content_word_map_.emplace(word, std::move(decision)).first->second;
  }

  std::map<std::string, std::string> content_snapshot() const {
    std::lock_guard<std::mutex> lock(*content_mutex_);
    return content_word_map_;
  }

  void save(std::ostream& out) const {
    out << "#dialup-language v1\n";
    out << "#seed=" << seed << '\n';
    out << "#dials=" << format_double(dials.theta_p) << ' ' << format_double(dials.theta_m)
        << ' ' << format_double(dials.theta_f) << ' ' << format_double(dials.theta_c) << '\n';
    auto section = [&](const char* name, const std::map<std::string, std::string>& map) {
      out << '[' << name << "]\n";
      for (const auto& [src, tgt] : map) out << src << '\t' << tgt << '\n';
    };
    section("phonemes", phoneme_map);
    section("suffixes", suffix_map);
    section("function_words", function_word_map);
    section("content_words", content_snapshot());
  }

  static ArtificialLanguage load(std::istream& in) {
    ArtificialLanguage lang;
    std::map<std::string, std::string>* section = nullptr;
    bool saw_seed = false, saw_dials = false;
    std::string raw;
    std::size_t line_no = 0;
    std::map<std::string, std::string> content;
    while (std::getline(in, raw)) {
      ++line_no;
      std::string_view line = strip_cr(raw);
      if (line.empty()) continue;
      if (line.front() == '#') {
        if (line.rfind("#seed=", 0) == 0) {
          lang.seed = 0;
          for (char c : line.substr(6)) {
            if (c < '0' || c > '9') throw MalformedLine(line_no, "bad seed");
            lang.seed = lang.seed * 10 + static_cast<std::uint64_t>(c - '0');
          }
          saw_seed = true;
        } else if (line.rfind("#dials=", 0) == 0) {
          std::string tail(line.substr(7));
          double p, m, f, c;
          if (std::sscanf(tail.c_str(), "%lf %lf %lf %lf", &p, &m, &f, &c) != 4)
            throw MalformedLine(line_no, "bad dials header");
          lang.dials = {p, m, f, c};
          saw_dials = true;
        }
        continue;
      }
      if (line.front() == '[') {
        if (line == "[phonemes]") section = &lang.phoneme_map;
        else if (line == "[suffixes]") section = &lang.suffix_map;
        else if (line == "[function_words]") section = &lang.function_word_map;
        else if (line == "[content_words]") section = &content;
        else throw MalformedLine(line_no, "unknown section " + std::string(line));
        continue;
      }
      if (!section) throw MalformedLine(line_no, "row outside any section");
      auto cols = split_tabs(line);
      if (cols.size() != 2 || cols[0].empty())
        throw MalformedLine(line_no, "expected 'source<TAB>target'");
      (*section)[std::string(cols[0])] = std::string(cols[1]);
    }
    if (!saw_seed || !saw_dials) throw DataError("language file is missing seed/dials header");
    lang.dials.validate();
    {
      std::lock_guard<std::mutex> lock(*lang.content_mutex_);
      lang.content_word_map_ = std::move(content);
    }
    lang.finalize();
    return lang;
  }

 private:
  mutable std::unique_ptr<std::mutex> content_mutex_;
  mutable std::map<std::string, std::string> content_word_map_;
  std::vector<std::size_t> suffix_lengths_;  // descending cp lengths of suffix keys
};

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

inline ArtificialLanguage sample_language(const NoiseDials& dials, const NoiserResources& res,
                                          std::uint64_t seed) {
  dials.validate();
  res.validate();
  res.inventory->validate();
  for (const auto& pair : res.g2p->pairs())
    if (!res.inventory->contains(pair.symbol))
      throw ResourceMismatch("table phoneme '" + pair.symbol + "' missing from inventory");

  ArtificialLanguage lang;
  lang.dials = dials;
  lang.seed = seed;

  for (const Phoneme& p : res.inventory->phonemes()) {
    Rng rng(derive_seed(seed, "phoneme", p.symbol));
    if (!rng.bernoulli(dials.theta_p)) continue;
    auto candidates = detail::writable_neighbors(p, *res.inventory, *res.g2p);
    if (candidates.empty()) continue;
    lang.phoneme_map[p.symbol] = candidates[rng.uniform_index(candidates.size())]->symbol;
  }

  for (const auto& [sfx, freq] : res.suffixes->suffixes) {
    (void)freq;
    Rng rng(derive_seed(seed, "suffix", sfx));
    if (!rng.bernoulli(dials.theta_m)) continue;
    lang.suffix_map[sfx] =
        noise_unit_phonologically(sfx, kInternalPhonologicalDial, *res.inventory, *res.g2p, rng);
  }

  for (const std::string& word : res.function_words->words) {
    Rng rng(derive_seed(seed, "function", word));
    if (!rng.bernoulli(dials.theta_f)) continue;
    lang.function_word_map[word] =
        noise_unit_phonologically(word, kInternalPhonologicalDial, *res.inventory, *res.g2p, rng);
  }

  lang.finalize();
  return lang;
}

// ---------------------------------------------------------------------------
// Application
// ---------------------------------------------------------------------------

namespace detail {
inline std::string map_stem_phonemes(std::string_view stem, const ArtificialLanguage& lang,
                                     const GraphemePhonemeTable& g2p) {
  std::string out;
  for (const Segment& seg : to_phonemes(stem, g2p)) {
    if (seg.is_phoneme) {
      auto it = lang.phoneme_map.find(seg.symbol);
      if (it != lang.phoneme_map.end()) {
        out += *g2p.inverse(it->second);
        continue;
      }
    }
    out += seg.source;
  }
  return out;
}
}  // namespace detail

// Token pipeline: function-word map, then the per-type content coin, then
// longest-match suffix rewrite (stem >= 2 chars), then the phoneme map over
// the stem. Substituted material is exempt from further noising. Unchanged
// tokens are emitted byte-identically.
inline std::string apply_language(std::string_view sentence, const ArtificialLanguage& lang,
                                  const NoiserResources& res) {
  res.validate();
  return transform_tokens(sentence, [&](std::size_t, std::string_view token) -> std::string {
    TokenParts parts = detach_punctuation(token);
    if (parts.core.empty() || !has_alpha(parts.core)) return std::string(token);
    std::string folded = casefold(parts.core);
    std::string replaced;

    auto fit = lang.function_word_map.find(folded);
    if (fit != lang.function_word_map.end()) {
      replaced = fit->second;
    } else {
      std::string decision = lang.content_decision(folded, res);
      if (decision != folded) {
        replaced = std::move(decision);
      } else {
        std::vector<char32_t> cps = utf8_decode(folded);
        std::string_view stem = folded;
        const std::string* suffix_target = nullptr;
        for (std::size_t len : lang.suffix_lengths()) {
          if (cps.size() < len + 2) continue;
          std::string tail;
          for (std::size_t i = cps.size() - len; i < cps.size(); ++i) utf8_append(tail, cps[i]);
          auto sit = lang.suffix_map.find(tail);
          if (sit == lang.suffix_map.end()) continue;
          stem = std::string_view(folded).substr(0, folded.size() - tail.size());
          suffix_target = &sit->second;
          break;
        }
        replaced = detail::map_stem_phonemes(stem, lang, *res.g2p);
        if (suffix_target) replaced += *suffix_target;
      }
    }

    if (replaced == folded) return std::string(token);  // untouched: keep original bytes
    std::size_t first_len = utf8_seq_len(parts.core, 0);
    if (is_upper_cp(utf8_cp_at(parts.core, 0, first_len))) replaced = capitalize_first(replaced);
    std::string out;
    out.reserve(parts.lead.size() + replaced.size() + parts.trail.size());
    out.append(parts.lead);
    out.append(replaced);
    out.append(parts.trail);
    return out;
  });
}

// ---------------------------------------------------------------------------
// randaug baseline
// ---------------------------------------------------------------------------

struct RandaugResources {
  std::vector<char32_t> alphabet;   // same-script characters, sorted unique
  std::vector<std::string> words;   // case-folded vocabulary types, sorted
};

inline RandaugResources make_randaug_resources(const Vocabulary& vocab) {
  if (vocab.empty()) throw EmptyVocabulary();
  std::set<char32_t> chars;
  std::set<std::string> words;
  for (const auto& [word, freq] : vocab.freq) {
    (void)freq;
    for (char32_t c : utf8_decode(word)) chars.insert(c);
    words.insert(word);
  }
  RandaugResources out;
  out.alphabet.assign(chars.begin(), chars.end());
  out.words.assign(words.begin(), words.end());
  return out;
}

// Character- and word-level random perturbation (the non-linguistic baseline):
// each token is replaced wholesale with probability theta_rw by a uniformly
// chosen different vocabulary word; otherwise each of its characters is
// replaced with probability theta_rc by a uniform same-script character.
inline std::string apply_randaug(std::string_view sentence, const RandaugDials& rd,
                                 const RandaugResources& rres, Rng& rng) {
  rd.validate();
  if (rres.alphabet.empty()) throw ValidationError("randaug needs a nonempty script alphabet");
  return transform_tokens(sentence, [&](std::size_t, std::string_view token) -> std::string {
    TokenParts parts = detach_punctuation(token);
    if (parts.core.empty() || !has_alpha(parts.core)) return std::string(token);
    std::string folded = casefold(parts.core);
    std::string replaced;

    if (rng.bernoulli(rd.theta_rw) && !rres.words.empty()) {
      auto it = std::lower_bound(rres.words.begin(), rres.words.end(), folded);
      bool present = it != rres.words.end() && *it == folded;
      std::size_t n = rres.words.size();
      if (present && n == 1) {
        replaced = folded;  // no different word exists
      } else if (present) {
        std::size_t self = static_cast<std::size_t>(it - rres.words.begin());
        std::size_t pick = rng.uniform_index(n - 1);
        if (pick >= self) ++pick;
        replaced = rres.words[pick];
      } else {
        replaced = rres.words[rng.uniform_index(n)];
      }
    } else {
      std::vector<char32_t> cps = utf8_decode(folded);
      for (char32_t& c : cps)
        if (rng.bernoulli(rd.theta_rc)) c = rres.alphabet[rng.uniform_index(rres.alphabet.size())];
      replaced = utf8_encode(cps);
    }

    if (replaced == folded) return std::string(token);
    std::size_t first_len = utf8_seq_len(parts.core, 0);
    if (is_upper_cp(utf8_cp_at(parts.core, 0, first_len))) replaced = capitalize_first(replaced);
    std::string out;
    out.reserve(parts.lead.size() + replaced.size() + parts.trail.size());
    out.append(parts.lead);
    out.append(replaced);
    out.append(parts.trail);
    return out;
  });
}

}  // namespace dialup
