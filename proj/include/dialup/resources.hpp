#pragma once

// HRL-side resource builders: everything the noisers consume is derived here
// from a tagged corpus (function words) and a raw corpus (vocabulary, suffix
// inventory, character n-gram model). Builders are plain folds; the resulting
// objects are immutable in use and safe to share across threads.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dialup/errors.hpp"
#include "dialup/rng.hpp"
#include "dialup/text.hpp"

namespace dialup {

// ---------------------------------------------------------------------------
// CoNLL-U ingestion
// ---------------------------------------------------------------------------

struct ConlluToken {
  std::string form;
  std::string upos;
};

struct TaggedSentence {
  std::vector<ConlluToken> tokens;
};

using TaggedCorpus = std::vector<TaggedSentence>;

struct ConlluStats {
  std::size_t sentences = 0;
  std::size_t tokens = 0;
  std::size_t skipped_lines = 0;  // lenient-mode recoveries
};

inline const std::unordered_set<std::string>& ud_upos_tags() {
  static const std::unordered_set<std::string> tags = {
      "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
      "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X"};
  return tags;
}

namespace detail {
inline bool plausible_conllu_id(std::string_view id) {
  if (id.empty()) return false;
  for (char c : id)
    if (!(c >= '0' && c <= '9') && c != '-' && c != '.') return false;
  return true;
}
}  // namespace detail

// 10-column CoNLL-U. Multiword-token ranges (ID with `-`) and empty nodes
// (ID with `.`) are skipped; `#` comments and blank sentence breaks handled.
// strict=false downgrades malformed lines to skips counted in stats.
inline TaggedCorpus parse_conllu(std::istream& in, bool strict = true,
                                 ConlluStats* stats = nullptr) {
  TaggedCorpus corpus;
  TaggedSentence current;
  ConlluStats local;
  std::string raw;
  std::size_t line_no = 0;

  auto flush = [&] {
    if (!current.tokens.empty()) {
      corpus.push_back(std::move(current));
      current = {};
      ++local.sentences;
    }
  };
  auto reject = [&](const std::string& why) {
    if (strict) throw MalformedLine(line_no, why);
    ++local.skipped_lines;
  };

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = strip_cr(raw);
    if (line.empty()) {
      flush();
      continue;
    }
    if (line.front() == '#') continue;
    auto cols = split_tabs(line);
    if (cols.size() != 10) {
      reject("expected 10 tab-separated columns, got " + std::to_string(cols.size()));
      continue;
    }
    std::string_view id = cols[0];
    if (!detail::plausible_conllu_id(id)) {
      reject("bad token ID '" + std::string(id) + "'");
      continue;
    }
    if (id.find('-') != std::string_view::npos) continue;  // multiword range
    if (id.find('.') != std::string_view::npos) continue;  // empty node
    if (cols[1].empty()) {
      reject("empty FORM");
      continue;
    }
    std::string upos(cols[3]);
    if (!ud_upos_tags().count(upos)) {
      reject("UPOS '" + upos + "' is not a UD tag");
      continue;
    }
    current.tokens.push_back({std::string(cols[1]), std::move(upos)});
    ++local.tokens;
  }
  flush();
  if (stats) *stats = local;
  return corpus;
}

// ---------------------------------------------------------------------------
// Function words
// ---------------------------------------------------------------------------

inline const std::set<std::string>& default_closed_pos() {
  static const std::set<std::string> tags = {"ADP", "AUX", "CCONJ", "DET", "PRON", "SCONJ"};
  return tags;
}

struct FunctionWordList {
  std::unordered_set<std::string> words;   // case-folded
  std::set<std::string> source_pos;

  bool contains(std::string_view folded) const {
    return words.count(std::string(folded)) > 0;
  }
  std::vector<std::string> sorted() const {
    std::vector<std::string> out(words.begin(), words.end());
    std::sort(out.begin(), out.end());
    return out;
  }
};

// A word joins the list iff its most frequent UPOS over the corpus is a
// closed-class tag; ties between a closed and an open tag go to inclusion.
inline FunctionWordList extract_function_words(
    const TaggedCorpus& corpus,
    const std::set<std::string>& closed_pos = default_closed_pos()) {
  if (corpus.empty()) throw EmptyCorpus();
  std::unordered_map<std::string, std::unordered_map<std::string, std::uint64_t>> tag_counts;
  for (const auto& sentence : corpus)
    for (const auto& token : sentence.tokens)
      ++tag_counts[casefold(token.form)][token.upos];

  FunctionWordList list;
  list.source_pos = closed_pos;
  for (const auto& [word, counts] : tag_counts) {
    std::uint64_t best = 0;
    for (const auto& [tag, n] : counts) best = std::max(best, n);
    bool modal_closed = false;
    for (const auto& [tag, n] : counts)
      if (n == best && closed_pos.count(tag)) modal_closed = true;
    if (modal_closed) list.words.insert(word);
  }
  return list;
}

inline void save_function_words(const FunctionWordList& list, std::ostream& out) {
  for (const auto& word : list.sorted()) out << word << '\n';
}

inline FunctionWordList load_function_words(std::istream& in) {
  FunctionWordList list;
  list.source_pos = default_closed_pos();
  std::string raw;
  while (std::getline(in, raw)) {
    std::string_view line = strip_cr(raw);
    if (line.empty() || line.front() == '#') continue;
    list.words.insert(casefold(line));
  }
  return list;
}

// ---------------------------------------------------------------------------
// Vocabulary
// ---------------------------------------------------------------------------

struct Vocabulary {
  std::unordered_map<std::string, std::uint64_t> freq;  // case-folded types

  bool contains(std::string_view folded) const {
    return freq.count(std::string(folded)) > 0;
  }
  std::size_t size() const { return freq.size(); }
  bool empty() const { return freq.empty(); }
};

// Counts the case-folded, punctuation-detached alphabetic cores of a line.
inline void accumulate_vocabulary(Vocabulary& vocab, std::string_view line) {
  for (const TokenSpan& span : whitespace_tokens(line)) {
    TokenParts parts = detach_punctuation(line.substr(span.begin, span.end - span.begin));
    if (parts.core.empty() || !has_alpha(parts.core)) continue;
    ++vocab.freq[casefold(parts.core)];
  }
}

inline Vocabulary build_vocabulary(std::istream& in) {
  Vocabulary vocab;
  std::string raw;
  while (std::getline(in, raw)) accumulate_vocabulary(vocab, strip_cr(raw));
  return vocab;
}

inline void save_vocabulary(const Vocabulary& vocab, std::ostream& out) {
  std::vector<std::pair<std::string, std::uint64_t>> rows(vocab.freq.begin(), vocab.freq.end());
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  for (const auto& [word, n] : rows) out << word << '\t' << n << '\n';
}

inline Vocabulary load_vocabulary(std::istream& in) {
  Vocabulary vocab;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = strip_cr(raw);
    if (line.empty() || line.front() == '#') continue;
    auto cols = split_tabs(line);
    if (cols.size() != 2 || cols[0].empty())
      throw MalformedLine(line_no, "expected 'word<TAB>freq'");
    std::uint64_t n = 0;
    for (char c : cols[1]) {
      if (c < '0' || c > '9') throw MalformedLine(line_no, "bad frequency");
      n = n * 10 + static_cast<std::uint64_t>(c - '0');
    }
    if (n == 0) throw MalformedLine(line_no, "frequency must be >= 1");
    vocab.freq[casefold(cols[0])] += n;
  }
  return vocab;
}

// ---------------------------------------------------------------------------
// Suffix inventory
// ---------------------------------------------------------------------------

struct SuffixInventory {
  std::vector<std::pair<std::string, std::uint64_t>> suffixes;  // (suffix, type freq)
  std::size_t max_len = 4;
  std::uint64_t min_type_freq = 5;
  std::size_t top_k = 100;
};

// Word-final character n-grams of length 1..max_len over distinct vocabulary
// types, requiring a stem of >= 2 characters. Ranked by type frequency desc,
// then length desc, then bytewise for a stable order.
inline SuffixInventory extract_suffixes(const Vocabulary& vocab, std::size_t max_len = 4,
                                        std::uint64_t min_type_freq = 5,
                                        std::size_t top_k = 100) {
  if (max_len < 1 || min_type_freq < 2 || top_k < 1)
    throw ValidationError("suffix extraction parameters out of range");
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& [word, n] : vocab.freq) {
    (void)n;
    std::vector<char32_t> cps = utf8_decode(word);
    if (cps.size() < 3) continue;
    std::size_t longest = std::min(max_len, cps.size() - 2);
    for (std::size_t len = 1; len <= longest; ++len) {
      std::string suffix;
      for (std::size_t i = cps.size() - len; i < cps.size(); ++i) utf8_append(suffix, cps[i]);
      ++counts[suffix];
    }
  }
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (auto& [suffix, n] : counts)
    if (n >= min_type_freq) kept.emplace_back(suffix, n);
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    std::size_t la = cp_length(a.first), lb = cp_length(b.first);
    if (la != lb) return la > lb;
    return a.first < b.first;
  });
  if (kept.size() > top_k) kept.resize(top_k);
  SuffixInventory inv;
  inv.suffixes = std::move(kept);
  inv.max_len = max_len;
  inv.min_type_freq = min_type_freq;
  inv.top_k = top_k;
  return inv;
}

inline void save_suffixes(const SuffixInventory& inv, std::ostream& out) {
  out << "#max_len=" << inv.max_len << " #min_type_freq=" << inv.min_type_freq
      << " #top_k=" << inv.top_k << '\n';
  for (const auto& [suffix, n] : inv.suffixes) out << suffix << '\t' << n << '\n';
}

inline SuffixInventory load_suffixes(std::istream& in) {
  SuffixInventory inv;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = strip_cr(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      auto read_param = [&](std::string_view key, auto& slot) {
        std::size_t at = line.find(key);
        if (at == std::string_view::npos) return;
        at += key.size();
        std::uint64_t v = 0;
        while (at < line.size() && line[at] >= '0' && line[at] <= '9')
          v = v * 10 + static_cast<std::uint64_t>(line[at++] - '0');
        slot = static_cast<std::remove_reference_t<decltype(slot)>>(v);
      };
      read_param("#max_len=", inv.max_len);
      read_param("#min_type_freq=", inv.min_type_freq);
      read_param("#top_k=", inv.top_k);
      continue;
    }
    auto cols = split_tabs(line);
    if (cols.size() != 2 || cols[0].empty())
      throw MalformedLine(line_no, "expected 'suffix<TAB>freq'");
    std::uint64_t n = 0;
    for (char c : cols[1]) {
      if (c < '0' || c > '9') throw MalformedLine(line_no, "bad frequency");
      n = n * 10 + static_cast<std::uint64_t>(c - '0');
    }
    inv.suffixes.emplace_back(std::string(cols[0]), n);
  }
  return inv;
}

// ---------------------------------------------------------------------------
// Character n-gram model
// ---------------------------------------------------------------------------

class CharNgramModel {
 public:
  static constexpr char32_t kStart = 0x0002;  // sentinel, never in alphabet
  static constexpr char32_t kEnd = 0x0003;

  int order() const { return n_; }
  double smoothing() const { return k_; }
  const std::vector<char32_t>& alphabet() const { return alphabet_; }

  static CharNgramModel train(const Vocabulary& vocab, int n = 3, double k = 0.01) {
    if (vocab.empty()) throw EmptyVocabulary();
    if (n < 2) throw ValidationError("n-gram order must be >= 2");
    if (k <= 0.0) throw ValidationError("smoothing constant must be > 0");
    CharNgramModel model;
    model.n_ = n;
    model.k_ = k;
    std::set<char32_t> alphabet;
    for (const auto& [word, freq] : vocab.freq) {
      std::vector<char32_t> cps = utf8_decode(word);
      if (cps.empty()) continue;
      for (char32_t c : cps) alphabet.insert(c);
      std::u32string history(static_cast<std::size_t>(n - 1), kStart);
      for (std::size_t i = 0; i <= cps.size(); ++i) {
        char32_t next = i < cps.size() ? cps[i] : kEnd;
        model.counts_[history][next] += freq;
        model.history_totals_[history] += freq;
        if (next != kEnd) model.unigrams_[next] += freq;
        history.erase(history.begin());
        history.push_back(next);
      }
    }
    model.alphabet_.assign(alphabet.begin(), alphabet.end());
    if (model.alphabet_.empty()) throw EmptyVocabulary();
    return model;
  }

  // Add-k conditional probability of `next` (a letter or kEnd) given history.
  double prob(const std::u32string& history, char32_t next) const {
    double denom_extra = k_ * static_cast<double>(alphabet_.size() + 1);
    auto hit = counts_.find(history);
    if (hit == counts_.end()) return k_ / denom_extra;
    double total = static_cast<double>(history_totals_.at(history));
    auto cit = hit->second.find(next);
    double count = cit == hit->second.end() ? 0.0 : static_cast<double>(cit->second);
    return (count + k_) / (total + denom_extra);
  }

  std::u32string start_history() const {
    return std::u32string(static_cast<std::size_t>(n_ - 1), kStart);
  }

  // Samples a word with cp length in [min_len, max_len]: the end marker is
  // only offered once min_len is reached, and max_len forces a stop.
  std::string sample_string(Rng& rng, std::size_t min_len, std::size_t max_len) const {
    if (min_len < 1 || max_len < min_len)
      throw ValidationError("bad length window for sampling");
    std::u32string history = start_history();
    std::vector<char32_t> out;
    while (out.size() < max_len) {
      bool allow_end = out.size() >= min_len;
      char32_t next = sample_next(history, rng, allow_end);
      if (next == kEnd) break;
      out.push_back(next);
      history.erase(history.begin());
      history.push_back(next);
    }
    std::string encoded;
    for (char32_t c : out) utf8_append(encoded, c);
    return encoded;
  }

  // Least-frequent alphabet character (ties -> lowest code point).
  char32_t rarest_char() const {
    char32_t best = alphabet_.front();
    std::uint64_t best_count = unigram_count(best);
    for (char32_t c : alphabet_) {
      std::uint64_t n = unigram_count(c);
      if (n < best_count) {
        best = c;
        best_count = n;
      }
    }
    return best;
  }

  void save(std::ostream& out) const {
    out << "#order=" << n_ << " #k=" << format_k() << '\n';
    for (const auto& [history, nexts] : counts_) {
      for (const auto& [next, count] : nexts) {
        write_escaped(out, history);
        out << '\t';
        write_escaped(out, std::u32string(1, next));
        out << '\t' << count << '\n';
      }
    }
  }

  static CharNgramModel load(std::istream& in) {
    CharNgramModel model;
    std::string raw;
    std::size_t line_no = 0;
    bool have_header = false;
    std::set<char32_t> alphabet;
    while (std::getline(in, raw)) {
      ++line_no;
      std::string_view line = strip_cr(raw);
      if (line.empty()) continue;
      if (line.front() == '#') {
        std::size_t at = line.find("#order=");
        if (at != std::string_view::npos) {
          model.n_ = 0;
          at += 7;
          while (at < line.size() && line[at] >= '0' && line[at] <= '9')
            model.n_ = model.n_ * 10 + (line[at++] - '0');
          std::size_t kat = line.find("#k=");
          if (kat != std::string_view::npos)
            model.k_ = std::stod(std::string(line.substr(kat + 3)));
          have_header = true;
        }
        continue;
      }
      if (!have_header) throw MalformedLine(line_no, "missing '#order=' header");
      auto cols = split_tabs(line);
      if (cols.size() != 3) throw MalformedLine(line_no, "expected 'history<TAB>char<TAB>count'");
      std::u32string history = read_escaped(cols[0], line_no);
      std::u32string next = read_escaped(cols[1], line_no);
      if (next.size() != 1) throw MalformedLine(line_no, "next column must be one character");
      if (history.size() != static_cast<std::size_t>(model.n_ - 1))
        throw MalformedLine(line_no, "history length does not match order");
      std::uint64_t count = 0;
      for (char c : cols[2]) {
        if (c < '0' || c > '9') throw MalformedLine(line_no, "bad count");
        count = count * 10 + static_cast<std::uint64_t>(c - '0');
      }
      model.counts_[history][next[0]] += count;
      model.history_totals_[history] += count;
      if (next[0] != kEnd) {
        model.unigrams_[next[0]] += count;
        alphabet.insert(next[0]);
      }
      for (char32_t c : history)
        if (c != kStart && c != kEnd) alphabet.insert(c);
    }
    if (!have_header || model.n_ < 2) throw DataError("n-gram model file has no valid header");
    if (model.counts_.empty()) throw DataError("n-gram model file has no counts");
    model.alphabet_.assign(alphabet.begin(), alphabet.end());
    return model;
  }

 private:
  char32_t sample_next(const std::u32string& history, Rng& rng, bool allow_end) const {
    static thread_local std::vector<double> weights;
    weights.clear();
    double total = 0.0;
    auto hit = counts_.find(history);
    auto count_of = [&](char32_t c) -> double {
      if (hit == counts_.end()) return 0.0;
      auto cit = hit->second.find(c);
      return cit == hit->second.end() ? 0.0 : static_cast<double>(cit->second);
    };
    for (char32_t c : alphabet_) {
      double w = count_of(c) + k_;
      weights.push_back(w);
      total += w;
    }
    if (allow_end) {
      double w = count_of(kEnd) + k_;
      weights.push_back(w);
      total += w;
    }
    std::size_t pick = rng.weighted_index(weights, total);
    if (pick == alphabet_.size()) return kEnd;
    return alphabet_[pick];
  }

  std::uint64_t unigram_count(char32_t c) const {
    auto it = unigrams_.find(c);
    return it == unigrams_.end() ? 0 : it->second;
  }

  std::string format_k() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", k_);
    return buf;
  }

  static void write_escaped(std::ostream& out, const std::u32string& s) {
    for (char32_t c : s) {
      if (c == kStart) {
        out << "<s>";
      } else if (c == kEnd) {
        out << "</s>";
      } else if (c == U'<' || c == U'\\') {
        std::string utf8;
        utf8_append(utf8, c);
        out << '\\' << utf8;
      } else {
        std::string utf8;
        utf8_append(utf8, c);
        out << utf8;
      }
    }
  }

  static std::u32string read_escaped(std::string_view s, std::size_t line_no) {
    std::u32string out;
    std::size_t pos = 0;
    while (pos < s.size()) {
      if (s[pos] == '\\') {
        ++pos;
        if (pos >= s.size()) throw MalformedLine(line_no, "dangling escape");
        std::size_t len = utf8_seq_len(s, pos);
        out.push_back(utf8_cp_at(s, pos, len));
        pos += len;
      } else if (s.compare(pos, 3, "<s>") == 0) {
        out.push_back(kStart);
        pos += 3;
      } else if (s.compare(pos, 4, "</s>") == 0) {
        out.push_back(kEnd);
        pos += 4;
      } else {
        std::size_t len = utf8_seq_len(s, pos);
        out.push_back(utf8_cp_at(s, pos, len));
        pos += len;
      }
    }
    return out;
  }

  int n_ = 3;
  double k_ = 0.01;
  std::vector<char32_t> alphabet_;  // sorted
  std::map<std::u32string, std::map<char32_t, std::uint64_t>> counts_;
  std::map<std::u32string, std::uint64_t> history_totals_;
  std::map<char32_t, std::uint64_t> unigrams_;
};

// Nonword generator: sample within the length window until the result is out
// of vocabulary; after 50 misses, force novelty with a rare-character suffix.
inline std::string generate_nonword(const CharNgramModel& model, std::size_t target_len,
                                    const Vocabulary& vocab, Rng& rng) {
  if (target_len < 1) throw ValidationError("target length must be >= 1");
  std::size_t min_len = target_len > 3 ? target_len - 2 : 1;
  std::size_t max_len = target_len + 2;
  std::string candidate;
  for (int attempt = 0; attempt < 50; ++attempt) {
    candidate = model.sample_string(rng, min_len, max_len);
    if (!vocab.contains(candidate)) return candidate;
  }
  // Trim to leave room, then append the rarest letter until novel.
  std::vector<char32_t> cps = utf8_decode(candidate);
  if (cps.size() > target_len + 1) cps.resize(target_len + 1);
  std::string base = utf8_encode(cps);
  std::string rare;
  utf8_append(rare, model.rarest_char());
  do {
    base += rare;
  } while (vocab.contains(base));
  return base;
}

}  // namespace dialup
