#pragma once

// CRL<->HRL bilingual lexicons: TSV ingestion, priority merging, IBM Model 1
// induction from bitext, and projection of HRL function-word status onto CRL
// words. Lookup resolution is total: source priority, then weight descending,
// then the HRL word itself, so every query has one deterministic answer.

#include <algorithm>
#include <cmath>
#include <cstdint>
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
#include "dialup/langgen.hpp"
#include "dialup/resources.hpp"
#include "dialup/text.hpp"

namespace dialup {

struct Translation {
  std::string hrl;
  double weight = 1.0;
  std::string source;
};

struct LexiconEntry {
  std::string crl;
  std::vector<Translation> translations;
};

class BilingualLexicon {
 public:
  std::map<std::string, LexiconEntry> entries;  // keyed by case-folded CRL word
  std::vector<std::string> source_priority;     // highest priority first

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }

  // Priority rank; unknown sources sort after all known ones.
  std::size_t rank(const std::string& source) const {
    for (std::size_t i = 0; i < source_priority.size(); ++i)
      if (source_priority[i] == source) return i;
    return source_priority.size();
  }

  // Canonical translation order: source priority, weight desc, HRL word asc.
  void sort_translations() {
    for (auto& [crl, entry] : entries) {
      (void)crl;
      std::sort(entry.translations.begin(), entry.translations.end(),
                [this](const Translation& a, const Translation& b) {
                  std::size_t ra = rank(a.source), rb = rank(b.source);
                  if (ra != rb) return ra < rb;
                  if (a.weight != b.weight) return a.weight > b.weight;
                  return a.hrl < b.hrl;
                });
    }
  }

  const Translation* top(std::string_view crl_folded) const {
    auto it = entries.find(std::string(crl_folded));
    if (it == entries.end() || it->second.translations.empty()) return nullptr;
    return &it->second.translations.front();
  }

  // Adds one (crl, hrl, weight, source) observation, keeping the max weight
  // for duplicate (crl, hrl, source) triples.
  void add(const std::string& crl, const std::string& hrl, double weight,
           const std::string& source) {
    LexiconEntry& entry = entries[crl];
    entry.crl = crl;
    for (Translation& t : entry.translations) {
      if (t.hrl == hrl && t.source == source) {
        t.weight = std::max(t.weight, weight);
        return;
      }
    }
    entry.translations.push_back({hrl, weight, source});
  }
};

namespace detail {
inline bool single_token(std::string_view word) {
  std::size_t pos = 0;
  while (pos < word.size()) {
    std::size_t len = utf8_seq_len(word, pos);
    if (is_space_cp(utf8_cp_at(word, pos, len))) return false;
    pos += len;
  }
  return !word.empty();
}

inline double parse_weight(std::string_view text, std::size_t line_no) {
  double w = 0.0;
  try {
    std::size_t used = 0;
    std::string s(text);
    w = std::stod(s, &used);
    if (used != s.size()) throw MalformedLine(line_no, "bad weight '" + s + "'");
  } catch (const MalformedLine&) {
    throw;
  } catch (const std::exception&) {
    throw MalformedLine(line_no, "bad weight '" + std::string(text) + "'");
  }
  if (!(w >= 0.0)) throw MalformedLine(line_no, "weight must be nonnegative");
  return w;
}
}  // namespace detail

// 2- or 3-column TSV: `crl <TAB> hrl [<TAB> weight]`; missing weight = 1.0.
// Both sides are case-folded; multiword entries are rejected.
inline BilingualLexicon load_lexicon(std::istream& in, const std::string& source_tag) {
  BilingualLexicon lex;
  lex.source_priority = {source_tag};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = strip_cr(raw);
    if (line.empty() || line.front() == '#') continue;
    auto cols = split_tabs(line);
    if (cols.size() < 2 || cols.size() > 3 || cols[0].empty() || cols[1].empty())
      throw MalformedLine(line_no, "expected 'crl<TAB>hrl[<TAB>weight]'");
    std::string crl = casefold(cols[0]);
    std::string hrl = casefold(cols[1]);
    if (!detail::single_token(crl) || !detail::single_token(hrl))
      throw MalformedLine(line_no, "multiword lexicon entries are not supported");
    double weight = cols.size() == 3 ? detail::parse_weight(cols[2], line_no) : 1.0;
    lex.add(crl, hrl, weight, source_tag);
  }
  lex.sort_translations();
  return lex;
}

// Union of lexicons, list order = priority order (highest first).
inline BilingualLexicon merge_lexicons(const std::vector<BilingualLexicon>& lexicons) {
  BilingualLexicon merged;
  for (const BilingualLexicon& lex : lexicons)
    for (const std::string& source : lex.source_priority)
      if (merged.rank(source) == merged.source_priority.size())
        merged.source_priority.push_back(source);
  for (const BilingualLexicon& lex : lexicons)
    for (const auto& [crl, entry] : lex.entries)
      for (const Translation& t : entry.translations) merged.add(crl, t.hrl, t.weight, t.source);
  merged.sort_translations();
  return merged;
}

// IBM Model 1 with a null source token: EM over case-folded whitespace
// tokens, t(hrl | crl). Keeps translations with t >= threshold. Appends the
// per-iteration corpus log-likelihood (computed with the parameters entering
// each iteration) to ll_trace when given; EM guarantees it never decreases.
inline BilingualLexicon induce_lexicon_ibm1(const Bitext& bitext, int iterations = 10,
                                            double threshold = 0.1,
                                            std::vector<double>* ll_trace = nullptr) {
  if (iterations < 1) throw ValidationError("IBM Model 1 needs iterations >= 1");
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw ValidationError("translation threshold must lie in (0,1]");
  bitext.validate();
  if (bitext.empty()) throw EmptyBitext();

  auto fold_tokens = [](std::string_view line) {
    std::vector<std::string> out;
    for (const TokenSpan& span : whitespace_tokens(line))
      out.push_back(casefold(line.substr(span.begin, span.end - span.begin)));
    return out;
  };

  // Integer-indexed vocabularies; source id 0 is the null token.
  std::unordered_map<std::string, int> src_ids, tgt_ids;
  std::vector<std::string> src_names{"<null>"}, tgt_names;
  std::vector<std::vector<int>> src_sents, tgt_sents;
  for (std::size_t i = 0; i < bitext.size(); ++i) {
    std::vector<int> s, t;
    for (const std::string& w : fold_tokens(bitext.src[i])) {
      auto [it, fresh] = src_ids.emplace(w, static_cast<int>(src_names.size()));
      if (fresh) src_names.push_back(w);
      s.push_back(it->second);
    }
    for (const std::string& w : fold_tokens(bitext.tgt[i])) {
      auto [it, fresh] = tgt_ids.emplace(w, static_cast<int>(tgt_names.size()));
      if (fresh) tgt_names.push_back(w);
      t.push_back(it->second);
    }
    src_sents.push_back(std::move(s));
    tgt_sents.push_back(std::move(t));
  }

  // Uniform initialization over co-occurring target types (null co-occurs
  // with everything).
  std::vector<std::set<int>> cooc(src_names.size());
  for (std::size_t i = 0; i < src_sents.size(); ++i) {
    for (int h : tgt_sents[i]) {
      cooc[0].insert(h);
      for (int c : src_sents[i]) cooc[static_cast<std::size_t>(c)].insert(h);
    }
  }
  std::vector<std::unordered_map<int, double>> t(src_names.size());
  for (std::size_t c = 0; c < src_names.size(); ++c) {
    if (cooc[c].empty()) continue;
    double u = 1.0 / static_cast<double>(cooc[c].size());
    for (int h : cooc[c]) t[c][h] = u;
  }

  std::vector<std::unordered_map<int, double>> counts(src_names.size());
  std::vector<double> totals(src_names.size());
  for (int iter = 0; iter < iterations; ++iter) {
    for (auto& m : counts) m.clear();
    std::fill(totals.begin(), totals.end(), 0.0);
    double ll = 0.0;
    for (std::size_t i = 0; i < src_sents.size(); ++i) {
      const std::vector<int>& src = src_sents[i];
      double log_len = std::log(static_cast<double>(src.size() + 1));
      for (int h : tgt_sents[i]) {
        double denom = t[0].count(h) ? t[0][h] : 0.0;
        for (int c : src) {
          auto it = t[static_cast<std::size_t>(c)].find(h);
          if (it != t[static_cast<std::size_t>(c)].end()) denom += it->second;
        }
        if (denom <= 0.0) continue;  // unreachable with co-occurrence init
        ll += std::log(denom) - log_len;
        auto credit = [&](int c) {
          auto it = t[static_cast<std::size_t>(c)].find(h);
          if (it == t[static_cast<std::size_t>(c)].end()) return;
          double share = it->second / denom;
          counts[static_cast<std::size_t>(c)][h] += share;
          totals[static_cast<std::size_t>(c)] += share;
        };
        credit(0);
        for (int c : src) credit(c);
      }
    }
    if (ll_trace) ll_trace->push_back(ll);
    for (std::size_t c = 0; c < src_names.size(); ++c) {
      if (totals[c] <= 0.0) continue;
      for (auto& [h, cnt] : counts[c]) t[c][h] = cnt / totals[c];
    }
  }

  BilingualLexicon lex;
  lex.source_priority = {"ibm1"};
  for (std::size_t c = 1; c < src_names.size(); ++c)
    for (const auto& [h, prob] : t[c])
      if (prob >= threshold)
        lex.add(src_names[c], tgt_names[static_cast<std::size_t>(h)], prob, "ibm1");
  lex.sort_translations();
  return lex;
}

// ---------------------------------------------------------------------------
// Function-word projection
// ---------------------------------------------------------------------------

struct CrlFunctionWordSet {
  std::unordered_set<std::string> words;  // case-folded

  bool contains(std::string_view folded) const {
    return words.count(std::string(folded)) > 0;
  }
  std::vector<std::string> sorted() const {
    std::vector<std::string> out(words.begin(), words.end());
    std::sort(out.begin(), out.end());
    return out;
  }
};

// CRL word is a function word iff its resolved top translation is one.
inline CrlFunctionWordSet project_function_words(const BilingualLexicon& lex,
                                                 const FunctionWordList& hrl_funcs) {
  CrlFunctionWordSet out;
  for (const auto& [crl, entry] : lex.entries) {
    (void)entry;
    const Translation* top = lex.top(crl);
    if (top && hrl_funcs.contains(top->hrl)) out.words.insert(crl);
  }
  return out;
}

inline void save_crl_function_words(const CrlFunctionWordSet& set, std::ostream& out) {
  for (const auto& word : set.sorted()) out << word << '\n';
}

inline CrlFunctionWordSet load_crl_function_words(std::istream& in) {
  CrlFunctionWordSet set;
  std::string raw;
  while (std::getline(in, raw)) {
    std::string_view line = strip_cr(raw);
    if (line.empty() || line.front() == '#') continue;
    set.words.insert(casefold(line));
  }
  return set;
}

// ---------------------------------------------------------------------------
// 4-column persistence: `crl <TAB> hrl <TAB> weight <TAB> source`
// ---------------------------------------------------------------------------

inline void save_lexicon(const BilingualLexicon& lex, std::ostream& out) {
  out << "#sources=";
  for (std::size_t i = 0; i < lex.source_priority.size(); ++i) {
    if (i) out << ',';
    out << lex.source_priority[i];
  }
  out << '\n';
  for (const auto& [crl, entry] : lex.entries)
    for (const Translation& t : entry.translations)
      out << crl << '\t' << t.hrl << '\t' << format_double(t.weight) << '\t' << t.source << '\n';
}

inline BilingualLexicon load_lexicon_tsv(std::istream& in) {
  BilingualLexicon lex;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = strip_cr(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line.rfind("#sources=", 0) == 0) {
        std::string tail(line.substr(9));
        std::size_t pos = 0;
        while (pos <= tail.size()) {
          std::size_t next = tail.find(',', pos);
          if (next == std::string::npos) next = tail.size();
          std::string tag = tail.substr(pos, next - pos);
          if (!tag.empty() && lex.rank(tag) == lex.source_priority.size())
            lex.source_priority.push_back(tag);
          pos = next + 1;
        }
      }
      continue;
    }
    auto cols = split_tabs(line);
    if (cols.size() != 4 || cols[0].empty() || cols[1].empty() || cols[3].empty())
      throw MalformedLine(line_no, "expected 'crl<TAB>hrl<TAB>weight<TAB>source'");
    std::string crl = casefold(cols[0]);
    std::string hrl = casefold(cols[1]);
    if (!detail::single_token(crl) || !detail::single_token(hrl))
      throw MalformedLine(line_no, "multiword lexicon entries are not supported");
    std::string source(cols[3]);
    if (lex.rank(source) == lex.source_priority.size())
      lex.source_priority.push_back(source);
    lex.add(crl, hrl, detail::parse_weight(cols[2], line_no), source);
  }
  lex.sort_translations();
  return lex;
}

}  // namespace dialup
