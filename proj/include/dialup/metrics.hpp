#pragma once

// Diagnostics: character F-score between strings/corpora, empirical noise
// rates of an artificial language against the dial settings, and the share
// of function words in a corpus.

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dialup/errors.hpp"
#include "dialup/noisers.hpp"
#include "dialup/text.hpp"

namespace dialup {

struct ChrfParams {
  int max_n = 6;
  double beta = 2.0;

  void validate() const {
    if (max_n < 1) throw ValidationError("chrF needs max n >= 1");
    if (!(beta > 0.0)) throw ValidationError("chrF needs beta > 0");
  }
};

namespace detail {

struct NgramStat {
  double overlap = 0.0;
  double hyp_total = 0.0;
  double ref_total = 0.0;
};

inline std::vector<char32_t> strip_whitespace_cps(std::string_view s) {
  std::vector<char32_t> out;
  for (char32_t c : utf8_decode(s))
    if (!is_space_cp(c)) out.push_back(c);
  return out;
}

// Per-order clipped n-gram overlap for one (hyp, ref) pair, added onto stats.
inline void accumulate_chrf(const std::vector<char32_t>& hyp, const std::vector<char32_t>& ref,
                            int max_n, std::vector<NgramStat>& stats) {
  for (int n = 1; n <= max_n; ++n) {
    std::size_t un = static_cast<std::size_t>(n);
    NgramStat& stat = stats[un - 1];
    std::size_t hyp_total = hyp.size() >= un ? hyp.size() - un + 1 : 0;
    std::size_t ref_total = ref.size() >= un ? ref.size() - un + 1 : 0;
    stat.hyp_total += static_cast<double>(hyp_total);
    stat.ref_total += static_cast<double>(ref_total);
    if (hyp_total == 0 || ref_total == 0) continue;
    std::unordered_map<std::u32string, std::size_t> ref_counts;
    for (std::size_t i = 0; i + un <= ref.size(); ++i)
      ++ref_counts[std::u32string(ref.begin() + i, ref.begin() + i + un)];
    for (std::size_t i = 0; i + un <= hyp.size(); ++i) {
      auto it = ref_counts.find(std::u32string(hyp.begin() + i, hyp.begin() + i + un));
      if (it != ref_counts.end() && it->second > 0) {
        --it->second;
        stat.overlap += 1.0;
      }
    }
  }
}

// Mean F over orders where either side has n-grams; orders where both are
// empty are excluded from the mean.
inline double chrf_from_stats(const std::vector<NgramStat>& stats, double beta) {
  double beta2 = beta * beta;
  double sum = 0.0;
  int included = 0;
  for (const NgramStat& stat : stats) {
    if (stat.hyp_total == 0.0 && stat.ref_total == 0.0) continue;
    ++included;
    double precision = stat.hyp_total > 0.0 ? stat.overlap / stat.hyp_total : 0.0;
    double recall = stat.ref_total > 0.0 ? stat.overlap / stat.ref_total : 0.0;
    if (precision > 0.0 || recall > 0.0)
      sum += (1.0 + beta2) * precision * recall / (beta2 * precision + recall);
  }
  if (included == 0) throw BothEmpty();
  return 100.0 * sum / static_cast<double>(included);
}

}  // namespace detail

// Character F-score in [0,100]; whitespace is removed before counting.
inline double chrf(std::string_view hypothesis, std::string_view reference,
                   const ChrfParams& params = {}) {
  params.validate();
  std::vector<char32_t> hyp = detail::strip_whitespace_cps(hypothesis);
  std::vector<char32_t> ref = detail::strip_whitespace_cps(reference);
  if (hyp.empty() && ref.empty()) throw BothEmpty();
  std::vector<detail::NgramStat> stats(static_cast<std::size_t>(params.max_n));
  detail::accumulate_chrf(hyp, ref, params.max_n, stats);
  return detail::chrf_from_stats(stats, params.beta);
}

// Corpus-level score: clipped counts are pooled over all line pairs before
// computing precision/recall (not a mean of sentence scores).
inline double corpus_chrf(const std::vector<std::string>& hyp_lines,
                          const std::vector<std::string>& ref_lines,
                          const ChrfParams& params = {}) {
  params.validate();
  if (hyp_lines.size() != ref_lines.size())
    throw LengthMismatch(hyp_lines.size(), ref_lines.size());
  std::vector<detail::NgramStat> stats(static_cast<std::size_t>(params.max_n));
  for (std::size_t i = 0; i < hyp_lines.size(); ++i) {
    std::vector<char32_t> hyp = detail::strip_whitespace_cps(hyp_lines[i]);
    std::vector<char32_t> ref = detail::strip_whitespace_cps(ref_lines[i]);
    detail::accumulate_chrf(hyp, ref, params.max_n, stats);
  }
  return detail::chrf_from_stats(stats, params.beta);
}

// ---------------------------------------------------------------------------
// Noise-rate report
// ---------------------------------------------------------------------------

struct DimensionRate {
  std::string dimension;  // p, m, f, c
  std::size_t universe = 0;
  std::size_t changed = 0;
  double rate = 0.0;
  double theta = 0.0;
};

struct NoiseRateReport {
  std::vector<DimensionRate> rows;  // in p, m, f, c order
};

// Counts, per dimension, the unit types present in the original corpus that
// the language maps non-identically. Rates are over types, matching the
// samplers' type-level coins.
inline NoiseRateReport noise_rate_report(const std::vector<std::string>& original,
                                         const std::vector<std::string>& noised,
                                         const ArtificialLanguage& lang,
                                         const NoiserResources& res) {
  res.validate();
  if (original.size() != noised.size()) throw LengthMismatch(original.size(), noised.size());

  std::unordered_set<std::string> types;
  for (const std::string& line : original) {
    for (const TokenSpan& span : whitespace_tokens(line)) {
      TokenParts parts =
          detach_punctuation(std::string_view(line).substr(span.begin, span.end - span.begin));
      if (parts.core.empty() || !has_alpha(parts.core)) continue;
      types.insert(casefold(parts.core));
    }
  }

  std::unordered_set<std::string> inventory_suffixes;
  std::unordered_set<std::size_t> suffix_lengths;
  for (const auto& [sfx, freq] : res.suffixes->suffixes) {
    (void)freq;
    inventory_suffixes.insert(sfx);
    suffix_lengths.insert(cp_length(sfx));
  }

  std::unordered_set<std::string> phonemes_present, suffixes_present;
  std::size_t func_universe = 0, func_changed = 0;
  std::size_t cont_universe = 0, cont_changed = 0;
  for (const std::string& word : types) {
    std::vector<char32_t> cps = utf8_decode(word);
    for (std::size_t len : suffix_lengths) {
      if (cps.size() < len + 2) continue;
      std::string tail;
      for (std::size_t i = cps.size() - len; i < cps.size(); ++i) utf8_append(tail, cps[i]);
      if (inventory_suffixes.count(tail)) suffixes_present.insert(tail);
    }
    for (const Segment& seg : to_phonemes(word, *res.g2p))
      if (seg.is_phoneme) phonemes_present.insert(seg.symbol);
    if (res.function_words->contains(word)) {
      ++func_universe;
      auto it = lang.function_word_map.find(word);
      if (it != lang.function_word_map.end() && it->second != word) ++func_changed;
    } else {
      ++cont_universe;
      if (lang.content_decision(word, res) != word) ++cont_changed;
    }
  }

  std::size_t phon_changed = 0;
  for (const std::string& symbol : phonemes_present)
    if (lang.phoneme_map.count(symbol)) ++phon_changed;
  std::size_t suff_changed = 0;
  for (const std::string& sfx : suffixes_present) {
    auto it = lang.suffix_map.find(sfx);
    if (it != lang.suffix_map.end() && it->second != sfx) ++suff_changed;
  }

  auto row = [](const char* dim, std::size_t universe, std::size_t changed, double theta) {
    DimensionRate r;
    r.dimension = dim;
    r.universe = universe;
    r.changed = changed;
    r.rate = universe == 0 ? 0.0 : static_cast<double>(changed) / static_cast<double>(universe);
    r.theta = theta;
    return r;
  };
  NoiseRateReport report;
  report.rows.push_back(row("p", phonemes_present.size(), phon_changed, lang.dials.theta_p));
  report.rows.push_back(row("m", suffixes_present.size(), suff_changed, lang.dials.theta_m));
  report.rows.push_back(row("f", func_universe, func_changed, lang.dials.theta_f));
  report.rows.push_back(row("c", cont_universe, cont_changed, lang.dials.theta_c));
  return report;
}

// Radius column is 1 for shell runs; cloud runs emit one block per radius.
inline void save_noise_report(const std::vector<std::pair<int, NoiseRateReport>>& per_radius,
                              std::ostream& out) {
  out << "radius\tdimension\tuniverse\tchanged\trate\ttheta\n";
  for (const auto& [radius, report] : per_radius) {
    for (const DimensionRate& r : report.rows) {
      char rate[32];
      std::snprintf(rate, sizeof rate, "%.6f", r.rate);
      out << radius << '\t' << r.dimension << '\t' << r.universe << '\t' << r.changed << '\t'
          << rate << '\t' << format_double(r.theta) << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// Function-word share
// ---------------------------------------------------------------------------

// Fraction of whitespace tokens whose case-folded core is a function word.
inline double function_word_share(const std::vector<std::string>& lines,
                                  const FunctionWordList& funcs) {
  if (funcs.words.empty()) throw ValidationError("function-word set is empty");
  std::size_t total = 0, hits = 0;
  for (const std::string& line : lines) {
    for (const TokenSpan& span : whitespace_tokens(line)) {
      ++total;
      TokenParts parts =
          detach_punctuation(std::string_view(line).substr(span.begin, span.end - span.begin));
      if (parts.core.empty()) continue;
      if (funcs.contains(casefold(parts.core))) ++hits;
    }
  }
  if (total == 0) throw EmptyCorpus();
  return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace dialup
