#pragma once

// Inference-time D->M adaptation: swap CRL words for their HRL equivalents.
// Tokens classify as function words iff the case-folded core is in the
// projected CRL function set; everything else is content. Swapping is
// token-for-token, preserving whitespace and detached punctuation, so the
// func- and cont-mode swap sets partition the all-mode set.

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dialup/errors.hpp"
#include "dialup/lexicon.hpp"
#include "dialup/text.hpp"

namespace dialup {

enum class SwapMode { func, cont, all };

inline const char* to_string(SwapMode mode) {
  switch (mode) {
    case SwapMode::func: return "func";
    case SwapMode::cont: return "cont";
    case SwapMode::all: return "all";
  }
  return "?";
}

inline SwapMode parse_swap_mode(std::string_view text) {
  if (text == "func") return SwapMode::func;
  if (text == "cont") return SwapMode::cont;
  if (text == "all") return SwapMode::all;
  throw ValidationError("swap mode must be func, cont or all");
}

struct SwapRecord {
  std::size_t line = 0;
  std::size_t token_index = 0;
  std::string original;
  std::string replacement;
  bool is_function = false;
};

struct SwapReport {
  std::size_t total_tokens = 0;
  std::size_t skipped_unknown = 0;  // mode-eligible tokens with no lexicon entry
  std::vector<SwapRecord> swaps;

  double rate() const {
    return total_tokens == 0 ? 0.0
                             : static_cast<double>(swaps.size()) /
                                   static_cast<double>(total_tokens);
  }
};

// Swaps one sentence. Non-alphabetic tokens pass through unclassified but
// still count toward the token total.
inline std::pair<std::string, SwapReport> swap_sentence(std::string_view sentence,
                                                        const BilingualLexicon& lex,
                                                        const CrlFunctionWordSet& crl_funcs,
                                                        SwapMode mode) {
  SwapReport report;
  std::string out = transform_tokens(sentence, [&](std::size_t token_index,
                                                   std::string_view token) -> std::string {
    ++report.total_tokens;
    TokenParts parts = detach_punctuation(token);
    if (parts.core.empty() || !has_alpha(parts.core)) return std::string(token);
    std::string folded = casefold(parts.core);
    bool is_function = crl_funcs.contains(folded);
    bool eligible = mode == SwapMode::all || (mode == SwapMode::func && is_function) ||
                    (mode == SwapMode::cont && !is_function);
    if (!eligible) return std::string(token);
    const Translation* top = lex.top(folded);
    if (!top) {
      ++report.skipped_unknown;
      return std::string(token);
    }
    std::string replaced = top->hrl;
    report.swaps.push_back({0, token_index, folded, replaced, is_function});
    if (replaced == folded) return std::string(token);
    std::size_t first_len = utf8_seq_len(parts.core, 0);
    if (is_upper_cp(utf8_cp_at(parts.core, 0, first_len))) replaced = capitalize_first(replaced);
    std::string rebuilt;
    rebuilt.reserve(parts.lead.size() + replaced.size() + parts.trail.size());
    rebuilt.append(parts.lead);
    rebuilt.append(replaced);
    rebuilt.append(parts.trail);
    return rebuilt;
  });
  return {std::move(out), std::move(report)};
}

inline std::pair<std::vector<std::string>, SwapReport> swap_corpus(
    const std::vector<std::string>& lines, const BilingualLexicon& lex,
    const CrlFunctionWordSet& crl_funcs, SwapMode mode) {
  std::vector<std::string> out;
  out.reserve(lines.size());
  SwapReport aggregate;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto [swapped, report] = swap_sentence(lines[i], lex, crl_funcs, mode);
    out.push_back(std::move(swapped));
    aggregate.total_tokens += report.total_tokens;
    aggregate.skipped_unknown += report.skipped_unknown;
    for (SwapRecord& record : report.swaps) {
      record.line = i;
      aggregate.swaps.push_back(std::move(record));
    }
  }
  return {std::move(out), std::move(aggregate)};
}

inline void save_swap_report(const SwapReport& report, SwapMode mode, std::ostream& out) {
  out << "mode\ttotal\tswapped\trate\tskipped_unknown\n";
  char rate[32];
  std::snprintf(rate, sizeof rate, "%.6f", report.rate());
  out << to_string(mode) << '\t' << report.total_tokens << '\t' << report.swaps.size() << '\t'
      << rate << '\t' << report.skipped_unknown << '\n';
}

inline void save_swap_trace(const SwapReport& report, std::ostream& out) {
  out << "line\ttoken_index\toriginal\treplacement\tclass\n";
  for (const SwapRecord& r : report.swaps)
    out << r.line << '\t' << r.token_index << '\t' << r.original << '\t' << r.replacement
        << '\t' << (r.is_function ? "function" : "content") << '\n';
}

}  // namespace dialup
