#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "dialup/dtm.hpp"

using namespace dialup;

namespace {

BilingualLexicon toy_lexicon() {
  std::istringstream in("ve\tund\t1\nbu\tdies\t1\nkitap\tbuch\t0.9\nev\thaus\t0.8\nsu\tsu\t1\n");
  return load_lexicon(in, "seed");
}

CrlFunctionWordSet toy_functions() {
  CrlFunctionWordSet f;
  f.words = {"ve", "bu", "o"};
  return f;
}

}  // namespace

TEST_CASE("parse_swap_mode accepts exactly func, cont, all") {
  REQUIRE(parse_swap_mode("func") == SwapMode::func);
  REQUIRE(parse_swap_mode("cont") == SwapMode::cont);
  REQUIRE(parse_swap_mode("all") == SwapMode::all);
  REQUIRE_THROWS_AS(parse_swap_mode("both"), ValidationError);
}

TEST_CASE("func mode swaps only function words") {
  auto lex = toy_lexicon();
  auto funcs = toy_functions();
  auto [out, report] = swap_sentence("bu kitap ve ev", lex, funcs, SwapMode::func);
  REQUIRE(out == "dies kitap und ev");
  REQUIRE(report.total_tokens == 4);
  REQUIRE(report.swaps.size() == 2);
  REQUIRE(report.skipped_unknown == 0);
  for (auto& s : report.swaps) REQUIRE(s.is_function);
}

TEST_CASE("cont mode swaps only content words") {
  auto lex = toy_lexicon();
  auto funcs = toy_functions();
  auto [out, report] = swap_sentence("bu kitap ve ev", lex, funcs, SwapMode::cont);
  REQUIRE(out == "bu buch ve haus");
  REQUIRE(report.swaps.size() == 2);
  for (auto& s : report.swaps) REQUIRE_FALSE(s.is_function);
}

TEST_CASE("all mode swaps both and unions the positions") {
  auto lex = toy_lexicon();
  auto funcs = toy_functions();
  auto [out, report] = swap_sentence("bu kitap ve ev", lex, funcs, SwapMode::all);
  REQUIRE(out == "dies buch und haus");
  REQUIRE(report.swaps.size() == 4);
}

TEST_CASE("eligible words without an entry count as skipped_unknown") {
  auto lex = toy_lexicon();
  auto funcs = toy_functions();
  // "o" is a function word without a lexicon entry; "yol" is unknown content.
  auto [out, report] = swap_sentence("o yol", lex, funcs, SwapMode::func);
  REQUIRE(out == "o yol");
  REQUIRE(report.skipped_unknown == 1);  // only "o" was eligible

  auto [out2, report2] = swap_sentence("o yol", lex, funcs, SwapMode::cont);
  REQUIRE(report2.skipped_unknown == 1);  // only "yol" was eligible

  auto [out3, report3] = swap_sentence("o yol", lex, funcs, SwapMode::all);
  REQUIRE(report3.skipped_unknown == 2);
}

TEST_CASE("punctuation and case survive a swap") {
  auto lex = toy_lexicon();
  auto funcs = toy_functions();
  auto [out, report] = swap_sentence("Bu kitap, «ev»!", lex, funcs, SwapMode::all);
  REQUIRE(out == "Dies buch, «haus»!");
  REQUIRE(report.total_tokens == 3);
}

TEST_CASE("identity translations keep the original bytes") {
  auto lex = toy_lexicon();
  auto funcs = toy_functions();
  auto [out, report] = swap_sentence("Su aktı", lex, funcs, SwapMode::all);
  // "su" maps to itself: token must stay byte-identical, but it still counts
  // as a swap in the report.
  REQUIRE(out.substr(0, 2) == "Su");
  REQUIRE(report.swaps.size() == 1);
  REQUIRE(report.skipped_unknown == 1);  // aktı
}

TEST_CASE("non-alphabetic tokens count toward the total but are never classified") {
  auto lex = toy_lexicon();
  auto funcs = toy_functions();
  auto [out, report] = swap_sentence("bu 42 -- ,", lex, funcs, SwapMode::all);
  REQUIRE(report.total_tokens == 4);
  REQUIRE(report.swaps.size() == 1);
  REQUIRE(report.skipped_unknown == 0);
  REQUIRE(out == "dies 42 -- ,");
}

TEST_CASE("swap_corpus aggregates and tags line numbers") {
  auto lex = toy_lexicon();
  auto funcs = toy_functions();
  std::vector<std::string> lines{"bu ev", "kitap ve su"};
  auto [swapped, report] = swap_corpus(lines, lex, funcs, SwapMode::all);
  REQUIRE(swapped == std::vector<std::string>{"dies haus", "buch und su"});
  REQUIRE(report.total_tokens == 5);
  REQUIRE(report.swaps.size() == 5);
  REQUIRE(report.swaps[0].line == 0);
  REQUIRE(report.swaps.back().line == 1);
  REQUIRE(report.swaps[1].token_index == 1);
}

TEST_CASE("swap report and trace serialize with fixed headers") {
  auto lex = toy_lexicon();
  auto funcs = toy_functions();
  auto [swapped, report] = swap_corpus({"bu ev", "o !"}, lex, funcs, SwapMode::all);
  std::ostringstream rep;
  save_swap_report(report, SwapMode::all, rep);
  REQUIRE(rep.str() ==
          "mode\ttotal\tswapped\trate\tskipped_unknown\n"
          "all\t4\t2\t0.500000\t1\n");
  std::ostringstream trace;
  save_swap_trace(report, trace);
  std::string expected =
      "line\ttoken_index\toriginal\treplacement\tclass\n"
      "0\t0\tbu\tdies\tfunction\n"
      "0\t1\tev\thaus\tcontent\n";
  REQUIRE(trace.str() == expected);
}
