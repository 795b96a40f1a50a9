#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "dialup/phonology.hpp"

using namespace dialup;

namespace {

GraphemePhonemeTable turkish() {
  std::ifstream in(DIALUP_DATA_DIR "/g2p/tur_latn.tsv");
  REQUIRE(in.good());
  return GraphemePhonemeTable::load(in, "tur_latn");
}

// Independent re-derivation of the neighbor set: same class, pairwise feature
// disagreement count within the radius, self excluded.
std::vector<std::string> brute_neighbors(const Phoneme& p, const PhonemeInventory& inv,
                                         int radius) {
  std::vector<std::string> out;
  for (const Phoneme& q : inv.phonemes()) {
    if (q.symbol == p.symbol || q.cls != p.cls) continue;
    int d = 0;
    if (p.cls == PhonemeClass::consonant) {
      d += p.voiced != q.voiced;
      d += p.place != q.place;
      d += p.manner != q.manner;
    } else {
      d += p.height != q.height;
      d += p.backness != q.backness;
      d += p.rounded != q.rounded;
    }
    if (d <= radius) out.push_back(q.symbol);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("ipa_lookup resolves plain and modified symbols") {
  auto p = ipa_lookup("b");
  REQUIRE(p.has_value());
  REQUIRE(p->cls == PhonemeClass::consonant);
  REQUIRE(p->voiced);

  auto kh = ipa_lookup("kʰ");
  REQUIRE(kh.has_value());
  REQUIRE(kh->symbol == "kʰ");
  REQUIRE(kh->place == Place::velar);
  REQUIRE_FALSE(kh->voiced);

  REQUIRE_FALSE(ipa_lookup("!!").has_value());
  REQUIRE_FALSE(ipa_lookup("").has_value());
}

TEST_CASE("feature_distance counts disagreeing features") {
  auto d = [](const char* a, const char* b) {
    return feature_distance(*ipa_lookup(a), *ipa_lookup(b));
  };
  REQUIRE(d("p", "p") == 0);
  REQUIRE(d("p", "b") == 1);   // voicing
  REQUIRE(d("p", "t") == 1);   // place
  REQUIRE(d("p", "d") == 2);
  REQUIRE(d("t", "s") == 1);   // manner
  REQUIRE(d("i", "y") == 1);   // rounding
  REQUIRE(d("a", "ɑ") == 1);   // backness
}

TEST_CASE("phonetic_neighbors matches brute-force enumeration") {
  GraphemePhonemeTable table = turkish();
  PhonemeInventory inv = table.inventory();
  inv.validate();
  for (const Phoneme& p : inv.phonemes()) {
    for (int radius : {1, 2}) {
      auto got = phonetic_neighbors(p, inv, radius);
      std::vector<std::string> names;
      for (const Phoneme& q : got) names.push_back(q.symbol);
      REQUIRE(names == brute_neighbors(p, inv, radius));
    }
  }
}

TEST_CASE("phonetic_neighbors rejects foreign phonemes") {
  GraphemePhonemeTable table = turkish();
  PhonemeInventory inv = table.inventory();
  Phoneme foreign = *ipa_lookup("q");  // in the catalog but not in the Turkish table
  REQUIRE_THROWS_AS(phonetic_neighbors(foreign, inv, 1), PhonemeNotInInventory);
}

TEST_CASE("to_phonemes is greedy longest-match") {
  std::istringstream def("c\tk\nch\tkʰ\nh\th\na\ta\n");
  auto table = GraphemePhonemeTable::load(def, "test");
  auto segs = to_phonemes("cha", table);
  REQUIRE(segs.size() == 2);
  REQUIRE(segs[0].symbol == "kʰ");
  REQUIRE(segs[0].source == "ch");
  REQUIRE(segs[1].symbol == "a");
}

TEST_CASE("residue passes through and concatenation restores input") {
  std::istringstream def("a\ta\nb\tb\n");
  auto table = GraphemePhonemeTable::load(def, "test");
  std::string word = "ab9ba!";
  auto segs = to_phonemes(word, table);
  std::string joined;
  for (auto& s : segs) joined += s.source;
  REQUIRE(joined == word);
  REQUIRE_FALSE(segs[2].is_phoneme);
  REQUIRE(segs[2].source == "9");
}

TEST_CASE("from_phonemes inverts bijective rows and rejects oneway symbols") {
  std::istringstream def("a\tæ\nx\tæ\toneway\nb\tb\nq\tʔ\toneway\n");
  auto table = GraphemePhonemeTable::load(def, "test");

  auto segs = to_phonemes("xb", table);
  REQUIRE(segs[0].symbol == "æ");
  REQUIRE(from_phonemes(segs, table) == "ab");  // oneway grapheme normalizes

  auto q = to_phonemes("q", table);
  REQUIRE_THROWS_AS(from_phonemes(q, table), UnmappedPhoneme);
}

TEST_CASE("duplicate graphemes and duplicate inverses are rejected") {
  std::istringstream dup_g("a\ta\na\tb\n");
  REQUIRE_THROWS_AS(GraphemePhonemeTable::load(dup_g, "t"), ValidationError);
  std::istringstream dup_i("a\tk\nb\tk\n");
  REQUIRE_THROWS_AS(GraphemePhonemeTable::load(dup_i, "t"), ValidationError);
  std::istringstream ok("a\tk\nb\tk\toneway\n");
  REQUIRE_NOTHROW(GraphemePhonemeTable::load(ok, "t"));
}

TEST_CASE("malformed table rows carry line numbers") {
  std::istringstream bad("a\tk\nnot a row\n");
  try {
    GraphemePhonemeTable::load(bad, "t");
    FAIL("expected MalformedLine");
  } catch (const MalformedLine& e) {
    REQUIRE(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("inventory rejects unknown symbols and degenerate inventories") {
  std::istringstream unk("a\tzz9\n");
  auto table = GraphemePhonemeTable::load(unk, "t");
  REQUIRE_THROWS_AS(table.inventory(), UnknownPhonemeSymbol);

  std::istringstream cons_only("b\tb\nd\td\n");
  auto table2 = GraphemePhonemeTable::load(cons_only, "t");
  auto inv = table2.inventory();
  REQUIRE_THROWS_AS(inv.validate(), ValidationError);
}

TEST_CASE("table save/load round-trips") {
  GraphemePhonemeTable table = turkish();
  std::ostringstream first;
  table.save(first);
  std::istringstream back(first.str());
  auto again = GraphemePhonemeTable::load(back, "tur_latn");
  std::ostringstream second;
  again.save(second);
  REQUIRE(first.str() == second.str());
}
