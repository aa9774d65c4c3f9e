#include <doctest.h>

#include <random>
#include <sstream>

#include "polyparse/error.hpp"
#include "polyparse/synthetic.hpp"
#include "polyparse/treebank_ops.hpp"
#include "support/oracles.hpp"

using namespace polyparse;

namespace {

Treebank sentences(int count, const std::vector<std::string>& postags) {
  Treebank tb;
  for (int i = 0; i < count; ++i) {
    Sentence s;
    int id = 0;
    for (const auto& tag : postags) {
      Token t;
      t.id = ++id;
      t.form = "w" + std::to_string(i);
      t.cpostag = "NOUN";
      t.postag = tag;
      t.head = id == 1 ? 0 : 1;
      t.deprel = id == 1 ? "root" : "dep";
      s.tokens.push_back(t);
    }
    tb.sentences.push_back(s);
  }
  return tb;
}

}  // namespace

TEST_CASE("merge concatenates and sets languages") {
  const std::vector<LanguagePart> parts{{"en", sentences(2, {"NN"})}, {"es", sentences(3, {"NC"})}};
  const Treebank merged = merge_treebanks(parts);
  REQUIRE(merged.size() == 5);
  CHECK(merged.sentences[0].lang == "en");
  CHECK(merged.sentences[1].lang == "en");
  CHECK(merged.sentences[2].lang == "es");
  CHECK(merged.sentences[2].tokens == parts[1].second.sentences[0].tokens);
  CHECK(merged.source == "en+es");
  CHECK_THROWS_AS(merge_treebanks({}), UsageError);

  const std::vector<LanguagePart> single{{"pt", sentences(4, {"N"})}};
  const Treebank one = merge_treebanks(single);
  CHECK(one.size() == 4);
  for (const auto& s : one.sentences) CHECK(s.lang == "pt");

  const std::vector<LanguagePart> four{{"es", sentences(2, {"a"})},
                                       {"fr", sentences(5, {"b"})},
                                       {"it", sentences(1, {"c"})},
                                       {"pt", sentences(3, {"d"})}};
  const Treebank romance = merge_treebanks(four);
  CHECK(romance.size() == 11);
  std::map<std::string, int> per_lang;
  for (const auto& s : romance.sentences) ++per_lang[s.lang];
  CHECK(per_lang == std::map<std::string, int>{{"es", 2}, {"fr", 5}, {"it", 1}, {"pt", 3}});
}

TEST_CASE("tag configurations") {
  Sentence s = sentences(1, {"NN"}).sentences[0];
  s.lang = "en";
  const Sentence universal = apply_tag_config(s, {TagMode::UniversalTagsOnly, false});
  CHECK(universal.tokens[0].cpostag == "NOUN");
  CHECK(universal.tokens[0].postag == "NOUN");

  const Sentence fine = apply_tag_config(s, {TagMode::TreebankDependentTags, false});
  CHECK(fine == s);

  const TagConfig prefixed{TagMode::TreebankDependentTags, true};
  const Sentence once = apply_tag_config(s, prefixed);
  CHECK(once.tokens[0].postag == "en_NN");
  CHECK(once.tokens[0].cpostag == "en_NOUN");
  CHECK(apply_tag_config(once, prefixed) == once);

  const TagConfig universal_prefixed{TagMode::UniversalTagsOnly, true};
  const Sentence up = apply_tag_config(s, universal_prefixed);
  CHECK(up.tokens[0].postag == "en_NOUN");
  CHECK(apply_tag_config(up, universal_prefixed) == up);

  Sentence nolang = s;
  nolang.lang.clear();
  CHECK_THROWS_AS(apply_tag_config(nolang, prefixed), DataError);
  CHECK(parse_tag_mode(to_string(TagMode::UniversalTagsOnly)) == TagMode::UniversalTagsOnly);
  CHECK_THROWS_AS(parse_tag_mode("coarse"), UsageError);
}

TEST_CASE("shared tag matrix") {
  const std::vector<LanguagePart> two{{"x", sentences(1, {"A", "B"})}, {"y", sentences(1, {"B", "C"})}};
  const SharedTagMatrix m = shared_tag_report(two);
  CHECK(m.counts == std::vector<std::vector<std::size_t>>{{2, 1}, {1, 2}});

  const std::vector<LanguagePart> same{{"x", sentences(1, {"A", "B"})}, {"x2", sentences(1, {"A", "B"})}};
  CHECK(shared_tag_report(same).counts[0][1] == 2);

  const std::vector<LanguagePart> three{{"a", sentences(1, {"P", "Q", "R", "S"})},
                                        {"b", sentences(1, {"Q", "R", "T"})},
                                        {"c", sentences(1, {"S", "T", "U", "V", "P"})}};
  const SharedTagMatrix m3 = shared_tag_report(three);
  CHECK(m3.counts == std::vector<std::vector<std::size_t>>{{4, 2, 2}, {2, 3, 1}, {2, 1, 5}});
  CHECK(m3.to_tsv().substr(0, 6) == "lang\ta");
  CHECK_THROWS(shared_tag_report(std::span<const LanguagePart>(three.data(), 1)));
}

TEST_CASE("projectivity examples") {
  CHECK(is_projective(std::vector<int>{2, 0}));
  CHECK_FALSE(is_projective(std::vector<int>{3, 4, 0, 3}));
  CHECK(is_projective(std::vector<int>{0, 1, 2, 3, 4}));
  CHECK(projectivize(std::vector<int>{3, 4, 0, 3}) == std::vector<int>{3, 3, 0, 3});
  CHECK(projectivize(std::vector<int>{2, 0, 2}) == std::vector<int>{2, 0, 2});
}

TEST_CASE("is_projective agrees with a pairwise crossing oracle") {
  for (int n = 1; n <= 6; ++n) {
    for (const auto& heads : oracle::all_trees(n, true)) {
      REQUIRE(is_projective(heads) == oracle::is_projective(heads));
    }
  }
}

TEST_CASE("projectivize yields projective trees and is idempotent") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const auto heads = oracle::random_tree(n, rng);
    const auto out = projectivize(heads);
    REQUIRE(oracle::is_projective(out));
    REQUIRE(oracle::is_tree(out));
    REQUIRE(projectivize(out) == out);
    if (oracle::is_projective(heads)) REQUIRE(out == heads);
  }
  Sentence s = oracle::sentence_from_heads({3, 4, 0, 3});
  const Sentence p = projectivize(s);
  CHECK(p.heads() == std::vector<int>{3, 3, 0, 3});
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(p.tokens[i].deprel == s.tokens[i].deprel);
}
