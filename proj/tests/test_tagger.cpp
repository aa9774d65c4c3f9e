#include <doctest.h>

#include <random>
#include <sstream>

#include "polyparse/error.hpp"
#include "polyparse/synthetic.hpp"
#include "polyparse/tagger.hpp"

using namespace polyparse;

namespace {

Sentence tagged(const std::vector<std::pair<std::string, std::string>>& words) {
  Sentence s;
  for (const auto& [form, tag] : words) {
    Token t;
    t.id = static_cast<int>(s.size()) + 1;
    t.form = form;
    t.cpostag = tag;
    t.postag = tag;
    t.head = t.id == 1 ? 0 : 1;
    t.deprel = t.id == 1 ? "root" : "dep";
    s.tokens.push_back(t);
  }
  return s;
}

std::string saved(const TaggerModel& m) {
  std::ostringstream out;
  save_tagger(out, m);
  return out.str();
}

}  // namespace

TEST_CASE("feature set") {
  const std::vector<std::string> forms{"The", "well-known", "año", "2024"};
  const std::vector<std::string> history{"DET", "ADJ", "NOUN"};
  const auto f = tagger_features(forms, 2, history);
  auto has = [&](const std::string& x) { return std::find(f.begin(), f.end(), x) != f.end(); };
  CHECK(has("w=año"));
  CHECK(has("lw=año"));
  CHECK(has("p1=a"));
  CHECK(has("p2=añ"));
  CHECK(has("s1=o"));
  CHECK(has("s2=ño"));
  CHECK(has("s3=año"));
  CHECK(has("t1=ADJ"));
  CHECK(has("t2=DET"));
  CHECK(has("w-1=well-known"));
  CHECK(has("w+1=2024"));
  CHECK_FALSE(has("digit"));
  const auto first = tagger_features(forms, 0, history);
  CHECK(std::find(first.begin(), first.end(), "lw=the") != first.end());
  CHECK(std::find(first.begin(), first.end(), "t1=<S>") != first.end());
  const auto hyphen = tagger_features(forms, 1, history);
  CHECK(std::find(hyphen.begin(), hyphen.end(), "hyphen") != hyphen.end());
  const auto last = tagger_features(forms, 3, history);
  CHECK(std::find(last.begin(), last.end(), "digit") != last.end());
  CHECK(std::find(last.begin(), last.end(), "w+1=</S>") != last.end());
}

TEST_CASE("single-tag corpus tags everything with that tag") {
  Treebank tb;
  tb.sentences.push_back(tagged({{"a", "X"}, {"b", "X"}}));
  tb.sentences.push_back(tagged({{"c", "X"}}));
  const TaggerModel m = train_tagger(tb, tb, TagColumn::PosTag, {});
  CHECK(m.tags() == std::vector<std::string>{"X"});
  const std::vector<std::string> input{"zz", "unseen", "a"};
  CHECK(tag(m, input) == std::vector<std::string>{"X", "X", "X"});
}

TEST_CASE("ambiguous word disambiguated by the previous tag") {
  // "can" is a verb after a pronoun and a noun after a determiner. The
  // held-out pronoun and determiner never precede "can" in training.
  Treebank train;
  for (int i = 0; i < 20; ++i) {
    for (const char* p : {"I", "you"}) train.sentences.push_back(tagged({{p, "PRON"}, {"can", "VERB"}, {".", "PUNCT"}}));
    for (const char* d : {"a", "an"}) train.sentences.push_back(tagged({{d, "DET"}, {"can", "NOUN"}, {".", "PUNCT"}}));
    for (const char* p : {"we", "she"}) train.sentences.push_back(tagged({{p, "PRON"}, {"go", "VERB"}, {".", "PUNCT"}}));
    for (const char* d : {"this", "that"}) {
      train.sentences.push_back(tagged({{d, "DET"}, {"house", "NOUN"}, {".", "PUNCT"}}));
    }
  }
  Treebank held_out;
  held_out.sentences.push_back(tagged({{"we", "PRON"}, {"can", "VERB"}, {".", "PUNCT"}}));
  held_out.sentences.push_back(tagged({{"this", "DET"}, {"can", "NOUN"}, {".", "PUNCT"}}));
  const TaggerModel m = train_tagger(train, train, TagColumn::PosTag, {});
  const Treebank predicted = tag_treebank(m, held_out);
  CHECK(tagging_accuracy(held_out, predicted, TagColumn::PosTag) == 1.0);
}

TEST_CASE("unseen word tagged through its suffix") {
  Treebank train;
  const std::vector<std::string> verbs{"walking", "talking", "singing", "reading", "eating", "running"};
  const std::vector<std::string> nouns{"table", "house", "river", "stone", "cloud", "bread"};
  for (std::size_t i = 0; i < verbs.size(); ++i) {
    train.sentences.push_back(tagged({{"x", "PRT"}, {verbs[i], "VERB"}}));
    train.sentences.push_back(tagged({{"x", "PRT"}, {nouns[i], "NOUN"}}));
  }
  const TaggerModel m = train_tagger(train, train, TagColumn::PosTag, {});
  const std::vector<std::string> input{"x", "jumping"};
  CHECK(tag(m, input)[1] == "VERB");
}

TEST_CASE("outputs stay in the class set and match input length") {
  const Treebank train = generate_toy_treebank(toy_language_a(), 60, 1);
  const Treebank dev = generate_toy_treebank(toy_language_a(), 20, 2);
  const TaggerModel m = train_tagger(train, dev, TagColumn::PosTag, {});
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> forms(1 + rng() % 12);
    for (auto& f : forms) f = std::string(1 + rng() % 6, static_cast<char>('a' + rng() % 26));
    const auto tags = tag(m, forms);
    REQUIRE(tags.size() == forms.size());
    for (const auto& t : tags) REQUIRE(std::find(m.tags().begin(), m.tags().end(), t) != m.tags().end());
  }
  CHECK_THROWS_AS(tag(m, std::vector<std::string>{}), DataError);
}

TEST_CASE("seeded training is reproducible and survives save/load") {
  const Treebank train = generate_toy_treebank(toy_language_b(), 60, 4);
  const Treebank dev = generate_toy_treebank(toy_language_b(), 20, 5);
  TaggerParams p;
  p.epochs = 3;
  p.seed = 17;
  const TaggerModel a = train_tagger(train, dev, TagColumn::PosTag, p);
  const TaggerModel b = train_tagger(train, dev, TagColumn::PosTag, p);
  CHECK(saved(a) == saved(b));
  std::istringstream in(saved(a));
  const TaggerModel loaded = load_tagger(in);
  CHECK(saved(loaded) == saved(a));
  CHECK(loaded.coarse == a.coarse);
  CHECK(loaded.coarse.at("n") == "NOUN");
  CHECK(write_treebank(tag_treebank(loaded, dev)) == write_treebank(tag_treebank(a, dev)));
  CHECK(a.languages == std::vector<std::string>{"bb"});
}

TEST_CASE("tag columns") {
  Treebank train;
  Sentence s = tagged({{"dog", "NOUN"}, {"runs", "VERB"}});
  s.tokens[0].postag = "NN";
  s.tokens[1].postag = "VBZ";
  for (int i = 0; i < 5; ++i) train.sentences.push_back(s);
  const TaggerModel fine = train_tagger(train, train, TagColumn::PosTag, {});
  const Sentence f = tag_sentence(fine, s);
  CHECK(f.tokens[0].postag == "NN");
  CHECK(f.tokens[0].cpostag == "NOUN");
  const TaggerModel coarse = train_tagger(train, train, TagColumn::CPosTag, {});
  const Sentence c = tag_sentence(coarse, s);
  CHECK(c.tokens[1].cpostag == "VERB");
  CHECK(c.tokens[1].postag == "VERB");
  CHECK(f.heads() == s.heads());
}

TEST_CASE("tagging accuracy") {
  Treebank gold;
  gold.sentences.push_back(tagged({{"a", "X"}, {"b", "Y"}}));
  gold.sentences.push_back(tagged({{"c", "X"}, {"d", "Z"}}));
  using Tags = std::vector<std::vector<std::string>>;
  CHECK(tagging_accuracy(gold, Tags{{"X", "Y"}, {"X", "Z"}}, TagColumn::PosTag) == 1.0);
  CHECK(tagging_accuracy(gold, Tags{{"X", "Y"}, {"X", "Y"}}, TagColumn::PosTag) == 0.75);
  CHECK_THROWS_AS(tagging_accuracy(gold, Tags{{"X", "Y"}}, TagColumn::PosTag), DataError);
  CHECK_THROWS_AS(tagging_accuracy(gold, Tags{{"X"}, {"X", "Z"}}, TagColumn::PosTag), DataError);

  std::mt19937_64 rng(6);
  const std::vector<std::string> tags{"A", "B", "C"};
  for (int trial = 0; trial < 100; ++trial) {
    Treebank g;
    std::vector<std::vector<std::string>> pred;
    long total = 0, right = 0;
    for (int i = 0; i < 1 + static_cast<int>(rng() % 5); ++i) {
      std::vector<std::pair<std::string, std::string>> words;
      auto& row = pred.emplace_back();
      for (int j = 0; j < 1 + static_cast<int>(rng() % 6); ++j) {
        const std::string gt = tags[rng() % 3];
        const std::string pt = tags[rng() % 3];
        words.emplace_back("w", gt);
        row.push_back(pt);
        ++total;
        right += gt == pt;
      }
      g.sentences.push_back(tagged(words));
    }
    REQUIRE(tagging_accuracy(g, pred, TagColumn::CPosTag) == static_cast<double>(right) / static_cast<double>(total));
  }
}

TEST_CASE("training errors") {
  Treebank tb;
  tb.sentences.push_back(tagged({{"a", "X"}}));
  CHECK_THROWS_AS(train_tagger(Treebank{}, tb, TagColumn::PosTag, {}), DataError);
  CHECK_THROWS_AS(train_tagger(tb, Treebank{}, TagColumn::PosTag, {}), DataError);
  CHECK_THROWS_AS(parse_tag_column("lemma"), UsageError);
}
