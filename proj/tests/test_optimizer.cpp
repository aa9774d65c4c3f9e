#include <doctest.h>

#include <random>

#include "polyparse/error.hpp"
#include "polyparse/optimizer.hpp"
#include "polyparse/synthetic.hpp"
#include "support/oracles.hpp"

using namespace polyparse;

namespace {

Token make(int id, const std::string& form, const std::string& tag, int head, const std::string& label) {
  Token t;
  t.id = id;
  t.form = form;
  t.cpostag = tag;
  t.postag = tag;
  t.head = head;
  t.deprel = label;
  return t;
}

// "v n ... n m": a right-branching chain under the verb whose arc labels all
// depend on the tag of the final word. Arc-eager must label the first arcs
// before the final word is in view; arc-standard builds the chain bottom-up
// and can copy the label of the arc below.
Treebank chain_corpus(int sentences, int nouns, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Treebank tb;
  for (int i = 0; i < sentences; ++i) {
    const bool p = rng() % 2 == 0;
    const std::string label = p ? "x" : "y";
    Sentence s;
    s.tokens.push_back(make(1, "v", "V", 0, "root"));
    for (int k = 0; k < nouns; ++k) s.tokens.push_back(make(k + 2, "n", "N", k + 1, label));
    s.tokens.push_back(make(nouns + 2, p ? "p" : "q", p ? "P" : "Q", nouns + 1, label));
    tb.sentences.push_back(s);
  }
  return tb;
}

Treebank single_tokens(int count) {
  Treebank tb;
  for (int i = 0; i < count; ++i) {
    Sentence s;
    s.tokens.push_back(make(1, "w" + std::to_string(i % 3), "X", 0, "root"));
    tb.sentences.push_back(s);
  }
  return tb;
}

TrainParams quick(int epochs = 4) {
  TrainParams p;
  p.epochs = epochs;
  return p;
}

}  // namespace

TEST_CASE("phase 1 profile") {
  const Treebank toy = generate_toy_treebank(toy_language_a(), 50, 1);
  const DataProfile a = phase1_analyze(toy);
  CHECK(a.nonprojective_rate == 0.0);
  CHECK(a.sentences == 50);
  CHECK(a.tokens == toy.token_count());
  CHECK(a.fine_tags == 7);
  CHECK(a.coarse_tags == 7);

  Treebank crossing;
  crossing.sentences.push_back(oracle::sentence_from_heads({3, 4, 0, 3}));
  CHECK(phase1_analyze(crossing).nonprojective_rate == 1.0);

  const std::vector<LanguagePart> parts{{"aa", generate_toy_treebank(toy_language_a(), 30, 1)},
                                        {"bb", generate_toy_treebank(toy_language_b(), 70, 2)}};
  const DataProfile merged = phase1_analyze(merge_treebanks(parts));
  double total = 0.0;
  for (const auto& [lang, share] : merged.languages) total += share;
  CHECK(total == doctest::Approx(1.0));
  CHECK(merged.languages.size() == 2);
  CHECK(merged.languages[0].second == doctest::Approx(0.3));
  CHECK_THROWS_AS(phase1_analyze(Treebank{}), DataError);
}

TEST_CASE("phase 2 ties go to arc-eager") {
  const Treebank tb = single_tokens(6);
  const AlgorithmSelection s = phase2_select_algorithm(tb, tb, quick(2));
  REQUIRE(s.trials.size() == 2);
  CHECK(s.trials[0].dev_las == s.trials[1].dev_las);
  CHECK(s.chosen == System::ArcEager);
}

TEST_CASE("phase 2 picks arc-standard where only it can label the chain") {
  const Treebank train = chain_corpus(200, 5, 1);
  const Treebank dev = chain_corpus(100, 5, 2);
  const AlgorithmSelection s = phase2_select_algorithm(train, dev, quick(5));
  REQUIRE(s.trials.size() == 2);
  INFO("arc-eager ", s.trials[0].dev_las, " arc-standard ", s.trials[1].dev_las);
  CHECK(s.trials[1].dev_las > s.trials[0].dev_las);
  CHECK(s.chosen == System::ArcStandard);
  CHECK(s.model.system == System::ArcStandard);
}

TEST_CASE("phase 3 with the default pool makes no moves") {
  const Treebank train = generate_toy_treebank(toy_language_a(), 40, 1);
  const FeatureSearch r =
      phase3_feature_search(train, train, System::ArcEager, default_templates(System::ArcEager), quick(2));
  CHECK(r.templates == default_templates(System::ArcEager));
  CHECK(r.steps.empty());
  CHECK(r.final_las == r.baseline_las);

  std::vector<FeatureTemplate> missing = default_templates(System::ArcEager);
  missing.pop_back();
  CHECK_THROWS_AS(phase3_feature_search(train, train, System::ArcEager, missing, quick(1)), UsageError);
}

TEST_CASE("phase 3 accepts a template that disambiguates the fixture") {
  // With three nouns the final tag sits at B3 when the first arc is labeled.
  const Treebank train = chain_corpus(200, 3, 3);
  const Treebank dev = chain_corpus(100, 3, 4);
  std::vector<FeatureTemplate> pool = default_templates(System::ArcEager);
  pool.push_back(FeatureTemplate::parse("B3.postag"));
  pool.push_back(FeatureTemplate::parse("S2.form"));
  std::sort(pool.begin(), pool.end());
  const FeatureSearch r = phase3_feature_search(train, dev, System::ArcEager, pool, quick(5));
  REQUIRE(r.steps.size() >= 2);
  CHECK(r.steps[0].move == "+B3.postag");
  CHECK(r.steps[0].accepted);
  CHECK(r.steps[1].move == "+S2.form");
  CHECK_FALSE(r.steps[1].accepted);
  CHECK(r.final_las == 100.0);
  CHECK(r.baseline_las < 95.0);
  CHECK(std::find(r.templates.begin(), r.templates.end(), FeatureTemplate::parse("B3.postag")) != r.templates.end());
  CHECK(r.model.templates == r.templates);
}

TEST_CASE("optimize: monotone, deterministic, never below the chosen baseline") {
  const Treebank train = chain_corpus(120, 3, 5);
  const Treebank dev = chain_corpus(60, 3, 6);
  std::vector<FeatureTemplate> pool = default_templates(System::ArcEager);
  for (const char* extra : {"B3.postag", "B3.form", "S2.postag", "h(S0).postag"}) {
    pool.push_back(FeatureTemplate::parse(extra));
  }
  std::sort(pool.begin(), pool.end());
  const Optimization a = optimize(train, dev, quick(4), pool);
  const Optimization b = optimize(train, dev, quick(4), pool);
  CHECK(a.report.to_text() == b.report.to_text());
  CHECK(a.report.to_tsv() == b.report.to_tsv());
  REQUIRE(a.report.phase2.size() == 2);
  double chosen_las = 0.0;
  for (const auto& t : a.report.phase2) {
    if (t.system == a.report.chosen) chosen_las = t.dev_las;
  }
  CHECK(a.report.final_las >= chosen_las);
  double last = a.report.baseline_las;
  for (const auto& step : a.report.steps) {
    if (!step.accepted) continue;
    CHECK(step.dev_las > last);
    last = step.dev_las;
  }
  CHECK(a.model.best_dev_las() == a.report.final_las);
  const std::string tsv = a.report.to_tsv();
  CHECK(tsv.rfind("step\tmove\tdev_las\taccepted\n", 0) == 0);
  CHECK(a.report.to_text().find("phase 3") != std::string::npos);
}
