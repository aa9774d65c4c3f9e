#include <doctest.h>

#include <algorithm>
#include <random>

#include "polyparse/error.hpp"
#include "polyparse/evaluation.hpp"
#include "support/oracles.hpp"

using namespace polyparse;

namespace {

EvalReport report_of(const std::vector<long>& correct, const std::vector<long>& tokens) {
  EvalReport r;
  for (std::size_t i = 0; i < correct.size(); ++i) {
    SentenceCounts s{correct[i], correct[i], tokens[i]};
    r.sentences.push_back(s);
    r.tokens += tokens[i];
    r.correct_heads += correct[i];
    r.correct_labeled += correct[i];
  }
  return r;
}

Treebank two_tokens() {
  Treebank tb;
  tb.sentences.push_back(oracle::sentence_from_heads({0, 1}));
  return tb;
}

}  // namespace

TEST_CASE("score examples") {
  const Treebank gold = two_tokens();
  const EvalReport same = score(gold, gold);
  CHECK(same.las() == 100.0);
  CHECK(same.uas() == 100.0);

  Treebank head_wrong = gold;
  head_wrong.sentences[0].tokens[0].head = 2;
  const EvalReport hw = score(gold, head_wrong);
  CHECK(hw.uas() == 50.0);

  Treebank label_wrong = gold;
  label_wrong.sentences[0].tokens[1].deprel = "other";
  const EvalReport lw = score(gold, label_wrong);
  CHECK(lw.uas() == 100.0);
  CHECK(lw.las() == 50.0);
}

TEST_CASE("score misalignment errors") {
  const Treebank gold = two_tokens();
  Treebank more = gold;
  more.sentences.push_back(gold.sentences[0]);
  CHECK_THROWS_AS(score(gold, more), DataError);
  Treebank shorter = gold;
  shorter.sentences[0].tokens.pop_back();
  CHECK_THROWS_AS(score(gold, shorter), DataError);
}

TEST_CASE("punctuation exclusion") {
  Treebank gold = two_tokens();
  gold.sentences[0].tokens[1].cpostag = ".";
  Treebank pred = gold;
  pred.sentences[0].tokens[1].head = 0;
  CHECK(score(gold, pred, false).uas() == 50.0);
  const EvalReport r = score(gold, pred, true);
  CHECK(r.uas() == 100.0);
  CHECK(r.tokens == 1);
  CHECK(r.exclude_punct);
}

TEST_CASE("score matches a per-token recount") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    Treebank gold;
    Treebank pred;
    const int sentences = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < sentences; ++i) {
      const int n = 1 + static_cast<int>(rng() % 10);
      Sentence g = oracle::sentence_from_heads(oracle::random_tree(n, rng), &rng);
      if (rng() % 3 == 0) g.tokens[rng() % g.size()].cpostag = ".";
      Sentence p = g;
      for (auto& t : p.tokens) {
        if (rng() % 3 == 0) t.head = static_cast<int>(rng() % (n + 1));
        if (rng() % 4 == 0) t.deprel = "x";
      }
      gold.sentences.push_back(g);
      pred.sentences.push_back(p);
    }
    for (bool exclude : {false, true}) {
      const EvalReport r = score(gold, pred, exclude);
      const oracle::Counts c = oracle::recount(gold, pred, exclude);
      REQUIRE(r.tokens == c.tokens);
      REQUIRE(r.correct_heads == c.heads);
      REQUIRE(r.correct_labeled == c.labeled);
      REQUIRE(r.las() <= r.uas());
      std::int64_t sum = 0;
      for (const auto& s : r.sentences) sum += s.tokens;
      REQUIRE(sum == r.tokens);
    }
  }
}

TEST_CASE("report formats") {
  const Treebank gold = two_tokens();
  const EvalReport r = score(gold, gold);
  CHECK(r.to_text().find("100.00") != std::string::npos);
  CHECK(r.to_tsv().find("100.00") != std::string::npos);
  CHECK(parse_metric("LAS") == Metric::LAS);
  CHECK(parse_metric("UAS") == Metric::UAS);
  CHECK_THROWS_AS(parse_metric("BLEU"), UsageError);
}

TEST_CASE("comparator examples") {
  const EvalReport a = report_of({3, 4, 5}, {6, 6, 6});
  const auto same = randomized_comparator(a, a, Metric::LAS, 100, 1);
  CHECK(same.observed == 0.0);
  CHECK(same.p_value == 1.0);
  CHECK(same.exact);

  const auto single = randomized_comparator(report_of({5}, {9}), report_of({2}, {9}), Metric::UAS, 100, 1);
  CHECK(single.p_value == 1.0);
  CHECK(single.iterations == 2);

  // Strict dominance on all ten sentences: only the identity and the full
  // swap reach the observed absolute difference.
  const std::vector<long> tokens(10, 5);
  const auto dominance =
      randomized_comparator(report_of(std::vector<long>(10, 4), tokens), report_of(std::vector<long>(10, 3), tokens),
                            Metric::LAS, 100, 1);
  CHECK(dominance.iterations == 1024);
  CHECK(dominance.exceedances == 2);
  CHECK(dominance.p_value == 3.0 / 1025.0);
  CHECK(dominance.observed == doctest::Approx(20.0));
}

TEST_CASE("comparator errors") {
  const EvalReport a = report_of({1, 2}, {3, 3});
  CHECK_THROWS_AS(randomized_comparator(a, report_of({1}, {3}), Metric::LAS, 10, 1), DataError);
  CHECK_THROWS_AS(randomized_comparator(a, report_of({1, 2}, {3, 4}), Metric::LAS, 10, 1), DataError);
  CHECK_THROWS_AS(randomized_comparator(a, a, Metric::LAS, 0, 1), UsageError);
}

TEST_CASE("exact comparator matches enumeration oracle and is symmetric") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 12;
    std::vector<long> tokens(n), ca(n), cb(n);
    for (std::size_t i = 0; i < n; ++i) {
      tokens[i] = 1 + static_cast<long>(rng() % 8);
      ca[i] = static_cast<long>(rng() % (tokens[i] + 1));
      cb[i] = static_cast<long>(rng() % (tokens[i] + 1));
    }
    const EvalReport a = report_of(ca, tokens);
    const EvalReport b = report_of(cb, tokens);
    const auto ab = randomized_comparator(a, b, Metric::LAS, 1, 5);
    const auto ba = randomized_comparator(b, a, Metric::LAS, 1, 5);
    REQUIRE(ab.exact);
    REQUIRE(ab.p_value == oracle::exact_p(ca, cb));
    REQUIRE(ab.p_value == ba.p_value);
    REQUIRE(ab.p_value > 0.0);
    REQUIRE(ab.p_value <= 1.0);
  }
}

TEST_CASE("parallel comparator equals the serial reference") {
  std::mt19937_64 rng(9);
  for (std::size_t n : {7u, 12u, 13u, 40u, 200u}) {
    std::vector<long> tokens(n), ca(n), cb(n);
    for (std::size_t i = 0; i < n; ++i) {
      tokens[i] = 1 + static_cast<long>(rng() % 20);
      ca[i] = static_cast<long>(rng() % (tokens[i] + 1));
      cb[i] = std::min(tokens[i], ca[i] + static_cast<long>(rng() % 2));
    }
    const EvalReport a = report_of(ca, tokens);
    const EvalReport b = report_of(cb, tokens);
    for (Metric m : {Metric::LAS, Metric::UAS}) {
      const auto par = randomized_comparator(a, b, m, 3000, 77);
      const auto ser = randomized_comparator_serial(a, b, m, 3000, 77);
      CHECK(par.exceedances == ser.exceedances);
      CHECK(par.iterations == ser.iterations);
      CHECK(par.p_value == ser.p_value);
      CHECK(par.exact == (n <= kExactEnumerationLimit));
    }
  }
}

TEST_CASE("sampled comparator is seeded") {
  std::vector<long> tokens(30, 10), ca(30), cb(30);
  for (std::size_t i = 0; i < 30; ++i) {
    ca[i] = static_cast<long>(i % 7);
    cb[i] = static_cast<long>((i * 3) % 8);
  }
  const auto x = randomized_comparator(report_of(ca, tokens), report_of(cb, tokens), Metric::LAS, 2000, 4);
  const auto y = randomized_comparator(report_of(ca, tokens), report_of(cb, tokens), Metric::LAS, 2000, 4);
  CHECK(x.to_tsv() == y.to_tsv());
  CHECK(x.p_value == static_cast<double>(x.exceedances + 1) / 2001.0);
  CHECK_FALSE(x.exact);
}

TEST_CASE("Benjamini-Hochberg examples") {
  const std::vector<double> p{0.001, 0.02, 0.04, 0.6};
  CHECK(benjamini_hochberg(p, 0.05) == std::vector<std::size_t>{0, 1});
  const std::vector<double> ones(5, 1.0);
  CHECK(benjamini_hochberg(ones, 0.2).empty());
  const std::vector<double> boundary{0.25};
  CHECK(benjamini_hochberg(boundary, 0.25) == std::vector<std::size_t>{0});
  const std::vector<double> unsorted{0.6, 0.04, 0.001, 0.02};
  CHECK(benjamini_hochberg(unsorted, 0.05) == std::vector<std::size_t>{2, 3});
  CHECK(benjamini_hochberg(std::vector<double>{}, 0.1).empty());
  CHECK_THROWS_AS(benjamini_hochberg(p, 0.0), UsageError);
  CHECK_THROWS_AS(benjamini_hochberg(p, 1.0), UsageError);
  CHECK_THROWS_AS(benjamini_hochberg(std::vector<double>{0.0}, 0.1), UsageError);
  CHECK_THROWS_AS(benjamini_hochberg(std::vector<double>{1.5}, 0.1), UsageError);
}

TEST_CASE("Benjamini-Hochberg matches the step-up oracle and is monotone in q") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> unit(1e-6, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> p(1 + rng() % 20);
    for (auto& x : p) x = rng() % 3 == 0 ? unit(rng) * 0.05 : unit(rng);
    double q1 = unit(rng) * 0.5;
    double q2 = unit(rng) * 0.5;
    if (q1 > q2) std::swap(q1, q2);
    const auto r1 = benjamini_hochberg(p, q1);
    const auto r2 = benjamini_hochberg(p, q2);
    REQUIRE(r1 == oracle::bh(p, q1));
    REQUIRE(std::includes(r2.begin(), r2.end(), r1.begin(), r1.end()));
  }
}

TEST_CASE("grid annotations") {
  CHECK(annotate(80.0, 70.0, 0.01) == "++");
  CHECK(annotate(80.0, 70.0, 0.2) == "+");
  CHECK(annotate(70.0, 70.0, 0.5) == "+");
  CHECK(annotate(60.0, 70.0, 0.2) == "-");
  CHECK(annotate(60.0, 70.0, 0.01) == "--");
}

TEST_CASE("grid report and summary recount") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> score_dist(50.0, 90.0);
  std::uniform_real_distribution<double> p_dist(0.001, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Grid g;
    const std::size_t k = 2 + rng() % 4;
    for (std::size_t i = 0; i < k; ++i) g.languages.push_back("l" + std::to_string(i));
    g.cells.assign(k, std::vector<GridCell>(k));
    for (auto& row : g.cells) {
      for (auto& cell : row) cell = {score_dist(rng), score_dist(rng), p_dist(rng) * (rng() % 2 ? 0.1 : 1.0),
                                     p_dist(rng), true};
    }
    int las_ok = 0, uas_ok = 0, las_gain = 0, uas_gain = 0, comparisons = 0;
    std::vector<double> p_las;
    std::vector<std::pair<std::size_t, std::size_t>> where;
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t c = 0; c < k; ++c) {
        if (r == c) continue;
        const auto& cell = g.cells[r][c];
        const auto& mono = g.cells[r][r];
        ++comparisons;
        const bool las_sig = cell.p_las < 0.05;
        const bool uas_sig = cell.p_uas < 0.05;
        if (!(cell.las < mono.las && las_sig)) ++las_ok;
        if (!(cell.uas < mono.uas && uas_sig)) ++uas_ok;
        if (cell.las >= mono.las && las_sig) ++las_gain;
        if (cell.uas >= mono.uas && uas_sig) ++uas_gain;
        p_las.push_back(cell.p_las);
        where.emplace_back(r, c);
      }
    }
    int las_bh = 0;
    for (std::size_t i : oracle::bh(p_las, 0.2)) {
      if (g.cells[where[i].first][where[i].second].las >= g.cells[where[i].first][where[i].first].las) ++las_bh;
    }
    const GridSummary s = summarize(g);
    REQUIRE(s.comparisons == comparisons);
    REQUIRE(s.las_not_significantly_worse == las_ok);
    REQUIRE(s.uas_not_significantly_worse == uas_ok);
    REQUIRE(s.las_significant_gains == las_gain);
    REQUIRE(s.uas_significant_gains == uas_gain);
    REQUIRE(s.las_gains_after_bh == las_bh);
  }
}

TEST_CASE("diagonal cells carry no annotation") {
  Grid g;
  g.languages = {"en", "es"};
  g.cells = {{{80.0, 85.0, 1.0, 1.0, true}, {82.0, 86.0, 0.01, 0.5, true}},
             {{70.0, 75.0, 0.5, 0.01, true}, {72.0, 78.0, 1.0, 1.0, true}}};
  const std::string text = grid_report(g);
  CHECK(text.find("80.00 ") != std::string::npos);
  CHECK(text.find("80.00+") == std::string::npos);
  CHECK(text.find("82.00++") != std::string::npos);
  CHECK(text.find("86.00+") != std::string::npos);
  CHECK(text.find("70.00-") != std::string::npos);
  CHECK(text.find("75.00--") != std::string::npos);
  const std::string tsv = grid_tsv(g);
  CHECK(tsv.find("en\ten\t80.00\t85.00\t-\t-\t\t\n") != std::string::npos);
  CHECK(tsv.find("en\tes\t82.00\t86.00\t0.01\t0.5\t++\t+\n") != std::string::npos);
}
