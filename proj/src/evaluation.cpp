#include "polyparse/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "polyparse/error.hpp"

namespace polyparse {

namespace {

double percent(std::int64_t correct, std::int64_t total) {
  return total == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(total);
}

std::string fixed2(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.2f", value);
  return buffer;
}

}  // namespace

double EvalReport::las() const { return percent(correct_labeled, tokens); }
double EvalReport::uas() const { return percent(correct_heads, tokens); }

std::string EvalReport::to_text() const {
  std::ostringstream out;
  out << "  Labeled   attachment score: " << correct_labeled << " / " << tokens << " * 100 = " << fixed2(las())
      << " %\n";
  out << "  Unlabeled attachment score: " << correct_heads << " / " << tokens << " * 100 = " << fixed2(uas())
      << " %\n";
  out << "  Sentences: " << sentences.size() << (exclude_punct ? "  (punctuation excluded)" : "  (all tokens)")
      << '\n';
  return out.str();
}

std::string EvalReport::to_tsv() const {
  std::ostringstream out;
  out << "metric\tcorrect\ttokens\tscore\n";
  out << "LAS\t" << correct_labeled << '\t' << tokens << '\t' << fixed2(las()) << '\n';
  out << "UAS\t" << correct_heads << '\t' << tokens << '\t' << fixed2(uas()) << '\n';
  return out.str();
}

std::string to_string(Metric metric) { return metric == Metric::LAS ? "LAS" : "UAS"; }

Metric parse_metric(const std::string& text) {
  if (text == "LAS" || text == "las") return Metric::LAS;
  if (text == "UAS" || text == "uas") return Metric::UAS;
  throw UsageError("unknown metric '" + text + "' (expected LAS or UAS)");
}

bool is_punctuation_tag(const std::string& cpostag) { return cpostag == "." || cpostag == "PUNCT"; }

EvalReport score(const Treebank& gold, const Treebank& predicted, bool exclude_punct) {
  if (gold.size() != predicted.size()) {
    throw DataError("sentence count mismatch: gold has " + std::to_string(gold.size()) + ", predicted has " +
                    std::to_string(predicted.size()));
  }
  EvalReport report;
  report.exclude_punct = exclude_punct;
  report.sentences.reserve(gold.size());
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto& g = gold.sentences[i];
    const auto& p = predicted.sentences[i];
    if (g.size() != p.size()) {
      throw DataError("token count mismatch in sentence " + std::to_string(i + 1));
    }
    SentenceCounts counts;
    for (std::size_t k = 0; k < g.size(); ++k) {
      const auto& gt = g.tokens[k];
      const auto& pt = p.tokens[k];
      if (exclude_punct && is_punctuation_tag(gt.cpostag)) continue;
      ++counts.tokens;
      if (gt.head == pt.head) {
        ++counts.correct_heads;
        if (gt.deprel == pt.deprel) ++counts.correct_labeled;
      }
    }
    report.tokens += counts.tokens;
    report.correct_heads += counts.correct_heads;
    report.correct_labeled += counts.correct_labeled;
    report.sentences.push_back(counts);
  }
  return report;
}

std::string SignificanceResult::tsv_header() {
  return "metric\tobserved_diff\tp_value\titerations\texceedances\tseed\texact\n";
}

std::string SignificanceResult::to_tsv() const {
  char observed_text[32];
  char p_text[32];
  std::snprintf(observed_text, sizeof observed_text, "%.4f", observed);
  std::snprintf(p_text, sizeof p_text, "%.6g", p_value);
  std::ostringstream out;
  out << to_string(metric) << '\t' << observed_text << '\t' << p_text << '\t' << iterations << '\t' << exceedances
      << '\t' << seed << '\t' << (exact ? "yes" : "no") << '\n';
  return out.str();
}

std::vector<std::size_t> benjamini_hochberg(std::span<const double> pvalues, double q) {
  if (!(q > 0.0 && q < 1.0)) throw UsageError("false discovery rate must be in (0,1)");
  for (double p : pvalues) {
    if (!(p > 0.0 && p <= 1.0)) throw UsageError("p-values must be in (0,1]");
  }
  const std::size_t m = pvalues.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pvalues[a] < pvalues[b]; });
  std::size_t k = 0;
  for (std::size_t rank = 1; rank <= m; ++rank) {
    // p(rank) <= rank * q / m, cross-multiplied.
    if (pvalues[order[rank - 1]] * static_cast<double>(m) <= static_cast<double>(rank) * q) k = rank;
  }
  std::vector<std::size_t> rejected(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(rejected.begin(), rejected.end());
  return rejected;
}

}  // namespace polyparse
