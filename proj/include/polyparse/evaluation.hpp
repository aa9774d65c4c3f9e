#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "polyparse/conll.hpp"

namespace polyparse {

struct SentenceCounts {
  std::int64_t correct_heads = 0;
  std::int64_t correct_labeled = 0;
  std::int64_t tokens = 0;

  bool operator==(const SentenceCounts&) const = default;
};

struct EvalReport {
  std::int64_t tokens = 0;
  std::int64_t correct_heads = 0;
  std::int64_t correct_labeled = 0;
  std::vector<SentenceCounts> sentences;
  bool exclude_punct = false;

  double las() const;
  double uas() const;
  std::string to_text() const;
  std::string to_tsv() const;
};

enum class Metric { LAS, UAS };
std::string to_string(Metric metric);
Metric parse_metric(const std::string& text);

// True for the universal punctuation tag ("." or "PUNCT").
bool is_punctuation_tag(const std::string& cpostag);

EvalReport score(const Treebank& gold, const Treebank& predicted, bool exclude_punct = false);

struct SignificanceResult {
  Metric metric = Metric::LAS;
  // |metric(a) - metric(b)| in percentage points.
  double observed = 0.0;
  double p_value = 1.0;
  std::uint64_t iterations = 0;
  std::uint64_t exceedances = 0;
  std::uint64_t seed = 0;
  bool exact = false;

  static std::string tsv_header();
  std::string to_tsv() const;
};

inline constexpr std::size_t kExactEnumerationLimit = 12;
inline constexpr std::uint64_t kDefaultIterations = 10000;

// Stratified shuffling test: each sentence's pair of outputs is swapped with
// probability 1/2 and the absolute metric difference recomputed from the
// re-aggregated counts. p = (c + 1) / (N + 1). Sentence counts up to
// kExactEnumerationLimit enumerate all 2^n assignments instead of sampling.
// The OpenMP kernel and the serial reference return identical results.
SignificanceResult randomized_comparator(const EvalReport& a, const EvalReport& b, Metric metric,
                                         std::uint64_t iterations, std::uint64_t seed);
SignificanceResult randomized_comparator_serial(const EvalReport& a, const EvalReport& b, Metric metric,
                                                std::uint64_t iterations, std::uint64_t seed);

// Indices (into pvalues, ascending) rejected by the Benjamini-Hochberg
// step-up procedure at false discovery rate q.
std::vector<std::size_t> benjamini_hochberg(std::span<const double> pvalues, double q);

// One off-diagonal or diagonal cell of the language grid.
struct GridCell {
  double las = 0.0;
  double uas = 0.0;
  // Versus the row's monolingual baseline; unused on the diagonal.
  double p_las = 1.0;
  double p_uas = 1.0;
  bool present = false;
};

struct Grid {
  std::vector<std::string> languages;
  // cells[row][col]: model trained on row+col, evaluated on row's test set.
  std::vector<std::vector<GridCell>> cells;
};

inline constexpr double kSignificanceLevel = 0.05;
inline constexpr double kGridFalseDiscoveryRate = 0.20;

// "++" significant gain, "+" non-significant gain or tie, "-" non-significant
// loss, "--" significant loss.
std::string annotate(double bilingual, double monolingual, double p_value);

struct GridSummary {
  int comparisons = 0;
  int las_not_significantly_worse = 0;
  int uas_not_significantly_worse = 0;
  int las_significant_gains = 0;
  int uas_significant_gains = 0;
  int las_gains_after_bh = 0;
  int uas_gains_after_bh = 0;
};

GridSummary summarize(const Grid& grid);
std::string grid_report(const Grid& grid);
std::string grid_tsv(const Grid& grid);

}  // namespace polyparse
