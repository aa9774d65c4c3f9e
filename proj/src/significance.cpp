#include <cstdlib>

#include "polyparse/error.hpp"
#include "polyparse/evaluation.hpp"
#include "polyparse/rng.hpp"

namespace polyparse {

namespace {

struct Paired {
  // Per-sentence difference in correct counts, a - b.
  std::vector<std::int64_t> diffs;
  std::int64_t observed = 0;
  std::int64_t tokens = 0;
};

Paired pair_up(const EvalReport& a, const EvalReport& b, Metric metric) {
  if (a.sentences.size() != b.sentences.size()) {
    throw DataError("reports do not score the same gold treebank (sentence counts differ)");
  }
  Paired paired;
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < a.sentences.size(); ++i) {
    const auto& sa = a.sentences[i];
    const auto& sb = b.sentences[i];
    if (sa.tokens != sb.tokens) {
      throw DataError("reports do not score the same gold treebank (sentence " + std::to_string(i + 1) + ")");
    }
    const std::int64_t d = metric == Metric::LAS ? sa.correct_labeled - sb.correct_labeled
                                                 : sa.correct_heads - sb.correct_heads;
    paired.diffs.push_back(d);
    sum += d;
    paired.tokens += sa.tokens;
  }
  paired.observed = std::llabs(sum);
  return paired;
}

// Coin flips for one sampling iteration, derived from (seed, iteration) only so
// that iterations can run in any order on any thread.
std::int64_t shuffled_difference(const std::vector<std::int64_t>& diffs, std::uint64_t seed, std::uint64_t iteration) {
  const std::uint64_t stream = splitmix64(seed ^ splitmix64(iteration + 1));
  std::int64_t sum = 0;
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    if (i % 64 == 0) bits = splitmix64(stream + i / 64);
    sum += (bits >> (i % 64)) & 1u ? -diffs[i] : diffs[i];
  }
  return std::llabs(sum);
}

std::int64_t assignment_difference(const std::vector<std::int64_t>& diffs, std::uint64_t mask) {
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < diffs.size(); ++i) sum += (mask >> i) & 1u ? -diffs[i] : diffs[i];
  return std::llabs(sum);
}

SignificanceResult finish(const Paired& paired, Metric metric, std::uint64_t n, std::uint64_t count,
                          std::uint64_t seed, bool exact) {
  SignificanceResult result;
  result.metric = metric;
  result.observed = paired.tokens == 0 ? 0.0
                                       : 100.0 * static_cast<double>(paired.observed) /
                                             static_cast<double>(paired.tokens);
  result.iterations = n;
  result.exceedances = count;
  result.p_value = static_cast<double>(count + 1) / static_cast<double>(n + 1);
  result.seed = seed;
  result.exact = exact;
  return result;
}

void check_iterations(std::uint64_t iterations) {
  if (iterations < 1) throw UsageError("the comparator needs at least one iteration");
}

}  // namespace

SignificanceResult randomized_comparator_serial(const EvalReport& a, const EvalReport& b, Metric metric,
                                                std::uint64_t iterations, std::uint64_t seed) {
  check_iterations(iterations);
  const Paired paired = pair_up(a, b, metric);
  const std::size_t n = paired.diffs.size();
  std::uint64_t count = 0;
  if (n <= kExactEnumerationLimit) {
    const std::uint64_t assignments = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < assignments; ++mask) {
      if (assignment_difference(paired.diffs, mask) >= paired.observed) ++count;
    }
    return finish(paired, metric, assignments, count, seed, true);
  }
  for (std::uint64_t it = 0; it < iterations; ++it) {
    if (shuffled_difference(paired.diffs, seed, it) >= paired.observed) ++count;
  }
  return finish(paired, metric, iterations, count, seed, false);
}

SignificanceResult randomized_comparator(const EvalReport& a, const EvalReport& b, Metric metric,
                                         std::uint64_t iterations, std::uint64_t seed) {
  check_iterations(iterations);
  const Paired paired = pair_up(a, b, metric);
  const std::size_t n = paired.diffs.size();
  const bool exact = n <= kExactEnumerationLimit;
  const std::uint64_t total = exact ? std::uint64_t{1} << n : iterations;
  const auto loop_end = static_cast<long long>(total);
  long long count = 0;
#pragma omp parallel for reduction(+ : count) schedule(static)
  for (long long k = 0; k < loop_end; ++k) {
    const auto index = static_cast<std::uint64_t>(k);
    const std::int64_t shuffled = exact ? assignment_difference(paired.diffs, index)
                                        : shuffled_difference(paired.diffs, seed, index);
    if (shuffled >= paired.observed) ++count;
  }
  return finish(paired, metric, total, static_cast<std::uint64_t>(count), seed, exact);
}

}  // namespace polyparse
