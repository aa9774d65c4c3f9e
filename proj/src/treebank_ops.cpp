#include "polyparse/treebank_ops.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "polyparse/error.hpp"

namespace polyparse {

std::string to_string(TagMode mode) {
  return mode == TagMode::UniversalTagsOnly ? "universal" : "fine";
}

TagMode parse_tag_mode(const std::string& text) {
  if (text == "fine") return TagMode::TreebankDependentTags;
  if (text == "universal") return TagMode::UniversalTagsOnly;
  throw UsageError("unknown tag mode '" + text + "' (expected fine or universal)");
}

Treebank merge_treebanks(std::span<const LanguagePart> parts) {
  if (parts.empty()) throw UsageError("merge_treebanks: no treebanks given");
  Treebank merged;
  std::string source;
  for (const auto& [lang, treebank] : parts) {
    for (const auto& sentence : treebank.sentences) {
      merged.sentences.push_back(sentence);
      merged.sentences.back().lang = lang;
    }
    if (!source.empty()) source += '+';
    source += lang;
  }
  merged.source = source;
  return merged;
}

Sentence apply_tag_config(Sentence sentence, const TagConfig& config) {
  if (config.mode == TagMode::UniversalTagsOnly) {
    for (auto& token : sentence.tokens) token.postag = token.cpostag;
  }
  if (config.prefix_language && sentence.tag_prefix.empty()) {
    if (sentence.lang.empty()) throw DataError("tag prefixing requires a language code on every sentence");
    const std::string prefix = sentence.lang + "_";
    for (auto& token : sentence.tokens) {
      token.cpostag = prefix + token.cpostag;
      if (config.mode == TagMode::UniversalTagsOnly) {
        token.postag = token.cpostag;
      } else {
        token.postag = prefix + token.postag;
      }
    }
    sentence.tag_prefix = sentence.lang;
  }
  return sentence;
}

Treebank apply_tag_config(Treebank treebank, const TagConfig& config) {
  for (auto& sentence : treebank.sentences) sentence = apply_tag_config(std::move(sentence), config);
  return treebank;
}

std::string SharedTagMatrix::to_tsv() const {
  std::ostringstream out;
  out << "lang";
  for (const auto& lang : languages) out << '\t' << lang;
  out << '\n';
  for (std::size_t i = 0; i < languages.size(); ++i) {
    out << languages[i];
    for (std::size_t j = 0; j < languages.size(); ++j) out << '\t' << counts[i][j];
    out << '\n';
  }
  return out.str();
}

SharedTagMatrix shared_tag_report(std::span<const LanguagePart> parts) {
  if (parts.size() < 2) throw UsageError("shared_tag_report needs at least two treebanks");
  std::vector<std::set<std::string>> tagsets;
  SharedTagMatrix matrix;
  for (const auto& [lang, treebank] : parts) {
    matrix.languages.push_back(lang);
    auto& tags = tagsets.emplace_back();
    for (const auto& sentence : treebank.sentences) {
      for (const auto& token : sentence.tokens) tags.insert(token.postag);
    }
  }
  const std::size_t m = parts.size();
  matrix.counts.assign(m, std::vector<std::size_t>(m, 0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      std::size_t shared = 0;
      for (const auto& tag : tagsets[i]) shared += tagsets[j].count(tag);
      matrix.counts[i][j] = matrix.counts[j][i] = shared;
    }
  }
  return matrix;
}

bool is_projective(std::span<const int> heads) {
  const int n = static_cast<int>(heads.size());
  for (int d1 = 1; d1 <= n; ++d1) {
    const int h1 = heads[static_cast<std::size_t>(d1 - 1)];
    const int lo1 = std::min(h1, d1);
    const int hi1 = std::max(h1, d1);
    for (int d2 = d1 + 1; d2 <= n; ++d2) {
      const int h2 = heads[static_cast<std::size_t>(d2 - 1)];
      const int lo2 = std::min(h2, d2);
      const int hi2 = std::max(h2, d2);
      // Crossing: exactly one endpoint of arc 2 lies strictly inside arc 1,
      // and the other strictly outside it.
      const bool lo_inside = lo1 < lo2 && lo2 < hi1;
      const bool hi_inside = lo1 < hi2 && hi2 < hi1;
      const bool lo_outside = lo2 < lo1 || lo2 > hi1;
      const bool hi_outside = hi2 < lo1 || hi2 > hi1;
      if ((lo_inside && hi_outside) || (hi_inside && lo_outside)) return false;
    }
  }
  return true;
}

bool is_projective(const Sentence& sentence) { return is_projective(sentence.heads()); }

namespace {

bool dominates(std::span<const int> heads, int ancestor, int node) {
  while (node != 0) {
    if (node == ancestor) return true;
    node = heads[static_cast<std::size_t>(node - 1)];
  }
  return ancestor == 0;
}

// Dependent of the shortest arc (h, d) that covers a token not dominated by h;
// ties go to the leftmost dependent. 0 when the tree is projective.
int shortest_nonprojective_dependent(std::span<const int> heads) {
  const int n = static_cast<int>(heads.size());
  int best = 0;
  int best_length = n + 1;
  for (int d = 1; d <= n; ++d) {
    const int h = heads[static_cast<std::size_t>(d - 1)];
    const int length = std::abs(h - d);
    if (length >= best_length) continue;
    for (int k = std::min(h, d) + 1; k < std::max(h, d); ++k) {
      if (!dominates(heads, h, k)) {
        best = d;
        best_length = length;
        break;
      }
    }
  }
  return best;
}

}  // namespace

std::vector<int> projectivize(std::span<const int> heads) {
  std::vector<int> result(heads.begin(), heads.end());
  const std::size_t limit = result.size() * result.size() + 1;
  for (std::size_t lifts = 0;; ++lifts) {
    const int d = shortest_nonprojective_dependent(result);
    if (d == 0) break;
    if (lifts > limit) throw InvariantError("projectivize did not reach a fixpoint");
    const int h = result[static_cast<std::size_t>(d - 1)];
    result[static_cast<std::size_t>(d - 1)] = result[static_cast<std::size_t>(h - 1)];
  }
  return result;
}

Sentence projectivize(Sentence sentence) {
  const auto lifted = projectivize(sentence.heads());
  for (std::size_t i = 0; i < lifted.size(); ++i) sentence.tokens[i].head = lifted[i];
  return sentence;
}

}  // namespace polyparse
