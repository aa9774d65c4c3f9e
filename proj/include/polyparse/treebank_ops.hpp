#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "polyparse/conll.hpp"

namespace polyparse {

enum class TagMode { TreebankDependentTags, UniversalTagsOnly };

struct TagConfig {
  TagMode mode = TagMode::TreebankDependentTags;
  bool prefix_language = false;

  bool operator==(const TagConfig&) const = default;
};

// "fine" / "universal"
std::string to_string(TagMode mode);
TagMode parse_tag_mode(const std::string& text);

using LanguagePart = std::pair<std::string, Treebank>;

// Concatenates the parts in order; every sentence is tagged with its part's
// language code.
Treebank merge_treebanks(std::span<const LanguagePart> parts);

// Universal mode copies CPOSTAG into POSTAG. Prefixing rewrites both tag
// columns to "<lang>_<tag>" once per sentence (tracked by Sentence::tag_prefix).
Sentence apply_tag_config(Sentence sentence, const TagConfig& config);
Treebank apply_tag_config(Treebank treebank, const TagConfig& config);

struct SharedTagMatrix {
  std::vector<std::string> languages;
  // counts[i][j] = number of distinct POSTAG strings shared by i and j;
  // counts[i][i] = tagset size of i.
  std::vector<std::vector<std::size_t>> counts;

  std::string to_tsv() const;
};

SharedTagMatrix shared_tag_report(std::span<const LanguagePart> parts);

// No two arcs cross, counting arcs from the artificial root.
bool is_projective(std::span<const int> heads);
bool is_projective(const Sentence& sentence);

// Lifts the dependent of the shortest non-projective arc to its grandparent
// until the tree is projective. Labels are kept.
std::vector<int> projectivize(std::span<const int> heads);
Sentence projectivize(Sentence sentence);

}  // namespace polyparse
