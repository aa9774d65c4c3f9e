#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "polyparse/conll.hpp"
#include "polyparse/learner.hpp"

namespace polyparse {

enum class TagColumn { CPosTag, PosTag };

// "cpostag" / "postag"
std::string to_string(TagColumn column);
TagColumn parse_tag_column(const std::string& text);

const std::string& tag_of(const Token& token, TagColumn column);

struct TaggerParams {
  int epochs = 10;
  std::uint64_t seed = 1;
  bool shuffle = true;
};

struct TaggerMetadata {
  std::uint64_t seed = 0;
  int epochs = 0;
  bool shuffle = true;
  int chosen_epoch = 0;
  std::vector<double> dev_accuracy;  // one per epoch, in [0,1]
};

struct TaggerModel {
  LinearModel weights;  // classes are the tags seen in training, sorted
  FeatureInterner features;
  TagColumn column = TagColumn::PosTag;
  std::vector<std::string> languages;
  // Most frequent CPOSTAG per POSTAG in training; used to fill the coarse
  // column when tagging with a fine-tag model.
  std::map<std::string, std::string> coarse;
  TaggerMetadata meta;

  const std::vector<std::string>& tags() const { return weights.classes(); }
};

// Features for position i given the tags already predicted for 0..i-1:
// form, lowercased form, 1-3 character prefixes and suffixes, previous tag,
// tag two back, previous and next form, digit and hyphen flags, and a bias.
std::vector<std::string> tagger_features(std::span<const std::string> forms, std::size_t i,
                                         std::span<const std::string> history);

TaggerModel train_tagger(const Treebank& train, const Treebank& dev, TagColumn column, const TaggerParams& params);

std::vector<std::string> tag(const TaggerModel& model, std::span<const std::string> forms);

// Replaces both tag columns with predictions. With a CPOSTAG model POSTAG
// receives the same tag; with a POSTAG model CPOSTAG comes from the coarse map
// (or the fine tag when unknown).
Sentence tag_sentence(const TaggerModel& model, const Sentence& sentence);
Treebank tag_treebank(const TaggerModel& model, const Treebank& treebank);

// Token-level exact-match rate on column.
double tagging_accuracy(const Treebank& gold, const std::vector<std::vector<std::string>>& predicted,
                        TagColumn column);
double tagging_accuracy(const Treebank& gold, const Treebank& predicted, TagColumn column);

void save_tagger(std::ostream& out, const TaggerModel& model);
void save_tagger(const std::filesystem::path& path, const TaggerModel& model);
TaggerModel load_tagger(std::istream& in);
TaggerModel load_tagger(const std::filesystem::path& path);

}  // namespace polyparse
