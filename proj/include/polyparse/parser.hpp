#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "polyparse/conll.hpp"
#include "polyparse/features.hpp"
#include "polyparse/learner.hpp"
#include "polyparse/transition.hpp"
#include "polyparse/treebank_ops.hpp"

namespace polyparse {

struct TrainParams {
  int epochs = 15;
  std::uint64_t seed = 1;
  System system = System::ArcEager;
  // Empty means default_templates(system).
  std::vector<FeatureTemplate> templates;
  TagConfig tags;
  bool shuffle = true;
};

struct TrainingMetadata {
  std::uint64_t seed = 0;
  int epochs = 0;
  bool shuffle = true;
  int chosen_epoch = 0;
  std::vector<double> dev_las;  // one per epoch
};

struct ParserModel {
  LinearModel weights;
  FeatureInterner features;
  System system = System::ArcEager;
  std::vector<FeatureTemplate> templates;
  TagConfig tags;
  std::vector<std::string> labels;
  std::vector<std::string> languages;
  std::string root_label = "root";
  TrainingMetadata meta;

  double best_dev_las() const;
};

// Class list of a parser over the given labels: SHIFT, REDUCE (arc-eager
// only), then LEFT_ARC and RIGHT_ARC per label.
std::vector<Transition> transition_classes(System system, const std::vector<std::string>& labels);

ParserModel train_parser(const Treebank& train, const Treebank& dev, const TrainParams& params);

// Greedy decoding. Heads and labels of the input are ignored; the result is a
// single-rooted tree whose root child carries the model's root label.
Sentence parse(const ParserModel& model, const Sentence& sentence);

// Sentence-parallel (OpenMP) and serial versions; identical output.
Treebank parse_treebank(const ParserModel& model, const Treebank& treebank);
Treebank parse_treebank_serial(const ParserModel& model, const Treebank& treebank);

void save_parser(std::ostream& out, const ParserModel& model);
void save_parser(const std::filesystem::path& path, const ParserModel& model);
ParserModel load_parser(std::istream& in);
ParserModel load_parser(const std::filesystem::path& path);

}  // namespace polyparse
