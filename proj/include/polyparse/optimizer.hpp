#pragma once

#include <string>
#include <utility>
#include <vector>

#include "polyparse/parser.hpp"

namespace polyparse {

struct DataProfile {
  std::size_t sentences = 0;
  std::size_t tokens = 0;
  // Fraction of sentences that are not projective.
  double nonprojective_rate = 0.0;
  std::size_t labels = 0;
  // (language, share of sentences), sorted by language.
  std::vector<std::pair<std::string, double>> languages;
  std::size_t fine_tags = 0;
  std::size_t coarse_tags = 0;

  std::string to_text() const;
};

DataProfile phase1_analyze(const Treebank& train);

struct SystemTrial {
  System system;
  double dev_las;
};

struct AlgorithmSelection {
  System chosen = System::ArcEager;
  std::vector<SystemTrial> trials;
  // Model trained for the chosen system with default templates.
  ParserModel model;
};

// Trains arc-eager and arc-standard with default templates; ties go to
// arc-eager. params.system and params.templates are ignored.
AlgorithmSelection phase2_select_algorithm(const Treebank& train, const Treebank& dev, const TrainParams& params);

inline constexpr double kMinImprovement = 0.05;

struct SearchStep {
  int step = 0;
  std::string move;  // "+<template>" or "-<template>"
  double dev_las = 0.0;
  bool accepted = false;
};

struct FeatureSearch {
  std::vector<FeatureTemplate> templates;
  ParserModel model;
  double baseline_las = 0.0;
  double final_las = 0.0;
  std::vector<SearchStep> steps;
};

// Greedy forward pass over pool additions, then a backward pass over removals
// of the templates that pass added, both in canonical name order. A move is
// kept when dev LAS improves by at least kMinImprovement. Starts from
// default_templates(system), which pool must contain.
FeatureSearch phase3_feature_search(const Treebank& train, const Treebank& dev, System system,
                                    const std::vector<FeatureTemplate>& pool, const TrainParams& params);

struct OptimizationReport {
  DataProfile profile;
  std::vector<SystemTrial> phase2;
  System chosen = System::ArcEager;
  double baseline_las = 0.0;
  std::vector<SearchStep> steps;
  std::vector<FeatureTemplate> final_templates;
  double final_las = 0.0;

  std::string to_text() const;
  std::string to_tsv() const;
};

struct Optimization {
  ParserModel model;
  OptimizationReport report;
};

// Phases 1-3 in sequence. An empty pool means candidate_pool(chosen system).
Optimization optimize(const Treebank& train, const Treebank& dev, const TrainParams& params,
                      const std::vector<FeatureTemplate>& pool = {});

}  // namespace polyparse
