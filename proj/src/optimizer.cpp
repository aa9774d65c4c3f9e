#include "polyparse/optimizer.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <map>
#include <set>
#include <sstream>

#include "polyparse/error.hpp"

namespace polyparse {

namespace {

constexpr double kTolerance = 1e-9;

std::string fixed2(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.2f", value);
  return buffer;
}

std::string fixed4(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.4f", value);
  return buffer;
}

bool improves(double candidate, double current) { return candidate >= current + kMinImprovement - kTolerance; }

ParserModel train_with(const Treebank& train, const Treebank& dev, const TrainParams& base, System system,
                       std::vector<FeatureTemplate> templates) {
  TrainParams p = base;
  p.system = system;
  p.templates = std::move(templates);
  return train_parser(train, dev, p);
}

}  // namespace

std::string DataProfile::to_text() const {
  std::ostringstream out;
  out << "sentences: " << sentences << '\n';
  out << "tokens: " << tokens << '\n';
  out << "non-projective sentences: " << fixed4(nonprojective_rate) << '\n';
  out << "labels: " << labels << '\n';
  out << "fine tags: " << fine_tags << '\n';
  out << "coarse tags: " << coarse_tags << '\n';
  for (const auto& [lang, share] : languages) out << "language " << (lang.empty() ? "?" : lang) << ": " << fixed4(share) << '\n';
  return out.str();
}

DataProfile phase1_analyze(const Treebank& train) {
  if (train.empty()) throw DataError("cannot analyze an empty treebank");
  DataProfile profile;
  std::set<std::string> labels;
  std::set<std::string> fine;
  std::set<std::string> coarse;
  std::map<std::string, std::size_t> per_language;
  std::size_t nonprojective = 0;
  for (const auto& s : train.sentences) {
    ++profile.sentences;
    profile.tokens += s.size();
    if (!is_projective(s)) ++nonprojective;
    ++per_language[s.lang];
    for (const auto& t : s.tokens) {
      labels.insert(t.deprel);
      fine.insert(t.postag);
      coarse.insert(t.cpostag);
    }
  }
  profile.nonprojective_rate = static_cast<double>(nonprojective) / static_cast<double>(profile.sentences);
  profile.labels = labels.size();
  profile.fine_tags = fine.size();
  profile.coarse_tags = coarse.size();
  for (const auto& [lang, count] : per_language) {
    profile.languages.emplace_back(lang, static_cast<double>(count) / static_cast<double>(profile.sentences));
  }
  return profile;
}

AlgorithmSelection phase2_select_algorithm(const Treebank& train, const Treebank& dev, const TrainParams& params) {
  const System systems[2] = {System::ArcEager, System::ArcStandard};
  ParserModel models[2];
  std::exception_ptr errors[2];
#pragma omp parallel for schedule(static, 1)
  for (int i = 0; i < 2; ++i) {
    try {
      models[i] = train_with(train, dev, params, systems[i], default_templates(systems[i]));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  AlgorithmSelection selection;
  for (int i = 0; i < 2; ++i) selection.trials.push_back({systems[i], models[i].best_dev_las()});
  const int pick = selection.trials[1].dev_las > selection.trials[0].dev_las ? 1 : 0;
  selection.chosen = systems[pick];
  selection.model = std::move(models[pick]);
  return selection;
}

FeatureSearch phase3_feature_search(const Treebank& train, const Treebank& dev, System system,
                                    const std::vector<FeatureTemplate>& pool, const TrainParams& params) {
  const std::set<FeatureTemplate> pool_set(pool.begin(), pool.end());
  std::vector<FeatureTemplate> current = default_templates(system);
  for (const auto& t : current) {
    if (pool_set.count(t) == 0) throw UsageError("feature pool lacks default template " + t.name());
  }

  FeatureSearch search;
  search.model = train_with(train, dev, params, system, current);
  search.baseline_las = search.model.best_dev_las();
  double best = search.baseline_las;
  int step = 0;

  auto try_move = [&](std::vector<FeatureTemplate> trial, std::string move) {
    ParserModel model = train_with(train, dev, params, system, trial);
    const double las = model.best_dev_las();
    const bool accepted = improves(las, best);
    search.steps.push_back({++step, std::move(move), las, accepted});
    if (accepted) {
      best = las;
      current = std::move(trial);
      search.model = std::move(model);
    }
  };

  const std::set<FeatureTemplate> defaults(current.begin(), current.end());
  for (const auto& candidate : pool_set) {
    if (defaults.count(candidate) != 0) continue;
    auto trial = current;
    trial.push_back(candidate);
    try_move(std::move(trial), "+" + candidate.name());
  }

  // Only templates added above are candidates for removal.
  std::vector<FeatureTemplate> removal_order;
  for (const auto& t : current) {
    if (defaults.count(t) == 0) removal_order.push_back(t);
  }
  std::sort(removal_order.begin(), removal_order.end());
  for (const auto& victim : removal_order) {
    auto trial = current;
    trial.erase(std::find(trial.begin(), trial.end(), victim));
    try_move(std::move(trial), "-" + victim.name());
  }

  search.templates = current;
  search.final_las = best;
  return search;
}

std::string OptimizationReport::to_text() const {
  std::ostringstream out;
  out << "== phase 1: data analysis\n" << profile.to_text();
  out << "== phase 2: algorithm selection\n";
  for (const auto& trial : phase2) out << to_string(trial.system) << ": dev LAS " << fixed2(trial.dev_las) << '\n';
  out << "chosen: " << to_string(chosen) << '\n';
  out << "== phase 3: feature search (baseline dev LAS " << fixed2(baseline_las) << ")\n";
  for (const auto& s : steps) {
    out << s.step << ' ' << s.move << " -> " << fixed2(s.dev_las) << (s.accepted ? " accepted" : " rejected") << '\n';
  }
  out << "final dev LAS: " << fixed2(final_las) << '\n';
  out << "final templates:\n";
  for (const auto& t : final_templates) out << "  " << t.name() << '\n';
  return out.str();
}

std::string OptimizationReport::to_tsv() const {
  std::ostringstream out;
  out << "step\tmove\tdev_las\taccepted\n";
  int step = 0;
  for (const auto& trial : phase2) {
    out << step << "\tsystem=" << to_string(trial.system) << '\t' << fixed4(trial.dev_las) << '\t'
        << (trial.system == chosen ? "yes" : "no") << '\n';
  }
  for (const auto& s : steps) {
    out << s.step << '\t' << s.move << '\t' << fixed4(s.dev_las) << '\t' << (s.accepted ? "yes" : "no") << '\n';
  }
  return out.str();
}

Optimization optimize(const Treebank& train, const Treebank& dev, const TrainParams& params,
                      const std::vector<FeatureTemplate>& pool) {
  Optimization result;
  result.report.profile = phase1_analyze(train);
  AlgorithmSelection selection = phase2_select_algorithm(train, dev, params);
  result.report.phase2 = selection.trials;
  result.report.chosen = selection.chosen;
  FeatureSearch search = phase3_feature_search(train, dev, selection.chosen,
                                               pool.empty() ? candidate_pool(selection.chosen) : pool, params);
  result.report.baseline_las = search.baseline_las;
  result.report.steps = std::move(search.steps);
  result.report.final_templates = search.templates;
  result.report.final_las = search.final_las;
  result.model = std::move(search.model);
  return result;
}

}  // namespace polyparse
