#include "polyparse/parser.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "polyparse/error.hpp"
#include "polyparse/evaluation.hpp"
#include "polyparse/rng.hpp"

namespace polyparse {

namespace {

std::uint8_t move_bit(Move move) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(move)); }

std::uint8_t legal_mask(const Configuration& c, System system) {
  std::uint8_t mask = 0;
  for (Move m : {Move::Shift, Move::Reduce, Move::LeftArc, Move::RightArc}) {
    if (c.is_legal(m, system)) mask |= move_bit(m);
  }
  return mask;
}

std::size_t best_legal(const std::vector<std::int64_t>& scores, const std::vector<Transition>& classes,
                       std::uint8_t mask) {
  std::size_t best = classes.size();
  for (std::size_t k = 0; k < classes.size(); ++k) {
    if ((mask & move_bit(classes[k].move)) == 0) continue;
    if (best == classes.size() || scores[k] > scores[best]) best = k;
  }
  return best;
}

// Greedy decoder over one weight table; shared by training-time dev
// evaluation and finished models.
class Decoder {
 public:
  Decoder(const LinearModel& weights, const FeatureInterner& features, const std::vector<FeatureTemplate>& templates,
          System system, const std::vector<Transition>& classes)
      : weights_(weights), features_(features), templates_(templates), system_(system), classes_(classes) {}

  Configuration run(const Sentence& prepared) const {
    Configuration c = initial_config(prepared);
    std::vector<std::int64_t> scores;
    while (!c.is_terminal(system_)) {
      const FeatureVector fv = lookup(c, prepared, templates_, features_);
      weights_.raw_scores(fv, scores);
      const std::size_t best = best_legal(scores, classes_, legal_mask(c, system_));
      if (best == classes_.size()) throw InvariantError("no legal transition in a non-terminal configuration");
      c.apply(classes_[best], system_);
    }
    return c;
  }

 private:
  const LinearModel& weights_;
  const FeatureInterner& features_;
  const std::vector<FeatureTemplate>& templates_;
  System system_;
  const std::vector<Transition>& classes_;
};

// Writes a decoded tree into sentence, forcing a single root child labeled
// root_label.
void attach(Sentence& sentence, Tree tree, const std::string& root_label) {
  int first_root = 0;
  for (std::size_t i = 0; i < tree.heads.size(); ++i) {
    if (tree.heads[i] != 0) continue;
    if (first_root == 0) {
      first_root = static_cast<int>(i) + 1;
      tree.labels[i] = root_label;
    } else {
      tree.heads[i] = first_root;
    }
  }
  for (std::size_t i = 0; i < tree.heads.size(); ++i) {
    sentence.tokens[i].head = tree.heads[i];
    sentence.tokens[i].deprel = tree.labels[i];
  }
}

Sentence prepare(const ParserModel& model, const Sentence& sentence) {
  Sentence prepared = sentence;
  if (model.tags.prefix_language && prepared.lang.empty() && prepared.tag_prefix.empty() &&
      model.languages.size() == 1) {
    prepared.lang = model.languages.front();
  }
  return apply_tag_config(std::move(prepared), model.tags);
}

std::string root_label_of(const Treebank& train) {
  std::map<std::string, std::size_t> counts;
  for (const auto& s : train.sentences) {
    for (const auto& t : s.tokens) {
      if (t.head == 0) ++counts[t.deprel];
    }
  }
  std::string best = "root";
  std::size_t best_count = 0;
  for (const auto& [label, count] : counts) {
    if (count > best_count) {
      best = label;
      best_count = count;
    }
  }
  return best;
}

struct Instance {
  FeatureVector features;
  std::uint32_t gold;
  std::uint8_t legal;
};

std::string join(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += sep;
    out += item;
  }
  return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> items;
  if (text.empty()) return items;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    items.push_back(text.substr(start, pos == std::string::npos ? pos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return items;
}

std::string fixed4(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.4f", value);
  return buffer;
}

}  // namespace

double ParserModel::best_dev_las() const {
  if (meta.chosen_epoch < 1 || static_cast<std::size_t>(meta.chosen_epoch) > meta.dev_las.size()) return 0.0;
  return meta.dev_las[static_cast<std::size_t>(meta.chosen_epoch - 1)];
}

std::vector<Transition> transition_classes(System system, const std::vector<std::string>& labels) {
  std::vector<Transition> classes{Transition::shift()};
  if (system == System::ArcEager) classes.push_back(Transition::reduce());
  for (const auto& l : labels) classes.push_back(Transition::left_arc(l));
  for (const auto& l : labels) classes.push_back(Transition::right_arc(l));
  return classes;
}

ParserModel train_parser(const Treebank& train_in, const Treebank& dev_in, const TrainParams& params) {
  if (train_in.empty()) throw DataError("training treebank is empty");
  if (dev_in.empty()) throw DataError("development treebank is empty");
  if (params.epochs < 1) throw UsageError("epochs must be at least 1");

  const Treebank train = apply_tag_config(train_in, params.tags);
  Treebank dev;
  try {
    dev = apply_tag_config(dev_in, params.tags);
  } catch (const DataError& e) {
    throw DataError(std::string("development treebank does not fit the tag configuration: ") + e.what());
  }

  ParserModel model;
  model.system = params.system;
  model.tags = params.tags;
  model.templates = params.templates.empty() ? default_templates(params.system) : params.templates;
  model.root_label = root_label_of(train);
  std::set<std::string> labels;
  std::set<std::string> languages;
  for (const auto& s : train.sentences) {
    for (const auto& t : s.tokens) labels.insert(t.deprel);
    if (!s.lang.empty()) languages.insert(s.lang);
  }
  model.labels.assign(labels.begin(), labels.end());
  model.languages.assign(languages.begin(), languages.end());

  const auto classes = transition_classes(model.system, model.labels);
  std::vector<std::string> signatures;
  for (const auto& t : classes) signatures.push_back(t.signature());
  LinearModel weights(signatures);
  FeatureInterner& interner = model.features;

  // The static oracle fixes every training configuration, so the instances are
  // extracted once and replayed each epoch.
  std::vector<std::vector<Instance>> instances(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    const Sentence gold = projectivize(train.sentences[i]);
    const StaticOracle oracle(gold, model.system);
    Configuration c = initial_config(gold);
    while (!c.is_terminal(model.system)) {
      const Transition t = oracle.next(c);
      const auto cls = weights.class_index(t.signature());
      if (!cls) throw InvariantError("oracle produced an unknown transition");
      instances[i].push_back({extract(c, gold, model.templates, interner), static_cast<std::uint32_t>(*cls),
                              legal_mask(c, model.system)});
      c.apply(t, model.system);
    }
  }

  std::vector<std::size_t> order(train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(params.seed);
  std::vector<std::int64_t> scores;

  model.meta.seed = params.seed;
  model.meta.epochs = params.epochs;
  model.meta.shuffle = params.shuffle;
  LinearModel best;
  double best_las = -1.0;
  for (int epoch = 1; epoch <= params.epochs; ++epoch) {
    if (params.shuffle) shuffle(order, rng);
    for (std::size_t idx : order) {
      for (const Instance& inst : instances[idx]) {
        weights.raw_scores(inst.features, scores);
        const std::size_t predicted = best_legal(scores, classes, inst.legal);
        if (predicted != inst.gold) weights.update(inst.features, inst.gold, predicted);
        weights.advance();
      }
    }
    LinearModel snapshot = weights.averaged();
    const Decoder decoder(snapshot, interner, model.templates, model.system, classes);
    Treebank predicted = dev;
    for (auto& s : predicted.sentences) {
      if (s.tokens.empty()) continue;
      attach(s, extract_tree(decoder.run(s), model.root_label), model.root_label);
    }
    const double las = score(dev, predicted).las();
    model.meta.dev_las.push_back(las);
    if (las > best_las) {
      best_las = las;
      best = std::move(snapshot);
      model.meta.chosen_epoch = epoch;
    }
  }
  model.weights = std::move(best);
  model.weights.compact(model.features);
  return model;
}

Sentence parse(const ParserModel& model, const Sentence& sentence) {
  if (sentence.tokens.empty()) throw DataError("cannot parse an empty sentence");
  const Sentence prepared = prepare(model, sentence);
  const auto classes = transition_classes(model.system, model.labels);
  const Decoder decoder(model.weights, model.features, model.templates, model.system, classes);
  Sentence result = sentence;
  attach(result, extract_tree(decoder.run(prepared), model.root_label), model.root_label);
  return result;
}

namespace {

[[noreturn]] void rethrow_for_sentence(std::size_t index, const std::exception_ptr& error) {
  try {
    std::rethrow_exception(error);
  } catch (const DataError& e) {
    throw DataError("sentence " + std::to_string(index + 1) + ": " + e.what());
  }
}

}  // namespace

Treebank parse_treebank_serial(const ParserModel& model, const Treebank& treebank) {
  Treebank out;
  out.source = treebank.source;
  out.sentences.reserve(treebank.size());
  for (std::size_t i = 0; i < treebank.size(); ++i) {
    try {
      out.sentences.push_back(parse(model, treebank.sentences[i]));
    } catch (...) {
      rethrow_for_sentence(i, std::current_exception());
    }
  }
  return out;
}

Treebank parse_treebank(const ParserModel& model, const Treebank& treebank) {
  Treebank out;
  out.source = treebank.source;
  out.sentences.resize(treebank.size());
  std::vector<std::exception_ptr> errors(treebank.size());
  const auto n = static_cast<long long>(treebank.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (long long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out.sentences[k] = parse(model, treebank.sentences[k]);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (errors[i]) rethrow_for_sentence(i, errors[i]);
  }
  return out;
}

void save_parser(std::ostream& out, const ParserModel& model) {
  ModelHeader header;
  header.add("kind", "parser");
  header.add("system", to_string(model.system));
  header.add("tags", to_string(model.tags.mode));
  header.add("prefix-lang", model.tags.prefix_language ? "1" : "0");
  header.add("languages", join(model.languages, ','));
  header.add("root-label", model.root_label);
  for (const auto& l : model.labels) header.add("label", l);
  header.add("seed", std::to_string(model.meta.seed));
  header.add("epochs", std::to_string(model.meta.epochs));
  header.add("shuffle", model.meta.shuffle ? "1" : "0");
  header.add("chosen-epoch", std::to_string(model.meta.chosen_epoch));
  std::vector<std::string> las;
  for (double v : model.meta.dev_las) las.push_back(fixed4(v));
  header.add("dev-las", join(las, ','));
  for (const auto& t : model.templates) header.add("template", t.name());
  save_model(out, model.weights, model.features, header);
}

void save_parser(const std::filesystem::path& path, const ParserModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  save_parser(out, model);
  if (!out) throw DataError("write failed for " + path.string());
}

ParserModel load_parser(std::istream& in) {
  LoadedModel loaded = load_model(in);
  const ModelHeader& h = loaded.header;
  if (h.get("kind") != "parser") throw DataError("not a parser model (kind " + h.get("kind") + ")");
  ParserModel model;
  model.system = parse_system(h.get("system"));
  model.tags.mode = parse_tag_mode(h.get("tags"));
  model.tags.prefix_language = h.get("prefix-lang") == "1";
  model.languages = split(h.find("languages").value_or(""), ',');
  model.root_label = h.get("root-label");
  model.labels = h.all("label");
  for (const auto& name : h.all("template")) model.templates.push_back(FeatureTemplate::parse(name));
  if (model.templates.empty()) throw DataError("parser model has no feature templates");
  try {
    model.meta.seed = std::stoull(h.get("seed"));
    model.meta.epochs = std::stoi(h.get("epochs"));
    model.meta.chosen_epoch = std::stoi(h.get("chosen-epoch"));
    for (const auto& v : split(h.find("dev-las").value_or(""), ',')) model.meta.dev_las.push_back(std::stod(v));
  } catch (const std::logic_error&) {
    throw DataError("malformed parser model metadata");
  }
  model.meta.shuffle = h.find("shuffle").value_or("1") == "1";
  std::vector<std::string> expected;
  for (const auto& t : transition_classes(model.system, model.labels)) expected.push_back(t.signature());
  if (expected != loaded.model.classes()) throw DataError("parser model classes do not match its label set");
  model.weights = std::move(loaded.model);
  model.features = std::move(loaded.features);
  return model;
}

ParserModel load_parser(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return load_parser(in);
}

}  // namespace polyparse
