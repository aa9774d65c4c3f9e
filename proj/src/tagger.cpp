#include "polyparse/tagger.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <exception>
#include <fstream>
#include <set>

#include "polyparse/error.hpp"
#include "polyparse/rng.hpp"

namespace polyparse {

namespace {

const std::string kStart = "<S>";
const std::string kEnd = "</S>";

// Byte offsets of UTF-8 code point starts, plus the end offset.
std::vector<std::size_t> codepoint_bounds(const std::string& s) {
  std::vector<std::size_t> bounds;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) bounds.push_back(i);
  }
  bounds.push_back(s.size());
  return bounds;
}

std::string lowercase(const std::string& s) {
  std::string out = s;
  for (char& ch : out) {
    if (static_cast<unsigned char>(ch) < 0x80) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  return out;
}

std::string fixed4(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.4f", value);
  return buffer;
}

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

std::vector<std::string> forms_of(const Sentence& s) {
  std::vector<std::string> forms;
  forms.reserve(s.size());
  for (const auto& t : s.tokens) forms.push_back(t.form);
  return forms;
}

std::size_t argmax(const std::vector<std::int64_t>& scores) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < scores.size(); ++k) {
    if (scores[k] > scores[best]) best = k;
  }
  return best;
}

// Interns during training, looks up otherwise.
class Featurizer {
 public:
  explicit Featurizer(FeatureInterner& interner) : interner_(&interner), const_interner_(&interner) {}
  explicit Featurizer(const FeatureInterner& interner) : const_interner_(&interner) {}

  FeatureVector operator()(std::span<const std::string> forms, std::size_t i,
                           std::span<const std::string> history) const {
    FeatureVector fv;
    for (const auto& f : tagger_features(forms, i, history)) {
      if (interner_ != nullptr) {
        fv.push_back(interner_->intern(f));
      } else if (auto id = const_interner_->find(f)) {
        fv.push_back(*id);
      }
    }
    std::sort(fv.begin(), fv.end());
    fv.erase(std::unique(fv.begin(), fv.end()), fv.end());
    return fv;
  }

 private:
  FeatureInterner* interner_ = nullptr;
  const FeatureInterner* const_interner_;
};

std::vector<std::string> decode(const LinearModel& weights, const Featurizer& featurize,
                                std::span<const std::string> forms) {
  std::vector<std::string> tags;
  tags.reserve(forms.size());
  std::vector<std::int64_t> scores;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    weights.raw_scores(featurize(forms, i, tags), scores);
    tags.push_back(weights.classes()[argmax(scores)]);
  }
  return tags;
}

}  // namespace

std::string to_string(TagColumn column) { return column == TagColumn::CPosTag ? "cpostag" : "postag"; }

TagColumn parse_tag_column(const std::string& text) {
  if (text == "cpostag") return TagColumn::CPosTag;
  if (text == "postag") return TagColumn::PosTag;
  throw UsageError("unknown tag column '" + text + "' (expected cpostag or postag)");
}

const std::string& tag_of(const Token& token, TagColumn column) {
  return column == TagColumn::CPosTag ? token.cpostag : token.postag;
}

std::vector<std::string> tagger_features(std::span<const std::string> forms, std::size_t i,
                                         std::span<const std::string> history) {
  const std::string& w = forms[i];
  std::vector<std::string> out;
  out.reserve(16);
  out.emplace_back("bias");
  out.push_back("w=" + w);
  out.push_back("lw=" + lowercase(w));
  const auto bounds = codepoint_bounds(w);
  const std::size_t chars = bounds.size() - 1;
  for (std::size_t k = 1; k <= 3 && k <= chars; ++k) {
    out.push_back("p" + std::to_string(k) + "=" + w.substr(0, bounds[k]));
    out.push_back("s" + std::to_string(k) + "=" + w.substr(bounds[chars - k]));
  }
  const std::string& t1 = i >= 1 ? history[i - 1] : kStart;
  const std::string& t2 = i >= 2 ? history[i - 2] : kStart;
  out.push_back("t1=" + t1);
  out.push_back("t2=" + t2);
  out.push_back("w-1=" + (i >= 1 ? forms[i - 1] : kStart));
  out.push_back("w+1=" + (i + 1 < forms.size() ? forms[i + 1] : kEnd));
  if (std::any_of(w.begin(), w.end(), [](char c) { return c >= '0' && c <= '9'; })) out.emplace_back("digit");
  if (w.find('-') != std::string::npos) out.emplace_back("hyphen");
  return out;
}

TaggerModel train_tagger(const Treebank& train, const Treebank& dev, TagColumn column, const TaggerParams& params) {
  if (train.empty() || train.token_count() == 0) throw DataError("training treebank is empty");
  if (dev.empty() || dev.token_count() == 0) throw DataError("development treebank is empty");
  if (params.epochs < 1) throw UsageError("epochs must be at least 1");

  TaggerModel model;
  model.column = column;
  std::set<std::string> tagset;
  std::set<std::string> languages;
  std::map<std::string, std::map<std::string, std::size_t>> coarse_counts;
  for (const auto& s : train.sentences) {
    if (!s.lang.empty()) languages.insert(s.lang);
    for (const auto& t : s.tokens) {
      tagset.insert(tag_of(t, column));
      ++coarse_counts[t.postag][t.cpostag];
    }
  }
  model.languages.assign(languages.begin(), languages.end());
  if (column == TagColumn::PosTag) {
    for (const auto& [fine, counts] : coarse_counts) {
      const auto best = std::max_element(counts.begin(), counts.end(),
                                         [](const auto& a, const auto& b) { return a.second < b.second; });
      model.coarse[fine] = best->first;
    }
  }

  LinearModel weights(std::vector<std::string>(tagset.begin(), tagset.end()));
  const Featurizer learn(model.features);

  std::vector<std::vector<std::string>> forms(train.size());
  std::vector<std::vector<std::size_t>> gold(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    forms[i] = forms_of(train.sentences[i]);
    for (const auto& t : train.sentences[i].tokens) gold[i].push_back(*weights.class_index(tag_of(t, column)));
  }

  std::vector<std::size_t> order(train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(params.seed);
  std::vector<std::int64_t> scores;

  model.meta.seed = params.seed;
  model.meta.epochs = params.epochs;
  model.meta.shuffle = params.shuffle;
  LinearModel best;
  double best_accuracy = -1.0;
  for (int epoch = 1; epoch <= params.epochs; ++epoch) {
    if (params.shuffle) shuffle(order, rng);
    for (std::size_t idx : order) {
      std::vector<std::string> history;
      for (std::size_t i = 0; i < forms[idx].size(); ++i) {
        const FeatureVector fv = learn(forms[idx], i, history);
        weights.raw_scores(fv, scores);
        const std::size_t predicted = argmax(scores);
        if (predicted != gold[idx][i]) weights.update(fv, gold[idx][i], predicted);
        weights.advance();
        history.push_back(weights.classes()[predicted]);
      }
    }
    LinearModel snapshot = weights.averaged();
    const Featurizer lookup_only(static_cast<const FeatureInterner&>(model.features));
    std::vector<std::vector<std::string>> predicted;
    predicted.reserve(dev.size());
    for (const auto& s : dev.sentences) predicted.push_back(decode(snapshot, lookup_only, forms_of(s)));
    const double accuracy = tagging_accuracy(dev, predicted, column);
    model.meta.dev_accuracy.push_back(accuracy);
    if (accuracy > best_accuracy) {
      best_accuracy = accuracy;
      best = std::move(snapshot);
      model.meta.chosen_epoch = epoch;
    }
  }
  model.weights = std::move(best);
  model.weights.compact(model.features);
  return model;
}

std::vector<std::string> tag(const TaggerModel& model, std::span<const std::string> forms) {
  if (forms.empty()) throw DataError("cannot tag an empty token sequence");
  return decode(model.weights, Featurizer(model.features), forms);
}

Sentence tag_sentence(const TaggerModel& model, const Sentence& sentence) {
  Sentence out = sentence;
  const auto tags = tag(model, forms_of(sentence));
  for (std::size_t i = 0; i < tags.size(); ++i) {
    Token& t = out.tokens[i];
    if (model.column == TagColumn::CPosTag) {
      t.cpostag = tags[i];
      t.postag = tags[i];
    } else {
      t.postag = tags[i];
      const auto it = model.coarse.find(tags[i]);
      t.cpostag = it == model.coarse.end() ? tags[i] : it->second;
    }
  }
  out.tag_prefix.clear();
  return out;
}

Treebank tag_treebank(const TaggerModel& model, const Treebank& treebank) {
  Treebank out;
  out.source = treebank.source;
  out.sentences.resize(treebank.size());
  std::vector<std::exception_ptr> errors(treebank.size());
  const auto n = static_cast<long long>(treebank.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out.sentences[k] = tag_sentence(model, treebank.sentences[k]);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const DataError& e) {
      throw DataError("sentence " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

double tagging_accuracy(const Treebank& gold, const std::vector<std::vector<std::string>>& predicted,
                        TagColumn column) {
  if (gold.size() != predicted.size()) {
    throw DataError("sentence count mismatch: " + std::to_string(gold.size()) + " gold vs " +
                    std::to_string(predicted.size()) + " predicted");
  }
  std::size_t total = 0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto& tokens = gold.sentences[i].tokens;
    if (tokens.size() != predicted[i].size()) {
      throw DataError("sentence " + std::to_string(i + 1) + ": token count mismatch");
    }
    for (std::size_t j = 0; j < tokens.size(); ++j) {
      ++total;
      if (tag_of(tokens[j], column) == predicted[i][j]) ++correct;
    }
  }
  if (total == 0) throw DataError("no tokens to score");
  return static_cast<double>(correct) / static_cast<double>(total);
}

double tagging_accuracy(const Treebank& gold, const Treebank& predicted, TagColumn column) {
  std::vector<std::vector<std::string>> tags;
  tags.reserve(predicted.size());
  for (const auto& s : predicted.sentences) {
    auto& row = tags.emplace_back();
    for (const auto& t : s.tokens) row.push_back(tag_of(t, column));
  }
  return tagging_accuracy(gold, tags, column);
}

void save_tagger(std::ostream& out, const TaggerModel& model) {
  ModelHeader header;
  header.add("kind", "tagger");
  header.add("column", to_string(model.column));
  header.add("languages", join(model.languages, ','));
  for (const auto& [fine, coarse] : model.coarse) header.add("coarse", fine + " " + coarse);
  header.add("seed", std::to_string(model.meta.seed));
  header.add("epochs", std::to_string(model.meta.epochs));
  header.add("shuffle", model.meta.shuffle ? "1" : "0");
  header.add("chosen-epoch", std::to_string(model.meta.chosen_epoch));
  std::vector<std::string> accuracy;
  for (double v : model.meta.dev_accuracy) accuracy.push_back(fixed4(v));
  header.add("dev-accuracy", join(accuracy, ','));
  save_model(out, model.weights, model.features, header);
}

void save_tagger(const std::filesystem::path& path, const TaggerModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  save_tagger(out, model);
  if (!out) throw DataError("write failed for " + path.string());
}

TaggerModel load_tagger(std::istream& in) {
  LoadedModel loaded = load_model(in);
  const ModelHeader& h = loaded.header;
  if (h.get("kind") != "tagger") throw DataError("not a tagger model (kind " + h.get("kind") + ")");
  TaggerModel model;
  try {
    model.column = parse_tag_column(h.get("column"));
  } catch (const UsageError& e) {
    throw DataError(e.what());
  }
  model.languages = split(h.find("languages").value_or(""), ',');
  for (const auto& entry : h.all("coarse")) {
    const auto space = entry.find(' ');
    if (space == std::string::npos) throw DataError("malformed coarse tag entry '" + entry + "'");
    model.coarse[entry.substr(0, space)] = entry.substr(space + 1);
  }
  try {
    model.meta.seed = std::stoull(h.get("seed"));
    model.meta.epochs = std::stoi(h.get("epochs"));
    model.meta.chosen_epoch = std::stoi(h.get("chosen-epoch"));
    for (const auto& v : split(h.find("dev-accuracy").value_or(""), ',')) model.meta.dev_accuracy.push_back(std::stod(v));
  } catch (const std::logic_error&) {
    throw DataError("malformed tagger model metadata");
  }
  model.meta.shuffle = h.find("shuffle").value_or("1") == "1";
  model.weights = std::move(loaded.model);
  model.features = std::move(loaded.features);
  return model;
}

TaggerModel load_tagger(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return load_tagger(in);
}

}  // namespace polyparse
