#include "polyparse/learner.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <tuple>

#include "polyparse/error.hpp"

namespace polyparse {

namespace {

// Round-half-away-from-zero of num / den, den > 0.
std::int64_t divide_rounded(__int128 num, __int128 den) {
  const __int128 half = den / 2;
  const __int128 q = num >= 0 ? (num + half) / den : -((-num + half) / den);
  return static_cast<std::int64_t>(q);
}

std::int64_t to_fixed(double value) {
  return static_cast<std::int64_t>(std::llround(value * static_cast<double>(LinearModel::kFinalScale)));
}

std::int64_t parse_fixed(const std::string& text) {
  // [-]digits.digits with at most six decimals.
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && text[i] == '-') {
    negative = true;
    ++i;
  }
  std::int64_t whole = 0;
  std::int64_t frac = 0;
  int frac_digits = 0;
  bool any = false;
  for (; i < text.size() && text[i] != '.'; ++i) {
    if (text[i] < '0' || text[i] > '9') throw DataError("bad weight '" + text + "'");
    whole = whole * 10 + (text[i] - '0');
    any = true;
  }
  if (i < text.size()) {
    for (++i; i < text.size(); ++i) {
      if (text[i] < '0' || text[i] > '9' || frac_digits == 6) throw DataError("bad weight '" + text + "'");
      frac = frac * 10 + (text[i] - '0');
      ++frac_digits;
    }
  }
  if (!any) throw DataError("bad weight '" + text + "'");
  for (; frac_digits < 6; ++frac_digits) frac *= 10;
  const std::int64_t value = whole * LinearModel::kFinalScale + frac;
  return negative ? -value : value;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string::npos ? tab : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

}  // namespace

std::string format_fixed(std::int64_t micro) {
  const bool negative = micro < 0;
  const std::uint64_t magnitude = negative ? static_cast<std::uint64_t>(-(micro + 1)) + 1 : static_cast<std::uint64_t>(micro);
  std::string frac = std::to_string(magnitude % LinearModel::kFinalScale);
  frac.insert(0, 6 - frac.size(), '0');
  return (negative ? "-" : "") + std::to_string(magnitude / LinearModel::kFinalScale) + "." + frac;
}

LinearModel::LinearModel(std::vector<std::string> classes) : classes_(std::move(classes)) {
  if (classes_.empty()) throw UsageError("a linear model needs at least one class");
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    if (!class_ids_.emplace(classes_[i], i).second) throw UsageError("duplicate class '" + classes_[i] + "'");
  }
}

LinearModel LinearModel::from_weights(std::vector<std::string> classes,
                                      std::span<const std::tuple<FeatureId, std::size_t, double>> entries) {
  std::vector<std::tuple<FeatureId, std::size_t, std::int64_t>> fixed;
  fixed.reserve(entries.size());
  for (const auto& [feature, cls, value] : entries) fixed.emplace_back(feature, cls, to_fixed(value));
  return from_fixed(std::move(classes), fixed);
}

LinearModel LinearModel::from_fixed(std::vector<std::string> classes,
                                    std::span<const std::tuple<FeatureId, std::size_t, std::int64_t>> entries) {
  LinearModel model(std::move(classes));
  model.finalized_ = true;
  for (const auto& [feature, cls, value] : entries) {
    if (cls >= model.num_classes()) throw UsageError("class index out of range");
    cell(model.weights_[feature], static_cast<std::uint32_t>(cls)).weight = value;
  }
  return model;
}

LinearModel::Cell& LinearModel::cell(Row& row, std::uint32_t cls) {
  auto it = std::lower_bound(row.begin(), row.end(), cls, [](const Cell& c, std::uint32_t k) { return c.cls < k; });
  if (it == row.end() || it->cls != cls) it = row.insert(it, Cell{cls, 0, 0});
  return *it;
}

std::optional<std::size_t> LinearModel::class_index(const std::string& signature) const {
  const auto it = class_ids_.find(signature);
  if (it == class_ids_.end()) return std::nullopt;
  return it->second;
}

void LinearModel::raw_scores(const FeatureVector& fv, std::vector<std::int64_t>& out) const {
  out.assign(classes_.size(), 0);
  for (FeatureId f : fv) {
    const auto it = weights_.find(f);
    if (it == weights_.end()) continue;
    for (const Cell& c : it->second) out[c.cls] += c.weight;
  }
}

std::vector<double> LinearModel::score(const FeatureVector& fv) const {
  std::vector<std::int64_t> raw;
  raw_scores(fv, raw);
  std::vector<double> scores(raw.size());
  const auto s = static_cast<double>(scale());
  for (std::size_t c = 0; c < raw.size(); ++c) scores[c] = static_cast<double>(raw[c]) / s;
  return scores;
}

void LinearModel::update(const FeatureVector& fv, std::size_t gold, std::size_t predicted) {
  if (finalized_) throw UsageError("update on a finalized model");
  if (gold >= num_classes() || predicted >= num_classes()) throw UsageError("class index out of range");
  if (gold == predicted) return;
  const auto stamp = static_cast<std::int64_t>(instances_);
  for (FeatureId f : fv) {
    auto& row = weights_[f];
    Cell& g = cell(row, static_cast<std::uint32_t>(gold));
    ++g.weight;
    g.timed += stamp;
    Cell& p = cell(row, static_cast<std::uint32_t>(predicted));
    --p.weight;
    p.timed -= stamp;
  }
}

void LinearModel::finalize() {
  if (finalized_) return;
  // Mean over the weight vectors after each of the T instances: an update of
  // delta during instance t (0-based) is present in T - t of them.
  const auto total = static_cast<__int128>(instances_);
  for (auto& [feature, row] : weights_) {
    for (Cell& c : row) {
      if (total == 0) {
        c.weight *= kFinalScale;
      } else {
        const __int128 num = (static_cast<__int128>(c.weight) * total - c.timed) * kFinalScale;
        c.weight = divide_rounded(num, total);
      }
      c.timed = 0;
    }
    std::erase_if(row, [](const Cell& c) { return c.weight == 0; });
  }
  std::erase_if(weights_, [](const auto& entry) { return entry.second.empty(); });
  finalized_ = true;
}

LinearModel LinearModel::averaged() const {
  LinearModel copy = *this;
  copy.finalize();
  return copy;
}

double LinearModel::weight(FeatureId feature, std::size_t cls) const {
  const auto it = weights_.find(feature);
  if (it == weights_.end()) return 0.0;
  for (const Cell& c : it->second) {
    if (c.cls == cls) return static_cast<double>(c.weight) / static_cast<double>(scale());
  }
  return 0.0;
}

std::size_t LinearModel::nonzero_count() const {
  std::size_t count = 0;
  for (const auto& [feature, row] : weights_) {
    count += static_cast<std::size_t>(std::count_if(row.begin(), row.end(), [](const Cell& c) { return c.weight != 0; }));
  }
  return count;
}

void LinearModel::compact(FeatureInterner& interner) {
  if (!finalized_) throw UsageError("compact requires a finalized model");
  std::vector<std::pair<std::string, FeatureId>> live;
  for (const auto& [feature, row] : weights_) {
    if (std::any_of(row.begin(), row.end(), [](const Cell& c) { return c.weight != 0; })) {
      live.emplace_back(interner.string_of(feature), feature);
    }
  }
  std::sort(live.begin(), live.end());
  FeatureInterner fresh;
  std::unordered_map<FeatureId, Row> rows;
  for (const auto& [text, old_id] : live) rows.emplace(fresh.intern(text), std::move(weights_.at(old_id)));
  weights_ = std::move(rows);
  interner = std::move(fresh);
}

const std::string& ModelHeader::get(const std::string& key) const {
  for (const auto& [k, v] : fields) {
    if (k == key) return v;
  }
  throw DataError("model header lacks '" + key + "'");
}

std::optional<std::string> ModelHeader::find(const std::string& key) const {
  for (const auto& [k, v] : fields) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::vector<std::string> ModelHeader::all(const std::string& key) const {
  std::vector<std::string> values;
  for (const auto& [k, v] : fields) {
    if (k == key) values.push_back(v);
  }
  return values;
}

void save_model(std::ostream& out, const LinearModel& model, const FeatureInterner& features,
                const ModelHeader& header) {
  if (!model.finalized()) throw UsageError("only finalized models can be saved");
  out << "polyparse-model\t" << kModelFormatVersion << '\n';
  for (const auto& [key, value] : header.fields) {
    if (key == "class" || key == "weights" || key == "end" || key.find('\t') != std::string::npos) {
      throw UsageError("reserved model header key '" + key + "'");
    }
    out << key << '\t' << value << '\n';
  }
  for (const auto& cls : model.classes()) out << "class\t" << cls << '\n';

  std::vector<std::tuple<std::string_view, std::string_view, std::int64_t>> entries;
  for (const auto& [feature, row] : model.rows()) {
    for (const auto& c : row) {
      if (c.weight != 0) entries.emplace_back(features.string_of(feature), model.classes()[c.cls], c.weight);
    }
  }
  std::sort(entries.begin(), entries.end());
  out << "weights\t" << entries.size() << '\n';
  for (const auto& [feature, cls, value] : entries) {
    out << feature << '\t' << cls << '\t' << format_fixed(value) << '\n';
  }
  out << "end\n";
}

LoadedModel load_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty model file");
  const auto magic = split_tabs(line);
  if (magic.size() != 2 || magic[0] != "polyparse-model") throw DataError("not a polyparse model file");
  if (magic[1] != std::to_string(kModelFormatVersion)) {
    throw DataError("model format version mismatch: file has " + magic[1] + ", expected " +
                    std::to_string(kModelFormatVersion));
  }
  LoadedModel loaded;
  std::vector<std::string> classes;
  std::size_t expected = 0;
  bool in_weights = false;
  while (std::getline(in, line)) {
    const auto fields = split_tabs(line);
    if (fields.size() < 2) throw DataError("truncated or malformed model header line '" + line + "'");
    if (fields[0] == "class") {
      classes.push_back(fields[1]);
    } else if (fields[0] == "weights") {
      try {
        expected = std::stoull(fields[1]);
      } catch (const std::exception&) {
        throw DataError("malformed weight count '" + fields[1] + "'");
      }
      in_weights = true;
      break;
    } else {
      loaded.header.add(fields[0], fields[1]);
    }
  }
  if (!in_weights) throw DataError("truncated model file (no weight table)");
  const LinearModel class_table(classes);
  std::vector<std::tuple<FeatureId, std::size_t, std::int64_t>> entries;
  for (std::size_t i = 0; i < expected; ++i) {
    if (!std::getline(in, line)) throw DataError("truncated model file (weight table)");
    const auto fields = split_tabs(line);
    if (fields.size() != 3) throw DataError("malformed weight line '" + line + "'");
    const auto cls = class_table.class_index(fields[1]);
    if (!cls) throw DataError("weight for unknown class '" + fields[1] + "'");
    entries.emplace_back(loaded.features.intern(fields[0]), *cls, parse_fixed(fields[2]));
  }
  if (!std::getline(in, line) || line != "end") throw DataError("truncated model file (missing end marker)");
  loaded.model = LinearModel::from_fixed(classes, entries);
  return loaded;
}

}  // namespace polyparse
