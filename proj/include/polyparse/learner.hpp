#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "polyparse/features.hpp"

namespace polyparse {

// Multiclass averaged perceptron over binary features.
//
// While training, weights are integer update counts. finalize() replaces them
// with the average of the weight vectors seen after each training instance,
// stored as fixed-point integers with six decimals. Scores are integer sums, so
// they do not depend on summation order and survive save/load exactly.
class LinearModel {
 public:
  static constexpr std::int64_t kFinalScale = 1000000;

  LinearModel() = default;
  explicit LinearModel(std::vector<std::string> classes);

  // Finalized model from explicit (feature, class, weight) entries.
  static LinearModel from_weights(std::vector<std::string> classes,
                                  std::span<const std::tuple<FeatureId, std::size_t, double>> entries);
  // Same, with weights already in fixed-point units of kFinalScale.
  static LinearModel from_fixed(std::vector<std::string> classes,
                                std::span<const std::tuple<FeatureId, std::size_t, std::int64_t>> entries);

  const std::vector<std::string>& classes() const { return classes_; }
  std::size_t num_classes() const { return classes_.size(); }
  std::optional<std::size_t> class_index(const std::string& signature) const;

  std::vector<double> score(const FeatureVector& fv) const;
  // Scores in internal units (see scale()); out is resized to num_classes().
  void raw_scores(const FeatureVector& fv, std::vector<std::int64_t>& out) const;
  std::int64_t scale() const { return finalized_ ? kFinalScale : 1; }

  void update(const FeatureVector& fv, std::size_t gold, std::size_t predicted);
  // Marks the end of one training instance.
  void advance() { ++instances_; }
  std::uint64_t instances() const { return instances_; }

  void finalize();
  LinearModel averaged() const;
  bool finalized() const { return finalized_; }

  double weight(FeatureId feature, std::size_t cls) const;
  std::size_t nonzero_count() const;

  // Drops all-zero rows and renumbers features so ids follow the
  // lexicographic order of their strings. Finalized models only.
  void compact(FeatureInterner& interner);

  struct Cell {
    std::uint32_t cls;
    std::int64_t weight;
    // Sum of timestamp * delta; unused once finalized.
    std::int64_t timed;
  };
  // Per feature, cells sorted by class.
  using Row = std::vector<Cell>;

  const std::unordered_map<FeatureId, Row>& rows() const { return weights_; }

 private:
  static Cell& cell(Row& row, std::uint32_t cls);

  std::vector<std::string> classes_;
  std::unordered_map<std::string, std::size_t> class_ids_;
  std::unordered_map<FeatureId, Row> weights_;
  std::uint64_t instances_ = 0;
  bool finalized_ = false;
};

// Ordered key/value lines written before the weight table.
struct ModelHeader {
  std::vector<std::pair<std::string, std::string>> fields;

  void add(std::string key, std::string value) { fields.emplace_back(std::move(key), std::move(value)); }
  // First value for key; throws DataError when absent.
  const std::string& get(const std::string& key) const;
  std::optional<std::string> find(const std::string& key) const;
  std::vector<std::string> all(const std::string& key) const;
};

inline constexpr int kModelFormatVersion = 1;

void save_model(std::ostream& out, const LinearModel& model, const FeatureInterner& features,
                const ModelHeader& header);

struct LoadedModel {
  ModelHeader header;
  LinearModel model;
  FeatureInterner features;
};

LoadedModel load_model(std::istream& in);

std::string format_fixed(std::int64_t micro);

}  // namespace polyparse
