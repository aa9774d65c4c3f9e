#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "polyparse/conll.hpp"
#include "polyparse/transition.hpp"

namespace polyparse {

enum class Address {
  S0, S1, S2,
  B0, B1, B2, B3,
  HeadOfS0,
  LeftmostDepS0, RightmostDepS0,
  LeftmostDepB0, RightmostDepB0,
};

enum class Attribute { Form, CPosTag, PosTag, DepRel };

struct FeatureAtom {
  Address address;
  Attribute attribute;

  bool operator==(const FeatureAtom&) const = default;
};

// Conjunction of atoms; one template yields exactly one feature per
// configuration. Canonical names look like "S0.postag+B0.form".
class FeatureTemplate {
 public:
  explicit FeatureTemplate(std::vector<FeatureAtom> atoms);

  static FeatureTemplate parse(std::string_view name);

  std::span<const FeatureAtom> atoms() const { return atoms_; }
  const std::string& name() const { return name_; }

  bool operator==(const FeatureTemplate& other) const { return name_ == other.name_; }
  bool operator<(const FeatureTemplate& other) const { return name_ < other.name_; }

 private:
  std::vector<FeatureAtom> atoms_;
  std::string name_;
};

using FeatureId = std::uint32_t;

// Sorted, duplicate-free feature ids.
using FeatureVector = std::vector<FeatureId>;

// Bidirectional string <-> id table. Const member functions never mutate and
// may be called concurrently; intern() needs exclusive access.
class FeatureInterner {
 public:
  FeatureId intern(const std::string& feature);
  std::optional<FeatureId> find(const std::string& feature) const;
  const std::string& string_of(FeatureId id) const { return strings_.at(id); }
  std::size_t size() const { return strings_.size(); }

 private:
  std::unordered_map<std::string, FeatureId> ids_;
  std::vector<std::string> strings_;
};

inline constexpr std::string_view kNullValue = "<NULL>";
inline constexpr std::string_view kRootValue = "<ROOT>";

// Resolves an address to a token id (0 = artificial root), or -1.
int resolve(const Configuration& c, Address address);

// Feature strings "name=v1|v2|..." in template order.
std::vector<std::string> feature_strings(const Configuration& c, const Sentence& s,
                                         std::span<const FeatureTemplate> templates);

// Interns every feature string; one id per template.
FeatureVector extract(const Configuration& c, const Sentence& s,
                      std::span<const FeatureTemplate> templates, FeatureInterner& interner);

// Looks features up without inserting; unknown features are dropped.
FeatureVector lookup(const Configuration& c, const Sentence& s,
                     std::span<const FeatureTemplate> templates, const FeatureInterner& interner);

std::vector<FeatureTemplate> default_templates(System system);

// Defaults, deeper singletons (S2, B3, head of S0) and every pairwise
// conjunction of singleton templates, sorted by canonical name.
std::vector<FeatureTemplate> candidate_pool(System system);

std::vector<FeatureTemplate> read_templates(std::istream& in);
void write_templates(std::ostream& out, std::span<const FeatureTemplate> templates);

}  // namespace polyparse
