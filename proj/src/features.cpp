#include "polyparse/features.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <ostream>
#include <set>

#include "polyparse/error.hpp"

namespace polyparse {

namespace {

constexpr std::array<std::pair<Address, std::string_view>, 12> kAddressNames{{
    {Address::S0, "S0"},
    {Address::S1, "S1"},
    {Address::S2, "S2"},
    {Address::B0, "B0"},
    {Address::B1, "B1"},
    {Address::B2, "B2"},
    {Address::B3, "B3"},
    {Address::HeadOfS0, "h(S0)"},
    {Address::LeftmostDepS0, "ld(S0)"},
    {Address::RightmostDepS0, "rd(S0)"},
    {Address::LeftmostDepB0, "ld(B0)"},
    {Address::RightmostDepB0, "rd(B0)"},
}};

constexpr std::array<std::pair<Attribute, std::string_view>, 4> kAttributeNames{{
    {Attribute::Form, "form"},
    {Attribute::CPosTag, "cpostag"},
    {Attribute::PosTag, "postag"},
    {Attribute::DepRel, "deprel"},
}};

std::string_view name_of(Address a) {
  for (const auto& [address, name] : kAddressNames) {
    if (address == a) return name;
  }
  throw InvariantError("unnamed address");
}

std::string_view name_of(Attribute a) {
  for (const auto& [attribute, name] : kAttributeNames) {
    if (attribute == a) return name;
  }
  throw InvariantError("unnamed attribute");
}

FeatureAtom parse_atom(std::string_view text) {
  const auto dot = text.rfind('.');
  if (dot == std::string_view::npos) throw DataError("bad feature atom '" + std::string(text) + "'");
  const auto address_text = text.substr(0, dot);
  const auto attribute_text = text.substr(dot + 1);
  FeatureAtom atom{};
  bool found_address = false;
  bool found_attribute = false;
  for (const auto& [address, name] : kAddressNames) {
    if (name == address_text) {
      atom.address = address;
      found_address = true;
    }
  }
  for (const auto& [attribute, name] : kAttributeNames) {
    if (name == attribute_text) {
      atom.attribute = attribute;
      found_attribute = true;
    }
  }
  if (!found_address || !found_attribute) throw DataError("bad feature atom '" + std::string(text) + "'");
  return atom;
}

FeatureTemplate single(Address address, Attribute attribute) {
  return FeatureTemplate({{address, attribute}});
}

FeatureTemplate pair(FeatureAtom a, FeatureAtom b) { return FeatureTemplate({a, b}); }

std::string_view value_of(const Configuration& c, const Sentence& s, int token, Attribute attribute) {
  if (token < 0) return kNullValue;
  if (attribute == Attribute::DepRel) {
    if (token == 0 || !c.has_head(token)) return kNullValue;
    return c.label(token);
  }
  if (token == 0) return kRootValue;
  const Token& t = s.token(token);
  switch (attribute) {
    case Attribute::Form:
      return t.form;
    case Attribute::CPosTag:
      return t.cpostag;
    case Attribute::PosTag:
      return t.postag;
    case Attribute::DepRel:
      break;
  }
  return kNullValue;
}

void append_feature(std::string& out, const Configuration& c, const Sentence& s, const FeatureTemplate& t) {
  out.assign(t.name());
  out.push_back('=');
  bool first = true;
  for (const auto& atom : t.atoms()) {
    if (!first) out.push_back('|');
    first = false;
    out.append(value_of(c, s, resolve(c, atom.address), atom.attribute));
  }
}

}  // namespace

FeatureTemplate::FeatureTemplate(std::vector<FeatureAtom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw UsageError("feature template needs at least one atom");
  for (const auto& atom : atoms_) {
    if (!name_.empty()) name_ += '+';
    name_ += name_of(atom.address);
    name_ += '.';
    name_ += name_of(atom.attribute);
  }
}

FeatureTemplate FeatureTemplate::parse(std::string_view name) {
  std::vector<FeatureAtom> atoms;
  std::size_t start = 0;
  while (true) {
    const auto plus = name.find('+', start);
    atoms.push_back(parse_atom(name.substr(start, plus == std::string_view::npos ? plus : plus - start)));
    if (plus == std::string_view::npos) break;
    start = plus + 1;
  }
  return FeatureTemplate(std::move(atoms));
}

FeatureId FeatureInterner::intern(const std::string& feature) {
  const auto [it, inserted] = ids_.try_emplace(feature, static_cast<FeatureId>(strings_.size()));
  if (inserted) strings_.push_back(feature);
  return it->second;
}

std::optional<FeatureId> FeatureInterner::find(const std::string& feature) const {
  const auto it = ids_.find(feature);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

int resolve(const Configuration& c, Address address) {
  switch (address) {
    case Address::S0:
      return c.stack_at(0);
    case Address::S1:
      return c.stack_at(1);
    case Address::S2:
      return c.stack_at(2);
    case Address::B0:
      return c.buffer_at(0);
    case Address::B1:
      return c.buffer_at(1);
    case Address::B2:
      return c.buffer_at(2);
    case Address::B3:
      return c.buffer_at(3);
    case Address::HeadOfS0: {
      const int s0 = c.stack_at(0);
      return s0 > 0 && c.has_head(s0) ? c.head(s0) : -1;
    }
    case Address::LeftmostDepS0: {
      const int s0 = c.stack_at(0);
      return s0 >= 0 ? c.leftmost_dependent(s0) : -1;
    }
    case Address::RightmostDepS0: {
      const int s0 = c.stack_at(0);
      return s0 >= 0 ? c.rightmost_dependent(s0) : -1;
    }
    case Address::LeftmostDepB0: {
      const int b0 = c.buffer_at(0);
      return b0 >= 0 ? c.leftmost_dependent(b0) : -1;
    }
    case Address::RightmostDepB0: {
      const int b0 = c.buffer_at(0);
      return b0 >= 0 ? c.rightmost_dependent(b0) : -1;
    }
  }
  return -1;
}

std::vector<std::string> feature_strings(const Configuration& c, const Sentence& s,
                                         std::span<const FeatureTemplate> templates) {
  std::vector<std::string> features(templates.size());
  for (std::size_t i = 0; i < templates.size(); ++i) append_feature(features[i], c, s, templates[i]);
  return features;
}

FeatureVector extract(const Configuration& c, const Sentence& s, std::span<const FeatureTemplate> templates,
                      FeatureInterner& interner) {
  FeatureVector fv;
  fv.reserve(templates.size());
  std::string buffer;
  for (const auto& t : templates) {
    append_feature(buffer, c, s, t);
    fv.push_back(interner.intern(buffer));
  }
  std::sort(fv.begin(), fv.end());
  fv.erase(std::unique(fv.begin(), fv.end()), fv.end());
  return fv;
}

FeatureVector lookup(const Configuration& c, const Sentence& s, std::span<const FeatureTemplate> templates,
                     const FeatureInterner& interner) {
  FeatureVector fv;
  fv.reserve(templates.size());
  std::string buffer;
  for (const auto& t : templates) {
    append_feature(buffer, c, s, t);
    if (auto id = interner.find(buffer)) fv.push_back(*id);
  }
  std::sort(fv.begin(), fv.end());
  fv.erase(std::unique(fv.begin(), fv.end()), fv.end());
  return fv;
}

std::vector<FeatureTemplate> default_templates(System /*system*/) {
  using A = Address;
  using T = Attribute;
  return {
      single(A::S0, T::Form),
      single(A::B0, T::Form),
      single(A::B1, T::Form),
      single(A::S0, T::PosTag),
      single(A::S1, T::PosTag),
      single(A::B0, T::PosTag),
      single(A::B1, T::PosTag),
      single(A::B2, T::PosTag),
      single(A::S0, T::CPosTag),
      single(A::B0, T::CPosTag),
      single(A::LeftmostDepS0, T::DepRel),
      single(A::RightmostDepS0, T::DepRel),
      single(A::LeftmostDepB0, T::DepRel),
      pair({A::S0, T::PosTag}, {A::B0, T::PosTag}),
      pair({A::S0, T::Form}, {A::B0, T::PosTag}),
      pair({A::S0, T::PosTag}, {A::B0, T::Form}),
  };
}

std::vector<FeatureTemplate> candidate_pool(System system) {
  using A = Address;
  using T = Attribute;
  std::vector<FeatureTemplate> singles;
  for (const auto& t : default_templates(system)) {
    if (t.atoms().size() == 1) singles.push_back(t);
  }
  for (A address : {A::S2, A::B3, A::HeadOfS0}) {
    singles.push_back(single(address, T::Form));
    singles.push_back(single(address, T::PosTag));
  }
  std::set<FeatureTemplate> pool;
  for (const auto& t : default_templates(system)) pool.insert(t);
  for (const auto& t : singles) pool.insert(t);
  for (std::size_t i = 0; i < singles.size(); ++i) {
    for (std::size_t j = i + 1; j < singles.size(); ++j) {
      const FeatureAtom a = singles[i].atoms()[0];
      const FeatureAtom b = singles[j].atoms()[0];
      if (pool.count(pair(b, a)) == 0) pool.insert(pair(a, b));
    }
  }
  return {pool.begin(), pool.end()};
}

std::vector<FeatureTemplate> read_templates(std::istream& in) {
  std::vector<FeatureTemplate> templates;
  std::set<std::string> seen;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t");
    auto t = FeatureTemplate::parse(std::string_view(line).substr(first, last - first + 1));
    if (seen.insert(t.name()).second) templates.push_back(std::move(t));
  }
  if (templates.empty()) throw DataError("template list is empty");
  return templates;
}

void write_templates(std::ostream& out, std::span<const FeatureTemplate> templates) {
  for (const auto& t : templates) out << t.name() << '\n';
}

}  // namespace polyparse
