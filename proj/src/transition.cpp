#include "polyparse/transition.hpp"

#include "polyparse/error.hpp"
#include "polyparse/treebank_ops.hpp"

namespace polyparse {

std::string to_string(System system) {
  return system == System::ArcEager ? "arc-eager" : "arc-standard";
}

System parse_system(const std::string& text) {
  if (text == "arc-eager") return System::ArcEager;
  if (text == "arc-standard") return System::ArcStandard;
  throw UsageError("unknown transition system '" + text + "'");
}

std::string Transition::signature() const {
  switch (move) {
    case Move::Shift:
      return "SHIFT";
    case Move::Reduce:
      return "REDUCE";
    case Move::LeftArc:
      return "LEFT_ARC:" + label;
    case Move::RightArc:
      return "RIGHT_ARC:" + label;
  }
  throw InvariantError("bad move");
}

Transition Transition::from_signature(const std::string& text) {
  if (text == "SHIFT") return shift();
  if (text == "REDUCE") return reduce();
  if (text.starts_with("LEFT_ARC:") && text.size() > 9) return left_arc(text.substr(9));
  if (text.starts_with("RIGHT_ARC:") && text.size() > 10) return right_arc(text.substr(10));
  throw DataError("bad transition signature '" + text + "'");
}

Configuration::Configuration(int n)
    : n_(n),
      heads_(static_cast<std::size_t>(n) + 1, -1),
      labels_(static_cast<std::size_t>(n) + 1),
      leftmost_(static_cast<std::size_t>(n) + 1, -1),
      rightmost_(static_cast<std::size_t>(n) + 1, -1),
      dependents_(static_cast<std::size_t>(n) + 1, 0) {
  if (n < 0) throw UsageError("negative sentence length");
}

int Configuration::stack_at(int k) const {
  const int size = stack_size();
  return k < size ? stack_[static_cast<std::size_t>(size - 1 - k)] : -1;
}

int Configuration::buffer_at(int k) const {
  const int id = front_ + k;
  return id <= n_ ? id : -1;
}

std::vector<int> Configuration::buffer() const {
  std::vector<int> items;
  for (int id = front_; id <= n_; ++id) items.push_back(id);
  return items;
}

bool Configuration::is_terminal(System system) const {
  if (system == System::ArcEager) return buffer_size() == 0;
  return buffer_size() == 0 && stack_size() <= 1;
}

bool Configuration::is_legal(Move move, System system) const {
  if (is_terminal(system)) return false;
  const bool buffer_nonempty = buffer_size() > 0;
  const int top = stack_.back();
  if (system == System::ArcEager) {
    switch (move) {
      case Move::Shift:
      case Move::RightArc:
        return buffer_nonempty;
      case Move::LeftArc:
        return buffer_nonempty && top != 0 && !has_head(top);
      case Move::Reduce:
        return has_head(top);
    }
  } else {
    switch (move) {
      case Move::Shift:
        return buffer_nonempty;
      case Move::LeftArc:
        return stack_size() >= 2 && stack_at(1) != 0;
      case Move::RightArc:
        return stack_size() >= 2;
      case Move::Reduce:
        return false;
    }
  }
  return false;
}

void Configuration::add_arc(int head, int dependent, const std::string& label) {
  if (has_head(dependent)) throw InvariantError("token already has a head");
  heads_[static_cast<std::size_t>(dependent)] = head;
  labels_[static_cast<std::size_t>(dependent)] = label;
  auto& left = leftmost_[static_cast<std::size_t>(head)];
  auto& right = rightmost_[static_cast<std::size_t>(head)];
  if (left < 0 || dependent < left) left = dependent;
  if (right < 0 || dependent > right) right = dependent;
  ++dependents_[static_cast<std::size_t>(head)];
  ++arcs_;
}

void Configuration::apply(const Transition& t, System system) {
  if (!is_legal(t.move, system)) throw UsageError("illegal transition " + t.signature());
  if (t.is_arc() && t.label.empty()) throw UsageError("arc transition without label");
  if (system == System::ArcEager) {
    switch (t.move) {
      case Move::Shift:
        stack_.push_back(front_++);
        break;
      case Move::Reduce:
        stack_.pop_back();
        break;
      case Move::LeftArc:
        add_arc(front_, stack_.back(), t.label);
        stack_.pop_back();
        break;
      case Move::RightArc:
        add_arc(stack_.back(), front_, t.label);
        stack_.push_back(front_++);
        break;
    }
    return;
  }
  switch (t.move) {
    case Move::Shift:
      stack_.push_back(front_++);
      break;
    case Move::LeftArc: {
      const int top = stack_.back();
      const int second = stack_at(1);
      add_arc(top, second, t.label);
      stack_.erase(stack_.end() - 2);
      break;
    }
    case Move::RightArc: {
      const int top = stack_.back();
      add_arc(stack_at(1), top, t.label);
      stack_.pop_back();
      break;
    }
    case Move::Reduce:
      break;
  }
}

Configuration initial_config(const Sentence& sentence) {
  return Configuration(static_cast<int>(sentence.size()));
}

std::vector<Transition> legal_transitions(const Configuration& c, System system,
                                          std::span<const std::string> labels) {
  std::vector<Transition> legal;
  if (c.is_legal(Move::Shift, system)) legal.push_back(Transition::shift());
  if (c.is_legal(Move::Reduce, system)) legal.push_back(Transition::reduce());
  if (c.is_legal(Move::LeftArc, system)) {
    for (const auto& l : labels) legal.push_back(Transition::left_arc(l));
  }
  if (c.is_legal(Move::RightArc, system)) {
    for (const auto& l : labels) legal.push_back(Transition::right_arc(l));
  }
  return legal;
}

Configuration apply(Configuration c, const Transition& t, System system) {
  c.apply(t, system);
  return c;
}

StaticOracle::StaticOracle(const Sentence& gold, System system)
    : gold_(gold), system_(system), gold_dependents_(gold.size() + 1, 0) {
  for (const auto& t : gold.tokens) ++gold_dependents_[static_cast<std::size_t>(t.head)];
}

Transition StaticOracle::next(const Configuration& c) const {
  auto head_of = [&](int token) { return gold_.token(token).head; };
  auto label_of = [&](int token) { return gold_.token(token).deprel; };
  auto done = [&](int token) {
    return c.dependent_count(token) == gold_dependents_[static_cast<std::size_t>(token)];
  };
  const int top = c.stack_at(0);
  if (system_ == System::ArcEager) {
    const int front = c.buffer_at(0);
    if (front > 0) {
      if (top != 0 && head_of(top) == front) return Transition::left_arc(label_of(top));
      if (head_of(front) == top) return Transition::right_arc(label_of(front));
    }
    if (top != 0 && c.has_head(top) && done(top)) return Transition::reduce();
    return Transition::shift();
  }
  if (c.stack_size() >= 2) {
    const int second = c.stack_at(1);
    if (second != 0 && head_of(second) == top) return Transition::left_arc(label_of(second));
    if (head_of(top) == second && done(top)) return Transition::right_arc(label_of(top));
  }
  return Transition::shift();
}

std::vector<Transition> static_oracle(const Sentence& sentence, System system) {
  if (!is_projective(sentence)) throw UsageError("static_oracle requires a projective sentence");
  const StaticOracle oracle(sentence, system);
  Configuration c = initial_config(sentence);
  std::vector<Transition> sequence;
  const std::size_t limit = 2 * sentence.size() + 1;
  while (!c.is_terminal(system)) {
    Transition t = oracle.next(c);
    if (!c.is_legal(t.move, system) || sequence.size() > limit) {
      throw InvariantError("static oracle stuck on a projective sentence");
    }
    c.apply(t, system);
    sequence.push_back(std::move(t));
  }
  return sequence;
}

Tree extract_tree(const Configuration& c, const std::string& root_label) {
  Tree tree;
  const int n = c.sentence_size();
  tree.heads.reserve(static_cast<std::size_t>(n));
  tree.labels.reserve(static_cast<std::size_t>(n));
  for (int token = 1; token <= n; ++token) {
    if (c.has_head(token)) {
      tree.heads.push_back(c.head(token));
      tree.labels.push_back(c.label(token));
    } else {
      tree.heads.push_back(0);
      tree.labels.push_back(root_label);
    }
  }
  return tree;
}

}  // namespace polyparse
