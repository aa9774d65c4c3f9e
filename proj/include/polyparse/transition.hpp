#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "polyparse/conll.hpp"

namespace polyparse {

enum class System { ArcEager, ArcStandard };

// "arc-eager" / "arc-standard"
std::string to_string(System system);
System parse_system(const std::string& text);

enum class Move { Shift, Reduce, LeftArc, RightArc };

struct Transition {
  Move move = Move::Shift;
  std::string label;  // arc transitions only

  static Transition shift() { return {Move::Shift, {}}; }
  static Transition reduce() { return {Move::Reduce, {}}; }
  static Transition left_arc(std::string l) { return {Move::LeftArc, std::move(l)}; }
  static Transition right_arc(std::string l) { return {Move::RightArc, std::move(l)}; }

  bool is_arc() const { return move == Move::LeftArc || move == Move::RightArc; }
  // SHIFT, REDUCE, LEFT_ARC:<label>, RIGHT_ARC:<label>
  std::string signature() const;
  static Transition from_signature(const std::string& text);

  bool operator==(const Transition&) const = default;
};

// Parser state over tokens 1..n with the artificial root 0 at the bottom of
// the stack. The buffer is always a suffix of 1..n, so it is stored as the
// index of its front.
class Configuration {
 public:
  explicit Configuration(int n);

  int sentence_size() const { return n_; }

  std::span<const int> stack() const { return stack_; }
  int stack_size() const { return static_cast<int>(stack_.size()); }
  // k-th item from the top (0 = top), or -1.
  int stack_at(int k) const;

  int buffer_size() const { return n_ - front_ + 1; }
  // k-th item of the buffer (0 = front), or -1.
  int buffer_at(int k) const;
  std::vector<int> buffer() const;

  bool has_head(int token) const { return heads_[static_cast<std::size_t>(token)] >= 0; }
  int head(int token) const { return heads_[static_cast<std::size_t>(token)]; }
  const std::string& label(int token) const { return labels_[static_cast<std::size_t>(token)]; }
  // Smallest / largest dependent of token attached so far, or -1.
  int leftmost_dependent(int token) const { return leftmost_[static_cast<std::size_t>(token)]; }
  int rightmost_dependent(int token) const { return rightmost_[static_cast<std::size_t>(token)]; }
  int dependent_count(int token) const { return dependents_[static_cast<std::size_t>(token)]; }
  int arc_count() const { return arcs_; }

  bool is_terminal(System system) const;
  bool is_legal(Move move, System system) const;
  void apply(const Transition& t, System system);

 private:
  void add_arc(int head, int dependent, const std::string& label);

  int n_;
  int front_ = 1;
  int arcs_ = 0;
  std::vector<int> stack_{0};
  std::vector<int> heads_;
  std::vector<std::string> labels_;
  std::vector<int> leftmost_;
  std::vector<int> rightmost_;
  std::vector<int> dependents_;
};

Configuration initial_config(const Sentence& sentence);

// Empty when the configuration is terminal.
std::vector<Transition> legal_transitions(const Configuration& c, System system,
                                          std::span<const std::string> labels);

Configuration apply(Configuration c, const Transition& t, System system);

// Gold transition sequence for a projective sentence.
std::vector<Transition> static_oracle(const Sentence& sentence, System system);

// Gold transition for configurations on the oracle path of one sentence.
// Only valid while every arc in the configuration is a gold arc.
class StaticOracle {
 public:
  StaticOracle(const Sentence& gold, System system);
  Transition next(const Configuration& c) const;

 private:
  const Sentence& gold_;
  System system_;
  std::vector<int> gold_dependents_;
};

struct Tree {
  std::vector<int> heads;
  std::vector<std::string> labels;
};

// Tokens left without a head are attached to 0 with root_label.
Tree extract_tree(const Configuration& c, const std::string& root_label = "root");

}  // namespace polyparse
