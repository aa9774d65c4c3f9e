#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace polyparse {

// One line of a CoNLL-X file. Empty strings stand for "_".
struct Token {
  int id = 0;
  std::string form;
  std::string lemma;
  std::string cpostag;
  std::string postag;
  std::string feats;
  int head = 0;
  std::string deprel;

  bool operator==(const Token&) const = default;
};

struct Sentence {
  std::vector<Token> tokens;
  std::string lang;
  // Language code already written into the tag columns, empty if none.
  std::string tag_prefix;

  std::size_t size() const { return tokens.size(); }
  const Token& token(int id) const { return tokens[static_cast<std::size_t>(id - 1)]; }
  std::vector<int> heads() const;

  bool operator==(const Sentence&) const = default;
};

struct Treebank {
  std::vector<Sentence> sentences;
  std::string source;

  std::size_t size() const { return sentences.size(); }
  bool empty() const { return sentences.empty(); }
  std::size_t token_count() const;
};

struct ReadOptions {
  // Attach every extra child of the root to the first one instead of failing.
  bool repair_multiple_roots = false;
  // Accept "_" heads and skip tree validation; used for raw parser input.
  bool allow_missing_heads = false;
};

// Checks that heads[i] (1-based token i+1) describe a tree rooted at 0 with
// exactly one root child. Returns a description of the first problem found.
std::optional<std::string> tree_problem(std::span<const int> heads);

// Attaches every extra child of the root to the first one. Returns the number
// of tokens moved.
int repair_multiple_roots(Sentence& sentence);

Treebank read_treebank(std::istream& in, std::string_view lang, const ReadOptions& options = {});
Treebank read_treebank(const std::filesystem::path& path, std::string_view lang,
                       const ReadOptions& options = {});

void write_treebank(std::ostream& out, const Treebank& treebank);
std::string write_treebank(const Treebank& treebank);
void write_treebank(const std::filesystem::path& path, const Treebank& treebank);

}  // namespace polyparse
