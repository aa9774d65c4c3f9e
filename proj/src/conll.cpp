#include "polyparse/conll.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "polyparse/error.hpp"

namespace polyparse {

namespace {

constexpr std::size_t kColumns = 10;

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t") == std::string_view::npos;
}

std::optional<int> parse_int(std::string_view text) {
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) return std::nullopt;
  return value;
}

std::string optional_field(std::string_view text) {
  return text == "_" ? std::string() : std::string(text);
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw DataError("line " + std::to_string(line) + ": " + what);
}

class SentenceBuilder {
 public:
  SentenceBuilder(std::string_view lang, const ReadOptions& options) : lang_(lang), options_(options) {}

  bool empty() const { return sentence_.tokens.empty(); }

  void add(std::string_view line, std::size_t line_no) {
    const auto fields = split_tabs(line);
    if (fields.size() != kColumns) {
      fail(line_no, "expected 10 tab-separated columns, found " + std::to_string(fields.size()));
    }
    Token token;
    const auto id = parse_int(fields[0]);
    if (!id) fail(line_no, "non-integer id '" + std::string(fields[0]) + "'");
    const int expected = static_cast<int>(sentence_.tokens.size()) + 1;
    if (*id != expected) {
      fail(line_no, "token id " + std::to_string(*id) + " out of sequence (expected " +
                        std::to_string(expected) + ")");
    }
    token.id = *id;
    token.form = std::string(fields[1]);
    token.lemma = optional_field(fields[2]);
    token.cpostag = optional_field(fields[3]);
    token.postag = optional_field(fields[4]);
    token.feats = optional_field(fields[5]);
    token.deprel = optional_field(fields[7]);
    if (fields[6] == "_" && options_.allow_missing_heads) {
      token.head = 0;
    } else {
      const auto head = parse_int(fields[6]);
      if (!head) fail(line_no, "non-integer head '" + std::string(fields[6]) + "'");
      if (*head < 0) fail(line_no, "head out of range");
      if (*head == token.id) fail(line_no, "cyclic head structure (token is its own head)");
      token.head = *head;
    }
    if (token.form.empty()) fail(line_no, "empty form");
    if (token.deprel.empty() && !options_.allow_missing_heads) fail(line_no, "empty deprel");
    sentence_.tokens.push_back(std::move(token));
    lines_.push_back(line_no);
  }

  Sentence finish() {
    const int n = static_cast<int>(sentence_.tokens.size());
    for (std::size_t i = 0; i < sentence_.tokens.size(); ++i) {
      if (sentence_.tokens[i].head > n) fail(lines_[i], "head out of range");
    }
    if (!options_.allow_missing_heads) {
      if (options_.repair_multiple_roots) repair_multiple_roots(sentence_);
      if (auto problem = tree_problem(sentence_.heads())) fail(lines_.front(), *problem);
    }
    sentence_.lang = std::string(lang_);
    Sentence done = std::move(sentence_);
    sentence_ = Sentence{};
    lines_.clear();
    return done;
  }

 private:
  std::string_view lang_;
  const ReadOptions& options_;
  Sentence sentence_;
  std::vector<std::size_t> lines_;
};

void write_field(std::ostream& out, const std::string& value) {
  if (value.empty()) {
    out << '_';
  } else {
    out << value;
  }
}

}  // namespace

std::vector<int> Sentence::heads() const {
  std::vector<int> result;
  result.reserve(tokens.size());
  for (const auto& token : tokens) result.push_back(token.head);
  return result;
}

std::size_t Treebank::token_count() const {
  std::size_t total = 0;
  for (const auto& sentence : sentences) total += sentence.size();
  return total;
}

std::optional<std::string> tree_problem(std::span<const int> heads) {
  const int n = static_cast<int>(heads.size());
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    const int head = heads[static_cast<std::size_t>(i)];
    if (head < 0 || head > n) return "head out of range";
    if (head == i + 1) return "cyclic head structure involving token " + std::to_string(i + 1);
    if (head == 0) ++roots;
  }
  if (n > 0 && roots == 0) return "cyclic head structure (no token attached to the root)";
  if (roots > 1) return "multiple roots (" + std::to_string(roots) + " tokens attached to 0)";
  // 0 = unvisited, 1 = on current path, 2 = known to reach the root.
  std::vector<char> state(static_cast<std::size_t>(n) + 1, 0);
  state[0] = 2;
  std::vector<int> path;
  for (int start = 1; start <= n; ++start) {
    int node = start;
    path.clear();
    while (state[static_cast<std::size_t>(node)] == 0) {
      state[static_cast<std::size_t>(node)] = 1;
      path.push_back(node);
      node = heads[static_cast<std::size_t>(node - 1)];
    }
    if (state[static_cast<std::size_t>(node)] == 1) {
      return "cyclic head structure involving token " + std::to_string(node);
    }
    for (int visited : path) state[static_cast<std::size_t>(visited)] = 2;
  }
  return std::nullopt;
}

int repair_multiple_roots(Sentence& sentence) {
  int first_root = 0;
  int moved = 0;
  for (auto& token : sentence.tokens) {
    if (token.head != 0) continue;
    if (first_root == 0) {
      first_root = token.id;
    } else {
      token.head = first_root;
      ++moved;
    }
  }
  return moved;
}

Treebank read_treebank(std::istream& in, std::string_view lang, const ReadOptions& options) {
  Treebank treebank;
  SentenceBuilder builder(lang, options);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) {
      if (!builder.empty()) treebank.sentences.push_back(builder.finish());
      continue;
    }
    builder.add(line, line_no);
  }
  if (!builder.empty()) treebank.sentences.push_back(builder.finish());
  return treebank;
}

Treebank read_treebank(const std::filesystem::path& path, std::string_view lang, const ReadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    Treebank treebank = read_treebank(in, lang, options);
    treebank.source = path.string();
    return treebank;
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_treebank(std::ostream& out, const Treebank& treebank) {
  for (const auto& sentence : treebank.sentences) {
    for (const auto& token : sentence.tokens) {
      out << token.id << '\t';
      write_field(out, token.form);
      out << '\t';
      write_field(out, token.lemma);
      out << '\t';
      write_field(out, token.cpostag);
      out << '\t';
      write_field(out, token.postag);
      out << '\t';
      write_field(out, token.feats);
      out << '\t' << token.head << '\t';
      write_field(out, token.deprel);
      out << "\t_\t_\n";
    }
    out << '\n';
  }
}

std::string write_treebank(const Treebank& treebank) {
  std::ostringstream out;
  write_treebank(out, treebank);
  return out.str();
}

void write_treebank(const std::filesystem::path& path, const Treebank& treebank) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_treebank(out, treebank);
  if (!out) throw DataError("write failed for " + path.string());
}

}  // namespace polyparse
