#include "polyparse/synthetic.hpp"

#include <random>

#include "polyparse/rng.hpp"

namespace polyparse {

namespace {

class Builder {
 public:
  Builder(std::mt19937_64& rng, const ToyOptions& options) : rng_(rng), options_(options) {}

  bool chance(int percent) { return static_cast<int>(bounded(rng_, 100)) < percent; }

  int add(const ToyLanguage::WordClass& wc) {
    Token t;
    t.id = static_cast<int>(tokens_.size()) + 1;
    t.form = wc.words[bounded(rng_, wc.words.size())];
    t.cpostag = wc.cpostag;
    t.postag = wc.postag;
    tokens_.push_back(std::move(t));
    return tokens_.back().id;
  }

  void attach(int dependent, int head, const std::string& label) {
    tokens_[static_cast<std::size_t>(dependent - 1)].head = head;
    tokens_[static_cast<std::size_t>(dependent - 1)].deprel = label;
  }

  // Determiner, adjectives and a noun in the language's order; returns the noun.
  int noun_phrase(const ToyLanguage& lang) {
    std::vector<int> deps;
    if (chance(60)) deps.push_back(add(lang.det));
    std::vector<int> adjectives;
    if (!lang.adj_after_noun) {
      while (adjectives.size() < 2 && chance(options_.adjective_percent)) adjectives.push_back(add(lang.adj));
    }
    const int noun = add(lang.noun);
    if (lang.adj_after_noun) {
      while (adjectives.size() < 2 && chance(options_.adjective_percent)) adjectives.push_back(add(lang.adj));
    }
    for (int d : deps) attach(d, noun, "det");
    for (int a : adjectives) attach(a, noun, "amod");
    return noun;
  }

  // Adposition plus noun; returns the noun, attached to verb or object.
  void prepositional_phrase(const ToyLanguage& lang, int verb, int object) {
    const bool to_noun = options_.lexical_pp && chance(50);
    const auto& nouns = to_noun ? lang.part_noun : lang.instrument_noun;
    int adposition = 0;
    if (!lang.postpositions) adposition = add(lang.adp);
    const int noun = add(nouns);
    if (lang.postpositions) adposition = add(lang.adp);
    attach(adposition, noun, "case");
    if (to_noun) {
      attach(noun, object, "nmod");
    } else {
      attach(noun, verb, "obl");
    }
  }

  // Returns the clause's verb. The verb of a verb-final language is added
  // last, so its id is reserved by placing the other constituents first.
  int clause(const ToyLanguage& lang) {
    const int subject = noun_phrase(lang);
    if (!lang.verb_final) {
      const int verb = add(lang.verb);
      const int object = noun_phrase(lang);
      if (chance(options_.pp_percent)) prepositional_phrase(lang, verb, object);
      attach(subject, verb, "nsubj");
      attach(object, verb, "obj");
      return verb;
    }
    const int object = noun_phrase(lang);
    const bool pp = chance(options_.pp_percent);
    // The verb id is known once everything before it is placed.
    const std::size_t pp_start = tokens_.size();
    if (pp) {
      // Placeholder verb id; fixed up below.
      prepositional_phrase(lang, 0, object);
    }
    const int verb = add(lang.verb);
    for (std::size_t i = pp_start; i < tokens_.size(); ++i) {
      if (tokens_[i].head == 0 && tokens_[i].deprel == "obl") tokens_[i].head = verb;
    }
    attach(subject, verb, "nsubj");
    attach(object, verb, "obj");
    return verb;
  }

  Sentence sentence(const ToyLanguage& first, const ToyLanguage& second, bool coordinate, std::string lang) {
    const int root = clause(first);
    attach(root, 0, "root");
    const ToyLanguage* last = &first;
    if (coordinate) {
      const int conj = add(first.conj);
      const int other = clause(second);
      attach(conj, other, "cc");
      attach(other, root, "conj");
      last = &second;
    }
    attach(add(last->punct), root, "punct");
    Sentence s;
    s.tokens = std::move(tokens_);
    s.lang = std::move(lang);
    tokens_.clear();
    return s;
  }

 private:
  std::mt19937_64& rng_;
  const ToyOptions& options_;
  std::vector<Token> tokens_;
};

}  // namespace

ToyLanguage toy_language_a() {
  ToyLanguage l;
  l.code = "aa";
  l.det = {"DET", "DT", {"the", "a", "this", "every"}};
  l.adj = {"ADJ", "JJ", {"big", "red", "old", "small", "happy", "green"}};
  l.noun = {"NOUN", "NN", {"cat", "dog", "man", "girl", "tree", "book", "house", "car", "bird", "fish"}};
  l.verb = {"VERB", "VBZ", {"sees", "takes", "finds", "likes", "holds", "pushes"}};
  l.adp = {"ADP", "IN", {"with", "near"}};
  l.conj = {"CONJ", "CC", {"and", "but"}};
  l.punct = {".", "PUNC", {"."}};
  l.instrument_noun = {"NOUN", "NN", {"stick", "hammer", "knife", "telescope"}};
  l.part_noun = {"NOUN", "NN", {"roof", "wheel", "page", "door"}};
  return l;
}

ToyLanguage toy_language_b() {
  ToyLanguage l;
  l.code = "bb";
  l.det = {"DET", "det", {"lo", "na", "mi", "ciu"}};
  l.adj = {"ADJ", "adj", {"grando", "rosa", "vecho", "pikolo", "felica", "verda"}};
  l.noun = {"NOUN", "n", {"gato", "pero", "ombro", "nina", "arbo", "libro", "kaso", "auto", "birdo", "fiso"}};
  l.verb = {"VERB", "v", {"vidas", "prenas", "trovas", "amas", "tenas", "pusas"}};
  l.adp = {"ADP", "pp", {"kun", "apud"}};
  l.conj = {"CONJ", "cj", {"kaj", "sed"}};
  l.punct = {".", "fin", {"!"}};
  l.instrument_noun = {"NOUN", "n", {"bastono", "martelo", "kutelo", "teleskopo"}};
  l.part_noun = {"NOUN", "n", {"tekto", "rado", "pagino", "pordo"}};
  l.verb_final = true;
  l.adj_after_noun = true;
  l.postpositions = true;
  return l;
}

Treebank generate_toy_treebank(const ToyLanguage& language, std::size_t sentences, std::uint64_t seed,
                               const ToyOptions& options) {
  std::mt19937_64 rng(seed);
  Builder builder(rng, options);
  Treebank tb;
  tb.source = "toy-" + language.code;
  for (std::size_t i = 0; i < sentences; ++i) {
    const bool coordinate = builder.chance(options.coordination_percent);
    tb.sentences.push_back(builder.sentence(language, language, coordinate, language.code));
  }
  return tb;
}

Treebank generate_code_switched(const ToyLanguage& a, const ToyLanguage& b, std::size_t sentences,
                                std::uint64_t seed, const ToyOptions& options) {
  std::mt19937_64 rng(seed);
  Builder builder(rng, options);
  Treebank tb;
  tb.source = "toy-" + a.code + "+" + b.code;
  for (std::size_t i = 0; i < sentences; ++i) {
    const bool a_first = builder.chance(50);
    tb.sentences.push_back(builder.sentence(a_first ? a : b, a_first ? b : a, true, ""));
  }
  return tb;
}

}  // namespace polyparse
