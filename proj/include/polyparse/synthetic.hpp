#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polyparse/conll.hpp"

namespace polyparse {

// A small artificial language: a lexicon per word class, its fine tag names,
// and a few head-direction switches. Used for demos and end-to-end tests.
struct ToyLanguage {
  struct WordClass {
    std::string cpostag;
    std::string postag;
    std::vector<std::string> words;
  };

  std::string code;
  WordClass det, adj, noun, verb, adp, conj, punct;
  // PP nouns that attach to the verb (obl) or to the object noun (nmod).
  WordClass instrument_noun, part_noun;
  bool verb_final = false;
  bool adj_after_noun = false;
  bool postpositions = false;
};

// SVO, prenominal adjectives, prepositions.
ToyLanguage toy_language_a();
// SOV, postnominal adjectives, postpositions. Determiners and subject-first
// order are shared with toy_language_a; the lexicons are disjoint.
ToyLanguage toy_language_b();

struct ToyOptions {
  int adjective_percent = 30;
  int pp_percent = 40;
  int coordination_percent = 20;
  // When false every PP attaches to the verb, so heads follow from tags alone.
  bool lexical_pp = true;
};

Treebank generate_toy_treebank(const ToyLanguage& language, std::size_t sentences, std::uint64_t seed,
                               const ToyOptions& options = {});

// Two coordinated clauses per sentence, one from each language in random
// order; the coordinator comes from the first clause's language and the final
// punctuation from the second's. Sentences carry no language code.
Treebank generate_code_switched(const ToyLanguage& a, const ToyLanguage& b, std::size_t sentences,
                                std::uint64_t seed, const ToyOptions& options = {});

}  // namespace polyparse
