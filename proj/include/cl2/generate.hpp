// Random and exhaustive formula generators shared by tests, lemma suites and
// the acceptance harness.

#ifndef CL2_GENERATE_HPP_
#define CL2_GENERATE_HPP_

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cl2/completeness.hpp"
#include "cl2/games.hpp"
#include "cl2/syntax.hpp"

namespace cl2 {

struct GenOptions {
  std::vector<std::string> elementary{"p", "q"};
  std::vector<std::string> general{"P", "Q"};
  int max_connectives = 5;
  int max_arity = 3;
  bool negation = true;
  bool implication = true;
  bool parallel = true;  // ∧, ∨
  bool choice = true;    // ⊓, ⊔
  bool constants = false;
};

Formula random_formula(std::mt19937_64& rng, const GenOptions& options);

// Formula with exactly `connectives` connective nodes.
Formula random_formula_sized(std::mt19937_64& rng, const GenOptions& options, int connectives);

// A random formula over `options` whose general atoms are then replaced by
// random small, medium or large molecules of the scheme.
Formula random_molecular_formula(std::mt19937_64& rng, const GenOptions& options, const MoleculeScheme& scheme);

// Binary-connective enumeration of every formula over `leaves` with at most
// `max_connectives` connectives, in order of increasing size. The connective
// set is ¬ plus the binary forms of the enabled connectives in `options`.
void enumerate_formulas(const std::vector<Formula>& leaves, int max_connectives, const GenOptions& options,
                        const std::function<void(const Formula&)>& visit);

// Random finite game tree of at most the given depth.
Game random_game(std::mt19937_64& rng, int depth, int max_arity = 3);

// A legal run reached by uniformly random play, stopping at a terminal
// position or after `max_length` moves.
Run random_legal_run(std::mt19937_64& rng, const Game& g, std::size_t max_length = 12);

// A move string that is well formed but probably not legal.
std::string random_move_string(std::mt19937_64& rng, int max_depth = 3);

}  // namespace cl2

#endif  // CL2_GENERATE_HPP_
