// Randomized property suites for the game-semantic facts the strategy and the
// soundness argument rely on. Each suite checks one property on seeded random
// cases; failing cases are shrunk greedily before being reported.

#ifndef CL2_LEMMAS_HPP_
#define CL2_LEMMAS_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cl2/games.hpp"
#include "cl2/syntax.hpp"

namespace cl2 {

// A generic test case. Suites use whichever fields they need.
struct LemmaCase {
  std::vector<Game> games;
  std::optional<Formula> formula;
  std::optional<Formula> other;  // a second formula (replacement, substitution result)
  Interpretation interpretation;
  std::map<std::string, bool> assignment;
  std::vector<Run> runs;
  std::vector<SpecPath> specs;
  Player player = Player::Top;
  int index = 0;
};

std::string describe(const LemmaCase& c);

struct Property {
  std::string name;
  std::string description;
  // nullopt: no non-vacuous case could be built from this seed.
  std::function<std::optional<LemmaCase>(std::mt19937_64&)> generate;
  // Failure message, or nullopt when the case passes or its preconditions
  // do not hold. `checks` is incremented once per elementary assertion.
  std::function<std::optional<std::string>(const LemmaCase&, std::size_t& checks)> check;
};

struct Counterexample {
  std::size_t case_index = 0;
  std::uint64_t case_seed = 0;
  std::string original;
  std::string minimized;
  std::string message;
  std::size_t shrink_steps = 0;
};

struct SuiteReport {
  std::string suite;
  std::string description;
  std::uint64_t seed = 0;
  std::size_t cases = 0;
  std::size_t vacuous = 0;  // cases that could not be built or did not meet the preconditions
  std::size_t checks = 0;
  std::size_t violations = 0;
  std::vector<Counterexample> counterexamples;  // the first few, minimized
  double seconds = 0;
  bool passed() const noexcept { return violations == 0 && vacuous * 10 <= cases; }
};

// Smaller variants of a case: moves dropped from runs (singly, or the k-th
// move of one player from every run at once), game and formula subtrees
// replaced by children or constants, interpretation games shrunk.
std::vector<LemmaCase> shrink_candidates(const LemmaCase& c);

// Greedy descent over shrink_candidates while the property still fails.
LemmaCase minimize(const Property& p, LemmaCase c, std::size_t* steps = nullptr);

SuiteReport run_property(const Property& p, std::size_t cases, std::uint64_t seed);

// Suite names: prefixation, negation, disjunction, legality, choice-step,
// delay-illegality, catch-up, classification, monotonicity, final-negation,
// final-disjunction, final-choice, manageable-win.
const std::vector<Property>& lemma_suites();
const Property* find_lemma_suite(const std::string& name);

// Throws std::invalid_argument for an unknown suite.
SuiteReport run_lemma_suite(const std::string& name, std::size_t cases, std::uint64_t seed);

}  // namespace cl2

#endif  // CL2_LEMMAS_HPP_
