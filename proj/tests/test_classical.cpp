#include <random>

#include "cl2/classical.hpp"
#include "cl2/generate.hpp"
#include "doctest.h"

using namespace cl2;

namespace {

bool brute_force_tautology(const Formula& e) {
  auto names = elementary_names(e);
  std::vector<std::string> atoms(names.begin(), names.end());
  for (unsigned long mask = 0; mask < (1ul << atoms.size()); ++mask) {
    std::map<std::string, bool> a;
    for (std::size_t i = 0; i < atoms.size(); ++i) a[atoms[i]] = (mask >> i) & 1u;
    if (!evaluate(e, a)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("elementarize examples") {
  CHECK(elementarize(parse("P | ~P")) == parse("ff | ~tt"));
  CHECK(elementarize(parse("P_q | ~P_q")) == parse("q | ~q"));
  CHECK(elementarize(parse("p & P -> p")) == parse("p & tt -> p"));
  CHECK(elementarize(parse("(p * q) | (P + Q) | ~(P * r)")) == parse("tt | ff | ~tt"));
}

TEST_CASE("is_tautology examples") {
  CHECK(is_tautology(parse("q | ~q")));
  CHECK_FALSE(is_tautology(parse("ff | ~tt")));
  CHECK(is_tautology(parse("p & tt -> p")));
  CHECK_THROWS_AS(is_tautology(parse("P | ~P")), std::invalid_argument);
  CHECK_THROWS_AS(is_tautology(parse("p * q")), std::invalid_argument);
}

TEST_CASE("is_stable examples") {
  CHECK_FALSE(is_stable(parse("P -> P & P")));
  CHECK(is_stable(parse("p & P -> p")));
  CHECK(is_stable(parse("P_q | ~P_q")));
  CHECK(is_stable(parse("P -> P * P")));
  CHECK_FALSE(is_stable(parse("P + ~P")));
}

TEST_CASE("elementarize laws") {
  std::mt19937_64 rng(3);
  GenOptions opt;
  opt.constants = true;
  opt.max_connectives = 8;
  for (int i = 0; i < 1000; ++i) {
    Formula f = random_formula(rng, opt);
    Formula e = elementarize(f);
    CHECK(is_elementary(e));
    CHECK(elementarize(e) == e);
    CHECK(is_stable(f) == brute_force_tautology(e));
    if (is_elementary(f)) CHECK(e == f);
  }
}

TEST_CASE("truth table agrees with brute force up to ten atoms") {
  std::mt19937_64 rng(17);
  GenOptions opt;
  opt.elementary = {"a", "b", "c", "d", "e", "f", "g", "h", "i", "j"};
  opt.general.clear();
  opt.choice = false;
  opt.constants = true;
  opt.max_connectives = 14;
  int tautologies = 0;
  for (int i = 0; i < 600; ++i) {
    Formula f = random_formula(rng, opt);
    if (i % 3 == 0) f = Formula::disj({f, Formula::neg(f)});
    bool t = is_tautology(f);
    CHECK(t == brute_force_tautology(f));
    tautologies += t;
  }
  CHECK(tautologies > 150);
}

TEST_CASE("too many atoms") {
  std::vector<Formula> atoms;
  for (int i = 0; i < 21; ++i) atoms.push_back(Formula::elem("x" + std::to_string(i)));
  CHECK_THROWS_AS(is_tautology(Formula::disj(atoms)), TooManyAtoms);
  atoms.pop_back();
  atoms.push_back(Formula::neg(atoms.front()));
  CHECK(is_tautology(Formula::disj(atoms)));
}
