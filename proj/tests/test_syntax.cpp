#include <random>

#include "cl2/generate.hpp"
#include "cl2/syntax.hpp"
#include "doctest.h"

using namespace cl2;

namespace {

Formula P() { return Formula::general("P"); }
Formula p() { return Formula::elem("p"); }
Formula q() { return Formula::elem("q"); }

// Independent occurrence walker: carries the full ancestor chain and derives
// polarity by counting ¬ nodes and antecedent positions afterwards.
struct Visit {
  Formula node;
  std::vector<std::pair<Formula, int>> ancestors;  // (parent, child index)
};

void all_nodes(const Formula& f, std::vector<std::pair<Formula, int>>& chain, std::vector<Visit>& out) {
  out.push_back({f, chain});
  for (std::size_t i = 0; i < f.arity(); ++i) {
    chain.emplace_back(f, static_cast<int>(i));
    all_nodes(f.child(i), chain, out);
    chain.pop_back();
  }
}

int negation_parity(const Visit& v) {
  int n = 0;
  for (const auto& [parent, idx] : v.ancestors) {
    if (parent.kind() == NodeKind::Neg) ++n;
    if (parent.kind() == NodeKind::Implies && idx == 0) ++n;
  }
  return n % 2;
}

bool inside_choice(const Visit& v) {
  for (const auto& a : v.ancestors)
    if (a.first.is_choice()) return true;
  return false;
}

}  // namespace

TEST_CASE("parse: grammar examples") {
  CHECK(parse("P \\/ ~P") == Formula::disj({P(), Formula::neg(P())}));
  CHECK(parse("(p * Q) -> q") == Formula::implies(Formula::chand({p(), Formula::general("Q")}), q()));
  auto h = Formula::hybrid("P", "q");
  CHECK(parse("P_q \\/ ~P_q") == Formula::disj({h, Formula::neg(h)}));
  CHECK(parse("P | ~P") == parse("P ∨ ¬P"));
  CHECK(parse("tt & ff") == Formula::conj({Formula::top(), Formula::bot()}));
  CHECK(parse("p ⊓ q ⊓ p").arity() == 3);
  CHECK(parse("(p & q) & p").arity() == 2);
  CHECK(parse("~~p") == Formula::neg(Formula::neg(p())));
}

TEST_CASE("parse: errors") {
  CHECK_THROWS_AS(parse("p & q | r"), ParseError);
  CHECK_THROWS_AS(parse("p -> q -> r"), ParseError);
  CHECK_THROWS_AS(parse("p &"), ParseError);
  CHECK_THROWS_AS(parse("(p"), ParseError);
  CHECK_THROWS_AS(parse("p_q"), ParseError);
  CHECK_THROWS_AS(parse("Pq"), ParseError);
  CHECK_THROWS_AS(parse("_P_1_1"), ParseError);
  CHECK_THROWS_AS(parse("P_tt"), ParseError);
  CHECK(parse("_P_1_2 | P__P_1_2", {.allow_reserved = true}).arity() == 2);
  try {
    parse("p & # q");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
}

TEST_CASE("render round-trip on generated formulas") {
  std::mt19937_64 rng(11);
  GenOptions opt;
  opt.constants = true;
  opt.max_connectives = 9;
  for (int i = 0; i < 2000; ++i) {
    Formula f = random_formula(rng, opt);
    auto text = render(f);
    CHECK_MESSAGE(parse(text) == f, text);
    CHECK(render(parse(text)) == text);
    CHECK(parse(render_unicode(f)) == f);
  }
}

TEST_CASE("surface_quasiatoms examples") {
  auto occ = surface_quasiatoms(parse("p & P -> p"));
  REQUIRE(occ.size() == 3);
  CHECK(occ[0].spec.str() == "1.1.");
  CHECK(occ[0].polarity == Polarity::Negative);
  CHECK(occ[0].kind == OccurrenceKind::Elementary);
  CHECK(occ[1].spec.str() == "1.2.");
  CHECK(occ[1].polarity == Polarity::Negative);
  CHECK(occ[1].kind == OccurrenceKind::General);
  CHECK(occ[2].spec.str() == "2.");
  CHECK(occ[2].polarity == Polarity::Positive);

  occ = surface_quasiatoms(parse("P + ~P"));
  REQUIRE(occ.size() == 1);
  CHECK(occ[0].spec.empty());
  CHECK(occ[0].kind == OccurrenceKind::ChorNode);

  occ = surface_quasiatoms(parse("P_q | ~P_q"));
  REQUIRE(occ.size() == 2);
  CHECK(occ[0].spec.str() == "1.");
  CHECK(occ[0].polarity == Polarity::Positive);
  CHECK(occ[1].spec.str() == "2.");
  CHECK(occ[1].polarity == Polarity::Negative);
  CHECK(occ[1].kind == OccurrenceKind::Hybrid);

  CHECK(surface_quasiatoms(parse("tt | ff")).empty());
}

TEST_CASE("replace_at examples") {
  CHECK(replace_at(parse("P + ~P"), SpecPath{}, P()) == P());
  CHECK(replace_at(parse("p & P -> p"), SpecPath::parse("1.2."), q()) == parse("p & q -> p"));
  auto f = replace_at(parse("P & P -> P"), SpecPath::parse("2."), q());
  f = replace_at(f, SpecPath::parse("1.1."), q());
  CHECK(f == parse("q & P -> q"));
  CHECK_THROWS_AS(replace_at(parse("p & q"), SpecPath::parse("3."), q()), SpecError);
  CHECK_THROWS_AS(replace_at(parse("p & q"), SpecPath{}, q()), SpecError);
  CHECK_THROWS_AS(replace_at(parse("p * (q & p)"), SpecPath::parse("2.1."), q()), SpecError);
}

TEST_CASE("occurrence laws on generated formulas") {
  std::mt19937_64 rng(5);
  GenOptions opt;
  opt.max_connectives = 10;
  for (int i = 0; i < 1000; ++i) {
    Formula f = random_formula(rng, opt);
    auto occ = surface_quasiatoms(f);
    for (const auto& o : occ) {
      CHECK(replace_at(f, o.spec, o.subject) == f);
      auto back = quasiatom_at(f, o.spec);
      REQUIRE(back.has_value());
      CHECK(back->polarity == o.polarity);
      CHECK(back->subject.same_node(o.subject));
    }
    // Brute-force scan: the surface quasiatoms are exactly the atom and
    // choice nodes not under any choice node, with matching parity.
    std::vector<Visit> visits;
    std::vector<std::pair<Formula, int>> chain;
    all_nodes(f, chain, visits);
    std::size_t k = 0;
    for (const auto& v : visits) {
      if (!(v.node.is_atom() || v.node.is_choice()) || inside_choice(v)) continue;
      REQUIRE(k < occ.size());
      CHECK(occ[k].subject.same_node(v.node));
      CHECK((occ[k].polarity == Polarity::Negative) == (negation_parity(v) == 1));
      ++k;
    }
    CHECK(k == occ.size());
  }
}

TEST_CASE("split_move") {
  auto f = parse("P & (Q | ~R) -> p * q");
  auto s = split_move(f, "1.2.2.1.7");
  REQUIRE(s);
  CHECK(s->occurrence.spec.str() == "1.2.2.");
  CHECK(s->occurrence.polarity == Polarity::Positive);
  CHECK(s->suffix == "1.7");
  s = split_move(f, "2.1");
  REQUIRE(s);
  CHECK(s->occurrence.kind == OccurrenceKind::ChandNode);
  CHECK(s->suffix == "1");
  CHECK_FALSE(split_move(f, "3.1"));
  CHECK_FALSE(split_move(f, "1"));
  CHECK_FALSE(split_move(f, "1.x"));
  CHECK(split_move(P(), "")->suffix.empty());
}

TEST_CASE("balanced hyperformulas") {
  CHECK(is_balanced(parse("P_q | ~P_q")));
  CHECK_FALSE(is_balanced(parse("P_q | P_q")));
  CHECK_FALSE(is_balanced(parse("(P_q | ~P_q) & q")));
  CHECK_FALSE(is_balanced(parse("(P_q | ~P_q) & (Q_q | ~Q_q)")));
  CHECK_FALSE(is_balanced(parse("(P_q * r) | ~P_q")));
  CHECK_FALSE(is_balanced(parse("P_q | ~P_q | P_q")));
  CHECK(is_balanced(parse("P & P -> P")));
  CHECK(is_balanced(parse("P_q & P -> P_q")));
}

TEST_CASE("dehybridize") {
  CHECK(dehybridize(parse("P_q | ~P_q")) == parse("P | ~P"));
  CHECK(dehybridize(parse("p & P -> p")) == parse("p & P -> p"));
  CHECK(dehybridize(parse("P_q & Q_r")) == parse("P & Q"));
}

TEST_CASE("classification predicates and names") {
  CHECK(is_elementary(parse("p -> q | ~p")));
  CHECK_FALSE(is_elementary(parse("p * q")));
  CHECK(is_elementary_base(parse("p * q")));
  CHECK_FALSE(is_elementary_base(parse("P | p")));
  CHECK(contains_hybrid(parse("p & Q_r")));
  CHECK(elementary_names(parse("p & Q_r")) == std::set<std::string>{"p", "r"});
  CHECK(general_names(parse("p & (Q_r | R)")) == std::set<std::string>{"Q", "R"});
  CHECK(connective_count(parse("~(p & q) -> P")) == 3);
}

TEST_CASE("canonical renaming") {
  CHECK(canonical_rename(parse("q & Q -> q")) == parse("a1 & A1 -> a1"));
  CHECK(canonical_key(parse("q & Q -> q")) == canonical_key(parse("r & P -> r")));
  CHECK(canonical_key(parse("q & Q -> q")) != canonical_key(parse("q & Q -> r")));
  CHECK(canonical_key(parse("P_q | ~P_q")) == canonical_key(parse("R_s | ~R_s")));
  CHECK(substitute_elem(parse("p & q -> p"), "p", P()) == parse("P & q -> P"));
}

TEST_CASE("SpecPath") {
  CHECK(SpecPath::parse("").empty());
  CHECK(SpecPath::parse("1.2.") == SpecPath::parse("1.2"));
  CHECK(SpecPath::parse("1.2.").str() == "1.2.");
  CHECK(SpecPath::parse("1.").is_prefix_of(SpecPath::parse("1.3.")));
  CHECK_THROWS_AS(SpecPath::parse("1..2"), SpecError);
  CHECK_THROWS_AS(SpecPath::parse("0."), SpecError);
}

TEST_CASE("enumeration sizes") {
  GenOptions opt;
  std::size_t count = 0;
  enumerate_formulas({p(), q()}, 3, opt, [&](const Formula&) { ++count; });
  // 2 + 22 + 462 + 12122 with ¬ and five binary connectives.
  CHECK(count == 12608);
}
