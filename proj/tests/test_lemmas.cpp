#include <set>

#include "cl2/lemmas.hpp"
#include "doctest.h"

using namespace cl2;

TEST_CASE("every suite passes on a few hundred cases") {
  std::set<std::string> names;
  for (const auto& p : lemma_suites()) {
    names.insert(p.name);
    auto r = run_property(p, 300, 11);
    INFO(p.name);
    CHECK(r.violations == 0);
    CHECK(r.vacuous * 10 <= r.cases);
    CHECK(r.checks >= r.cases / 2);
    CHECK(r.passed());
  }
  CHECK(names.size() == 13);
  CHECK(names.count("manageable-win"));
}

TEST_CASE("reports are reproducible") {
  auto a = run_lemma_suite("classification", 200, 5);
  auto b = run_lemma_suite("classification", 200, 5);
  CHECK(a.checks == b.checks);
  CHECK(a.vacuous == b.vacuous);
  auto c = run_lemma_suite("classification", 200, 6);
  CHECK(c.seed == 6);
  CHECK_THROWS_AS(run_lemma_suite("no-such-suite", 1, 0), std::invalid_argument);
  CHECK(find_lemma_suite("prefixation") != nullptr);
}

TEST_CASE("a wrong negation law is caught and shrunk") {
  Property wrong = *find_lemma_suite("negation");
  wrong.name = "negation-without-label-flip";
  wrong.check = [](const LemmaCase& c, std::size_t& checks) -> std::optional<std::string> {
    Game na = Game::neg(c.games.at(0));
    if (!is_legal(na, c.runs.at(0))) return std::nullopt;
    ++checks;
    if (c.runs[0].empty() || is_legal(c.games[0], c.runs[0])) return std::nullopt;
    return "a run legal in ~A is not legal in A";
  };
  auto r = run_property(wrong, 200, 3);
  REQUIRE(r.violations > 0);
  REQUIRE_FALSE(r.counterexamples.empty());
  const auto& cx = r.counterexamples.front();
  CHECK(cx.minimized.size() <= cx.original.size());
  // The smallest witness is a one-move run in a one-choice game.
  CHECK(cx.minimized.find("runs: <") != std::string::npos);
  CHECK(cx.minimized.find(", ") == std::string::npos);
}

TEST_CASE("a reversed delay law is caught") {
  Property wrong = *find_lemma_suite("delay-illegality");
  wrong.check = [](const LemmaCase& c, std::size_t& checks) -> std::optional<std::string> {
    const Run &gamma = c.runs.at(0), &delta = c.runs.at(1);
    if (!is_delay(delta, gamma, c.player)) return std::nullopt;
    auto off = [&](const Run& r) -> std::optional<Player> {
      auto i = first_illegal(c.games[0], r);
      if (!i) return std::nullopt;
      return r[*i].player;
    };
    ++checks;
    if (off(gamma) == c.player && off(delta) != c.player) return "reversed implication fails";
    return std::nullopt;
  };
  auto r = run_property(wrong, 1000, 9);
  CHECK(r.violations > 0);
  REQUIRE_FALSE(r.counterexamples.empty());
  CHECK(r.counterexamples[0].shrink_steps > 0);
}

TEST_CASE("shrinking reaches a minimal game") {
  Property has_chor{"has-chor", "", {}, {}};
  has_chor.generate = [](std::mt19937_64&) -> std::optional<LemmaCase> {
    LemmaCase c;
    Game t = Game::triv(true), f = Game::triv(false);
    c.games = {Game::conj({Game::chand({t, Game::chor({f, t, Game::neg(f)})}), Game::disj({t, f})})};
    return c;
  };
  has_chor.check = [](const LemmaCase& c, std::size_t& checks) -> std::optional<std::string> {
    ++checks;
    std::function<bool(const Game&)> any = [&](const Game& g) {
      if (g.kind() == GameKind::Chor) return true;
      for (const auto& ch : g.children())
        if (any(ch)) return true;
      return false;
    };
    if (any(c.games.at(0))) return "contains a choice disjunction";
    return std::nullopt;
  };
  auto r = run_property(has_chor, 1, 0);
  REQUIRE(r.counterexamples.size() == 1);
  CHECK(r.counterexamples[0].minimized.rfind("games: chor(T); player", 0) == 0);
}

TEST_CASE("shrink candidates keep delays paired") {
  LemmaCase c;
  c.games = {Game::triv(true)};
  c.runs = {{{Player::Top, "1"}, {Player::Bot, "2"}}, {{Player::Bot, "2"}, {Player::Top, "1"}}};
  auto cands = shrink_candidates(c);
  bool paired = false;
  for (const auto& s : cands)
    paired = paired || (s.runs[0] == Run{{Player::Bot, "2"}} && s.runs[1] == Run{{Player::Bot, "2"}});
  CHECK(paired);
  CHECK(describe(c).find("runs: <T:1, B:2>, <B:2, T:1>") != std::string::npos);
}
