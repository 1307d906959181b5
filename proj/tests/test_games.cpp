#include <algorithm>
#include <random>

#include "cl2/generate.hpp"
#include "cl2/games.hpp"
#include "cl2/legality_oracle.hpp"
#include "doctest.h"

using namespace cl2;

namespace {

const Game T = Game::triv(true);
const Game F = Game::triv(false);

LabeledMove top(std::string m) { return {Player::Top, std::move(m)}; }
LabeledMove bot(std::string m) { return {Player::Bot, std::move(m)}; }

Interpretation single(const std::string& atom, Game g) {
  Interpretation I;
  I.general.insert_or_assign(atom, std::move(g));
  return I;
}

}  // namespace

TEST_CASE("interpret examples") {
  Interpretation I;
  I.elementary = {{"p", true}, {"q", false}};
  CHECK(interpret(parse("p + q"), I) == Game::chor({T, F}));
  auto g = Game::chand({T, F});
  CHECK(interpret(parse("P | ~P"), single("P", g)) == Game::disj({g, Game::neg(g)}));
  CHECK(interpret(parse("P_q | ~P_q"), single("P", g)) == interpret(parse("P | ~P"), single("P", g)));
  CHECK(interpret(parse("p -> q"), I) == Game::disj({Game::neg(T), F}));
  CHECK_THROWS_AS(interpret(parse("r"), I), UnmappedAtom);
}

TEST_CASE("legal_moves examples") {
  auto moves = legal_moves(Game::chor({T, F}));
  CHECK(moves == std::vector<LabeledMove>{top("1"), top("2")});
  auto g = interpret(parse("P | ~P"), single("P", Game::chand({T, F})));
  CHECK(legal_moves(g) == std::vector<LabeledMove>{bot("1.1"), bot("1.2"), top("2.1"), top("2.2")});
  CHECK(legal_moves(T).empty());
  CHECK(legal_moves(g, {bot("1.2")}) == std::vector<LabeledMove>{top("2.1"), top("2.2")});
  CHECK_THROWS_AS(legal_moves(g, {top("1.2")}), IllegalPosition);
}

TEST_CASE("prefix examples") {
  auto a = Game::chor({T, F});
  CHECK(prefix(Game::chand({a, F}), {bot("1")}) == a);
  CHECK(prefix(Game::neg(Game::chand({T, F})), {top("2")}) == Game::neg(F));
  try {
    prefix(Game::chand({T, F}), {bot("1"), bot("1")});
    FAIL("expected IllegalPosition");
  } catch (const IllegalPosition& e) {
    CHECK(e.index() == 1);
  }
  CHECK_FALSE(apply_move(Game::chand({T, F}), bot("01")));
  CHECK_FALSE(apply_move(Game::chand({T, F}), bot("3")));
  CHECK_FALSE(apply_move(Game::chand({T, F}), bot("1.")));
  CHECK_FALSE(apply_move(Game::disj({T, F}), bot("1")));
}

TEST_CASE("winner examples") {
  CHECK(winner(Game::chor({T, F}), {}) == Player::Bot);
  CHECK(winner(Game::chor({T, F}), {top("1")}) == Player::Top);
  CHECK(winner(Game::chand({T, F}), {top("1")}) == Player::Bot);
  CHECK(winner(Game::chand({T, F}), {}) == Player::Top);
  CHECK(winner(Game::chand({T, F}), {bot("2")}) == Player::Bot);
  CHECK(winner(Game::chand({T, F}), {bot("2"), bot("1")}) == Player::Top);
}

TEST_CASE("projection examples") {
  Run r{bot("1.2"), top("2.2")};
  CHECK(project(r, SpecPath::parse("1.")) == Run{bot("2")});
  CHECK(project_out(r, SpecPath::parse("1.")) == Run{top("2.2")});
  CHECK(signed_project(Run{top("2.2")}, parse("P | ~P"), SpecPath::parse("2.")) == Run{bot("2")});
  CHECK(project(Run{bot("12.1")}, SpecPath::parse("1.")).empty());
  CHECK(project(r, SpecPath{}) == r);
  CHECK_THROWS_AS(signed_project(r, parse("P | ~P"), SpecPath::parse("3.")), SpecError);
}

TEST_CASE("delay examples") {
  CHECK(is_top_delay({bot("a"), top("b")}, {top("b"), bot("a")}));
  CHECK_FALSE(is_top_delay({top("b"), bot("a")}, {bot("a"), top("b")}));
  Run g{bot("1"), top("2"), bot("3"), top("4")};
  CHECK(is_top_delay(g, g));
  CHECK_FALSE(is_top_delay({bot("1")}, {bot("2")}));
  CHECK(is_delay({top("b"), bot("a")}, {bot("a"), top("b")}, Player::Bot));
  CHECK(is_top_delay({bot("1"), bot("3"), top("2"), top("4")}, g));
  CHECK_FALSE(is_top_delay({top("2"), bot("1"), bot("3"), top("4")}, g));
}

TEST_CASE("manageability examples") {
  auto f = parse("P_q | ~P_q");
  CHECK(is_manageable({}, f));
  CHECK(is_manageable({bot("2.1"), top("1.1")}, f));
  CHECK(is_manageable({bot("2.1"), top("1.1")}, f).violated_clause == 0);
  CHECK(is_manageable({bot("2.1")}, f).violated_clause == 3);
  auto g = parse("P_q & P -> P_q");
  CHECK(is_manageable({bot("1.2.1")}, g));
  CHECK(is_manageable({top("1.2.1")}, g).violated_clause == 2);
  CHECK(is_manageable({bot("3.1")}, g).violated_clause == 1);
  CHECK(is_manageable({bot("1.1")}, parse("(p * q) | P_r | ~P_r")).violated_clause == 1);
  CHECK_THROWS_AS(is_manageable({}, parse("P_q | P_q")), std::invalid_argument);
}

TEST_CASE("presets") {
  CHECK(molecule_game(2, "TF") == Game::chand({Game::chor({T, F}), Game::chor({T, F})}));
  CHECK(game_preset("molecule(m=2,leaves=TF)") == molecule_game(2, "TF"));
  CHECK(game_preset("molecule(m=1,leaves=F)") == Game::chand({Game::chor({F})}));
  CHECK(game_preset("irregular1") == Game::chand({T, Game::chor({F, T})}));
  CHECK_THROWS_AS(game_preset("molecule(m=0)"), std::invalid_argument);
  CHECK_THROWS_AS(game_preset("nope"), std::invalid_argument);
  CHECK(standard_game_presets().size() == 8);
  auto fam = interpretation_family(parse("p & P -> q"), standard_game_presets());
  CHECK(fam.size() == 32);
  CHECK(interpretation_family(parse("p | ~p"), standard_game_presets()).size() == 2);
}

TEST_CASE("engine agrees with the definitional oracle") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 300; ++i) {
    Game g = random_game(rng, 3, 2);
    auto runs = oracle::legal_runs(g);
    for (const auto& r : runs) {
      CHECK(is_legal(g, r));
      CHECK(oracle::is_legal(g, r));
      CHECK(winner(g, r) == oracle::winner_of_legal(g, r));
    }
    // Every legal one-move extension enumerated by the engine is a legal run
    // by definition and vice versa, at every legal position.
    for (const auto& r : runs) {
      auto moves = legal_moves(g, r);
      std::size_t ext = 0;
      for (const auto& s : runs)
        if (s.size() == r.size() + 1 && std::equal(r.begin(), r.end(), s.begin())) ++ext;
      CHECK(moves.size() == ext);
      for (const auto& m : moves) {
        Run s = r;
        s.push_back(m);
        CHECK(oracle::is_legal(g, s));
      }
    }
    // Random garbage runs.
    for (int k = 0; k < 10; ++k) {
      Run r = random_legal_run(rng, g, 4);
      r.push_back({k % 2 ? Player::Top : Player::Bot, random_move_string(rng)});
      CHECK(is_legal(g, r) == oracle::is_legal(g, r));
    }
  }
}
