#include <random>

#include "cl2/generate.hpp"
#include "cl2/serialize.hpp"
#include "doctest.h"

using namespace cl2;

TEST_CASE("proof json round trip") {
  for (const char* text : {"P | ~P", "P & P -> P", "(p * q) -> (p * q)", "(P + Q) & (P -> Q) -> Q"}) {
    auto p = prove(parse(text), System::CL2);
    REQUIRE(p);
    for (const auto& proof : {p, hybridize(p)}) {
      Json j = proof_to_json(proof);
      auto back = proof_from_json(Json::parse(j.dump()));
      CHECK(proof_to_json(back) == j);
      CHECK(proof_to_text(back) == proof_to_text(proof));
    }
    CHECK(check_proof(proof_from_json(proof_to_json(hybridize(p))), System::CL2circ));
  }
  CHECK_THROWS_AS(proof_from_json(Json::parse(R"({"root":0,"nodes":[]})")), FormatError);
  CHECK_THROWS_AS(proof_from_json(Json::parse(R"({"root":0,"nodes":[{"id":0,"conclusion":"p","rule":"z"}]})")),
                  FormatError);
  CHECK_THROWS_AS(
      proof_from_json(Json::parse(R"({"root":0,"nodes":[{"id":0,"conclusion":"p","rule":"a","premises":[0]}]})")),
      FormatError);
}

TEST_CASE("game terms and json") {
  Game g = parse_game_term("chand(T, chor(F,T), neg(and(T,F)))");
  CHECK(render(g) == "chand(T,chor(F,T),neg(and(T,F)))");
  CHECK(game_from_json(game_to_json(g)) == g);
  CHECK(game_from_json(Json("irregular1")) == game_preset("irregular1"));
  CHECK(game_from_json(Json("molecule(m=2,leaves=TF)")) == molecule_game(2, "TF"));
  CHECK(game_from_json(Json::parse(R"({"op":"triv","value":true})")) == Game::triv(true));
  CHECK_THROWS_AS(parse_game_term("chand(T"), FormatError);
  CHECK_THROWS_AS(parse_game_term("neg(T,F)"), FormatError);
  CHECK_THROWS_AS(game_from_json(Json::parse(R"({"op":"xor","children":[]})")), FormatError);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    Game r = random_game(rng, 3);
    CHECK(parse_game_term(render(r)) == r);
    CHECK(game_from_json(game_to_json(r)) == r);
  }
}

TEST_CASE("interpretations and runs") {
  auto I = interpretation_from_json(Json::parse(
      R"J({"elementary":{"p":"T","q":false},"general":{"P":"molecule(m=2,leaves=TF)","Q":{"op":"chor","children":[{"op":"triv","value":"F"}]}}})J"));
  CHECK(I.elementary.at("p"));
  CHECK_FALSE(I.elementary.at("q"));
  CHECK(I.general.at("Q") == Game::chor({Game::triv(false)}));
  auto back = interpretation_from_json(interpretation_to_json(I));
  CHECK(back.elementary == I.elementary);
  CHECK(back.general.at("P") == I.general.at("P"));
  CHECK_THROWS_AS(interpretation_from_json(Json::parse(R"({"elementary":{"p":"maybe"}})")), FormatError);

  Run r{{Player::Bot, "1.2"}, {Player::Top, "2.2"}};
  CHECK(run_to_json(r).dump() == R"([{"move":"1.2","player":"B"},{"move":"2.2","player":"T"}])");
  CHECK(run_from_json(run_to_json(r)) == r);
  CHECK_THROWS_AS(run_from_json(Json::parse(R"([{"player":"X","move":"1"}])")), FormatError);
}

TEST_CASE("session state") {
  Interpretation I;
  I.general.insert_or_assign("P", Game::chor({Game::triv(true), Game::triv(false)}));
  Session s(hybridize(prove(parse("P | ~P"), System::CL2)), I);
  s.machine_flush();
  Json st = session_state(s);
  CHECK(st["phase"] == "wait");
  CHECK(st["formula"] == "P | ~P");
  CHECK(st["run"].empty());
  CHECK(st["legal_moves"] == Json({"2.1", "2.2"}));
  CHECK_FALSE(st.contains("winner"));
  s.adversary_move("2.1");
  s.adversary_stop();
  st = session_state(s);
  CHECK(st["phase"] == "finished");
  CHECK(st["winner"] == "T");
  CHECK(st["run"].size() == 2);
}

TEST_CASE("family presets") {
  CHECK(family_presets("standard").size() == standard_game_presets().size());
  auto m1 = family_presets("molecules:m=1");
  REQUIRE(m1.size() == 2);
  CHECK(m1[0].second == molecule_game(1, "T"));
  CHECK(family_presets("molecules:m=2").size() == 4);
  CHECK(family_presets("irregular2").size() == 1);
  CHECK_THROWS(family_presets("nonsense"));
}
