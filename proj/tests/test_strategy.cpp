#include <random>

#include "cl2/generate.hpp"
#include "cl2/strategy.hpp"
#include "doctest.h"

using namespace cl2;

namespace {

const Game T = Game::triv(true);
const Game F = Game::triv(false);

ProofPtr circ(const char* text) {
  auto p = prove(parse(text), System::CL2);
  REQUIRE(p);
  return hybridize(p);
}

Interpretation with_general(const std::string& atom, Game g) {
  Interpretation I;
  I.general.insert_or_assign(atom, std::move(g));
  return I;
}

std::vector<std::string> moves_of(const std::vector<LabeledMove>& ms) {
  std::vector<std::string> out;
  for (const auto& m : ms) out.push_back(m.move);
  return out;
}

}  // namespace

TEST_CASE("new_session") {
  Session s(circ("P | ~P"), with_general("P", Game::chand({T, F})));
  CHECK(s.hyperformula() == parse("P | ~P"));
  CHECK(s.omega().empty());
  CHECK(s.theta().empty());
  CHECK(s.phase() == Phase::MainLoop);
  CHECK_THROWS_AS(Session(prove(parse("P | ~P"), System::CL2), with_general("P", T)), std::invalid_argument);
  CHECK_THROWS_AS(Session(circ("P | ~P"), Interpretation{}), UnmappedAtom);
  Interpretation I;
  I.elementary["p"] = true;
  Session e(circ("p | ~p"), I);
  CHECK(e.machine_flush().empty());
  CHECK(e.phase() == Phase::InnerWait);
  CHECK(e.cursor().rule == Rule::A);
}

TEST_CASE("machine_flush") {
  Session s(circ("P | ~P"), with_general("P", Game::chand({T, F})));
  CHECK(s.machine_flush().empty());
  CHECK(s.hyperformula().kind() == NodeKind::Or);
  CHECK(s.hyperformula().child(0).kind() == NodeKind::HybridAtom);
  CHECK(s.phase() == Phase::InnerWait);
  CHECK_THROWS_AS(s.machine_flush(), PhaseError);

  Interpretation I;
  I.elementary = {{"p", true}, {"q", false}};
  Session b(circ("(p * q) -> (p * q)"), I);
  REQUIRE(b.cursor().rule == Rule::A);
  // ⊥ resolves the consequent's ⊓; the premise is a Rule (b) node with
  // detail (1., 1), so ⊤ answers in the antecedent.
  b.machine_flush();
  auto out = b.adversary_move("2.1");
  CHECK(out.subcase == 3);
  CHECK(b.phase() == Phase::MainLoop);
  REQUIRE(b.cursor().rule == Rule::B);
  CHECK(std::get<RuleBDetail>(b.cursor().detail) == RuleBDetail{SpecPath::parse("1."), 1});
  CHECK(moves_of(b.machine_flush()) == std::vector<std::string>{"1.1"});
  CHECK(b.adversary_stop() == Player::Top);
  CHECK(b.violations().empty());
}

TEST_CASE("adversary_move subcases") {
  // ⊥ owns the negative occurrence's choices when P is a ⊔-game.
  Session s(circ("P | ~P"), with_general("P", Game::chor({T, F})));
  s.machine_flush();
  auto out = s.adversary_move("2.1");
  CHECK(out.subcase == 2);
  CHECK(moves_of(out.replies) == std::vector<std::string>{"1.1"});
  CHECK(s.omega() == Run{{Player::Bot, "2.1"}, {Player::Top, "1.1"}});
  CHECK(is_manageable(s.omega(), s.hyperformula()));
  CHECK(s.adversary_stop() == Player::Top);
  CHECK(s.violations().empty());

  Session g(circ("P & P -> P"), with_general("P", Game::chor({T, F})));
  g.machine_flush();
  REQUIRE(g.hyperformula().kind() == NodeKind::Implies);
  // The consequent and one antecedent conjunct are the hybrid pair; the other
  // conjunct stays general.
  std::string general_spec;
  for (const auto& o : surface_quasiatoms(g.hyperformula()))
    if (o.kind == OccurrenceKind::General) general_spec = o.spec.str();
  REQUIRE(!general_spec.empty());
  auto o1 = g.adversary_move(general_spec + "1");
  CHECK(o1.subcase == 1);
  CHECK(o1.replies.empty());
  CHECK(g.phase() == Phase::InnerWait);

  Session bad(circ("P | ~P"), with_general("P", Game::chand({T, F})));
  bad.machine_flush();
  auto o4 = bad.adversary_move("7.3");
  CHECK(o4.subcase == 4);
  CHECK_FALSE(o4.accepted);
  CHECK(bad.phase() == Phase::Finished);
  CHECK(bad.result() == Player::Top);
  CHECK_THROWS_AS(bad.adversary_move("1.1"), PhaseError);
}

TEST_CASE("adversary_stop") {
  Session s(circ("P | ~P"), with_general("P", Game::chand({T, F})));
  s.machine_flush();
  CHECK(s.adversary_stop() == Player::Top);
  CHECK_THROWS_AS(s.adversary_stop(), PhaseError);

  // Negative control: a corrupted record lets ⊥ win and is reported.
  Session c(circ("P | ~P"), with_general("P", Game::chand({T, F})));
  c.machine_flush();
  c.adversary_move("1.2");
  c.inject_machine_move("2.2");
  CHECK(c.adversary_stop() == Player::Bot);
  CHECK_FALSE(c.violations().empty());
}

TEST_CASE("playout") {
  auto g = Game::chand({T, F});
  auto r = playout(circ("P | ~P"), with_general("P", g), ScriptedPolicy{{"1.1"}});
  CHECK(moves_of(r.machine_moves) == std::vector<std::string>{"2.1"});
  CHECK(r.winner == Player::Top);
  Interpretation I;
  I.elementary["p"] = true;
  CHECK(playout(circ("p | ~p"), I, ScriptedPolicy{}).winner == Player::Top);
  auto blass = circ("P -> P * P");
  for (auto script : std::vector<std::vector<std::string>>{{}, {"2.1"}, {"2.2"}, {"2.1", "1.1"}, {"2.2", "1.2"}, {"2.1", "1.2"}}) {
    auto res = playout(blass, with_general("P", g), ScriptedPolicy{script});
    CHECK(res.winner == Player::Top);
    CHECK(res.violations.empty());
  }
  std::size_t calls = 0;
  auto ext = playout(circ("P | ~P"), with_general("P", g), ExternalPolicy{[&](const Session& s) -> std::optional<std::string> {
                       if (calls++) return std::nullopt;
                       return s.adversary_options().front();
                     }});
  CHECK(ext.winner == Player::Top);
}

TEST_CASE("random playouts are won and keep the invariant") {
  std::mt19937_64 rng(7);
  GenOptions opt;
  opt.max_connectives = 4;
  auto presets = standard_game_presets();
  int played = 0;
  for (int i = 0; i < 4000 && played < 120; ++i) {
    Formula f = random_formula(rng, opt);
    auto p = prove(f, System::CL2);
    if (!p) continue;
    ++played;
    auto hp = hybridize(p);
    auto fam = interpretation_family(f, presets);
    for (std::size_t k = 0; k < fam.size(); k += 3) {
      auto r = playout(hp, fam[k], RandomPolicy{rng(), 0.1});
      CHECK_MESSAGE(r.winner == Player::Top, render(f), " ", to_string(r.run));
      CHECK(r.violations.empty());
    }
  }
  CHECK(played >= 40);
}

TEST_CASE("machine moves do not depend on the interpretation") {
  auto hp = circ("P -> P * P");
  std::vector<std::string> script{"2.1", "1.1"};
  auto a = playout(hp, with_general("P", molecule_game(2, "TF")), ScriptedPolicy{script});
  auto b = playout(hp, with_general("P", molecule_game(2, "FT")), ScriptedPolicy{script});
  CHECK(a.machine_moves == b.machine_moves);
}

TEST_CASE("verify_all") {
  std::vector<Interpretation> m2;
  for (const char* leaves : {"TT", "TF", "FT", "FF"}) m2.push_back(with_general("P", molecule_game(2, leaves)));
  auto r = verify_all(parse("P | ~P"), m2);
  CHECK(r.passed());
  CHECK(r.branches > 4);
  CHECK(verify_all(parse("P & P -> P"), m2).passed());
  std::vector<Interpretation> m1{with_general("P", molecule_game(1, "T")), with_general("P", molecule_game(1, "F"))};
  CHECK(verify_all(parse("P | ~P"), m1).passed());
  auto blass = parse("(P & Q) | (R & S) -> (P | R) & (Q | S)");
  auto fam = interpretation_family(blass, {{"m1T", molecule_game(1, "T")}, {"m1F", molecule_game(1, "F")}});
  auto rb = verify_all(blass, fam);
  CHECK(rb.passed());
  CHECK(rb.interpretations == 2);
  CHECK_THROWS_AS(verify_all(parse("P -> P & P"), m2), std::invalid_argument);
}

TEST_CASE("memoized exploration matches the plain tree walk") {
  std::mt19937_64 rng(21);
  GenOptions opt;
  opt.max_connectives = 4;
  auto presets = standard_game_presets();
  int checked = 0;
  for (int i = 0; i < 3000 && checked < 60; ++i) {
    Formula f = random_formula(rng, opt);
    if (!contains_general(f) || !decide(f, System::CL2)) continue;
    ++checked;
    auto fam = interpretation_family(f, presets);
    VerifyOptions plain;
    plain.memoize = false;
    auto a = verify_all(f, fam);
    auto b = verify_all(f, fam, plain);
    CHECK(a.branches == b.branches);
    CHECK(a.top_wins == b.top_wins);
    CHECK(a.passed());
  }
  CHECK(checked >= 30);
}
