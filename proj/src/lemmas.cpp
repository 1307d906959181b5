#include "cl2/lemmas.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cl2/calculus.hpp"
#include "cl2/classical.hpp"
#include "cl2/generate.hpp"
#include "cl2/legality_oracle.hpp"

namespace cl2 {

namespace {

constexpr int kAttempts = 60;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

bool chance(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Run concat(Run a, const Run& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::optional<Game> try_prefix(const Game& g, const Run& run) {
  if (first_illegal(g, run)) return std::nullopt;
  return prefix(g, run);
}

std::optional<Player> offender(const Game& g, const Run& run) {
  auto i = first_illegal(g, run);
  if (!i) return std::nullopt;
  return run[*i].player;
}

// Offender by the brute-force oracle: the last move of the shortest illegal
// prefix.
std::optional<Player> oracle_offender(const Game& g, const Run& run) {
  for (std::size_t k = 1; k <= run.size(); ++k)
    if (!oracle::is_legal(g, Run(run.begin(), run.begin() + static_cast<std::ptrdiff_t>(k)))) return run[k - 1].player;
  return std::nullopt;
}

std::string show(std::optional<Player> p) { return p ? to_string(*p) : "none"; }

// Inserts a move that is probably illegal somewhere in `run`.
void perturb(std::mt19937_64& rng, const Game& g, Run& run) {
  LabeledMove m{chance(rng, 0.5) ? Player::Top : Player::Bot, random_move_string(rng, 2)};
  auto opening = legal_moves(g);
  if (!opening.empty() && chance(rng, 0.5)) {
    m = pick(rng, opening);
    if (chance(rng, 0.5)) m.player = opponent(m.player);
  }
  run.insert(run.begin() + uniform(rng, 0, static_cast<int>(run.size())), m);
}

GenOptions formula_options(int connectives) {
  GenOptions o;
  o.max_connectives = connectives;
  o.max_arity = 2;
  return o;
}

std::string fresh_elem(const Formula& f, std::set<std::string> taken = {}) {
  auto used = elementary_names(f);
  used.insert(taken.begin(), taken.end());
  for (int i = 1;; ++i) {
    std::string name = "h" + std::to_string(i);
    if (!used.count(name)) return name;
  }
}

std::vector<std::pair<Occurrence, Occurrence>> general_pairs(const Formula& e) {
  std::vector<std::pair<Occurrence, Occurrence>> out;
  auto occs = surface_quasiatoms(e);
  for (const auto& a : occs)
    for (const auto& b : occs)
      if (a.kind == OccurrenceKind::General && b.kind == OccurrenceKind::General && a.subject.name() == b.subject.name() &&
          a.polarity == Polarity::Positive && b.polarity == Polarity::Negative)
        out.emplace_back(a, b);
  return out;
}

Formula hybridize_pair(const Formula& e, const Occurrence& pos, const Occurrence& neg, const std::string& elem) {
  Formula h = Formula::hybrid(pos.subject.name(), elem);
  return replace_at(replace_at(e, pos.spec, h), neg.spec, h);
}

// Parallel combination of small random formulas, so that general atoms
// tend to occur at the surface with both polarities; then some
// positive/negative pairs of surface general occurrences are turned into
// hybrid atoms.
Formula random_balanced(std::mt19937_64& rng) {
  GenOptions o = formula_options(2);
  std::vector<Formula> parts;
  for (int k = uniform(rng, 2, 3); k > 0; --k) {
    Formula f = random_formula(rng, o);
    parts.push_back(chance(rng, 0.4) ? Formula::neg(f) : f);
  }
  Formula e = parts[0];
  switch (uniform(rng, 0, 2)) {
    case 0: e = Formula::disj(parts); break;
    case 1: e = Formula::conj(parts); break;
    default:
      e = Formula::implies(parts[0], parts.size() == 2 ? parts[1] : Formula::disj({parts[1], parts[2]}));
  }
  int rounds = uniform(rng, 0, 2);
  for (int r = 0; r < rounds; ++r) {
    auto pairs = general_pairs(e);
    if (pairs.empty()) break;
    const auto& [pos, neg] = pick(rng, pairs);
    e = hybridize_pair(e, pos, neg, fresh_elem(e));
  }
  return e;
}

Interpretation random_interpretation(std::mt19937_64& rng, const Formula& f) {
  static const auto presets = standard_game_presets();
  Interpretation I;
  for (const auto& e : elementary_names(f)) I.elementary[e] = chance(rng, 0.5);
  for (const auto& g : general_names(dehybridize(f)))
    I.general.insert_or_assign(g, chance(rng, 0.5) ? pick(rng, presets).second : random_game(rng, 2, 2));
  return I;
}

std::optional<Occurrence> twin_of(const Formula& e, const Occurrence& occ) {
  for (auto& o : surface_quasiatoms(e))
    if (o.kind == OccurrenceKind::Hybrid && o.subject == occ.subject && o.spec != occ.spec) return o;
  return std::nullopt;
}

// A run of ⊥ moves at surface general and hybrid atoms, each hybrid move
// answered by the copy move at the twin occurrence, possibly after a delay.
Run random_manageable(std::mt19937_64& rng, const Formula& e, const Game& estar, int max_moves) {
  Run run;
  Game cur = estar;
  std::deque<LabeledMove> pending;
  auto flush_one = [&] {
    auto next = apply_move(cur, pending.front());
    if (next) cur = *next;
    run.push_back(pending.front());
    pending.pop_front();
  };
  int n = uniform(rng, 1, max_moves);
  for (int step = 0; step < n; ++step) {
    std::vector<std::pair<LabeledMove, MoveSplit>> options;
    for (auto& m : legal_moves(cur)) {
      if (m.player != Player::Bot) continue;
      auto split = split_move(e, m.move);
      if (split && (split->occurrence.kind == OccurrenceKind::General || split->occurrence.kind == OccurrenceKind::Hybrid))
        options.emplace_back(m, *split);
    }
    if (options.empty()) break;
    const auto& [m, split] = pick(rng, options);
    cur = *apply_move(cur, m);
    run.push_back(m);
    if (split.occurrence.kind == OccurrenceKind::Hybrid)
      if (auto t = twin_of(e, split.occurrence)) pending.push_back({Player::Top, t->spec.str() + split.suffix});
    while (!pending.empty() && chance(rng, 0.6)) flush_one();
  }
  while (!pending.empty()) flush_one();
  return run;
}

// Most cases should exercise a nonempty record; a few empty ones are kept.
bool interesting(std::mt19937_64& rng, const Run& run) { return !run.empty() || chance(rng, 0.1); }

bool manageable_legal(const Formula& e, const Game& estar, const Run& run) {
  return is_balanced(e) && is_manageable(run, e) && is_legal(estar, run);
}

bool top_owned_choice(const Occurrence& o) {
  return (o.kind == OccurrenceKind::ChandNode && o.polarity == Polarity::Negative) ||
         (o.kind == OccurrenceKind::ChorNode && o.polarity == Polarity::Positive);
}

bool bot_owned_choice(const Occurrence& o) {
  return (o.kind == OccurrenceKind::ChandNode && o.polarity == Polarity::Positive) ||
         (o.kind == OccurrenceKind::ChorNode && o.polarity == Polarity::Negative);
}

Game disj_of(const std::vector<Game>& gs) { return Game::disj(gs); }

std::vector<Game> random_games(std::mt19937_64& rng, int lo, int hi, int depth) {
  std::vector<Game> out;
  int n = uniform(rng, lo, hi);
  for (int i = 0; i < n; ++i) out.push_back(random_game(rng, depth, 2));
  return out;
}

using Check = std::optional<std::string>;

// ---------------------------------------------------------------------------
// Prefixation laws

Property prefixation() {
  Property p{"prefixation", "<Phi,Psi>A is defined iff <Psi><Phi>A is, and then they are equal", {}, {}};
  p.generate = [](std::mt19937_64& rng) -> std::optional<LemmaCase> {
    LemmaCase c;
    Game g = random_game(rng, 3, 3);
    Run run = random_legal_run(rng, g, 10);
    auto k = static_cast<std::ptrdiff_t>(uniform(rng, 0, static_cast<int>(run.size())));
    Run phi(run.begin(), run.begin() + k), psi(run.begin() + k, run.end());
    if (chance(rng, 0.3)) perturb(rng, g, psi);
    if (chance(rng, 0.15)) perturb(rng, g, phi);
    c.games = {g};
    c.runs = {phi, psi};
    return c;
  };
  p.check = [](const LemmaCase& c, std::size_t& checks) -> Check {
    const Game& g = c.games.at(0);
    const Run &phi = c.runs.at(0), &psi = c.runs.at(1);
    Run both = concat(phi, psi);
    bool joint = is_legal(g, both);
    auto after_phi = try_prefix(g, phi);
    bool stepwise = after_phi && is_legal(*after_phi, psi);
    ++checks;
    if (joint != stepwise) return "<Phi,Psi> legal: " + std::to_string(joint) + ", <Psi> legal in <Phi>A: " + std::to_string(stepwise);
    ++checks;
    if (joint != oracle::is_legal(g, both)) return "engine and oracle disagree on <Phi,Psi>";
    if (!joint) return std::nullopt;
    ++checks;
    Game lhs = prefix(g, both), rhs = prefix(*after_phi, psi);
    if (!(lhs == rhs)) return "<Phi,Psi>A = " + render(lhs) + " but <Psi><Phi>A = " + render(rhs);
    return std::nullopt;
  };
  return p;
}

Property negation() {
  Property p{"negation", "<Phi>~A = ~(<~Phi>A), with Phi legal in ~A iff ~Phi legal in A", {}, {}};
  p.generate = [](std::mt19937_64& rng) -> std::optional<LemmaCase> {
    LemmaCase c;
    Game a = random_game(rng, 3, 3);
    Run phi = random_legal_run(rng, Game::neg(a), 10);
    if (chance(rng, 0.25)) perturb(rng, Game::neg(a), phi);
    c.games = {a};
    c.runs = {phi};
    return c;
  };
  p.check = [](const LemmaCase& c, std::size_t& checks) -> Check {
    const Game& a = c.games.at(0);
    Game na = Game::neg(a);
    const Run& phi = c.runs.at(0);
    bool outer = is_legal(na, phi), inner = is_legal(a, negate_run(phi));
    ++checks;
    if (outer != inner) return "Phi legal in ~A: " + std::to_string(outer) + ", ~Phi legal in A: " + std::to_string(inner);
    ++checks;
    if (outer != oracle::is_legal(na, phi)) return "engine and oracle disagree on ~A";
    if (!outer) return std::nullopt;
    ++checks;
    Game lhs = prefix(na, phi), rhs = Game::neg(prefix(a, negate_run(phi)));
    if (!(lhs == rhs)) return "<Phi>~A = " + render(lhs) + " but ~(<~Phi>A) = " + render(rhs);
    return std::nullopt;
  };
  return p;
}

Property disjunction() {
  Property p{"disjunction", "<Phi>(A1 v..v An) = <Phi^1>A1 v..v <Phi^n>An", {}, {}};
  p.generate = [](std::mt19937_64& rng) -> std::optional<LemmaCase> {
    LemmaCase c;
    c.games = random_games(rng, 2, 3, 2);
    Run phi = random_legal_run(rng, disj_of(c.games), 10);
    if (chance(rng, 0.25)) perturb(rng, disj_of(c.games), phi);
    c.runs = {phi};
    return c;
  };
  p.check = [](const LemmaCase& c, std::size_t& checks) -> Check {
    if (c.games.size() < 2) return std::nullopt;
    Game d = disj_of(c.games);
    const Run& phi = c.runs.at(0);
    // Legality of a parallel disjunction by definition: every move addresses
    // a component and every projection is legal there.
    bool by_definition = true;
    for (const auto& m : phi) {
      bool addressed = false;
      for (std::size_t i = 1; i <= c.games.size(); ++i)
        addressed = addressed || m.move.rfind(std::to_string(i) + ".", 0) == 0;
      by_definition = by_definition && addressed;
    }
    std::vector<Run> parts;
    for (std::size_t i = 0; i < c.games.size(); ++i) {
      parts.push_back(project(phi, SpecPath({static_cast<int>(i + 1)})));
      by_definition = by_definition && oracle::is_legal(c.games[i], parts.back());
    }
    bool legal = is_legal(d, phi);
    ++checks;
    if (legal != by_definition) return "engine says legal=" + std::to_string(legal) + ", componentwise definition says " + std::to_string(by_definition);
    if (!legal) return std::nullopt;
    std::vector<Game> residuals;
    for (std::size_t i = 0; i < c.games.size(); ++i) residuals.push_back(prefix(c.games[i], parts[i]));
    ++checks;
    Game lhs = prefix(d, phi), rhs = disj_of(residuals);
    if (!(lhs == rhs)) return "<Phi>(A1 v..) = " + render(lhs) + " but componentwise " + render(rhs);
    return std::nullopt;
  };
  return p;
}

// ---------------------------------------------------------------------------
// Legality of interpreted hyperformulas

bool characterized_legal(const Formula& e, const Interpretation& I, const Run& run) {
  for (const auto& m : run) {
    auto split = split_move(e, m.move);
    if (!split || split->occurrence.kind == OccurrenceKind::Elementary) return false;
  }
  for (const auto& occ : surface_quasiatoms(e)) {
    if (occ.kind == OccurrenceKind::Elementary) continue;
    if (!oracle::is_legal(interpret(occ.subject, I), signed_project(run, e, occ.spec))) return false;
  }
  return true;
}

Property legality() {
  Property p{"legality",
             "Gamma is legal in E* iff every move is gamma.beta for a nonelementary quasiatom F at gamma with the signed "
             "projection legal in F*; checked against the brute-force oracle",
             {},
             {}};
  p.generate = [](std::mt19937_64& rng) -> std::optional<LemmaCase> {
    LemmaCase c;
    Formula e = random_balanced(rng);
    c.interpretation = random_interpretation(rng, e);
    Game estar = interpret(e, c.interpretation);
    Run run = random_legal_run(rng, estar, 8);
    if (chance(rng, 0.5)) perturb(rng, estar, run);
    c.formula = e;
    c.runs = {run};
    return c;
  };
  p.check = [](const LemmaCase& c, std::size_t& checks) -> Check {
    const Formula& e = *c.formula;
    const Run& run = c.runs.at(0);
    Game estar = interpret(e, c.interpretation);
    bool engine = is_legal(estar, run);
    bool brute = oracle::is_legal(estar, run);
    bool characterized = characterized_legal(e, c.interpretation, run);
    ++checks;
    if (engine != brute || engine != characterized)
      return "engine=" + std::to_string(engine) + " oracle=" + std::to_string(brute) +
             " characterization=" + std::to_string(characterized);
    try {
      auto runs = oracle::legal_runs(estar, 20000);
      bool listed = false;
      for (const auto& r : runs) listed = listed || r == run;
      ++checks;
      if (listed != engine) return "run is " + std::string(listed ? "" : "not ") + "in the enumerated legal runs, engine says " + std::to_string(engine);
    } catch (const std::length_error&) {
    }
    return std::nullopt;
  };
  return p;
}

// ---------------------------------------------------------------------------
// Manageability facts used by the strategy

Property choice_step() {
  Property p{"choice-step",
             "for an E-manageable legal Omega and a choice gamma.i owned by T: Omega is H-manageable and "
             "<Omega, T gamma.i>E* = <Omega>H*",
             {},
             {}};
  p.generate = [](std::mt19937_64& rng) -> std::optional<LemmaCase> {
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
      Formula e = random_balanced(rng);
      std::vector<Occurrence> targets;
      for (auto& o : surface_quasiatoms(e))
        if (top_owned_choice(o)) targets.push_back(o);
      if (targets.empty()) continue;
      LemmaCase c;
      c.formula = e;
      c.interpretation = random_interpretation(rng, e);
      c.runs = {random_manageable(rng, e, interpret(e, c.interpretation), 6)};
      if (!interesting(rng, c.runs[0])) continue;
      const auto& t = pick(rng, targets);
      c.specs = {t.spec};
      c.index = uniform(rng, 1, static_cast<int>(t.subject.arity()));
      return c;
    }
    return std::nullopt;
  };
  p.check = [](const LemmaCase& c, std::size_t& checks) -> Check {
    const Formula& e = *c.formula;
    const Run& omega = c.runs.at(0);
    Game estar = interpret(e, c.interpretation);
    auto occ = quasiatom_at(e, c.specs.at(0));
    if (!occ || !top_owned_choice(*occ) || c.index < 1 || c.index > static_cast<int>(occ->subject.arity())) return std::nullopt;
    if (!manageable_legal(e, estar, omega)) return std::nullopt;
    Formula h = replace_at(e, occ->spec, occ->subject.child(static_cast<std::size_t>(c.index - 1)));
    ++checks;
    if (auto r = is_manageable(omega, h); !r) return "Omega is not H-manageable: " + r.detail;
    Run extended = omega;
    extended.push_back({Player::Top, occ->spec.str() + std::to_string(c.index)});
    auto lhs = try_prefix(estar, extended);
    auto rhs = try_prefix(interpret(h, c.interpretation), omega);
    ++checks;
    if (!lhs) return "<Omega, T gamma.i> is illegal in E*";
    if (!rhs) return "Omega is illegal in H*";
    if (!(*lhs == *rhs)) return "<Omega, T gamma.i>E* = " + render(*lhs) + " but <Omega>H* = " + render(*rhs);
    return std::nullopt;
  };
  return p;
}

Property delay_illegality() {
  Property p{"delay-illegality",
             "if Delta is a P-delay of Gamma: Delta P-illegal implies Gamma P-illegal, and Gamma (~P)-illegal implies "
             "Delta (~P)-illegal",
             {},
             {}};
  p.generate = [](std::mt19937_64& rng) -> std::optional<LemmaCase> {
    LemmaCase c;
    Game g = random_game(rng, 3, 3);
    Run gamma = random_legal_run(rng, g, 10);
    int noise = uniform(rng, 0, 2);
    for (int i = 0; i < noise; ++i) perturb(rng, g, gamma);
    c.player = chance(rng, 0.5) ? Player::Top : Player::Bot;
    Run delta = gamma;
    int swaps = uniform(rng, 0, 2 * static_cast<int>(delta.size()));
    for (int i = 0; i + 1 < static_cast<int>(delta.size()) && swaps > 0; --swaps) {
      auto j = static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(delta.size()) - 2));
      if (delta[j].player == c.player && delta[j + 1].player != c.player) std::swap(delta[j], delta[j + 1]);
    }
    c.games = {g};
    c.runs = {gamma, delta};
    return c;
  };
  p.check = [](const LemmaCase& c, std::size_t& checks) -> Check {
    const Game& g = c.games.at(0);
    const Run &gamma = c.runs.at(0), &delta = c.runs.at(1);
    if (!is_delay(delta, gamma, c.player)) return std::nullopt;
    auto og = offender(g, gamma), od = offender(g, delta);
    ++checks;
    if (og != oracle_offender(g, gamma) || od != oracle_offender(g, delta))
      return "offender disagrees with the oracle (engine: Gamma " + show(og) + ", Delta " + show(od) + ")";
    ++checks;
    if (od == c.player && og != c.player) return "Delta is " + to_string(c.player) + "-illegal but Gamma's offender is " + show(og);
    ++checks;
    if (og == opponent(c.player) && od != opponent(c.player))
      return "Gamma is " + to_string(opponent(c.player)) + "-illegal but Delta's offender is " + show(od);
    return std::nullopt;
  };
  return p;
}

Property catch_up() {
  Property p{"catch-up",
             "merging a positive and a negative occurrence of P into P_q and appending the copy moves of Omega^nu then "
             "Omega^pi yields an H-manageable legal position",
             {},
             {}};
  p.generate = [](std::mt19937_64& rng) -> std::optional<LemmaCase> {
    for (int attempt = 0; attempt < 4 * kAttempts; ++attempt) {
      Formula e = random_balanced(rng);
      auto pairs = general_pairs(e);
      if (pairs.empty()) continue;
      const auto& [pos, neg] = pick(rng, pairs);
      LemmaCase c;
      c.formula = e;
      c.interpretation = random_interpretation(rng, e);
      c.runs = {random_manageable(rng, e, interpret(e, c.interpretation), 8)};
      Run touched = concat(project(c.runs[0], pos.spec), project(c.runs[0], neg.spec));
      if (!interesting(rng, touched)) continue;
      c.specs = {pos.spec, neg.spec};
      return c;
    }
    return std::nullopt;
  };
  p.check = [](const LemmaCase& c, std::size_t& checks) -> Check {
    const Formula& e = *c.formula;
    const Run& omega = c.runs.at(0);
    auto pos = quasiatom_at(e, c.specs.at(0));
    auto neg = quasiatom_at(e, c.specs.at(1));
    if (!pos || !neg || pos->kind != OccurrenceKind::General || neg->kind != OccurrenceKind::General ||
        pos->polarity != Polarity::Positive || neg->polarity != Polarity::Negative || !(pos->subject == neg->subject))
      return std::nullopt;
    Game estar = interpret(e, c.interpretation);
    if (!manageable_legal(e, estar, omega)) return std::nullopt;
    Formula h = hybridize_pair(e, *pos, *neg, fresh_elem(e));
    if (!is_balanced(h)) return std::nullopt;
    Run omega_pi = project(omega, pos->spec), omega_nu = project(omega, neg->spec);
    Run gamma = omega;
    for (const auto& m : omega_nu) gamma.push_back({Player::Top, pos->spec.str() + m.move});
    for (const auto& m : omega_pi) gamma.push_back({Player::Top, neg->spec.str() + m.move});
    ++checks;
    if (auto i = first_illegal(interpret(h, c.interpretation), gamma))
      return "catch-up position is illegal at move " + std::to_string(*i) + " of " + to_string(gamma);
    ++checks;
    if (auto r = is_manageable(gamma, h); !r)
      return "catch-up position " + to_string(gamma) + " is not H-manageable: " + r.detail;
    return std::nullopt;
  };
  return p;
}

Property classification() {
  Property p{"classification",
             "every legal B move from an E-manageable position is at a general atom, at a hybrid atom (answered by the "
             "copy move), or a choice owned by B, with the stated manageability and prefixation outcomes",
             {},
             {}};
  p.generate = [](std::mt19937_64& rng) -> std::optional<LemmaCase> {
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
      LemmaCase c;
      Formula e = random_balanced(rng);
      c.formula = e;
      c.interpretation = random_interpretation(rng, e);
      Game estar = interpret(e, c.interpretation);
      c.runs = {random_manageable(rng, e, estar, 6)};
      if (!interesting(rng, c.runs[0])) continue;
      auto moves = legal_moves(estar, c.runs[0]);
      if (std::any_of(moves.begin(), moves.end(), [](const LabeledMove& m) { return m.player == Player::Bot; })) return c;
    }
    return std::nullopt;
  };
  p.check = [](const LemmaCase& c, std::size_t& checks) -> Check {
    const Formula& e = *c.formula;
    const Run& omega = c.runs.at(0);
    Game estar = interpret(e, c.interpretation);
    if (!manageable_legal(e, estar, omega)) return std::nullopt;
    for (const auto& m : legal_moves(estar, omega)) {
      if (m.player != Player::Bot) continue;
      ++checks;
      auto split = split_move(e, m.move);
      if (!split) return "legal move B:" + m.move + " has no decomposition";
      const Occurrence& occ = split->occurrence;
      Run next = omega;
      next.push_back(m);
      if (occ.kind == OccurrenceKind::General) {
        if (!is_manageable(next, e)) return "general-atom move B:" + m.move + " breaks manageability";
      } else if (occ.kind == OccurrenceKind::Hybrid) {
        auto twin = twin_of(e, occ);
        if (!twin) return "hybrid atom at " + occ.spec.str() + " has no twin";
        next.push_back({Player::Top, twin->spec.str() + split->suffix});
        if (!is_legal(estar, next)) return "copy move after B:" + m.move + " is illegal";
        if (auto r = is_manageable(next, e); !r) return "copy move after B:" + m.move + " breaks manageability: " + r.detail;
      } else if (bot_owned_choice(occ)) {
        int i = 0;
        try {
          std::size_t used = 0;
          i = std::stoi(split->suffix, &used);
          if (used != split->suffix.size()) i = 0;
        } catch (const std::exception&) {
        }
        if (i < 1 || i > static_cast<int>(occ.subject.arity())) return "choice move B:" + m.move + " has a bad index";
        Formula h = replace_at(e, occ.spec, occ.subject.child(static_cast<std::size_t>(i - 1)));
        if (auto r = is_manageable(omega, h); !r) return "Omega is not H-manageable after B:" + m.move + ": " + r.detail;
        auto lhs = try_prefix(estar, next);
        auto rhs = try_prefix(interpret(h, c.interpretation), omega);
        if (!lhs || !rhs || !(*lhs == *rhs)) return "<Omega, B:" + m.move + ">E* differs from <Omega>H*";
      } else {
        return "legal move B:" + m.move + " falls in no case";
      }
    }
    return std::nullopt;
  };
  return p;
}

// ---------------------------------------------------------------------------
// Elementary monotonicity and finalization

Property monotonicity() {
  Property p{"monotonicity",
             "replacing a positive (negative) quasiatom of an elementary formula by one of greater (smaller) value does "
             "not decrease the formula's value",
             {},
             {}};
  p.generate = [](std::mt19937_64& rng) -> std::optional<LemmaCase> {
    GenOptions o;
    o.elementary = {"p", "q", "r"};
    o.general = {};
    o.choice = false;
    o.constants = true;
    o.max_connectives = 5;
    GenOptions small = o;
    small.max_connectives = 2;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
      Formula f = random_formula(rng, o);
      auto occs = surface_quasiatoms(f);
      if (occs.empty()) continue;
      LemmaCase c;
      c.formula = f;
      for (const auto& name : {"p", "q", "r"}) c.assignment[name] = chance(rng, 0.5);
      const auto& occ = pick(rng, occs);
      c.specs = {occ.spec};
      bool up = occ.polarity == Polarity::Positive;
      c.other = chance(rng, 0.3) ? (up ? Formula::top() : Formula::bot()) : random_formula(rng, small);
      bool g = evaluate(occ.subject, c.assignment), h = evaluate(*c.other, c.assignment);
      if (up ? g <= h : h <= g) return c;
    }
    return std::nullopt;
  };
  p.check = [](const LemmaCase& c, std::size_t& checks) -> Check {
    const Formula& f = *c.formula;
    auto occ = quasiatom_at(f, c.specs.at(0));
    if (!occ || !is_elementary(f) || !is_elementary(*c.other)) return std::nullopt;
    bool g = evaluate(occ->subject, c.assignment), h = evaluate(*c.other, c.assignment);
    if (occ->polarity == Polarity::Positive ? g > h : h > g) return std::nullopt;
    Formula fh = replace_at(f, occ->spec, *c.other);
    bool before = evaluate(f, c.assignment), after = evaluate(fh, c.assignment);
    ++checks;
    if (before && !after) return "value drops from T to F: " + render(fh);
    Interpretation I;
    I.elementary = c.assignment;
    ++checks;
    if (final_value(interpret(f, I)) != before || final_value(interpret(fh, I)) != after)
      return "game value disagrees with classical evaluation";
    return std::nullopt;
  };
  return p;
}

Property final_negation() {
  Property p{"final-negation", "for Gamma legal in ~A: Wn of ~A at Gamma is the opposite of Wn of A at ~Gamma", {}, {}};
  p.generate = [](std::mt19937_64& rng) -> std::optional<LemmaCase> {
    LemmaCase c;
    c.games = {random_game(rng, 3, 3)};
    c.runs = {random_legal_run(rng, Game::neg(c.games[0]), 10)};
    return c;
  };
  p.check = [](const LemmaCase& c, std::size_t& checks) -> Check {
    Game na = Game::neg(c.games.at(0));
    const Run& gamma = c.runs.at(0);
    if (!is_legal(na, gamma)) return std::nullopt;
    Player lhs = winner(na, gamma), rhs = opponent(winner(c.games[0], negate_run(gamma)));
    ++checks;
    if (lhs != rhs) return "Wn(~A, Gamma) = " + to_string(lhs) + " but ~Wn(A, ~Gamma) = " + to_string(rhs);
    ++checks;
    if (lhs != oracle::winner_of_legal(na, gamma)) return "winner disagrees with the oracle";
    return std::nullopt;
  };
  return p;
}

Property final_disjunction() {
  Property p{"final-disjunction", "for Gamma legal in A1 v..v An: Wn is T iff some Wn(Ai, Gamma^i) is T", {}, {}};
  p.generate = [](std::mt19937_64& rng) -> std::optional<LemmaCase> {
    LemmaCase c;
    c.games = random_games(rng, 2, 3, 2);
    c.runs = {random_legal_run(rng, disj_of(c.games), 10)};
    return c;
  };
  p.check = [](const LemmaCase& c, std::size_t& checks) -> Check {
    if (c.games.size() < 2) return std::nullopt;
    Game d = disj_of(c.games);
    const Run& gamma = c.runs.at(0);
    if (!is_legal(d, gamma)) return std::nullopt;
    bool any = false;
    for (std::size_t i = 0; i < c.games.size(); ++i)
      any = any || winner(c.games[i], project(gamma, SpecPath({static_cast<int>(i + 1)}))) == Player::Top;
    Player lhs = winner(d, gamma);
    ++checks;
    if ((lhs == Player::Top) != any) return "Wn of the disjunction is " + to_string(lhs) + " but componentwise " + (any ? "T" : "B");
    ++checks;
    if (lhs != oracle::winner_of_legal(d, gamma)) return "winner disagrees with the oracle";
    return std::nullopt;
  };
  return p;
}

Property final_choice() {
  Property p{"final-choice", "at the empty run, A1 n..n An is won by T and A1 u..u An by B", {}, {}};
  p.generate = [](std::mt19937_64& rng) -> std::optional<LemmaCase> {
    LemmaCase c;
    c.games = random_games(rng, 2, 4, 2);
    return c;
  };
  p.check = [](const LemmaCase& c, std::size_t& checks) -> Check {
    if (c.games.size() < 2) return std::nullopt;
    Game conj = Game::chand(c.games), disj = Game::chor(c.games);
    ++checks;
    if (winner(conj, {}) != Player::Top || !final_value(conj)) return "choice conjunction is not won by T at <>";
    ++checks;
    if (winner(disj, {}) != Player::Bot || final_value(disj)) return "choice disjunction is not won by B at <>";
    ++checks;
    if (oracle::winner_of_legal(conj, {}) != Player::Top || oracle::winner_of_legal(disj, {}) != Player::Bot)
      return "oracle disagrees at <>";
    return std::nullopt;
  };
  return p;
}

// Stable balanced hyperformulas: conclusions of Rule (a) nodes in CL2°
// proofs, or random balanced formulas that happen to be stable.
std::optional<Formula> random_stable(std::mt19937_64& rng) {
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    if (chance(rng, 0.5)) {
      Formula e = random_balanced(rng);
      if (is_stable(e)) return e;
      continue;
    }
    Formula f = random_formula(rng, formula_options(4));
    auto proof = prove(f, System::CL2);
    if (!proof) continue;
    std::vector<Formula> leaves;
    for_each_node(hybridize(proof), [&](const ProofNode& n) {
      if (n.rule == Rule::A) leaves.push_back(n.conclusion);
    });
    if (!leaves.empty()) return pick(rng, leaves);
  }
  return std::nullopt;
}

Property manageable_win() {
  Property p{"manageable-win", "every E-manageable legal run of E* is won by T when E is stable and balanced", {}, {}};
  p.generate = [](std::mt19937_64& rng) -> std::optional<LemmaCase> {
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
      auto e = random_stable(rng);
      if (!e) return std::nullopt;
      LemmaCase c;
      c.formula = *e;
      c.interpretation = random_interpretation(rng, *e);
      c.runs = {random_manageable(rng, *e, interpret(*e, c.interpretation), 8)};
      if (interesting(rng, c.runs[0])) return c;
    }
    return std::nullopt;
  };
  p.check = [](const LemmaCase& c, std::size_t& checks) -> Check {
    const Formula& e = *c.formula;
    Game estar = interpret(e, c.interpretation);
    if (!is_stable(e) || !manageable_legal(e, estar, c.runs.at(0))) return std::nullopt;
    ++checks;
    if (winner(estar, c.runs[0]) != Player::Top) return "manageable legal run is lost by T";
    return std::nullopt;
  };
  return p;
}

// ---------------------------------------------------------------------------
// Shrinking

std::vector<Game> game_shrinks(const Game& g) {
  std::vector<Game> out;
  if (g.kind() == GameKind::Triv) return out;
  out.push_back(Game::triv(true));
  out.push_back(Game::triv(false));
  for (const auto& c : g.children()) out.push_back(c);
  if (g.arity() > 1)
    for (std::size_t i = 0; i < g.arity(); ++i) {
      std::vector<Game> rest;
      for (std::size_t j = 0; j < g.arity(); ++j)
        if (j != i) rest.push_back(g.child(j));
      out.push_back(Game::make(g.kind(), std::move(rest)));
    }
  for (std::size_t i = 0; i < g.arity(); ++i)
    for (auto& s : game_shrinks(g.child(i))) out.push_back(g.with_child(i, std::move(s)));
  return out;
}

std::vector<Formula> formula_shrinks(const Formula& f) {
  std::vector<Formula> out;
  if (f.is_atom() || f.is_constant()) return out;
  for (const auto& c : f.children()) out.push_back(c);
  if (f.arity() > 2 && f.kind() != NodeKind::Implies)
    for (std::size_t i = 0; i < f.arity(); ++i) {
      std::vector<Formula> rest;
      for (std::size_t j = 0; j < f.arity(); ++j)
        if (j != i) rest.push_back(f.child(j));
      out.push_back(Formula::make(f.kind(), std::move(rest)));
    }
  for (std::size_t i = 0; i < f.arity(); ++i)
    for (auto& s : formula_shrinks(f.child(i))) out.push_back(f.with_child(i, std::move(s)));
  return out;
}

std::optional<std::string> safe_check(const Property& p, const LemmaCase& c, std::size_t& checks) {
  try {
    return p.check(c, checks);
  } catch (const std::exception& e) {
    return std::string("exception: ") + e.what();
  }
}

}  // namespace

std::string describe(const LemmaCase& c) {
  std::ostringstream out;
  const char* sep = "";
  auto field = [&](const char* name) -> std::ostream& {
    out << sep << name << ": ";
    sep = "; ";
    return out;
  };
  if (!c.games.empty()) {
    field("games");
    for (std::size_t i = 0; i < c.games.size(); ++i) out << (i ? ", " : "") << render(c.games[i]);
  }
  if (c.formula) field("formula") << render(*c.formula);
  if (c.other) field("other") << render(*c.other);
  if (!c.interpretation.elementary.empty() || !c.interpretation.general.empty()) {
    field("interpretation");
    for (const auto& [k, v] : c.interpretation.elementary) out << k << "=" << (v ? "T" : "F") << " ";
    for (const auto& [k, v] : c.interpretation.general) out << k << "=" << render(v) << " ";
  }
  if (!c.assignment.empty()) {
    field("assignment");
    for (const auto& [k, v] : c.assignment) out << k << "=" << (v ? "T" : "F") << " ";
  }
  if (!c.runs.empty()) {
    field("runs");
    for (std::size_t i = 0; i < c.runs.size(); ++i) out << (i ? ", " : "") << to_string(c.runs[i]);
  }
  if (!c.specs.empty()) {
    field("specs");
    for (std::size_t i = 0; i < c.specs.size(); ++i) out << (i ? ", " : "") << '"' << c.specs[i].str() << '"';
  }
  field("player") << to_string(c.player);
  if (c.index) field("index") << c.index;
  return out.str();
}

std::vector<LemmaCase> shrink_candidates(const LemmaCase& c) {
  std::vector<LemmaCase> out;
  for (std::size_t r = 0; r < c.runs.size(); ++r)
    for (std::size_t j = 0; j < c.runs[r].size(); ++j) {
      LemmaCase s = c;
      s.runs[r].erase(s.runs[r].begin() + static_cast<std::ptrdiff_t>(j));
      out.push_back(std::move(s));
    }
  if (c.runs.size() > 1)
    for (Player pl : {Player::Top, Player::Bot})
      for (std::size_t k = 0;; ++k) {
        LemmaCase s = c;
        bool any = false;
        for (auto& run : s.runs) {
          std::size_t seen = 0;
          for (auto it = run.begin(); it != run.end(); ++it)
            if (it->player == pl && seen++ == k) {
              run.erase(it);
              any = true;
              break;
            }
        }
        if (!any) break;
        out.push_back(std::move(s));
      }
  for (std::size_t i = 0; i < c.games.size(); ++i) {
    if (c.games.size() > 1) {
      LemmaCase s = c;
      s.games.erase(s.games.begin() + static_cast<std::ptrdiff_t>(i));
      out.push_back(std::move(s));
    }
    for (auto& g : game_shrinks(c.games[i])) {
      LemmaCase s = c;
      s.games[i] = std::move(g);
      out.push_back(std::move(s));
    }
  }
  for (const auto& [name, game] : c.interpretation.general)
    for (auto& g : game_shrinks(game)) {
      LemmaCase s = c;
      s.interpretation.general.insert_or_assign(name, std::move(g));
      out.push_back(std::move(s));
    }
  if (c.formula)
    for (auto& f : formula_shrinks(*c.formula)) {
      LemmaCase s = c;
      s.formula = std::move(f);
      out.push_back(std::move(s));
    }
  if (c.other)
    for (auto& f : formula_shrinks(*c.other)) {
      LemmaCase s = c;
      s.other = std::move(f);
      out.push_back(std::move(s));
    }
  return out;
}

LemmaCase minimize(const Property& p, LemmaCase c, std::size_t* steps) {
  std::size_t taken = 0;
  std::size_t scratch = 0;
  auto first = safe_check(p, c, scratch);
  if (!first) return c;
  bool exception = first->rfind("exception:", 0) == 0;
  for (bool progress = true; progress && taken < 500;) {
    progress = false;
    for (auto& s : shrink_candidates(c)) {
      auto msg = safe_check(p, s, scratch);
      if (msg && (msg->rfind("exception:", 0) == 0) == exception) {
        c = std::move(s);
        ++taken;
        progress = true;
        break;
      }
    }
  }
  if (steps) *steps = taken;
  return c;
}

SuiteReport run_property(const Property& p, std::size_t cases, std::uint64_t seed) {
  auto started = std::chrono::steady_clock::now();
  SuiteReport report;
  report.suite = p.name;
  report.description = p.description;
  report.seed = seed;
  report.cases = cases;
  for (std::size_t i = 0; i < cases; ++i) {
    std::uint64_t s = splitmix(seed ^ splitmix(i));
    std::mt19937_64 rng(s);
    std::optional<LemmaCase> c;
    try {
      c = p.generate(rng);
    } catch (const std::exception& e) {
      ++report.violations;
      if (report.counterexamples.size() < 3)
        report.counterexamples.push_back({i, s, "(generator)", "(generator)", std::string("exception: ") + e.what(), 0});
      continue;
    }
    if (!c) {
      ++report.vacuous;
      continue;
    }
    std::size_t checks = 0;
    auto msg = safe_check(p, *c, checks);
    report.checks += checks;
    if (!msg) {
      if (checks == 0) ++report.vacuous;
      continue;
    }
    ++report.violations;
    if (report.counterexamples.size() < 3) {
      Counterexample cx{i, s, describe(*c), {}, {}, 0};
      LemmaCase small = minimize(p, *c, &cx.shrink_steps);
      std::size_t scratch = 0;
      cx.minimized = describe(small);
      cx.message = safe_check(p, small, scratch).value_or(*msg);
      report.counterexamples.push_back(std::move(cx));
    }
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

const std::vector<Property>& lemma_suites() {
  static const std::vector<Property> suites{prefixation(),  negation(),       disjunction(),    legality(),
                                            choice_step(),  delay_illegality(), catch_up(),     classification(),
                                            monotonicity(), final_negation(), final_disjunction(), final_choice(),
                                            manageable_win()};
  return suites;
}

const Property* find_lemma_suite(const std::string& name) {
  for (const auto& p : lemma_suites())
    if (p.name == name) return &p;
  return nullptr;
}

SuiteReport run_lemma_suite(const std::string& name, std::size_t cases, std::uint64_t seed) {
  const Property* p = find_lemma_suite(name);
  if (!p) throw std::invalid_argument("unknown lemma suite '" + name + "'");
  return run_property(*p, cases, seed);
}

}  // namespace cl2
