#include "cl2/games.hpp"

#include <algorithm>
#include <charconv>
#include <regex>

namespace cl2 {

std::string to_string(Player p) { return p == Player::Top ? "T" : "B"; }

std::string to_string(const Run& run) {
  std::string out = "<";
  for (std::size_t i = 0; i < run.size(); ++i) {
    if (i) out += ", ";
    out += to_string(run[i].player);
    out += ':';
    out += run[i].move;
  }
  return out + ">";
}

Run negate_run(const Run& run) {
  Run out = run;
  for (auto& m : out) m.player = opponent(m.player);
  return out;
}

// ---------------------------------------------------------------------------
// Game

Game Game::triv(bool value) {
  static const Game t(std::make_shared<const Node>(Node{GameKind::Triv, true, {}}));
  static const Game f(std::make_shared<const Node>(Node{GameKind::Triv, false, {}}));
  return value ? t : f;
}

Game Game::neg(Game child) { return make(GameKind::Neg, {std::move(child)}); }

Game Game::make(GameKind kind, std::vector<Game> children) {
  if (kind == GameKind::Triv) throw std::invalid_argument("use Game::triv for trivial games");
  if (kind == GameKind::Neg && children.size() != 1) throw std::invalid_argument("game negation takes one operand");
  if (children.empty()) throw std::invalid_argument("game connective needs at least one operand");
  return Game(std::make_shared<const Node>(Node{kind, false, std::move(children)}));
}

Game Game::with_child(std::size_t i, Game replacement) const {
  std::vector<Game> c(node_->children.begin(), node_->children.end());
  c.at(i) = std::move(replacement);
  return make(kind(), std::move(c));
}

bool operator==(const Game& a, const Game& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  if (a.kind() == GameKind::Triv) return a.value() == b.value();
  auto ca = a.children(), cb = b.children();
  return std::equal(ca.begin(), ca.end(), cb.begin(), cb.end());
}

std::string render(const Game& g) {
  const char* op = nullptr;
  switch (g.kind()) {
    case GameKind::Triv: return g.value() ? "T" : "F";
    case GameKind::Neg: op = "neg"; break;
    case GameKind::And: op = "and"; break;
    case GameKind::Or: op = "or"; break;
    case GameKind::Chand: op = "chand"; break;
    case GameKind::Chor: op = "chor"; break;
  }
  std::string out = op;
  out += '(';
  for (std::size_t i = 0; i < g.arity(); ++i) {
    if (i) out += ',';
    out += render(g.child(i));
  }
  return out + ")";
}

Game interpret(const Formula& f, const Interpretation& I) {
  switch (f.kind()) {
    case NodeKind::ElemAtom: {
      auto it = I.elementary.find(f.name());
      if (it == I.elementary.end()) throw UnmappedAtom("no interpretation for elementary atom " + f.name());
      return Game::triv(it->second);
    }
    case NodeKind::GeneralAtom:
    case NodeKind::HybridAtom: {
      auto it = I.general.find(f.name());
      if (it == I.general.end()) throw UnmappedAtom("no interpretation for general atom " + f.name());
      return it->second;
    }
    case NodeKind::Top: return Game::triv(true);
    case NodeKind::Bot: return Game::triv(false);
    case NodeKind::Neg: return Game::neg(interpret(f.child(0), I));
    case NodeKind::Implies:
      return Game::disj({Game::neg(interpret(f.child(0), I)), interpret(f.child(1), I)});
    default: {
      std::vector<Game> c;
      for (const auto& ch : f.children()) c.push_back(interpret(ch, I));
      GameKind k = f.kind() == NodeKind::And   ? GameKind::And
                   : f.kind() == NodeKind::Or  ? GameKind::Or
                   : f.kind() == NodeKind::Chand ? GameKind::Chand
                                                 : GameKind::Chor;
      return Game::make(k, std::move(c));
    }
  }
}

// ---------------------------------------------------------------------------
// Legality and prefixation

IllegalPosition::IllegalPosition(std::size_t index, const LabeledMove& move)
    : std::runtime_error("illegal move #" + std::to_string(index) + " " + to_string(move.player) + ":" + move.move),
      index_(index),
      move_(move) {}

namespace {

// Parses a positive decimal index without leading zeros.
std::optional<std::size_t> read_index(std::string_view s) {
  if (s.empty() || s.front() == '0') return std::nullopt;
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

Player choice_owner(GameKind k, bool negative) {
  bool bot_owns = (k == GameKind::Chand) != negative;
  return bot_owns ? Player::Bot : Player::Top;
}

std::optional<Game> apply_rec(const Game& g, Player player, std::string_view move, bool negative) {
  switch (g.kind()) {
    case GameKind::Triv:
      return std::nullopt;
    case GameKind::Neg: {
      auto c = apply_rec(g.child(0), player, move, !negative);
      if (!c) return std::nullopt;
      return Game::neg(std::move(*c));
    }
    case GameKind::And:
    case GameKind::Or: {
      auto dot = move.find('.');
      if (dot == std::string_view::npos) return std::nullopt;
      auto i = read_index(move.substr(0, dot));
      if (!i || *i > g.arity()) return std::nullopt;
      auto c = apply_rec(g.child(*i - 1), player, move.substr(dot + 1), negative);
      if (!c) return std::nullopt;
      return g.with_child(*i - 1, std::move(*c));
    }
    case GameKind::Chand:
    case GameKind::Chor: {
      auto i = read_index(move);
      if (!i || *i > g.arity()) return std::nullopt;
      if (choice_owner(g.kind(), negative) != player) return std::nullopt;
      return g.child(*i - 1);
    }
  }
  return std::nullopt;
}

void collect_moves(const Game& g, std::string& prefix, bool negative, std::vector<LabeledMove>& out) {
  switch (g.kind()) {
    case GameKind::Triv:
      return;
    case GameKind::Neg:
      collect_moves(g.child(0), prefix, !negative, out);
      return;
    case GameKind::And:
    case GameKind::Or:
      for (std::size_t i = 0; i < g.arity(); ++i) {
        auto len = prefix.size();
        prefix += std::to_string(i + 1);
        prefix += '.';
        collect_moves(g.child(i), prefix, negative, out);
        prefix.resize(len);
      }
      return;
    case GameKind::Chand:
    case GameKind::Chor: {
      Player owner = choice_owner(g.kind(), negative);
      for (std::size_t i = 0; i < g.arity(); ++i) out.push_back({owner, prefix + std::to_string(i + 1)});
      return;
    }
  }
}

}  // namespace

std::optional<Game> apply_move(const Game& g, const LabeledMove& m) { return apply_rec(g, m.player, m.move, false); }

std::optional<std::size_t> first_illegal(const Game& g, const Run& run) {
  Game cur = g;
  for (std::size_t i = 0; i < run.size(); ++i) {
    auto next = apply_move(cur, run[i]);
    if (!next) return i;
    cur = std::move(*next);
  }
  return std::nullopt;
}

bool is_legal(const Game& g, const Run& run) { return !first_illegal(g, run); }

Game prefix(const Game& g, const Run& position) {
  Game cur = g;
  for (std::size_t i = 0; i < position.size(); ++i) {
    auto next = apply_move(cur, position[i]);
    if (!next) throw IllegalPosition(i, position[i]);
    cur = std::move(*next);
  }
  return cur;
}

std::vector<LabeledMove> legal_moves(const Game& g, const Run& position) {
  Game residual = prefix(g, position);
  std::vector<LabeledMove> out;
  std::string buf;
  collect_moves(residual, buf, false, out);
  return out;
}

bool final_value(const Game& g) {
  switch (g.kind()) {
    case GameKind::Triv: return g.value();
    case GameKind::Chand: return true;
    case GameKind::Chor: return false;
    case GameKind::Neg: return !final_value(g.child(0));
    case GameKind::And:
      return std::all_of(g.children().begin(), g.children().end(), [](const Game& c) { return final_value(c); });
    case GameKind::Or:
      return std::any_of(g.children().begin(), g.children().end(), [](const Game& c) { return final_value(c); });
  }
  return false;
}

Player winner(const Game& g, const Run& run) {
  Game cur = g;
  for (const auto& m : run) {
    auto next = apply_move(cur, m);
    if (!next) return opponent(m.player);
    cur = std::move(*next);
  }
  return final_value(cur) ? Player::Top : Player::Bot;
}

// ---------------------------------------------------------------------------
// Runs

Run project(const Run& run, const SpecPath& gamma) {
  std::string s = gamma.str();
  Run out;
  for (const auto& m : run)
    if (m.move.compare(0, s.size(), s) == 0) out.push_back({m.player, m.move.substr(s.size())});
  return out;
}

Run project_out(const Run& run, const SpecPath& gamma) {
  std::string s = gamma.str();
  Run out;
  for (const auto& m : run)
    if (m.move.compare(0, s.size(), s) != 0) out.push_back(m);
  return out;
}

Run signed_project(const Run& run, const Formula& f, const SpecPath& gamma) {
  auto occ = quasiatom_at(f, gamma);
  if (!occ) throw SpecError("'" + gamma.str() + "' does not address a quasiatom of " + cl2::render(f));
  Run r = project(run, gamma);
  return occ->polarity == Polarity::Negative ? negate_run(r) : r;
}

bool is_delay(const Run& delta, const Run& gamma, Player p) {
  if (delta.size() != gamma.size()) return false;
  // For the n-th ℘-move, the number of opponent moves made before it.
  auto profile = [p](const Run& r, std::vector<std::string>& own, std::vector<std::string>& other,
                     std::vector<std::size_t>& before) {
    for (const auto& m : r) {
      if (m.player == p) {
        own.push_back(m.move);
        before.push_back(other.size());
      } else {
        other.push_back(m.move);
      }
    }
  };
  std::vector<std::string> own_d, other_d, own_g, other_g;
  std::vector<std::size_t> before_d, before_g;
  profile(delta, own_d, other_d, before_d);
  profile(gamma, own_g, other_g, before_g);
  if (own_d != own_g || other_d != other_g) return false;
  for (std::size_t n = 0; n < before_d.size(); ++n)
    if (before_g[n] > before_d[n]) return false;
  return true;
}

ManageResult is_manageable(const Run& run, const Formula& f) {
  if (!is_balanced(f)) throw std::invalid_argument("manageability is defined for balanced hyperformulas");
  for (const auto& m : run) {
    auto split = split_move(f, m.move);
    if (!split || (split->occurrence.kind != OccurrenceKind::General &&
                   split->occurrence.kind != OccurrenceKind::Hybrid))
      return {1, "move " + to_string(m.player) + ":" + m.move + " does not address a surface general or hybrid atom"};
  }
  auto occ = surface_quasiatoms(f);
  for (const auto& o : occ) {
    if (o.kind != OccurrenceKind::General) continue;
    for (const auto& m : project(run, o.spec))
      if (m.player != Player::Bot)
        return {2, "⊤ moved in the general atom at '" + o.spec.str() + "'"};
  }
  for (const auto& pos : occ) {
    if (pos.kind != OccurrenceKind::Hybrid || pos.polarity != Polarity::Positive) continue;
    for (const auto& neg : occ) {
      if (neg.kind != OccurrenceKind::Hybrid || neg.polarity != Polarity::Negative) continue;
      if (!(neg.subject == pos.subject)) continue;
      Run rp = project(run, pos.spec);
      Run rn = negate_run(project(run, neg.spec));
      if (!is_top_delay(rp, rn))
        return {3, "run at '" + pos.spec.str() + "' is not a ⊤-delay of the negated run at '" + neg.spec.str() + "'"};
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Presets

Game molecule_game(int m, std::string_view leaves) {
  if (m < 1) throw std::invalid_argument("molecule size must be positive");
  if (leaves.empty() || leaves.find_first_not_of("TF") != std::string_view::npos)
    throw std::invalid_argument("molecule leaves must be a nonempty string over T/F");
  std::vector<Game> rows;
  std::size_t k = 0;
  for (int a = 0; a < m; ++a) {
    std::vector<Game> row;
    for (int b = 0; b < m; ++b) row.push_back(Game::triv(leaves[k++ % leaves.size()] == 'T'));
    rows.push_back(Game::chor(std::move(row)));
  }
  return Game::chand(std::move(rows));
}

Game game_preset(std::string_view name) {
  static const std::regex molecule(R"(molecule\(\s*m\s*=\s*(\d+)\s*(?:,\s*leaves\s*=\s*([TF]+)\s*)?\))");
  std::cmatch match;
  if (std::regex_match(name.begin(), name.end(), match, molecule)) {
    int m = std::stoi(match[1].str());
    return molecule_game(m, match[2].matched ? match[2].str() : "TF");
  }
  if (name == "irregular1") return Game::chand({Game::triv(true), Game::chor({Game::triv(false), Game::triv(true)})});
  if (name == "irregular2")
    return Game::chor({Game::neg(Game::chand({Game::triv(true), Game::triv(false)})),
                       Game::conj({Game::triv(true), Game::chand({Game::triv(false), Game::chor({Game::triv(true), Game::triv(false)})})})});
  throw std::invalid_argument("unknown game preset '" + std::string(name) + "'");
}

std::vector<std::pair<std::string, Game>> standard_game_presets() {
  std::vector<std::pair<std::string, Game>> out;
  for (const char* name : {"molecule(m=1,leaves=T)", "molecule(m=1,leaves=F)", "molecule(m=2,leaves=TT)",
                           "molecule(m=2,leaves=TF)", "molecule(m=2,leaves=FT)", "molecule(m=2,leaves=FF)",
                           "irregular1", "irregular2"})
    out.emplace_back(name, game_preset(name));
  return out;
}

std::vector<Interpretation> interpretation_family(const Formula& f,
                                                  const std::vector<std::pair<std::string, Game>>& presets) {
  Formula base = dehybridize(f);
  auto elems = elementary_names(base);
  auto generals = general_names(base);
  std::vector<std::string> atoms(elems.begin(), elems.end());
  if (atoms.size() > 16) throw std::invalid_argument("too many elementary atoms for an exhaustive family");
  std::vector<Interpretation> out;
  std::vector<std::pair<std::string, Game>> games = presets;
  if (generals.empty() && games.size() > 1) games.erase(games.begin() + 1, games.end());
  if (games.empty()) games.emplace_back("", Game::triv(true));
  for (std::size_t mask = 0; mask < (std::size_t{1} << atoms.size()); ++mask) {
    for (const auto& [name, game] : games) {
      Interpretation I;
      for (std::size_t i = 0; i < atoms.size(); ++i) I.elementary[atoms[i]] = (mask >> i) & 1u;
      for (const auto& g : generals) I.general.insert_or_assign(g, game);
      out.push_back(std::move(I));
    }
  }
  return out;
}

}  // namespace cl2
