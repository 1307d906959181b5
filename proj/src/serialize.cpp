#include "cl2/serialize.hpp"

#include <cctype>
#include <functional>
#include <map>
#include <regex>
#include <set>
#include <sstream>

namespace cl2 {

namespace {

Rule rule_from_string(const std::string& s) {
  if (s == "a") return Rule::A;
  if (s == "b") return Rule::B;
  if (s == "c") return Rule::C;
  if (s == "c_circ") return Rule::Ccirc;
  throw FormatError("unknown rule '" + s + "'");
}

Json detail_to_json(const RuleDetail& d) {
  if (const auto* b = std::get_if<RuleBDetail>(&d)) return {{"spec", b->spec.str()}, {"index", b->index}};
  if (const auto* c = std::get_if<RuleCDetail>(&d))
    return {{"pos_spec", c->pos_spec.str()}, {"neg_spec", c->neg_spec.str()}, {"general", c->general}, {"fresh", c->fresh}};
  if (const auto* c = std::get_if<RuleCcircDetail>(&d)) return {{"general", c->general}, {"elem", c->elem}};
  return nullptr;
}

RuleDetail detail_from_json(Rule r, const Json& j) {
  switch (r) {
    case Rule::A: return std::monostate{};
    case Rule::B: return RuleBDetail{SpecPath::parse(j.at("spec").get<std::string>()), j.at("index").get<int>()};
    case Rule::C:
      return RuleCDetail{SpecPath::parse(j.at("pos_spec").get<std::string>()),
                         SpecPath::parse(j.at("neg_spec").get<std::string>()), j.at("general").get<std::string>(),
                         j.at("fresh").get<std::string>()};
    case Rule::Ccirc: return RuleCcircDetail{j.at("general").get<std::string>(), j.at("elem").get<std::string>()};
  }
  return std::monostate{};
}

}  // namespace

Json proof_to_json(const ProofPtr& p) {
  std::map<const ProofNode*, int> ids;
  Json nodes = Json::array();
  std::function<int(const ProofPtr&)> visit = [&](const ProofPtr& n) -> int {
    if (auto it = ids.find(n.get()); it != ids.end()) return it->second;
    Json premises = Json::array();
    for (const auto& c : n->children) premises.push_back(visit(c));
    int id = static_cast<int>(ids.size());
    ids.emplace(n.get(), id);
    Json node{{"id", id}, {"conclusion", render(n->conclusion)}, {"rule", to_string(n->rule)}, {"premises", premises}};
    if (auto d = detail_to_json(n->detail); !d.is_null()) node["detail"] = d;
    nodes.push_back(std::move(node));
    return id;
  };
  int root = visit(p);
  return {{"root", root}, {"nodes", nodes}};
}

ProofPtr proof_from_json(const Json& j) {
  try {
    std::map<int, const Json*> table;
    for (const auto& n : j.at("nodes")) table[n.at("id").get<int>()] = &n;
    std::map<int, ProofPtr> built;
    std::set<int> active;
    std::function<ProofPtr(int)> build = [&](int id) -> ProofPtr {
      if (auto it = built.find(id); it != built.end()) return it->second;
      auto it = table.find(id);
      if (it == table.end()) throw FormatError("missing proof node " + std::to_string(id));
      if (!active.insert(id).second) throw FormatError("cyclic proof");
      const Json& n = *it->second;
      Rule r = rule_from_string(n.at("rule").get<std::string>());
      std::vector<ProofPtr> children;
      const Json premises = n.value("premises", Json::array());
      for (const auto& c : premises) children.push_back(build(c.get<int>()));
      auto out = make_proof(parse(n.at("conclusion").get<std::string>(), {.allow_reserved = true}), r,
                            detail_from_json(r, n.value("detail", Json::object())), std::move(children));
      active.erase(id);
      built.emplace(id, out);
      return out;
    };
    return build(j.at("root").get<int>());
  } catch (const Json::exception& e) {
    throw FormatError(std::string("malformed proof: ") + e.what());
  } catch (const SpecError& e) {
    throw FormatError(std::string("malformed proof: ") + e.what());
  }
}

std::string proof_to_text(const ProofPtr& p) {
  std::ostringstream out;
  std::function<void(const ProofPtr&, int)> rec = [&](const ProofPtr& n, int depth) {
    out << std::string(static_cast<std::size_t>(depth) * 2, ' ') << render(n->conclusion) << "   [" << to_string(n->rule);
    if (const auto* b = std::get_if<RuleBDetail>(&n->detail)) out << " " << b->spec.str() << b->index;
    if (const auto* c = std::get_if<RuleCDetail>(&n->detail))
      out << " " << c->general << "@" << c->pos_spec.str() << "," << c->neg_spec.str() << " -> " << c->fresh;
    if (const auto* c = std::get_if<RuleCcircDetail>(&n->detail)) out << " " << c->general << "_" << c->elem;
    out << "]\n";
    for (const auto& c : n->children) rec(c, depth + 1);
  };
  rec(p, 0);
  return out.str();
}

// ---------------------------------------------------------------------------
// Games

Json game_to_json(const Game& g) {
  switch (g.kind()) {
    case GameKind::Triv: return {{"op", "triv"}, {"value", g.value() ? "T" : "F"}};
    default: break;
  }
  static const std::map<GameKind, const char*> names{{GameKind::Neg, "neg"},
                                                     {GameKind::And, "and"},
                                                     {GameKind::Or, "or"},
                                                     {GameKind::Chand, "chand"},
                                                     {GameKind::Chor, "chor"}};
  Json children = Json::array();
  for (const auto& c : g.children()) children.push_back(game_to_json(c));
  return {{"op", names.at(g.kind())}, {"children", children}};
}

namespace {

GameKind game_kind(const std::string& op) {
  static const std::map<std::string, GameKind> kinds{{"neg", GameKind::Neg},     {"and", GameKind::And},
                                                     {"or", GameKind::Or},       {"chand", GameKind::Chand},
                                                     {"chor", GameKind::Chor}, {"triv", GameKind::Triv}};
  auto it = kinds.find(op);
  if (it == kinds.end()) throw FormatError("unknown game operator '" + op + "'");
  return it->second;
}

bool truth_value(const Json& v) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_string()) {
    auto s = v.get<std::string>();
    if (s == "T" || s == "true" || s == "⊤") return true;
    if (s == "F" || s == "false" || s == "⊥") return false;
  }
  throw FormatError("expected a truth value, got " + v.dump());
}

class TermParser {
 public:
  explicit TermParser(std::string_view t) : t_(t) {}

  Game run() {
    Game g = term();
    skip();
    if (pos_ != t_.size()) fail("trailing input");
    return g;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw FormatError("game term at " + std::to_string(pos_) + ": " + what);
  }
  void skip() {
    while (pos_ < t_.size() && t_[pos_] == ' ') ++pos_;
  }
  Game term() {
    skip();
    std::size_t start = pos_;
    while (pos_ < t_.size() && std::isalpha(static_cast<unsigned char>(t_[pos_]))) ++pos_;
    std::string word(t_.substr(start, pos_ - start));
    if (word == "T") return Game::triv(true);
    if (word == "F") return Game::triv(false);
    if (word.empty()) fail("expected a game");
    GameKind k = game_kind(word);
    if (k == GameKind::Triv) fail("use T or F");
    skip();
    if (pos_ >= t_.size() || t_[pos_] != '(') fail("expected '('");
    ++pos_;
    std::vector<Game> c{term()};
    skip();
    while (pos_ < t_.size() && t_[pos_] == ',') {
      ++pos_;
      c.push_back(term());
      skip();
    }
    if (pos_ >= t_.size() || t_[pos_] != ')') fail("expected ')'");
    ++pos_;
    if (k == GameKind::Neg) {
      if (c.size() != 1) fail("neg takes one operand");
      return Game::neg(c[0]);
    }
    return Game::make(k, std::move(c));
  }

  std::string_view t_;
  std::size_t pos_ = 0;
};

}  // namespace

Game parse_game_term(std::string_view text) { return TermParser(text).run(); }

Game game_from_json(const Json& j) {
  if (j.is_string()) {
    auto s = j.get<std::string>();
    try {
      return game_preset(s);
    } catch (const std::invalid_argument&) {
      return parse_game_term(s);
    }
  }
  try {
    GameKind k = game_kind(j.at("op").get<std::string>());
    if (k == GameKind::Triv) return Game::triv(truth_value(j.at("value")));
    std::vector<Game> c;
    for (const auto& ch : j.at("children")) c.push_back(game_from_json(ch));
    if (k == GameKind::Neg) {
      if (c.size() != 1) throw FormatError("neg takes one operand");
      return Game::neg(c[0]);
    }
    if (c.empty()) throw FormatError("game connective without operands");
    return Game::make(k, std::move(c));
  } catch (const Json::exception& e) {
    throw FormatError(std::string("malformed game: ") + e.what());
  }
}

Json interpretation_to_json(const Interpretation& I) {
  Json e = Json::object(), g = Json::object();
  for (const auto& [k, v] : I.elementary) e[k] = v ? "T" : "F";
  for (const auto& [k, v] : I.general) g[k] = game_to_json(v);
  return {{"elementary", e}, {"general", g}};
}

Interpretation interpretation_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("interpretation must be an object");
  Interpretation I;
  const Json elementary = j.value("elementary", Json::object());
  const Json general = j.value("general", Json::object());
  for (const auto& [k, v] : elementary.items()) I.elementary[k] = truth_value(v);
  for (const auto& [k, v] : general.items()) I.general.insert_or_assign(k, game_from_json(v));
  return I;
}

Json run_to_json(const Run& r) {
  Json out = Json::array();
  for (const auto& m : r) out.push_back({{"player", to_string(m.player)}, {"move", m.move}});
  return out;
}

Run run_from_json(const Json& j) {
  Run r;
  try {
    for (const auto& m : j) {
      auto p = m.at("player").get<std::string>();
      if (p != "T" && p != "B") throw FormatError("player must be T or B");
      r.push_back({p == "T" ? Player::Top : Player::Bot, m.at("move").get<std::string>()});
    }
  } catch (const Json::exception& e) {
    throw FormatError(std::string("malformed run: ") + e.what());
  }
  return r;
}

Json session_state(const Session& s) {
  Json j{{"formula", render(s.root_formula())},
         {"hyperformula", render(s.hyperformula())},
         {"residual_game", s.residual() ? Json(render(*s.residual())) : Json(nullptr)},
         {"run", run_to_json(s.theta())},
         {"legal_moves", s.adversary_options()},
         {"phase", to_string(s.phase())}};
  if (s.result()) j["winner"] = to_string(*s.result());
  if (!s.violations().empty()) j["violations"] = s.violations();
  return j;
}

Json certificate_to_json(const RefutationCertificate& c) {
  Json table = Json::array();
  for (const auto& p : c.scheme.generals)
    for (int a = 1; a <= c.scheme.m; ++a)
      for (int b = 1; b <= c.scheme.m; ++b) table.push_back({{"general", p}, {"a", a}, {"b", b}, {"atom", c.scheme.small_name(p, a, b)}});
  return {{"formula", render(c.formula)},
          {"ceiling", render(c.ceiling)},
          {"m", c.scheme.m},
          {"m_mode", to_string(c.spec)},
          {"scheme", table},
          {"cl2_unprovable", c.cl2_unprovable},
          {"cl1_unprovable", c.cl1_unprovable},
          {"budget_exceeded", c.budget_exceeded},
          {"floor_roundtrip", c.floor_roundtrip},
          {"ceiling_good", c.ceiling_good},
          {"valid", c.valid()},
          {"seconds", c.seconds}};
}

System parse_system(const std::string& text) {
  std::string name = text;
  for (auto& ch : name) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (name == "cl1") return System::CL1;
  if (name == "cl2") return System::CL2;
  if (name == "cl2circ") return System::CL2circ;
  throw FormatError("unknown system '" + name + "' (expected cl1, cl2 or cl2circ)");
}

std::vector<std::pair<std::string, Game>> family_presets(const std::string& name) {
  if (name == "standard") return standard_game_presets();
  static const std::regex molecules(R"(molecules:m=(\d+))");
  std::smatch match;
  if (std::regex_match(name, match, molecules)) {
    int m = std::stoi(match[1].str());
    std::vector<std::string> patterns = m == 1 ? std::vector<std::string>{"T", "F"}
                                               : std::vector<std::string>{"TT", "TF", "FT", "FF"};
    std::vector<std::pair<std::string, Game>> out;
    for (const auto& p : patterns) {
      std::string label = "molecule(m=" + std::to_string(m) + ",leaves=" + p + ")";
      out.emplace_back(label, molecule_game(m, p));
    }
    return out;
  }
  return {{name, game_preset(name)}};
}

}  // namespace cl2
