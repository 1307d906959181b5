#include "cl2/syntax.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <utility>

namespace cl2 {

// ---------------------------------------------------------------------------
// Formula

Formula Formula::elem(std::string name) {
  return Formula(std::make_shared<const Node>(Node{NodeKind::ElemAtom, std::move(name), {}, {}}));
}

Formula Formula::general(std::string name) {
  return Formula(std::make_shared<const Node>(Node{NodeKind::GeneralAtom, std::move(name), {}, {}}));
}

Formula Formula::hybrid(std::string general_name, std::string elem_name) {
  return Formula(std::make_shared<const Node>(
      Node{NodeKind::HybridAtom, std::move(general_name), std::move(elem_name), {}}));
}

Formula Formula::top() {
  static const Formula t(std::make_shared<const Node>(Node{NodeKind::Top, {}, {}, {}}));
  return t;
}

Formula Formula::bot() {
  static const Formula b(std::make_shared<const Node>(Node{NodeKind::Bot, {}, {}, {}}));
  return b;
}

Formula Formula::neg(Formula child) { return make(NodeKind::Neg, {std::move(child)}); }
Formula Formula::conj(std::vector<Formula> c) { return make(NodeKind::And, std::move(c)); }
Formula Formula::disj(std::vector<Formula> c) { return make(NodeKind::Or, std::move(c)); }
Formula Formula::chand(std::vector<Formula> c) { return make(NodeKind::Chand, std::move(c)); }
Formula Formula::chor(std::vector<Formula> c) { return make(NodeKind::Chor, std::move(c)); }

Formula Formula::implies(Formula antecedent, Formula consequent) {
  return make(NodeKind::Implies, {std::move(antecedent), std::move(consequent)});
}

Formula Formula::make(NodeKind kind, std::vector<Formula> children) {
  switch (kind) {
    case NodeKind::Neg:
      if (children.size() != 1) throw std::invalid_argument("negation takes one operand");
      break;
    case NodeKind::Implies:
      if (children.size() != 2) throw std::invalid_argument("implication takes two operands");
      break;
    case NodeKind::And:
    case NodeKind::Or:
    case NodeKind::Chand:
    case NodeKind::Chor:
      if (children.size() < 2) throw std::invalid_argument("n-ary connective needs at least two operands");
      break;
    case NodeKind::Top:
      return top();
    case NodeKind::Bot:
      return bot();
    default:
      throw std::invalid_argument("Formula::make called with an atom kind");
  }
  return Formula(std::make_shared<const Node>(Node{kind, {}, {}, std::move(children)}));
}

bool Formula::is_atom() const noexcept {
  auto k = kind();
  return k == NodeKind::ElemAtom || k == NodeKind::GeneralAtom || k == NodeKind::HybridAtom;
}

bool Formula::is_choice() const noexcept {
  return kind() == NodeKind::Chand || kind() == NodeKind::Chor;
}

bool Formula::is_constant() const noexcept {
  return kind() == NodeKind::Top || kind() == NodeKind::Bot;
}

Formula Formula::with_child(std::size_t i, Formula replacement) const {
  std::vector<Formula> c(node_->children.begin(), node_->children.end());
  c.at(i) = std::move(replacement);
  return make(kind(), std::move(c));
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.name() != b.name() || a.elem_name() != b.elem_name()) return false;
  auto ca = a.children(), cb = b.children();
  if (ca.size() != cb.size()) return false;
  for (std::size_t i = 0; i < ca.size(); ++i)
    if (!(ca[i] == cb[i])) return false;
  return true;
}

bool operator<(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return false;
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  if (a.name() != b.name()) return a.name() < b.name();
  if (a.elem_name() != b.elem_name()) return a.elem_name() < b.elem_name();
  auto ca = a.children(), cb = b.children();
  return std::lexicographical_compare(ca.begin(), ca.end(), cb.begin(), cb.end());
}

// ---------------------------------------------------------------------------
// SpecPath

SpecPath SpecPath::parse(std::string_view text) {
  std::vector<int> steps;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t j = i;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    if (j == i) throw SpecError("malformed specification '" + std::string(text) + "'");
    int value = 0;
    auto [p, ec] = std::from_chars(text.data() + i, text.data() + j, value);
    if (ec != std::errc() || value < 1 || text[i] == '0')
      throw SpecError("malformed specification '" + std::string(text) + "'");
    steps.push_back(value);
    if (j < text.size()) {
      if (text[j] != '.') throw SpecError("malformed specification '" + std::string(text) + "'");
      ++j;
    }
    i = j;
  }
  return SpecPath(std::move(steps));
}

SpecPath SpecPath::extended(int index) const {
  auto s = steps_;
  s.push_back(index);
  return SpecPath(std::move(s));
}

bool SpecPath::is_prefix_of(const SpecPath& other) const {
  return steps_.size() <= other.steps_.size() &&
         std::equal(steps_.begin(), steps_.end(), other.steps_.begin());
}

std::string SpecPath::str() const {
  std::string out;
  for (int s : steps_) {
    out += std::to_string(s);
    out += '.';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parser

ParseError::ParseError(std::size_t position, const std::string& message)
    : std::runtime_error("parse error at " + std::to_string(position) + ": " + message),
      position_(position) {}

namespace {

enum class Tok { Atom, Not, And, Or, Imp, Chand, Chor, LParen, RParen, End };

struct Token {
  Tok tok;
  std::size_t pos;
  Formula atom = Formula::top();
};

bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  Lexer(std::string_view text, ParseOptions options) : text_(text), options_(options) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) {
        out.push_back({Tok::End, pos_});
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool match(std::string_view s) {
    if (text_.substr(pos_, s.size()) == s) {
      pos_ += s.size();
      return true;
    }
    return false;
  }

  std::string read_while(bool (*pred)(char)) {
    std::size_t start = pos_;
    while (pos_ < text_.size() && pred(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  static bool lower_or_digit(char c) { return is_lower(c) || is_digit(c); }
  static bool upper_or_digit(char c) { return is_upper(c) || is_digit(c); }

  // `_P_a_b`, positioned at the leading underscore.
  std::string reserved_name() {
    std::size_t start = pos_;
    if (!options_.allow_reserved) throw ParseError(start, "reserved atom names are not allowed here");
    ++pos_;
    if (pos_ >= text_.size() || !is_upper(text_[pos_])) throw ParseError(start, "malformed reserved atom");
    read_while(upper_or_digit);
    for (int part = 0; part < 2; ++part) {
      if (!match("_")) throw ParseError(start, "malformed reserved atom");
      if (read_while(is_digit).empty()) throw ParseError(start, "malformed reserved atom");
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string elementary_name() {
    std::size_t start = pos_;
    if (pos_ < text_.size() && text_[pos_] == '_') return reserved_name();
    if (pos_ >= text_.size() || !is_lower(text_[pos_])) throw ParseError(start, "expected elementary atom name");
    std::string name = read_while(lower_or_digit);
    if (name == "tt" || name == "ff") throw ParseError(start, "'" + name + "' is reserved");
    if (pos_ < text_.size() && text_[pos_] == '_') throw ParseError(pos_, "underscore inside elementary atom name");
    return name;
  }

  Token next() {
    std::size_t start = pos_;
    if (match("->") || match("→")) return {Tok::Imp, start};
    if (match("/\\") || match("&") || match("∧")) return {Tok::And, start};
    if (match("\\/") || match("|") || match("∨")) return {Tok::Or, start};
    if (match("~") || match("¬")) return {Tok::Not, start};
    if (match("*") || match("⊓")) return {Tok::Chand, start};
    if (match("+") || match("⊔")) return {Tok::Chor, start};
    if (match("(")) return {Tok::LParen, start};
    if (match(")")) return {Tok::RParen, start};
    if (match("⊤")) return {Tok::Atom, start, Formula::top()};
    if (match("⊥")) return {Tok::Atom, start, Formula::bot()};
    char c = text_[pos_];
    if (c == '_') return {Tok::Atom, start, Formula::elem(reserved_name())};
    if (is_lower(c)) {
      std::string name = read_while(lower_or_digit);
      if (pos_ < text_.size() && text_[pos_] == '_')
        throw ParseError(pos_, "underscore inside elementary atom name");
      if (name == "tt") return {Tok::Atom, start, Formula::top()};
      if (name == "ff") return {Tok::Atom, start, Formula::bot()};
      return {Tok::Atom, start, Formula::elem(std::move(name))};
    }
    if (is_upper(c)) {
      std::string name = read_while(upper_or_digit);
      if (pos_ < text_.size() && text_[pos_] == '_') {
        ++pos_;
        std::string elem = elementary_name();
        return {Tok::Atom, start, Formula::hybrid(std::move(name), std::move(elem))};
      }
      if (pos_ < text_.size() && is_lower(text_[pos_]))
        throw ParseError(pos_, "general atom names are uppercase letters and digits");
      return {Tok::Atom, start, Formula::general(std::move(name))};
    }
    throw ParseError(start, std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  ParseOptions options_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Formula parse_all() {
    Formula f = formula();
    if (peek().tok != Tok::End) throw ParseError(peek().pos, "unexpected trailing input");
    return f;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  const Token& take() { return toks_[i_++]; }

  Formula formula() {
    Formula lhs = chain();
    if (peek().tok != Tok::Imp) return lhs;
    take();
    Formula rhs = chain();
    if (peek().tok == Tok::Imp) throw ParseError(peek().pos, "'->' requires parentheses to nest");
    return Formula::implies(std::move(lhs), std::move(rhs));
  }

  static std::optional<NodeKind> nary_kind(Tok t) {
    switch (t) {
      case Tok::And: return NodeKind::And;
      case Tok::Or: return NodeKind::Or;
      case Tok::Chand: return NodeKind::Chand;
      case Tok::Chor: return NodeKind::Chor;
      default: return std::nullopt;
    }
  }

  Formula chain() {
    std::vector<Formula> items{unary()};
    auto kind = nary_kind(peek().tok);
    if (!kind) return items.front();
    Tok op = peek().tok;
    while (true) {
      auto t = peek().tok;
      auto k = nary_kind(t);
      if (!k) break;
      if (t != op) throw ParseError(peek().pos, "mixing binary operators requires parentheses");
      take();
      items.push_back(unary());
    }
    return Formula::make(*kind, std::move(items));
  }

  Formula unary() {
    const Token& t = take();
    switch (t.tok) {
      case Tok::Not:
        return Formula::neg(unary());
      case Tok::Atom:
        return t.atom;
      case Tok::LParen: {
        Formula inner = formula();
        if (peek().tok != Tok::RParen) throw ParseError(peek().pos, "expected ')'");
        take();
        return inner;
      }
      case Tok::End:
        throw ParseError(t.pos, "unexpected end of input");
      default:
        throw ParseError(t.pos, "expected a formula");
    }
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

struct Symbols {
  const char* neg;
  const char* conj;
  const char* disj;
  const char* imp;
  const char* chand;
  const char* chor;
  const char* top;
  const char* bot;
};

constexpr Symbols kAscii{"~", " & ", " | ", " -> ", " * ", " + ", "tt", "ff"};
constexpr Symbols kUnicode{"¬", " ∧ ", " ∨ ", " → ", " ⊓ ", " ⊔ ", "⊤", "⊥"};

bool is_nary(NodeKind k) {
  return k == NodeKind::And || k == NodeKind::Or || k == NodeKind::Chand || k == NodeKind::Chor;
}

void render_into(const Formula& f, const Symbols& s, std::string& out) {
  auto wrapped = [&](const Formula& c, bool parens) {
    if (parens) out += '(';
    render_into(c, s, out);
    if (parens) out += ')';
  };
  switch (f.kind()) {
    case NodeKind::ElemAtom:
    case NodeKind::GeneralAtom:
      out += f.name();
      return;
    case NodeKind::HybridAtom:
      out += f.name();
      out += '_';
      out += f.elem_name();
      return;
    case NodeKind::Top:
      out += s.top;
      return;
    case NodeKind::Bot:
      out += s.bot;
      return;
    case NodeKind::Neg: {
      out += s.neg;
      auto k = f.child(0).kind();
      wrapped(f.child(0), is_nary(k) || k == NodeKind::Implies);
      return;
    }
    case NodeKind::Implies:
      wrapped(f.child(0), f.child(0).kind() == NodeKind::Implies);
      out += s.imp;
      wrapped(f.child(1), f.child(1).kind() == NodeKind::Implies);
      return;
    default: {
      const char* op = f.kind() == NodeKind::And ? s.conj
                       : f.kind() == NodeKind::Or ? s.disj
                       : f.kind() == NodeKind::Chand ? s.chand
                                                     : s.chor;
      bool first = true;
      for (const auto& c : f.children()) {
        if (!first) out += op;
        first = false;
        wrapped(c, is_nary(c.kind()) || c.kind() == NodeKind::Implies);
      }
    }
  }
}

}  // namespace

Formula parse(std::string_view text, ParseOptions options) {
  return Parser(Lexer(text, options).run()).parse_all();
}

std::string render(const Formula& f) {
  std::string out;
  render_into(f, kAscii, out);
  return out;
}

std::string render_unicode(const Formula& f) {
  std::string out;
  render_into(f, kUnicode, out);
  return out;
}

// ---------------------------------------------------------------------------
// Occurrences

namespace {

void collect_quasiatoms(const Formula& f, std::vector<int>& path, Polarity pol, std::vector<Occurrence>& out) {
  auto emit = [&](OccurrenceKind k) { out.push_back({SpecPath(path), pol, k, f}); };
  switch (f.kind()) {
    case NodeKind::ElemAtom: emit(OccurrenceKind::Elementary); return;
    case NodeKind::GeneralAtom: emit(OccurrenceKind::General); return;
    case NodeKind::HybridAtom: emit(OccurrenceKind::Hybrid); return;
    case NodeKind::Chand: emit(OccurrenceKind::ChandNode); return;
    case NodeKind::Chor: emit(OccurrenceKind::ChorNode); return;
    case NodeKind::Top:
    case NodeKind::Bot:
      return;
    case NodeKind::Neg:
      collect_quasiatoms(f.child(0), path, flip(pol), out);
      return;
    case NodeKind::Implies:
    case NodeKind::And:
    case NodeKind::Or:
      for (std::size_t i = 0; i < f.arity(); ++i) {
        path.push_back(static_cast<int>(i) + 1);
        Polarity p = (f.kind() == NodeKind::Implies && i == 0) ? flip(pol) : pol;
        collect_quasiatoms(f.child(i), path, p, out);
        path.pop_back();
      }
      return;
  }
}

OccurrenceKind occurrence_kind(const Formula& f) {
  switch (f.kind()) {
    case NodeKind::ElemAtom: return OccurrenceKind::Elementary;
    case NodeKind::GeneralAtom: return OccurrenceKind::General;
    case NodeKind::HybridAtom: return OccurrenceKind::Hybrid;
    case NodeKind::Chand: return OccurrenceKind::ChandNode;
    default: return OccurrenceKind::ChorNode;
  }
}

bool is_quasiatom_node(const Formula& f) { return f.is_atom() || f.is_choice(); }

// Polarity of the child at position `i` (0-based) of a ∧,∨,→ node.
Polarity child_polarity(const Formula& f, std::size_t i, Polarity pol) {
  return (f.kind() == NodeKind::Implies && i == 0) ? flip(pol) : pol;
}

std::optional<Formula> replace_rec(const Formula& f, std::span<const int> steps, const Formula& g) {
  if (f.kind() == NodeKind::Neg) {
    auto inner = replace_rec(f.child(0), steps, g);
    if (!inner) return std::nullopt;
    return Formula::neg(std::move(*inner));
  }
  if (steps.empty()) {
    if (!is_quasiatom_node(f)) return std::nullopt;
    return g;
  }
  auto k = f.kind();
  if (k != NodeKind::And && k != NodeKind::Or && k != NodeKind::Implies) return std::nullopt;
  int idx = steps.front();
  if (idx < 1 || static_cast<std::size_t>(idx) > f.arity()) return std::nullopt;
  auto inner = replace_rec(f.child(idx - 1), steps.subspan(1), g);
  if (!inner) return std::nullopt;
  return f.with_child(idx - 1, std::move(*inner));
}

}  // namespace

std::vector<Occurrence> surface_quasiatoms(const Formula& f) {
  std::vector<Occurrence> out;
  std::vector<int> path;
  collect_quasiatoms(f, path, Polarity::Positive, out);
  return out;
}

std::optional<Occurrence> quasiatom_at(const Formula& f, const SpecPath& spec) {
  const Formula* cur = &f;
  Polarity pol = Polarity::Positive;
  for (int idx : spec.steps()) {
    while (cur->kind() == NodeKind::Neg) {
      pol = flip(pol);
      cur = &cur->child(0);
    }
    auto k = cur->kind();
    if (k != NodeKind::And && k != NodeKind::Or && k != NodeKind::Implies) return std::nullopt;
    if (idx < 1 || static_cast<std::size_t>(idx) > cur->arity()) return std::nullopt;
    pol = child_polarity(*cur, static_cast<std::size_t>(idx - 1), pol);
    cur = &cur->child(static_cast<std::size_t>(idx - 1));
  }
  while (cur->kind() == NodeKind::Neg) {
    pol = flip(pol);
    cur = &cur->child(0);
  }
  if (!is_quasiatom_node(*cur)) return std::nullopt;
  return Occurrence{spec, pol, occurrence_kind(*cur), *cur};
}

Formula replace_at(const Formula& f, const SpecPath& spec, const Formula& g) {
  auto r = replace_rec(f, spec.steps(), g);
  if (!r) throw SpecError("'" + spec.str() + "' does not address a quasiatom of " + render(f));
  return std::move(*r);
}

std::optional<MoveSplit> split_move(const Formula& f, std::string_view move) {
  const Formula* cur = &f;
  Polarity pol = Polarity::Positive;
  std::vector<int> steps;
  std::size_t pos = 0;
  while (true) {
    while (cur->kind() == NodeKind::Neg) {
      pol = flip(pol);
      cur = &cur->child(0);
    }
    if (is_quasiatom_node(*cur)) break;
    auto k = cur->kind();
    if (k != NodeKind::And && k != NodeKind::Or && k != NodeKind::Implies) return std::nullopt;
    std::size_t j = pos;
    while (j < move.size() && is_digit(move[j])) ++j;
    if (j == pos || j >= move.size() || move[j] != '.' || move[pos] == '0') return std::nullopt;
    int idx = 0;
    auto [p, ec] = std::from_chars(move.data() + pos, move.data() + j, idx);
    if (ec != std::errc() || idx < 1 || static_cast<std::size_t>(idx) > cur->arity()) return std::nullopt;
    pol = child_polarity(*cur, static_cast<std::size_t>(idx - 1), pol);
    cur = &cur->child(static_cast<std::size_t>(idx - 1));
    steps.push_back(idx);
    pos = j + 1;
  }
  return MoveSplit{Occurrence{SpecPath(std::move(steps)), pol, occurrence_kind(*cur), *cur},
                   std::string(move.substr(pos))};
}

// ---------------------------------------------------------------------------
// Hyperformula support

namespace {

struct HybridInfo {
  int positive_surface = 0;
  int negative_surface = 0;
  int other = 0;
};

void scan_hybrids(const Formula& f, Polarity pol, bool surface,
                  std::map<std::pair<std::string, std::string>, HybridInfo>& hybrids,
                  std::set<std::string>& plain_elems) {
  switch (f.kind()) {
    case NodeKind::ElemAtom:
      plain_elems.insert(f.name());
      return;
    case NodeKind::HybridAtom: {
      auto& info = hybrids[{f.name(), f.elem_name()}];
      if (!surface)
        ++info.other;
      else if (pol == Polarity::Positive)
        ++info.positive_surface;
      else
        ++info.negative_surface;
      return;
    }
    case NodeKind::Neg:
      scan_hybrids(f.child(0), flip(pol), surface, hybrids, plain_elems);
      return;
    case NodeKind::Chand:
    case NodeKind::Chor:
      for (const auto& c : f.children()) scan_hybrids(c, pol, false, hybrids, plain_elems);
      return;
    default:
      for (std::size_t i = 0; i < f.arity(); ++i)
        scan_hybrids(f.child(i), child_polarity(f, i, pol), surface, hybrids, plain_elems);
  }
}

template <typename Pred>
bool any_node(const Formula& f, Pred pred) {
  if (pred(f)) return true;
  for (const auto& c : f.children())
    if (any_node(c, pred)) return true;
  return false;
}

void collect_names(const Formula& f, std::set<std::string>& elems, std::set<std::string>& generals) {
  switch (f.kind()) {
    case NodeKind::ElemAtom:
      elems.insert(f.name());
      return;
    case NodeKind::GeneralAtom:
      generals.insert(f.name());
      return;
    case NodeKind::HybridAtom:
      generals.insert(f.name());
      elems.insert(f.elem_name());
      return;
    default:
      for (const auto& c : f.children()) collect_names(c, elems, generals);
  }
}

template <typename Fn>
Formula map_atoms(const Formula& f, Fn& fn) {
  if (f.is_atom()) return fn(f);
  if (f.arity() == 0) return f;
  std::vector<Formula> c;
  c.reserve(f.arity());
  bool changed = false;
  for (const auto& ch : f.children()) {
    c.push_back(map_atoms(ch, fn));
    changed = changed || !c.back().same_node(ch);
  }
  if (!changed) return f;
  return Formula::make(f.kind(), std::move(c));
}

}  // namespace

bool is_balanced(const Formula& h) {
  std::map<std::pair<std::string, std::string>, HybridInfo> hybrids;
  std::set<std::string> plain;
  scan_hybrids(h, Polarity::Positive, true, hybrids, plain);
  std::map<std::string, int> elem_component_uses;
  for (const auto& [key, info] : hybrids) {
    if (info.other != 0 || info.positive_surface != 1 || info.negative_surface != 1) return false;
    if (plain.count(key.second)) return false;
    if (++elem_component_uses[key.second] > 1) return false;
  }
  return true;
}

Formula dehybridize(const Formula& h) {
  auto fn = [](const Formula& a) {
    return a.kind() == NodeKind::HybridAtom ? Formula::general(a.name()) : a;
  };
  return map_atoms(h, fn);
}

bool contains_hybrid(const Formula& f) {
  return any_node(f, [](const Formula& n) { return n.kind() == NodeKind::HybridAtom; });
}

bool contains_general(const Formula& f) {
  return any_node(f, [](const Formula& n) { return n.kind() == NodeKind::GeneralAtom; });
}

bool contains_choice(const Formula& f) {
  return any_node(f, [](const Formula& n) { return n.is_choice(); });
}

bool is_elementary_base(const Formula& f) {
  return !any_node(f, [](const Formula& n) {
    return n.kind() == NodeKind::GeneralAtom || n.kind() == NodeKind::HybridAtom;
  });
}

bool is_elementary(const Formula& f) {
  return !any_node(f, [](const Formula& n) {
    return n.kind() == NodeKind::GeneralAtom || n.kind() == NodeKind::HybridAtom || n.is_choice();
  });
}

std::set<std::string> elementary_names(const Formula& f) {
  std::set<std::string> e, g;
  collect_names(f, e, g);
  return e;
}

std::set<std::string> general_names(const Formula& f) {
  std::set<std::string> e, g;
  collect_names(f, e, g);
  return g;
}

namespace {

class Renamer {
 public:
  std::size_t elem_index(const std::string& n) { return elems_.index(n); }
  std::size_t general_index(const std::string& n) { return generals_.index(n); }

 private:
  struct Table {
    static constexpr std::size_t kInline = 8;
    std::array<const std::string*, kInline> inline_{};
    std::size_t size = 0;
    std::vector<const std::string*> overflow;

    std::size_t index(const std::string& n) {
      std::size_t k = std::min(size, kInline);
      for (std::size_t i = 0; i < k; ++i)
        if (*inline_[i] == n) return i;
      for (std::size_t i = 0; i < overflow.size(); ++i)
        if (*overflow[i] == n) return kInline + i;
      if (size < kInline)
        inline_[size] = &n;
      else
        overflow.push_back(&n);
      return size++;
    }
  };
  Table elems_;
  Table generals_;
};

void append_index(std::string& out, std::size_t i) {
  if (i < 10) {
    out += static_cast<char>('0' + i);
  } else {
    out += std::to_string(i);
  }
}

void key_into(const Formula& f, Renamer& r, std::string& out) {
  switch (f.kind()) {
    case NodeKind::ElemAtom:
      out += 'e';
      append_index(out, r.elem_index(f.name()));
      return;
    case NodeKind::GeneralAtom:
      out += 'G';
      append_index(out, r.general_index(f.name()));
      return;
    case NodeKind::HybridAtom:
      out += 'H';
      append_index(out, r.general_index(f.name()));
      out += '_';
      append_index(out, r.elem_index(f.elem_name()));
      return;
    case NodeKind::Top: out += 'T'; return;
    case NodeKind::Bot: out += 'F'; return;
    case NodeKind::Neg: out += '~'; break;
    case NodeKind::And: out += '&'; break;
    case NodeKind::Or: out += '|'; break;
    case NodeKind::Implies: out += '>'; break;
    case NodeKind::Chand: out += '*'; break;
    case NodeKind::Chor: out += '+'; break;
  }
  out += '(';
  for (const auto& c : f.children()) {
    key_into(c, r, out);
    out += ',';
  }
  out += ')';
}

}  // namespace

Formula canonical_rename(const Formula& f) {
  Renamer r;
  auto fn = [&r](const Formula& a) {
    switch (a.kind()) {
      case NodeKind::ElemAtom:
        return Formula::elem("a" + std::to_string(r.elem_index(a.name()) + 1));
      case NodeKind::GeneralAtom:
        return Formula::general("A" + std::to_string(r.general_index(a.name()) + 1));
      default: {
        auto g = "A" + std::to_string(r.general_index(a.name()) + 1);
        return Formula::hybrid(std::move(g), "a" + std::to_string(r.elem_index(a.elem_name()) + 1));
      }
    }
  };
  return map_atoms(f, fn);
}

std::string canonical_key(const Formula& f) {
  Renamer r;
  std::string out;
  out.reserve(64);
  key_into(f, r, out);
  return out;
}

Formula substitute_elem(const Formula& f, const std::string& from, const Formula& to) {
  auto fn = [&](const Formula& a) {
    return (a.kind() == NodeKind::ElemAtom && a.name() == from) ? to : a;
  };
  return map_atoms(f, fn);
}

std::size_t connective_count(const Formula& f) {
  if (f.arity() == 0) return 0;
  std::size_t n = 1;
  for (const auto& c : f.children()) n += connective_count(c);
  return n;
}

}  // namespace cl2
