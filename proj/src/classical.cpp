#include "cl2/classical.hpp"

#include <cstdint>
#include <vector>

namespace cl2 {

namespace {

using Word = std::uint64_t;
using Table = std::vector<Word>;

constexpr Word kPattern[6] = {
    0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
    0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull,
};

// Bit-parallel truth table of the elementarization of a formula, 64
// assignments per word.
class TableEvaluator {
 public:
  explicit TableEvaluator(bool strict) : strict_(strict) {}

  void index_atoms(const Formula& f) {
    switch (f.kind()) {
      case NodeKind::ElemAtom:
        add(f.name());
        return;
      case NodeKind::HybridAtom:
        if (strict_) throw std::invalid_argument("not an elementary formula: " + render(f));
        add(f.elem_name());
        return;
      case NodeKind::GeneralAtom:
      case NodeKind::Chand:
      case NodeKind::Chor:
        if (strict_) throw std::invalid_argument("not an elementary formula: " + render(f));
        return;
      default:
        for (const auto& c : f.children()) index_atoms(c);
    }
  }

  bool tautology(const Formula& f) {
    int n = static_cast<int>(names_.size());
    if (n > kMaxTautologyAtoms)
      throw TooManyAtoms("truth table limited to " + std::to_string(kMaxTautologyAtoms) + " atoms");
    words_ = n <= 6 ? 1 : std::size_t{1} << (n - 6);
    Word last_mask = n >= 6 ? ~Word{0} : ((Word{1} << (1u << n)) - 1);
    if (words_ == 1) return (eval_word(f, false) & last_mask) == last_mask;
    Table t = eval(f, false);
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
      if (t[i] != ~Word{0}) return false;
    return (t.back() & last_mask) == last_mask;
  }

 private:
  void add(const std::string& name) {
    for (const auto& s : names_)
      if (s == name) return;
    names_.push_back(name);
  }

  std::size_t index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return i;
    return names_.size();
  }

  Table constant(bool v) const { return Table(words_, v ? ~Word{0} : Word{0}); }

  Table variable(std::size_t i) const {
    Table t(words_);
    for (std::size_t w = 0; w < words_; ++w)
      t[w] = i < 6 ? kPattern[i] : (((w >> (i - 6)) & 1u) ? ~Word{0} : Word{0});
    return t;
  }

  // Single-word specialization for at most six atoms.
  Word eval_word(const Formula& f, bool negative) const {
    switch (f.kind()) {
      case NodeKind::ElemAtom: return kPattern[index_of(f.name())];
      case NodeKind::HybridAtom: return kPattern[index_of(f.elem_name())];
      case NodeKind::GeneralAtom: return negative ? ~Word{0} : Word{0};
      case NodeKind::Chand:
      case NodeKind::Top: return ~Word{0};
      case NodeKind::Chor:
      case NodeKind::Bot: return Word{0};
      case NodeKind::Neg: return ~eval_word(f.child(0), !negative);
      case NodeKind::Implies: return ~eval_word(f.child(0), !negative) | eval_word(f.child(1), negative);
      case NodeKind::And: {
        Word w = ~Word{0};
        for (const auto& c : f.children()) w &= eval_word(c, negative);
        return w;
      }
      case NodeKind::Or: {
        Word w = 0;
        for (const auto& c : f.children()) w |= eval_word(c, negative);
        return w;
      }
    }
    return 0;
  }

  Table eval(const Formula& f, bool negative) const {
    switch (f.kind()) {
      case NodeKind::ElemAtom: return variable(index_of(f.name()));
      case NodeKind::HybridAtom: return variable(index_of(f.elem_name()));
      case NodeKind::GeneralAtom: return constant(negative);
      case NodeKind::Chand:
      case NodeKind::Top: return constant(true);
      case NodeKind::Chor:
      case NodeKind::Bot: return constant(false);
      case NodeKind::Neg: {
        Table t = eval(f.child(0), !negative);
        for (auto& w : t) w = ~w;
        return t;
      }
      case NodeKind::Implies: {
        Table a = eval(f.child(0), !negative);
        Table b = eval(f.child(1), negative);
        for (std::size_t i = 0; i < words_; ++i) b[i] |= ~a[i];
        return b;
      }
      case NodeKind::And: {
        Table t = eval(f.child(0), negative);
        for (std::size_t c = 1; c < f.arity(); ++c) {
          Table u = eval(f.child(c), negative);
          for (std::size_t i = 0; i < words_; ++i) t[i] &= u[i];
        }
        return t;
      }
      case NodeKind::Or: {
        Table t = eval(f.child(0), negative);
        for (std::size_t c = 1; c < f.arity(); ++c) {
          Table u = eval(f.child(c), negative);
          for (std::size_t i = 0; i < words_; ++i) t[i] |= u[i];
        }
        return t;
      }
    }
    return constant(false);
  }

  bool strict_;
  std::vector<std::string> names_;
  std::size_t words_ = 1;
};

Formula elementarize_rec(const Formula& f, bool negative) {
  switch (f.kind()) {
    case NodeKind::ElemAtom:
    case NodeKind::Top:
    case NodeKind::Bot:
      return f;
    case NodeKind::HybridAtom: return Formula::elem(f.elem_name());
    case NodeKind::GeneralAtom: return negative ? Formula::top() : Formula::bot();
    case NodeKind::Chand: return Formula::top();
    case NodeKind::Chor: return Formula::bot();
    case NodeKind::Neg: return Formula::neg(elementarize_rec(f.child(0), !negative));
    case NodeKind::Implies:
      return Formula::implies(elementarize_rec(f.child(0), !negative), elementarize_rec(f.child(1), negative));
    default: {
      std::vector<Formula> c;
      for (const auto& ch : f.children()) c.push_back(elementarize_rec(ch, negative));
      return Formula::make(f.kind(), std::move(c));
    }
  }
}

bool eval_rec(const Formula& f, const std::map<std::string, bool>& a) {
  switch (f.kind()) {
    case NodeKind::ElemAtom: {
      auto it = a.find(f.name());
      if (it == a.end()) throw std::invalid_argument("no value for atom " + f.name());
      return it->second;
    }
    case NodeKind::Top: return true;
    case NodeKind::Bot: return false;
    case NodeKind::Neg: return !eval_rec(f.child(0), a);
    case NodeKind::Implies: return !eval_rec(f.child(0), a) || eval_rec(f.child(1), a);
    case NodeKind::And:
      for (const auto& c : f.children())
        if (!eval_rec(c, a)) return false;
      return true;
    case NodeKind::Or:
      for (const auto& c : f.children())
        if (eval_rec(c, a)) return true;
      return false;
    default:
      throw std::invalid_argument("not an elementary formula: " + render(f));
  }
}

}  // namespace

Formula elementarize(const Formula& h) { return elementarize_rec(h, false); }

bool is_tautology(const Formula& e) {
  TableEvaluator ev(true);
  ev.index_atoms(e);
  return ev.tautology(e);
}

bool evaluate(const Formula& e, const std::map<std::string, bool>& assignment) {
  return eval_rec(e, assignment);
}

bool is_stable(const Formula& h) {
  TableEvaluator ev(false);
  ev.index_atoms(h);
  return ev.tautology(h);
}

}  // namespace cl2
