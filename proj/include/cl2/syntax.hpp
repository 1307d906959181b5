// Formula and hyperformula syntax: AST, parser, printer, surface-occurrence
// analysis and occurrence replacement.

#ifndef CL2_SYNTAX_HPP_
#define CL2_SYNTAX_HPP_

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cl2 {

enum class NodeKind {
  ElemAtom,
  GeneralAtom,
  HybridAtom,
  Top,
  Bot,
  Neg,
  And,
  Or,
  Implies,
  Chand,
  Chor,
};

// Immutable formula handle. Copies share structure; equality is structural.
class Formula {
 public:
  static Formula elem(std::string name);
  static Formula general(std::string name);
  static Formula hybrid(std::string general_name, std::string elem_name);
  static Formula top();
  static Formula bot();
  static Formula neg(Formula child);
  static Formula conj(std::vector<Formula> children);
  static Formula disj(std::vector<Formula> children);
  static Formula implies(Formula antecedent, Formula consequent);
  static Formula chand(std::vector<Formula> children);
  static Formula chor(std::vector<Formula> children);
  static Formula make(NodeKind kind, std::vector<Formula> children);

  NodeKind kind() const noexcept { return node_->kind; }
  // Atom name; for a hybrid atom, its general component.
  const std::string& name() const noexcept { return node_->name; }
  // Elementary component of a hybrid atom (empty otherwise).
  const std::string& elem_name() const noexcept { return node_->elem; }
  std::span<const Formula> children() const noexcept { return node_->children; }
  const Formula& child(std::size_t i) const { return node_->children.at(i); }
  std::size_t arity() const noexcept { return node_->children.size(); }

  bool is_atom() const noexcept;
  bool is_choice() const noexcept;
  bool is_constant() const noexcept;
  bool same_node(const Formula& other) const noexcept { return node_ == other.node_; }

  Formula with_child(std::size_t i, Formula replacement) const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator<(const Formula& a, const Formula& b);

 private:
  struct Node {
    NodeKind kind;
    std::string name;
    std::string elem;
    std::vector<Formula> children;
  };
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Dotted index path `i1.i2.…in.` addressing a surface occurrence.
class SpecPath {
 public:
  SpecPath() = default;
  explicit SpecPath(std::vector<int> steps) : steps_(std::move(steps)) {}

  // Accepts "" (the empty path), "1.2." and the dotless tail form "1.2".
  static SpecPath parse(std::string_view text);

  const std::vector<int>& steps() const noexcept { return steps_; }
  bool empty() const noexcept { return steps_.empty(); }
  std::size_t size() const noexcept { return steps_.size(); }
  SpecPath extended(int index) const;
  bool is_prefix_of(const SpecPath& other) const;
  std::string str() const;

  friend bool operator==(const SpecPath&, const SpecPath&) = default;
  friend auto operator<=>(const SpecPath&, const SpecPath&) = default;

 private:
  std::vector<int> steps_;
};

enum class Polarity { Positive, Negative };

inline Polarity flip(Polarity p) {
  return p == Polarity::Positive ? Polarity::Negative : Polarity::Positive;
}

enum class OccurrenceKind { Elementary, General, Hybrid, ChandNode, ChorNode };

struct Occurrence {
  SpecPath spec;
  Polarity polarity;
  OccurrenceKind kind;
  Formula subject;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, const std::string& message);
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ParseOptions {
  // Admit reserved molecule atoms `_P_a_b` (generated by the completeness
  // machinery; rejected in user input).
  bool allow_reserved = false;
};

Formula parse(std::string_view text, ParseOptions options = {});

// Canonical ASCII rendering; parse(render(f)) == f.
std::string render(const Formula& f);
std::string render_unicode(const Formula& f);

// Left-to-right list of all quasiatoms (surface atoms and surface choice
// nodes); the logical constants are not atoms and are skipped.
std::vector<Occurrence> surface_quasiatoms(const Formula& f);

// The quasiatom addressed by `spec`, if any.
std::optional<Occurrence> quasiatom_at(const Formula& f, const SpecPath& spec);

// Throws SpecError when `spec` does not address a quasiatom of `f`.
Formula replace_at(const Formula& f, const SpecPath& spec, const Formula& g);

// Decomposition of a move string `γβ` against the surface structure of `f`:
// γ is the longest prefix that descends through ¬,∧,∨,→ and ends on a
// quasiatom; β is the remainder.
struct MoveSplit {
  Occurrence occurrence;
  std::string suffix;
};
std::optional<MoveSplit> split_move(const Formula& f, std::string_view move);

bool is_balanced(const Formula& h);
Formula dehybridize(const Formula& h);

bool contains_hybrid(const Formula& f);
bool contains_general(const Formula& f);
bool contains_choice(const Formula& f);
// No general or hybrid atoms.
bool is_elementary_base(const Formula& f);
// Elementary-base and choice-free: a formula of classical logic.
bool is_elementary(const Formula& f);

// Elementary atom names, including elementary components of hybrid atoms.
std::set<std::string> elementary_names(const Formula& f);
std::set<std::string> general_names(const Formula& f);

// Injective atom renaming (per sort) in first-occurrence order. Hybrid atoms
// are renamed component-wise.
Formula canonical_rename(const Formula& f);
std::string canonical_key(const Formula& f);

// Replaces every elementary atom named `from` by `to`.
Formula substitute_elem(const Formula& f, const std::string& from, const Formula& to);

// Number of connective nodes (everything except atoms and constants).
std::size_t connective_count(const Formula& f);

}  // namespace cl2

#endif  // CL2_SYNTAX_HPP_
