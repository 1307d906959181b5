// Finite constant games: interpretation of formulas, legality, prefixation,
// winners, run projections, delays and manageability.

#ifndef CL2_GAMES_HPP_
#define CL2_GAMES_HPP_

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cl2/syntax.hpp"

namespace cl2 {

enum class Player { Top, Bot };

inline Player opponent(Player p) { return p == Player::Top ? Player::Bot : Player::Top; }
std::string to_string(Player p);  // "T" / "B"

struct LabeledMove {
  Player player;
  std::string move;
  friend bool operator==(const LabeledMove&, const LabeledMove&) = default;
};

using Run = std::vector<LabeledMove>;

std::string to_string(const Run& run);  // ⟨⊥1.2, ⊤2⟩ written as "<B:1.2, T:2>"
Run negate_run(const Run& run);

enum class GameKind { Triv, Neg, And, Or, Chand, Chor };

// Immutable game tree. Choice and parallel nodes take at least one child.
class Game {
 public:
  static Game triv(bool value);
  static Game neg(Game child);
  static Game make(GameKind kind, std::vector<Game> children);
  static Game conj(std::vector<Game> c) { return make(GameKind::And, std::move(c)); }
  static Game disj(std::vector<Game> c) { return make(GameKind::Or, std::move(c)); }
  static Game chand(std::vector<Game> c) { return make(GameKind::Chand, std::move(c)); }
  static Game chor(std::vector<Game> c) { return make(GameKind::Chor, std::move(c)); }

  GameKind kind() const noexcept { return node_->kind; }
  bool value() const noexcept { return node_->value; }  // Triv only
  std::span<const Game> children() const noexcept { return node_->children; }
  const Game& child(std::size_t i) const { return node_->children.at(i); }
  std::size_t arity() const noexcept { return node_->children.size(); }
  bool same_node(const Game& o) const noexcept { return node_ == o.node_; }
  Game with_child(std::size_t i, Game replacement) const;

  friend bool operator==(const Game& a, const Game& b);

 private:
  struct Node {
    GameKind kind;
    bool value;
    std::vector<Game> children;
  };
  explicit Game(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Compact term syntax, e.g. "chand(T,chor(F,T))".
std::string render(const Game& g);

struct Interpretation {
  std::map<std::string, bool> elementary;
  std::map<std::string, Game> general;
};

class UnmappedAtom : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Hybrid atoms P_q are interpreted as P; → as ¬G ∨ H.
Game interpret(const Formula& f, const Interpretation& I);

class IllegalPosition : public std::runtime_error {
 public:
  IllegalPosition(std::size_t index, const LabeledMove& move);
  std::size_t index() const noexcept { return index_; }
  const LabeledMove& move() const noexcept { return move_; }

 private:
  std::size_t index_;
  LabeledMove move_;
};

// Residual game after one labeled move; nullopt when the move is illegal.
std::optional<Game> apply_move(const Game& g, const LabeledMove& m);

// Index of the first illegal move of `run`, if any.
std::optional<std::size_t> first_illegal(const Game& g, const Run& run);
bool is_legal(const Game& g, const Run& run);

// ⟨Φ⟩g. Throws IllegalPosition.
Game prefix(const Game& g, const Run& position);

// One-move legal extensions of the position.
std::vector<LabeledMove> legal_moves(const Game& g, const Run& position = {});

// Finalization value of the game at the empty run: ⊓ ↦ ⊤, ⊔ ↦ ⊥.
bool final_value(const Game& g);

// The player who wins the (finite) run: the opponent of the first offender,
// otherwise the finalization value of the residual game.
Player winner(const Game& g, const Run& run);

// Γ^γ: moves ℘γβ kept as ℘β.
Run project(const Run& run, const SpecPath& gamma);
// Γ^{−γ}: moves ℘γβ deleted.
Run project_out(const Run& run, const SpecPath& gamma);
// Γ_F^γ: Γ^γ, negated when the γ occurrence is negative in F. Throws SpecError.
Run signed_project(const Run& run, const Formula& f, const SpecPath& gamma);

// Δ is a ℘-delay of Γ: same per-player subsequences, and ℘'s moves are only
// ever postponed relative to the opponent's.
bool is_delay(const Run& delta, const Run& gamma, Player p);
inline bool is_top_delay(const Run& delta, const Run& gamma) { return is_delay(delta, gamma, Player::Top); }

struct ManageResult {
  int violated_clause = 0;  // 0 when manageable
  std::string detail;
  explicit operator bool() const noexcept { return violated_clause == 0; }
};

// Manageability of a run relative to a balanced hyperformula.
ManageResult is_manageable(const Run& run, const Formula& f);

// Molecule game ⊓_{a≤m} ⊔_{b≤m} leaf(a,b); `leaves` over {T,F} fills the m*m
// leaves row by row, repeated cyclically.
Game molecule_game(int m, std::string_view leaves);

// Named presets: "molecule(m=2,leaves=TF)", "irregular1", "irregular2".
Game game_preset(std::string_view name);

// The soundness family's game presets, in a fixed order.
std::vector<std::pair<std::string, Game>> standard_game_presets();

// Every assignment to the elementary atoms of `f` (hybrid components
// included) combined with every preset applied uniformly to all general atoms.
std::vector<Interpretation> interpretation_family(const Formula& f,
                                                  const std::vector<std::pair<std::string, Game>>& presets);

}  // namespace cl2

#endif  // CL2_GAMES_HPP_
