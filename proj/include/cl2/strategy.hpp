// The proof-driven machine strategy for CL2° proofs, adversary policies and
// the exhaustive soundness verifier.

#ifndef CL2_STRATEGY_HPP_
#define CL2_STRATEGY_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cl2/calculus.hpp"
#include "cl2/games.hpp"

namespace cl2 {

enum class Phase { MainLoop, InnerWait, Finished };
std::string to_string(Phase p);

class PhaseError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MoveOutcome {
  // 1: general atom, 2: hybrid atom (mirrored), 3: choice resolved,
  // 4: anything else (the adversary loses).
  int subcase = 0;
  bool accepted = false;
  std::string reason;
  std::vector<LabeledMove> replies;
};

class Session {
 public:
  // Throws std::invalid_argument when `proof` is not a CL2° proof and
  // UnmappedAtom when `I` misses an atom of the root formula.
  Session(ProofPtr proof, Interpretation I);

  // Runs the main loop until the strategy waits for the adversary. Throws
  // PhaseError unless the phase is MainLoop.
  std::vector<LabeledMove> machine_flush();

  // Processes the adversary's move α. Throws PhaseError unless InnerWait.
  MoveOutcome adversary_move(std::string_view alpha);

  // The adversary declines to move further; returns the winner of Θ.
  Player adversary_stop();

  const ProofNode& cursor() const noexcept { return *cursor_; }
  const Formula& hyperformula() const noexcept { return cursor_->conclusion; }
  const Formula& root_formula() const noexcept { return root_->conclusion; }
  const Run& omega() const noexcept { return omega_; }
  const Run& theta() const noexcept { return theta_; }
  const Interpretation& interpretation() const noexcept { return *interp_; }
  const Game& root_game() const noexcept { return g0_; }
  // ⟨Θ⟩G0; nullopt once Θ is illegal.
  const std::optional<Game>& residual() const noexcept { return residual_; }
  Phase phase() const noexcept { return phase_; }
  std::optional<Player> result() const noexcept { return result_; }

  // Legal ⊥ moves at the current position.
  std::vector<std::string> adversary_options() const;

  // Invariant failures observed so far (empty when all checks held).
  const std::vector<std::string>& violations() const noexcept { return violations_; }
  void set_invariant_checks(bool on) noexcept { check_ = on; }

  // Everything the rest of the session depends on: the proof cursor, the
  // residual game and Ω up to interleaving of different occurrences.
  std::string state_key() const;

  // Test hook: appends a ⊤ move to Θ without touching E or Ω.
  void inject_machine_move(const std::string& move);

 private:
  void record(LabeledMove m, bool into_omega);
  void check_invariant(const char* where);
  std::optional<Game> replay_omega(const Formula& e) const;
  void violation(std::string what);
  void finish(Player p);

  ProofPtr root_;
  ProofPtr cursor_;
  std::shared_ptr<const Interpretation> interp_;
  Game g0_;
  std::optional<Game> residual_;
  Run omega_;
  Run theta_;
  Phase phase_ = Phase::MainLoop;
  std::optional<Player> result_;
  std::vector<std::string> violations_;
  bool check_ = true;
};

struct RandomPolicy {
  std::uint64_t seed = 0;
  double stop_probability = 0.15;
};

struct ScriptedPolicy {
  std::vector<std::string> moves;  // played in order, then Stop
};

struct ExternalPolicy {
  // nullopt means Stop.
  std::function<std::optional<std::string>(const Session&)> next;
};

using AdversaryPolicy = std::variant<RandomPolicy, ScriptedPolicy, ExternalPolicy>;

struct PlayoutResult {
  Run run;
  Player winner = Player::Bot;
  std::vector<LabeledMove> machine_moves;
  std::vector<std::string> violations;
};

PlayoutResult playout(const ProofPtr& proof, const Interpretation& I, const AdversaryPolicy& policy);

struct VerifyFailure {
  std::size_t interpretation = 0;  // index into the family
  Run run;
  Player winner = Player::Bot;
  std::string message;
};

struct VerifyReport {
  std::size_t interpretations = 0;
  std::size_t branches = 0;
  std::size_t top_wins = 0;
  std::vector<VerifyFailure> failures;  // capped by VerifyOptions::max_failures
  bool passed() const noexcept { return branches == top_wins && failures.empty(); }
};

struct VerifyOptions {
  std::size_t max_failures = 8;
  // Share subtrees between sessions with equal state keys.
  bool memoize = true;
};

// Explores every adversary branch (each legal ⊥ move of the residual game and
// Stop at every wait state) under every interpretation.
VerifyReport verify_all(const ProofPtr& circ_proof, const std::vector<Interpretation>& family,
                        VerifyOptions options = {});
// Proves and hybridizes first; throws std::invalid_argument when unprovable.
VerifyReport verify_all(const Formula& f, const std::vector<Interpretation>& family, VerifyOptions options = {});

}  // namespace cl2

#endif  // CL2_STRATEGY_HPP_
