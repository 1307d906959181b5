// Proof systems CL1, CL2 and CL2°: premise generation, decision, proof
// construction, checking and hybridization.

#ifndef CL2_CALCULUS_HPP_
#define CL2_CALCULUS_HPP_

#include <chrono>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "cl2/syntax.hpp"

namespace cl2 {

enum class System { CL1, CL2, CL2circ };
enum class Rule { A, B, C, Ccirc };

std::string to_string(System s);
std::string to_string(Rule r);

struct RuleBDetail {
  SpecPath spec;
  int index = 0;  // 1-based child of the choice occurrence
  friend bool operator==(const RuleBDetail&, const RuleBDetail&) = default;
};

struct RuleCDetail {
  SpecPath pos_spec;
  SpecPath neg_spec;
  std::string general;
  std::string fresh;
  friend bool operator==(const RuleCDetail&, const RuleCDetail&) = default;
};

struct RuleCcircDetail {
  std::string general;
  std::string elem;
  friend bool operator==(const RuleCcircDetail&, const RuleCcircDetail&) = default;
};

using RuleDetail = std::variant<std::monostate, RuleBDetail, RuleCDetail, RuleCcircDetail>;

struct ProofNode;
using ProofPtr = std::shared_ptr<const ProofNode>;

struct ProofNode {
  Formula conclusion;
  Rule rule;
  RuleDetail detail;
  std::vector<ProofPtr> children;
};

ProofPtr make_proof(Formula conclusion, Rule rule, RuleDetail detail, std::vector<ProofPtr> children);

// A premise obtained by replacing a choice occurrence by one of its children.
struct ChoicePremise {
  Formula premise;
  SpecPath spec;
  int index = 0;
};

struct RuleCPremise {
  Formula premise;
  RuleCDetail detail;
};

// Positive ⊓ and negative ⊔ surface occurrences, each resolved to every child;
// occurrences left to right, indices ascending, duplicates retained.
std::vector<ChoicePremise> premises_a_detailed(const Formula& f);
std::vector<Formula> premises_a(const Formula& f);

// Negative ⊓ and positive ⊔ surface occurrences.
std::vector<ChoicePremise> premises_b(const Formula& f);

// One premise per (positive, negative) pair of surface occurrences of the
// same general atom, using canonical_fresh_atom(f).
std::vector<RuleCPremise> premises_c(const Formula& f);

// First of h1, h2, ... not occurring in f.
std::string canonical_fresh_atom(const Formula& f);

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SearchLimits {
  std::size_t max_expansions = 0;  // 0: unlimited
  std::optional<std::chrono::steady_clock::duration> time_limit;
};

struct TraceEvent {
  int depth;
  Formula formula;
  bool provable;
  std::optional<Rule> rule;  // the rule that succeeded
  bool cached;
};

// Memoized exhaustive proof search. One instance is single-threaded; the memo
// is keyed by canonically renamed formulas and may be reused across queries.
class Decider {
 public:
  explicit Decider(System system, SearchLimits limits = {});

  // Throws std::invalid_argument when the formula is outside the system's
  // language, BudgetExceeded when the limits are hit.
  bool provable(const Formula& f);

  System system() const noexcept { return system_; }
  std::size_t memo_size() const noexcept { return memo_.size(); }
  std::size_t expansions() const noexcept { return expansions_; }
  void clear_memo() { memo_.clear(); }
  // Stop adding memo entries past this size (0: unbounded).
  void set_memo_capacity(std::size_t n) { memo_capacity_ = n; }
  void set_trace(std::function<void(const TraceEvent&)> sink) { trace_ = std::move(sink); }

 private:
  bool search(const Formula& f, int depth);

  System system_;
  SearchLimits limits_;
  std::unordered_map<std::string, bool> memo_;
  std::size_t expansions_ = 0;
  std::size_t memo_capacity_ = 0;
  std::chrono::steady_clock::time_point started_;
  std::function<void(const TraceEvent&)> trace_;
};

bool decide(const Formula& f, System system);

// nullptr when unprovable. Rule preference B, then C, then A.
ProofPtr prove(const Formula& f, System system);

struct CheckResult {
  bool ok = true;
  std::string path;  // child indices from the root, e.g. "0.1"; empty for the root
  std::string message;
  explicit operator bool() const noexcept { return ok; }
};

CheckResult check_proof(const ProofPtr& p, System system);

// CL2 proof to CL2° proof: each Rule (c) node becomes Rule (c°) and its fresh
// atom q is rewritten to P_q throughout the subtree above it. Throws
// std::invalid_argument when the input is not a valid CL2 proof.
ProofPtr hybridize(const ProofPtr& p);

std::size_t proof_size(const ProofPtr& p);

// Every node in pre-order (shared nodes repeated).
void for_each_node(const ProofPtr& p, const std::function<void(const ProofNode&)>& fn);

}  // namespace cl2

#endif  // CL2_CALCULUS_HPP_
