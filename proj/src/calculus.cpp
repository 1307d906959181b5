#include "cl2/calculus.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

#include "cl2/classical.hpp"

namespace cl2 {

std::string to_string(System s) {
  switch (s) {
    case System::CL1: return "CL1";
    case System::CL2: return "CL2";
    case System::CL2circ: return "CL2circ";
  }
  return "?";
}

std::string to_string(Rule r) {
  switch (r) {
    case Rule::A: return "a";
    case Rule::B: return "b";
    case Rule::C: return "c";
    case Rule::Ccirc: return "c_circ";
  }
  return "?";
}

ProofPtr make_proof(Formula conclusion, Rule rule, RuleDetail detail, std::vector<ProofPtr> children) {
  return std::make_shared<const ProofNode>(
      ProofNode{std::move(conclusion), rule, std::move(detail), std::move(children)});
}

// ---------------------------------------------------------------------------
// Premises

namespace {

bool is_a_occurrence(const Occurrence& o) {
  return (o.kind == OccurrenceKind::ChandNode && o.polarity == Polarity::Positive) ||
         (o.kind == OccurrenceKind::ChorNode && o.polarity == Polarity::Negative);
}

bool is_b_occurrence(const Occurrence& o) {
  return (o.kind == OccurrenceKind::ChandNode && o.polarity == Polarity::Negative) ||
         (o.kind == OccurrenceKind::ChorNode && o.polarity == Polarity::Positive);
}

std::vector<ChoicePremise> choice_premises(const Formula& f, bool (*select)(const Occurrence&)) {
  std::vector<ChoicePremise> out;
  for (const auto& o : surface_quasiatoms(f)) {
    if (!select(o)) continue;
    for (std::size_t i = 0; i < o.subject.arity(); ++i)
      out.push_back({replace_at(f, o.spec, o.subject.child(i)), o.spec, static_cast<int>(i) + 1});
  }
  return out;
}

bool valid_fresh_name(const std::string& s) {
  if (s.empty()) return false;
  if (s.front() == '_') {
    try {
      return parse(s, {.allow_reserved = true}).kind() == NodeKind::ElemAtom;
    } catch (const ParseError&) {
      return false;
    }
  }
  if (s == "tt" || s == "ff" || !(s.front() >= 'a' && s.front() <= 'z')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); });
}

Formula replace_hybrid(const Formula& f, const std::string& general, const std::string& elem) {
  if (f.kind() == NodeKind::HybridAtom && f.name() == general && f.elem_name() == elem)
    return Formula::general(general);
  if (f.arity() == 0) return f;
  std::vector<Formula> c;
  for (const auto& ch : f.children()) c.push_back(replace_hybrid(ch, general, elem));
  return Formula::make(f.kind(), std::move(c));
}

bool contains_hybrid_atom(const Formula& f, const std::string& general, const std::string& elem) {
  if (f.kind() == NodeKind::HybridAtom) return f.name() == general && f.elem_name() == elem;
  for (const auto& c : f.children())
    if (contains_hybrid_atom(c, general, elem)) return true;
  return false;
}

}  // namespace

std::vector<ChoicePremise> premises_a_detailed(const Formula& f) { return choice_premises(f, is_a_occurrence); }

std::vector<Formula> premises_a(const Formula& f) {
  std::vector<Formula> out;
  for (auto& p : premises_a_detailed(f)) out.push_back(std::move(p.premise));
  return out;
}

std::vector<ChoicePremise> premises_b(const Formula& f) { return choice_premises(f, is_b_occurrence); }

std::string canonical_fresh_atom(const Formula& f) {
  auto used = elementary_names(f);
  for (int i = 1;; ++i) {
    std::string name = "h" + std::to_string(i);
    if (!used.count(name)) return name;
  }
}

std::vector<RuleCPremise> premises_c(const Formula& f) {
  std::vector<RuleCPremise> out;
  auto occ = surface_quasiatoms(f);
  std::vector<std::string> order;
  for (const auto& o : occ)
    if (o.kind == OccurrenceKind::General && std::find(order.begin(), order.end(), o.subject.name()) == order.end())
      order.push_back(o.subject.name());
  if (order.empty()) return out;
  std::string fresh = canonical_fresh_atom(f);
  Formula atom = Formula::elem(fresh);
  for (const auto& name : order) {
    for (const auto& pos : occ) {
      if (pos.kind != OccurrenceKind::General || pos.subject.name() != name || pos.polarity != Polarity::Positive)
        continue;
      for (const auto& neg : occ) {
        if (neg.kind != OccurrenceKind::General || neg.subject.name() != name || neg.polarity != Polarity::Negative)
          continue;
        Formula premise = replace_at(replace_at(f, pos.spec, atom), neg.spec, atom);
        out.push_back({std::move(premise), RuleCDetail{pos.spec, neg.spec, name, fresh}});
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Decision

namespace {

void require_language(const Formula& f, System system) {
  switch (system) {
    case System::CL1:
      if (!is_elementary_base(f)) throw std::invalid_argument("CL1 applies to elementary-base formulas only");
      break;
    case System::CL2:
      if (contains_hybrid(f)) throw std::invalid_argument("CL2 formulas contain no hybrid atoms");
      break;
    case System::CL2circ:
      throw std::invalid_argument("proof search is provided for CL1 and CL2");
  }
}

}  // namespace

Decider::Decider(System system, SearchLimits limits) : system_(system), limits_(limits) {
  if (system == System::CL2circ) throw std::invalid_argument("proof search is provided for CL1 and CL2");
}

bool Decider::provable(const Formula& f) {
  require_language(f, system_);
  started_ = std::chrono::steady_clock::now();
  expansions_ = 0;
  return search(f, 0);
}

bool Decider::search(const Formula& f, int depth) {
  std::string key = canonical_key(f);
  if (auto it = memo_.find(key); it != memo_.end()) {
    if (trace_) trace_({depth, f, it->second, std::nullopt, true});
    return it->second;
  }
  ++expansions_;
  if (limits_.max_expansions && expansions_ > limits_.max_expansions)
    throw BudgetExceeded("proof search exceeded " + std::to_string(limits_.max_expansions) + " expansions");
  if (limits_.time_limit && (expansions_ & 255u) == 0 &&
      std::chrono::steady_clock::now() - started_ > *limits_.time_limit)
    throw BudgetExceeded("proof search exceeded its time limit");

  std::optional<Rule> used;
  auto occ = surface_quasiatoms(f);
  for (const auto& o : occ) {
    if (used) break;
    if (!is_b_occurrence(o)) continue;
    for (std::size_t i = 0; i < o.subject.arity() && !used; ++i)
      if (search(replace_at(f, o.spec, o.subject.child(i)), depth + 1)) used = Rule::B;
  }
  bool has_general = std::any_of(occ.begin(), occ.end(),
                                 [](const Occurrence& o) { return o.kind == OccurrenceKind::General; });
  if (!used && system_ == System::CL2 && has_general) {
    for (const auto& p : premises_c(f)) {
      if (search(p.premise, depth + 1)) {
        used = Rule::C;
        break;
      }
    }
  }
  if (!used && is_stable(f)) {
    std::unordered_set<std::string> seen;
    bool all = true;
    for (const auto& o : occ) {
      if (!all) break;
      if (!is_a_occurrence(o)) continue;
      for (std::size_t i = 0; i < o.subject.arity(); ++i) {
        Formula p = replace_at(f, o.spec, o.subject.child(i));
        if (!seen.insert(canonical_key(p)).second) continue;
        if (!search(p, depth + 1)) {
          all = false;
          break;
        }
      }
    }
    if (all) used = Rule::A;
  }
  bool result = used.has_value();
  if (!memo_capacity_ || memo_.size() < memo_capacity_) memo_.emplace(std::move(key), result);
  if (trace_) trace_({depth, f, result, used, false});
  return result;
}

bool decide(const Formula& f, System system) { return Decider(system).provable(f); }

namespace {

class ProofBuilder {
 public:
  explicit ProofBuilder(Decider& d) : d_(d) {}

  ProofPtr build(const Formula& f) {
    std::string key = render(f);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    ProofPtr out = construct(f);
    cache_.emplace(std::move(key), out);
    return out;
  }

 private:
  ProofPtr construct(const Formula& f) {
    for (auto& p : premises_b(f))
      if (d_.provable(p.premise))
        return make_proof(f, Rule::B, RuleBDetail{p.spec, p.index}, {build(p.premise)});
    if (d_.system() == System::CL2)
      for (auto& p : premises_c(f))
        if (d_.provable(p.premise)) return make_proof(f, Rule::C, p.detail, {build(p.premise)});
    if (!is_stable(f)) throw std::logic_error("prove: no rule applies to " + render(f));
    std::vector<ProofPtr> children;
    for (const auto& p : premises_a(f)) {
      if (!d_.provable(p)) throw std::logic_error("prove: unprovable Rule (a) premise " + render(p));
      children.push_back(build(p));
    }
    return make_proof(f, Rule::A, std::monostate{}, std::move(children));
  }

  Decider& d_;
  std::map<std::string, ProofPtr> cache_;
};

}  // namespace

ProofPtr prove(const Formula& f, System system) {
  Decider d(system);
  if (!d.provable(f)) return nullptr;
  return ProofBuilder(d).build(f);
}

// ---------------------------------------------------------------------------
// Checking

namespace {

class Checker {
 public:
  explicit Checker(System system) : system_(system) {}

  CheckResult check(const ProofNode& n) {
    if (auto it = memo_.find(&n); it != memo_.end()) return it->second;
    CheckResult r = check_node(n);
    if (r.ok) {
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (!n.children[i]) {
          r = fail("missing child proof");
          break;
        }
        CheckResult c = check(*n.children[i]);
        if (!c.ok) {
          r = c;
          r.path = std::to_string(i) + (c.path.empty() ? "" : "." + c.path);
          break;
        }
      }
    }
    memo_.emplace(&n, r);
    return r;
  }

 private:
  static CheckResult fail(std::string message) { return {false, "", std::move(message)}; }

  CheckResult check_language(const ProofNode& n) const {
    const Formula& f = n.conclusion;
    switch (system_) {
      case System::CL1:
        if (!is_elementary_base(f)) return fail("formula outside the CL1 language");
        if (n.rule == Rule::C || n.rule == Rule::Ccirc) return fail("rule not available in CL1");
        break;
      case System::CL2:
        if (contains_hybrid(f)) return fail("hybrid atom in a CL2 proof");
        if (n.rule == Rule::Ccirc) return fail("rule not available in CL2");
        break;
      case System::CL2circ:
        if (!is_balanced(f)) return fail("hyperformula not balanced");
        if (n.rule == Rule::C) return fail("rule not available in CL2circ");
        break;
    }
    return {};
  }

  static bool one_child(const ProofNode& n) { return n.children.size() == 1 && n.children[0]; }

  CheckResult check_node(const ProofNode& n) const {
    if (auto r = check_language(n); !r.ok) return r;
    const Formula& f = n.conclusion;
    switch (n.rule) {
      case Rule::A: {
        if (!std::holds_alternative<std::monostate>(n.detail)) return fail("unexpected detail on a Rule (a) node");
        if (!is_stable(f)) return fail("conclusion not stable");
        std::set<std::string> expected, actual;
        for (const auto& p : premises_a(f)) expected.insert(render(p));
        for (const auto& c : n.children)
          if (c) actual.insert(render(c->conclusion));
        if (expected != actual) return fail("premises do not match the Rule (a) premise set");
        return {};
      }
      case Rule::B: {
        const auto* d = std::get_if<RuleBDetail>(&n.detail);
        if (!d) return fail("missing Rule (b) detail");
        if (!one_child(n)) return fail("Rule (b) takes exactly one premise");
        auto occ = quasiatom_at(f, d->spec);
        if (!occ) return fail("spec does not address a quasiatom");
        if (!is_b_occurrence(*occ)) return fail("occurrence is not a negative ⊓ or positive ⊔");
        if (d->index < 1 || static_cast<std::size_t>(d->index) > occ->subject.arity())
          return fail("choice index out of range");
        Formula expected = replace_at(f, d->spec, occ->subject.child(static_cast<std::size_t>(d->index - 1)));
        if (!(expected == n.children[0]->conclusion)) return fail("premise does not match the Rule (b) replacement");
        return {};
      }
      case Rule::C: {
        const auto* d = std::get_if<RuleCDetail>(&n.detail);
        if (!d) return fail("missing Rule (c) detail");
        if (!one_child(n)) return fail("Rule (c) takes exactly one premise");
        auto pos = quasiatom_at(f, d->pos_spec);
        auto neg = quasiatom_at(f, d->neg_spec);
        auto is_atom = [&](const std::optional<Occurrence>& o, Polarity pol) {
          return o && o->kind == OccurrenceKind::General && o->subject.name() == d->general && o->polarity == pol;
        };
        if (!is_atom(pos, Polarity::Positive)) return fail("positive spec does not address the general atom");
        if (!is_atom(neg, Polarity::Negative)) return fail("negative spec does not address the general atom");
        if (!valid_fresh_name(d->fresh)) return fail("fresh atom is not an elementary atom name");
        if (elementary_names(f).count(d->fresh)) return fail("fresh atom occurs in conclusion");
        Formula atom = Formula::elem(d->fresh);
        Formula expected = replace_at(replace_at(f, d->pos_spec, atom), d->neg_spec, atom);
        if (!(expected == n.children[0]->conclusion)) return fail("premise does not match the Rule (c) replacement");
        return {};
      }
      case Rule::Ccirc: {
        const auto* d = std::get_if<RuleCcircDetail>(&n.detail);
        if (!d) return fail("missing Rule (c°) detail");
        if (!one_child(n)) return fail("Rule (c°) takes exactly one premise");
        const Formula& premise = n.children[0]->conclusion;
        if (!contains_hybrid_atom(premise, d->general, d->elem)) return fail("premise lacks the hybrid atom");
        if (!(replace_hybrid(premise, d->general, d->elem) == f))
          return fail("conclusion is not the premise with the hybrid atom replaced by its general component");
        return {};
      }
    }
    return fail("unknown rule");
  }

  System system_;
  std::unordered_map<const ProofNode*, CheckResult> memo_;
};

class Hybridizer {
 public:
  using Substitution = std::vector<std::pair<std::string, std::string>>;  // (q, P)

  ProofPtr run(const ProofPtr& p, const Substitution& s) {
    std::string key = std::to_string(reinterpret_cast<std::uintptr_t>(p.get()));
    for (const auto& [q, g] : s) key += "|" + q + ":" + g;
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Formula conclusion = p->conclusion;
    for (const auto& [q, g] : s) conclusion = substitute_elem(conclusion, q, Formula::hybrid(g, q));
    ProofPtr out;
    if (p->rule == Rule::C) {
      const auto& d = std::get<RuleCDetail>(p->detail);
      Substitution inner = s;
      inner.emplace_back(d.fresh, d.general);
      out = make_proof(conclusion, Rule::Ccirc, RuleCcircDetail{d.general, d.fresh}, {run(p->children[0], inner)});
    } else {
      std::vector<ProofPtr> children;
      for (const auto& c : p->children) children.push_back(run(c, s));
      out = make_proof(conclusion, p->rule, p->detail, std::move(children));
    }
    memo_.emplace(std::move(key), out);
    return out;
  }

 private:
  std::unordered_map<std::string, ProofPtr> memo_;
};

}  // namespace

CheckResult check_proof(const ProofPtr& p, System system) {
  if (!p) return {false, "", "empty proof"};
  return Checker(system).check(*p);
}

ProofPtr hybridize(const ProofPtr& p) {
  auto r = check_proof(p, System::CL2);
  if (!r.ok) throw std::invalid_argument("hybridize needs a valid CL2 proof: " + r.message);
  return Hybridizer().run(p, {});
}

void for_each_node(const ProofPtr& p, const std::function<void(const ProofNode&)>& fn) {
  if (!p) return;
  fn(*p);
  for (const auto& c : p->children) for_each_node(c, fn);
}

std::size_t proof_size(const ProofPtr& p) {
  std::unordered_set<const ProofNode*> seen;
  std::vector<const ProofNode*> stack;
  if (p) stack.push_back(p.get());
  while (!stack.empty()) {
    const ProofNode* n = stack.back();
    stack.pop_back();
    if (!seen.insert(n).second) continue;
    for (const auto& c : n->children)
      if (c) stack.push_back(c.get());
  }
  return seen.size();
}

}  // namespace cl2
