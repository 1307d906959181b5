#include "cl2/strategy.hpp"

#include <algorithm>
#include <random>
#include <unordered_map>

namespace cl2 {

std::string to_string(Phase p) {
  switch (p) {
    case Phase::MainLoop: return "main";
    case Phase::InnerWait: return "wait";
    case Phase::Finished: return "finished";
  }
  return "?";
}

namespace {

std::vector<Occurrence> hybrid_pair(const Formula& h, const std::string& general, const std::string& elem) {
  std::vector<Occurrence> out;
  for (auto& o : surface_quasiatoms(h))
    if (o.kind == OccurrenceKind::Hybrid && o.subject.name() == general && o.subject.elem_name() == elem)
      out.push_back(std::move(o));
  return out;
}

}  // namespace

Session::Session(ProofPtr proof, Interpretation I)
    : root_(std::move(proof)),
      cursor_(root_),
      interp_(std::make_shared<const Interpretation>(std::move(I))),
      g0_(root_ ? interpret(root_->conclusion, *interp_) : Game::triv(false)) {
  if (!root_) throw std::invalid_argument("no proof");
  if (auto r = check_proof(root_, System::CL2circ); !r)
    throw std::invalid_argument("not a CL2° proof: " + r.message + (r.path.empty() ? "" : " at node " + r.path));
  residual_ = g0_;
}

void Session::violation(std::string what) {
  violations_.push_back(std::move(what));
}

void Session::record(LabeledMove m, bool into_omega) {
  if (residual_) {
    residual_ = apply_move(*residual_, m);
    if (!residual_ && m.player == Player::Top) violation("machine move " + m.move + " is illegal");
  }
  if (into_omega) omega_.push_back(m);
  theta_.push_back(std::move(m));
}

void Session::check_invariant(const char* where) {
  if (!check_) return;
  const Formula& e = hyperformula();
  if (auto r = is_manageable(omega_, e); !r)
    violation(std::string(where) + ": Ω is not manageable (clause " + std::to_string(r.violated_clause) + "): " +
              r.detail);
  if (!residual_) {
    violation(std::string(where) + ": Θ is illegal");
    return;
  }
  auto rhs = replay_omega(e);
  if (!rhs || !(*rhs == *residual_))
    violation(std::string(where) + ": ⟨Θ⟩ of the root game differs from ⟨Ω⟩ of the current hyperformula");
}

std::optional<Game> Session::replay_omega(const Formula& e) const {
  Game g = interpret(e, *interp_);
  for (const auto& m : omega_) {
    auto next = apply_move(g, m);
    if (!next) return std::nullopt;
    g = std::move(*next);
  }
  return g;
}

void Session::finish(Player p) {
  phase_ = Phase::Finished;
  result_ = p;
}

std::vector<LabeledMove> Session::machine_flush() {
  if (phase_ == Phase::InnerWait) throw PhaseError("awaiting adversary");
  if (phase_ == Phase::Finished) throw PhaseError("session finished");
  std::vector<LabeledMove> emitted;
  while (true) {
    const ProofNode& n = *cursor_;
    if (n.rule == Rule::A) {
      phase_ = Phase::InnerWait;
      break;
    }
    if (n.rule == Rule::B) {
      const auto& d = std::get<RuleBDetail>(n.detail);
      LabeledMove m{Player::Top, d.spec.str() + std::to_string(d.index)};
      record(m, false);
      emitted.push_back(std::move(m));
    } else if (n.rule == Rule::Ccirc) {
      const auto& d = std::get<RuleCcircDetail>(n.detail);
      auto occ = hybrid_pair(n.children[0]->conclusion, d.general, d.elem);
      if (occ.size() != 2) throw std::logic_error("hybrid atom does not occur exactly twice");
      const Occurrence& pos = occ[0].polarity == Polarity::Positive ? occ[0] : occ[1];
      const Occurrence& neg = occ[0].polarity == Polarity::Positive ? occ[1] : occ[0];
      Run at_pos = project(omega_, pos.spec);
      Run at_neg = project(omega_, neg.spec);
      std::vector<LabeledMove> catchup;
      for (const auto& m : at_neg) catchup.push_back({Player::Top, pos.spec.str() + m.move});
      for (const auto& m : at_pos) catchup.push_back({Player::Top, neg.spec.str() + m.move});
      for (auto& m : catchup) {
        record(m, true);
        emitted.push_back(std::move(m));
      }
    } else {
      throw std::logic_error("Rule (c) node in a CL2° proof");
    }
    cursor_ = n.children[0];
    check_invariant("main loop");
  }
  check_invariant("main loop");
  return emitted;
}

MoveOutcome Session::adversary_move(std::string_view alpha) {
  if (phase_ != Phase::InnerWait)
    throw PhaseError(phase_ == Phase::Finished ? "session finished" : "machine has not flushed");
  MoveOutcome out;
  LabeledMove m{Player::Bot, std::string(alpha)};
  bool legal = residual_ && apply_move(*residual_, m).has_value();
  auto split = split_move(hyperformula(), alpha);
  auto lose = [&](std::string why) {
    out.subcase = 4;
    out.accepted = false;
    out.reason = std::move(why);
    theta_.push_back(m);
    residual_.reset();
    finish(Player::Top);
    return out;
  };
  if (!legal) return lose("illegal move");
  if (!split) return lose("move does not address a quasiatom");
  const Occurrence& occ = split->occurrence;
  out.accepted = true;
  switch (occ.kind) {
    case OccurrenceKind::General:
      out.subcase = 1;
      record(m, true);
      break;
    case OccurrenceKind::Hybrid: {
      out.subcase = 2;
      record(m, true);
      std::optional<Occurrence> twin;
      for (auto& o : surface_quasiatoms(hyperformula()))
        if (o.kind == OccurrenceKind::Hybrid && o.subject == occ.subject && o.spec != occ.spec) twin = std::move(o);
      if (!twin) throw std::logic_error("hybrid atom without a twin occurrence");
      LabeledMove reply{Player::Top, twin->spec.str() + split->suffix};
      if (!residual_ || !apply_move(*residual_, reply)) violation("mirror move " + reply.move + " is illegal");
      record(reply, true);
      out.replies.push_back(std::move(reply));
      break;
    }
    case OccurrenceKind::ChandNode:
    case OccurrenceKind::ChorNode: {
      out.subcase = 3;
      const auto idx = std::stoi(split->suffix);  // legality guarantees a plain index
      Formula premise = replace_at(hyperformula(), occ.spec, occ.subject.child(static_cast<std::size_t>(idx - 1)));
      ProofPtr next;
      for (const auto& c : cursor_->children)
        if (c->conclusion == premise) {
          next = c;
          break;
        }
      if (!next) throw std::logic_error("Rule (a) premise missing from the proof");
      record(m, false);
      cursor_ = std::move(next);
      phase_ = Phase::MainLoop;
      break;
    }
    case OccurrenceKind::Elementary:
      return lose("move into an elementary atom");
  }
  check_invariant("inner loop");
  return out;
}

Player Session::adversary_stop() {
  if (phase_ != Phase::InnerWait)
    throw PhaseError(phase_ == Phase::Finished ? "session finished" : "machine has not flushed");
  Player w = winner(g0_, theta_);
  if (w != Player::Top && violations_.empty() && check_)
    violation("⊤ lost at a stable leaf with the invariant intact");
  finish(w);
  return w;
}

std::vector<std::string> Session::adversary_options() const {
  std::vector<std::string> out;
  if (phase_ == Phase::Finished || !residual_) return out;
  for (auto& m : legal_moves(*residual_))
    if (m.player == Player::Bot) out.push_back(std::move(m.move));
  return out;
}

std::string Session::state_key() const {
  std::vector<std::pair<std::string, const LabeledMove*>> grouped;
  grouped.reserve(omega_.size());
  for (const auto& m : omega_) {
    auto split = split_move(hyperformula(), m.move);
    grouped.emplace_back(split ? split->occurrence.spec.str() : m.move, &m);
  }
  std::stable_sort(grouped.begin(), grouped.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::string key = std::to_string(reinterpret_cast<std::uintptr_t>(cursor_.get()));
  key += '|';
  key += residual_ ? render(*residual_) : "-";
  for (const auto& [spec, m] : grouped) {
    key += m->player == Player::Top ? "|T" : "|B";
    key += m->move;
  }
  return key;
}

void Session::inject_machine_move(const std::string& move) { record({Player::Top, move}, false); }

// ---------------------------------------------------------------------------

PlayoutResult playout(const ProofPtr& proof, const Interpretation& I, const AdversaryPolicy& policy) {
  Session s(proof, I);
  PlayoutResult out;
  std::mt19937_64 rng;
  std::size_t script_pos = 0;
  if (const auto* r = std::get_if<RandomPolicy>(&policy)) rng.seed(r->seed);
  auto next_move = [&]() -> std::optional<std::string> {
    if (const auto* r = std::get_if<RandomPolicy>(&policy)) {
      auto opts = s.adversary_options();
      if (opts.empty() || std::bernoulli_distribution(r->stop_probability)(rng)) return std::nullopt;
      return opts[std::uniform_int_distribution<std::size_t>(0, opts.size() - 1)(rng)];
    }
    if (const auto* sc = std::get_if<ScriptedPolicy>(&policy)) {
      if (script_pos >= sc->moves.size()) return std::nullopt;
      return sc->moves[script_pos++];
    }
    return std::get<ExternalPolicy>(policy).next(s);
  };
  while (s.phase() != Phase::Finished) {
    if (s.phase() == Phase::MainLoop) {
      for (auto& m : s.machine_flush()) out.machine_moves.push_back(std::move(m));
      continue;
    }
    auto alpha = next_move();
    if (!alpha) {
      s.adversary_stop();
      break;
    }
    for (auto& m : s.adversary_move(*alpha).replies) out.machine_moves.push_back(std::move(m));
  }
  out.run = s.theta();
  out.winner = *s.result();
  out.violations = s.violations();
  return out;
}

namespace {

struct Explorer {
  struct Count {
    std::size_t branches = 0;
    std::size_t wins = 0;
  };

  VerifyReport& report;
  const VerifyOptions& options;
  std::size_t interp_index;
  std::unordered_map<std::string, Count> memo;

  Count leaf(const Session& s) {
    if (s.result() == Player::Top && s.violations().empty()) return {1, 1};
    if (report.failures.size() < options.max_failures)
      report.failures.push_back({interp_index, s.theta(), s.result().value_or(Player::Bot),
                                 s.violations().empty() ? "⊥ won" : s.violations().front()});
    return {1, 0};
  }

  // Sessions with equal state keys have identical subtrees, so each is
  // explored once; the counts are those of the full tree.
  Count explore(Session s) {
    if (s.phase() == Phase::MainLoop) s.machine_flush();
    if (s.phase() == Phase::Finished) return leaf(s);
    bool clean = options.memoize && s.violations().empty();
    std::string key;
    if (clean) {
      key = s.state_key();
      if (auto it = memo.find(key); it != memo.end()) return it->second;
    }
    Count total;
    for (const auto& alpha : s.adversary_options()) {
      Session t = s;
      t.adversary_move(alpha);
      Count c = explore(std::move(t));
      total.branches += c.branches;
      total.wins += c.wins;
    }
    s.adversary_stop();
    Count c = leaf(s);
    total.branches += c.branches;
    total.wins += c.wins;
    if (clean) memo.emplace(std::move(key), total);
    return total;
  }
};

}  // namespace

VerifyReport verify_all(const ProofPtr& circ_proof, const std::vector<Interpretation>& family,
                        VerifyOptions options) {
  VerifyReport report;
  for (std::size_t i = 0; i < family.size(); ++i) {
    ++report.interpretations;
    Explorer ex{report, options, i, {}};
    auto c = ex.explore(Session(circ_proof, family[i]));
    report.branches += c.branches;
    report.top_wins += c.wins;
  }
  return report;
}

VerifyReport verify_all(const Formula& f, const std::vector<Interpretation>& family, VerifyOptions options) {
  auto p = prove(f, System::CL2);
  if (!p) throw std::invalid_argument("formula is not provable in CL2: " + render(f));
  return verify_all(hybridize(p), family, options);
}

}  // namespace cl2
