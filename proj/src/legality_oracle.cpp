#include "cl2/legality_oracle.hpp"

#include <set>
#include <stdexcept>
#include <string>

namespace cl2::oracle {

namespace {

using Key = std::vector<std::pair<int, std::string>>;

Key key_of(const Run& r) {
  Key k;
  for (const auto& m : r) k.emplace_back(m.player == Player::Top ? 1 : 0, m.move);
  return k;
}

Run prefixed(const Run& r, const std::string& p) {
  Run out;
  for (const auto& m : r) out.push_back({m.player, p + m.move});
  return out;
}

void shuffles(const std::vector<Run>& parts, std::vector<std::size_t>& pos, Run& cur, std::set<Key>& out,
              std::size_t cap) {
  bool done = true;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (pos[i] == parts[i].size()) continue;
    done = false;
    cur.push_back(parts[i][pos[i]]);
    ++pos[i];
    shuffles(parts, pos, cur, out, cap);
    --pos[i];
    cur.pop_back();
  }
  if (done) {
    out.insert(key_of(cur));
    if (out.size() > cap) throw std::length_error("legal run enumeration exceeded its cap");
  }
}

void combine(const std::vector<std::vector<Run>>& per_child, std::size_t i, std::vector<Run>& chosen,
             std::set<Key>& out, std::size_t cap) {
  if (i == per_child.size()) {
    std::vector<std::size_t> pos(chosen.size(), 0);
    Run cur;
    shuffles(chosen, pos, cur, out, cap);
    return;
  }
  for (const auto& r : per_child[i]) {
    chosen.push_back(prefixed(r, std::to_string(i + 1) + "."));
    combine(per_child, i + 1, chosen, out, cap);
    chosen.pop_back();
  }
}

bool parse_index(const std::string& s, std::size_t arity, std::size_t& out) {
  if (s.empty() || s[0] == '0' || s.size() > 9) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  out = std::stoul(s);
  return out >= 1 && out <= arity;
}

}  // namespace

std::vector<Run> legal_runs(const Game& g, std::size_t cap) {
  switch (g.kind()) {
    case GameKind::Triv:
      return {Run{}};
    case GameKind::Neg: {
      std::vector<Run> out;
      for (const auto& r : legal_runs(g.child(0), cap)) out.push_back(negate_run(r));
      return out;
    }
    case GameKind::Chand:
    case GameKind::Chor: {
      // Positive occurrence: ⊓ is ⊥'s choice, ⊔ is ⊤'s. Negation is handled by
      // the Neg case flipping labels of the whole sub-run.
      Player owner = g.kind() == GameKind::Chand ? Player::Bot : Player::Top;
      std::vector<Run> out{Run{}};
      for (std::size_t i = 0; i < g.arity(); ++i) {
        for (const auto& r : legal_runs(g.child(i), cap)) {
          Run x{{owner, std::to_string(i + 1)}};
          x.insert(x.end(), r.begin(), r.end());
          out.push_back(std::move(x));
          if (out.size() > cap) throw std::length_error("legal run enumeration exceeded its cap");
        }
      }
      return out;
    }
    case GameKind::And:
    case GameKind::Or: {
      std::vector<std::vector<Run>> per_child;
      for (const auto& c : g.children()) per_child.push_back(legal_runs(c, cap));
      std::set<Key> keys;
      std::vector<Run> chosen;
      combine(per_child, 0, chosen, keys, cap);
      std::vector<Run> out;
      for (const auto& k : keys) {
        Run r;
        for (const auto& [p, m] : k) r.push_back({p ? Player::Top : Player::Bot, m});
        out.push_back(std::move(r));
      }
      return out;
    }
  }
  return {};
}

bool is_legal(const Game& g, const Run& run) {
  switch (g.kind()) {
    case GameKind::Triv:
      return run.empty();
    case GameKind::Neg:
      return oracle::is_legal(g.child(0), negate_run(run));
    case GameKind::Chand:
    case GameKind::Chor: {
      if (run.empty()) return true;
      Player owner = g.kind() == GameKind::Chand ? Player::Bot : Player::Top;
      std::size_t i = 0;
      if (run[0].player != owner || !parse_index(run[0].move, g.arity(), i)) return false;
      return oracle::is_legal(g.child(i - 1), Run(run.begin() + 1, run.end()));
    }
    case GameKind::And:
    case GameKind::Or: {
      std::vector<Run> parts(g.arity());
      for (const auto& m : run) {
        auto dot = m.move.find('.');
        std::size_t i = 0;
        if (dot == std::string::npos || !parse_index(m.move.substr(0, dot), g.arity(), i)) return false;
        parts[i - 1].push_back({m.player, m.move.substr(dot + 1)});
      }
      for (std::size_t i = 0; i < g.arity(); ++i)
        if (!oracle::is_legal(g.child(i), parts[i])) return false;
      return true;
    }
  }
  return false;
}

Player winner_of_legal(const Game& g, const Run& run) {
  auto top = [](bool b) { return b ? Player::Top : Player::Bot; };
  switch (g.kind()) {
    case GameKind::Triv:
      return top(g.value());
    case GameKind::Neg:
      return opponent(winner_of_legal(g.child(0), negate_run(run)));
    case GameKind::Chand:
    case GameKind::Chor: {
      if (run.empty()) return top(g.kind() == GameKind::Chand);
      std::size_t i = std::stoul(run[0].move);
      return winner_of_legal(g.child(i - 1), Run(run.begin() + 1, run.end()));
    }
    case GameKind::And:
    case GameKind::Or: {
      std::vector<Run> parts(g.arity());
      for (const auto& m : run) {
        auto dot = m.move.find('.');
        parts[std::stoul(m.move.substr(0, dot)) - 1].push_back({m.player, m.move.substr(dot + 1)});
      }
      bool conj = g.kind() == GameKind::And;
      for (std::size_t i = 0; i < g.arity(); ++i) {
        bool t = winner_of_legal(g.child(i), parts[i]) == Player::Top;
        if (conj && !t) return Player::Bot;
        if (!conj && t) return Player::Top;
      }
      return top(conj);
    }
  }
  return Player::Bot;
}

}  // namespace cl2::oracle
