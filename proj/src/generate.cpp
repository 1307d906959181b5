#include "cl2/generate.hpp"

namespace cl2 {

namespace {

std::vector<NodeKind> binary_kinds(const GenOptions& o) {
  std::vector<NodeKind> kinds;
  if (o.parallel) {
    kinds.push_back(NodeKind::And);
    kinds.push_back(NodeKind::Or);
  }
  if (o.implication) kinds.push_back(NodeKind::Implies);
  if (o.choice) {
    kinds.push_back(NodeKind::Chand);
    kinds.push_back(NodeKind::Chor);
  }
  return kinds;
}

Formula random_leaf(std::mt19937_64& rng, const GenOptions& o) {
  std::size_t pool = o.elementary.size() + o.general.size() + (o.constants ? 2 : 0);
  if (pool == 0) throw std::invalid_argument("generator has no atoms");
  std::size_t i = std::uniform_int_distribution<std::size_t>(0, pool - 1)(rng);
  if (i < o.elementary.size()) return Formula::elem(o.elementary[i]);
  i -= o.elementary.size();
  if (i < o.general.size()) return Formula::general(o.general[i]);
  return i == o.general.size() ? Formula::top() : Formula::bot();
}

}  // namespace

Formula random_formula_sized(std::mt19937_64& rng, const GenOptions& o, int n) {
  if (n <= 0) return random_leaf(rng, o);
  auto kinds = binary_kinds(o);
  if (o.negation) kinds.push_back(NodeKind::Neg);
  if (kinds.empty()) return random_leaf(rng, o);
  NodeKind k = kinds[std::uniform_int_distribution<std::size_t>(0, kinds.size() - 1)(rng)];
  if (k == NodeKind::Neg) return Formula::neg(random_formula_sized(rng, o, n - 1));
  int arity = 2;
  if (k != NodeKind::Implies && o.max_arity > 2)
    arity = std::uniform_int_distribution<int>(2, o.max_arity)(rng);
  // Split the remaining n-1 connectives among the children.
  std::vector<int> share(static_cast<std::size_t>(arity), 0);
  for (int i = 0; i < n - 1; ++i)
    ++share[std::uniform_int_distribution<std::size_t>(0, share.size() - 1)(rng)];
  std::vector<Formula> children;
  for (int s : share) children.push_back(random_formula_sized(rng, o, s));
  return Formula::make(k, std::move(children));
}

Formula random_formula(std::mt19937_64& rng, const GenOptions& o) {
  int n = std::uniform_int_distribution<int>(0, std::max(0, o.max_connectives))(rng);
  return random_formula_sized(rng, o, n);
}

namespace {

Formula molecularize(std::mt19937_64& rng, const Formula& f, const MoleculeScheme& s) {
  if (f.kind() == NodeKind::GeneralAtom) {
    std::uniform_int_distribution<int> index(1, s.m);
    switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
      case 0: return s.small(f.name(), index(rng), index(rng));
      case 1: return s.medium(f.name(), index(rng));
      default: return s.large(f.name());
    }
  }
  if (f.arity() == 0) return f;
  std::vector<Formula> c;
  for (const auto& ch : f.children()) c.push_back(molecularize(rng, ch, s));
  return Formula::make(f.kind(), std::move(c));
}

}  // namespace

Formula random_molecular_formula(std::mt19937_64& rng, const GenOptions& options, const MoleculeScheme& scheme) {
  return molecularize(rng, random_formula(rng, options), scheme);
}

void enumerate_formulas(const std::vector<Formula>& leaves, int max_connectives, const GenOptions& o,
                        const std::function<void(const Formula&)>& visit) {
  auto kinds = binary_kinds(o);
  // levels[n] holds every formula with exactly n connectives; the last level is
  // streamed to `visit` instead of stored.
  std::vector<std::vector<Formula>> levels;
  for (int n = 0; n <= max_connectives; ++n) {
    bool store = n < max_connectives;
    std::vector<Formula> level;
    auto emit = [&](Formula f) {
      visit(f);
      if (store) level.push_back(std::move(f));
    };
    if (n == 0) {
      for (const auto& l : leaves) emit(l);
    } else {
      if (o.negation)
        for (const auto& c : levels[static_cast<std::size_t>(n - 1)]) emit(Formula::neg(c));
      for (NodeKind k : kinds)
        for (int left = 0; left <= n - 1; ++left)
          for (const auto& a : levels[static_cast<std::size_t>(left)])
            for (const auto& b : levels[static_cast<std::size_t>(n - 1 - left)])
              emit(Formula::make(k, {a, b}));
    }
    levels.push_back(std::move(level));
  }
}

Game random_game(std::mt19937_64& rng, int depth, int max_arity) {
  std::uniform_int_distribution<int> coin(0, 1);
  if (depth <= 0 || std::uniform_int_distribution<int>(0, 4)(rng) == 0) return Game::triv(coin(rng));
  int k = std::uniform_int_distribution<int>(0, 4)(rng);
  if (k == 0) return Game::neg(random_game(rng, depth - 1, max_arity));
  static constexpr GameKind kinds[] = {GameKind::And, GameKind::Or, GameKind::Chand, GameKind::Chor};
  int arity = std::uniform_int_distribution<int>(1, std::max(1, max_arity))(rng);
  std::vector<Game> c;
  for (int i = 0; i < arity; ++i) c.push_back(random_game(rng, depth - 1, max_arity));
  return Game::make(kinds[k - 1], std::move(c));
}

Run random_legal_run(std::mt19937_64& rng, const Game& g, std::size_t max_length) {
  Run run;
  Game cur = g;
  while (run.size() < max_length) {
    auto moves = legal_moves(cur);
    if (moves.empty()) break;
    auto m = moves[std::uniform_int_distribution<std::size_t>(0, moves.size() - 1)(rng)];
    cur = *apply_move(cur, m);
    run.push_back(std::move(m));
  }
  return run;
}

std::string random_move_string(std::mt19937_64& rng, int max_depth) {
  int depth = std::uniform_int_distribution<int>(0, max_depth)(rng);
  std::string s;
  for (int i = 0; i < depth; ++i) s += std::to_string(std::uniform_int_distribution<int>(1, 3)(rng)) + ".";
  return s + std::to_string(std::uniform_int_distribution<int>(1, 3)(rng));
}

}  // namespace cl2
