#include "cl2/completeness.hpp"

#include <charconv>
#include <map>
#include <unordered_map>

#include "cl2/classical.hpp"

namespace cl2 {

MoleculeSpec parse_molecule_spec(const std::string& text) {
  if (text == "total") return {MoleculeMode::Total, 0};
  if (text == "per-atom" || text == "peratom") return {MoleculeMode::PerAtom, 0};
  int k = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), k);
  if (ec != std::errc() || p != text.data() + text.size()) throw std::invalid_argument("bad molecule size '" + text + "'");
  return {MoleculeMode::Fixed, k};
}

std::string to_string(const MoleculeSpec& s) {
  switch (s.mode) {
    case MoleculeMode::Total: return "total";
    case MoleculeMode::PerAtom: return "per-atom";
    case MoleculeMode::Fixed: return std::to_string(s.k);
  }
  return "?";
}

std::string to_string(MoleculeSize s) {
  switch (s) {
    case MoleculeSize::Small: return "small";
    case MoleculeSize::Medium: return "medium";
    case MoleculeSize::Large: return "large";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Scheme

std::string MoleculeScheme::small_name(const std::string& general, int a, int b) const {
  return "_" + general + "_" + std::to_string(a) + "_" + std::to_string(b);
}

Formula MoleculeScheme::small(const std::string& general, int a, int b) const {
  return Formula::elem(small_name(general, a, b));
}

Formula MoleculeScheme::medium(const std::string& general, int a) const {
  std::vector<Formula> c;
  for (int b = 1; b <= m; ++b) c.push_back(small(general, a, b));
  return Formula::chor(std::move(c));
}

Formula MoleculeScheme::large(const std::string& general) const {
  std::vector<Formula> c;
  for (int a = 1; a <= m; ++a) c.push_back(medium(general, a));
  return Formula::chand(std::move(c));
}

Formula MoleculeScheme::build(const MoleculeRef& r) const {
  switch (r.size) {
    case MoleculeSize::Small: return small(r.general, r.a, r.b);
    case MoleculeSize::Medium: return medium(r.general, r.a);
    case MoleculeSize::Large: return large(r.general);
  }
  throw std::logic_error("bad molecule size");
}

namespace {

bool read_int(std::string_view s, int& out) {
  if (s.empty() || s.front() == '0') return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

// `_P_a_b` split into its parts.
std::optional<MoleculeRef> small_parts(const std::string& name) {
  if (name.size() < 6 || name.front() != '_') return std::nullopt;
  auto last = name.rfind('_');
  auto mid = name.rfind('_', last - 1);
  if (mid == 0 || mid == std::string::npos) return std::nullopt;
  MoleculeRef r;
  r.general = name.substr(1, mid - 1);
  if (!read_int(std::string_view(name).substr(mid + 1, last - mid - 1), r.a)) return std::nullopt;
  if (!read_int(std::string_view(name).substr(last + 1), r.b)) return std::nullopt;
  return r;
}

}  // namespace

std::optional<MoleculeRef> MoleculeScheme::recognize(const Formula& f) const {
  switch (f.kind()) {
    case NodeKind::ElemAtom: {
      auto r = small_parts(f.name());
      if (!r || !generals.count(r->general) || r->a > m || r->b > m) return std::nullopt;
      return r;
    }
    case NodeKind::Chor: {
      if (f.arity() != static_cast<std::size_t>(m)) return std::nullopt;
      auto first = recognize(f.child(0));
      if (!first || first->size != MoleculeSize::Small) return std::nullopt;
      for (int b = 1; b <= m; ++b) {
        auto c = recognize(f.child(static_cast<std::size_t>(b - 1)));
        if (!c || c->size != MoleculeSize::Small || c->general != first->general || c->a != first->a || c->b != b)
          return std::nullopt;
      }
      return MoleculeRef{first->general, MoleculeSize::Medium, first->a, 0};
    }
    case NodeKind::Chand: {
      if (f.arity() != static_cast<std::size_t>(m)) return std::nullopt;
      std::string general;
      for (int a = 1; a <= m; ++a) {
        auto c = recognize(f.child(static_cast<std::size_t>(a - 1)));
        if (!c || c->size != MoleculeSize::Medium || c->a != a || (a > 1 && c->general != general))
          return std::nullopt;
        general = c->general;
      }
      return MoleculeRef{general, MoleculeSize::Large, 0, 0};
    }
    default:
      return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Ceiling

namespace {

void count_generals(const Formula& f, std::map<std::string, int>& counts, bool& bad) {
  switch (f.kind()) {
    case NodeKind::GeneralAtom: ++counts[f.name()]; return;
    case NodeKind::HybridAtom: bad = true; return;
    case NodeKind::ElemAtom:
      if (!f.name().empty() && f.name().front() == '_') bad = true;
      return;
    default:
      for (const auto& c : f.children()) count_generals(c, counts, bad);
  }
}

Formula expand(const Formula& f, const MoleculeScheme& s) {
  if (f.kind() == NodeKind::GeneralAtom) return s.large(f.name());
  if (f.arity() == 0) return f;
  std::vector<Formula> c;
  for (const auto& ch : f.children()) c.push_back(expand(ch, s));
  return Formula::make(f.kind(), std::move(c));
}

}  // namespace

std::pair<Formula, MoleculeScheme> ceiling(const Formula& f, MoleculeSpec spec) {
  std::map<std::string, int> counts;
  bool bad = false;
  count_generals(f, counts, bad);
  if (bad) throw std::invalid_argument("ceiling takes a CL2-formula without hybrid or reserved atoms");
  int total = 0, most = 0;
  for (const auto& [name, n] : counts) {
    total += n;
    most = std::max(most, n);
  }
  MoleculeScheme s;
  for (const auto& [name, n] : counts) s.generals.insert(name);
  switch (spec.mode) {
    case MoleculeMode::Total:
      s.m = std::max(2, total);
      s.per_atom_bound = false;
      break;
    case MoleculeMode::PerAtom:
      s.m = std::max(2, most);
      break;
    case MoleculeMode::Fixed:
      if (spec.k < 2 || spec.k < most)
        throw std::invalid_argument("molecule size " + std::to_string(spec.k) + " is below 2 or below " +
                                    std::to_string(most) + " occurrences of one atom");
      s.m = spec.k;
      break;
  }
  return {expand(f, s), s};
}

// ---------------------------------------------------------------------------
// Occurrences, goodness, floor

namespace {

struct OccurrenceWalker {
  const MoleculeScheme& s;
  std::vector<MoleculeOccurrence>& out;
  std::vector<int> path;

  void walk(const Formula& f, Polarity pol, bool surface, bool independent) {
    if (auto r = s.recognize(f)) {
      out.push_back({SpecPath(path), *r, pol, surface, independent, false});
      independent = false;
    }
    if (f.kind() == NodeKind::Neg) return walk(f.child(0), flip(pol), surface, independent);
    bool choice = f.is_choice();
    for (std::size_t i = 0; i < f.arity(); ++i) {
      Polarity cp = f.kind() == NodeKind::Implies && i == 0 ? flip(pol) : pol;
      path.push_back(static_cast<int>(i) + 1);
      walk(f.child(i), cp, surface && !choice, independent);
      path.pop_back();
    }
  }
};

}  // namespace

std::vector<MoleculeOccurrence> independent_occurrences(const Formula& e, const MoleculeScheme& scheme) {
  std::vector<MoleculeOccurrence> out;
  OccurrenceWalker{scheme, out, {}}.walk(e, Polarity::Positive, true, true);
  std::map<MoleculeRef, int> smalls;
  for (const auto& o : out)
    if (o.independent && o.molecule.size == MoleculeSize::Small) ++smalls[o.molecule];
  for (auto& o : out)
    o.isolated = o.independent && o.molecule.size == MoleculeSize::Small && smalls[o.molecule] == 1;
  return out;
}

namespace {

std::string describe(const MoleculeRef& r) {
  std::string out = to_string(r.size) + " " + r.general;
  if (r.size != MoleculeSize::Large) out += " a=" + std::to_string(r.a);
  if (r.size == MoleculeSize::Small) out += " b=" + std::to_string(r.b);
  return out;
}

}  // namespace

GoodResult is_good(const Formula& e, const MoleculeScheme& scheme) {
  auto occ = independent_occurrences(e, scheme);
  std::map<std::string, int> per_atom;
  int total = 0;
  for (const auto& o : occ)
    if (o.independent) {
      ++total;
      ++per_atom[o.molecule.general];
    }
  if (scheme.per_atom_bound) {
    for (const auto& [p, n] : per_atom)
      if (n > scheme.m)
        return {1, std::to_string(n) + " independent " + p + "-based molecule occurrences exceed m=" +
                       std::to_string(scheme.m)};
  } else if (total > scheme.m) {
    return {1, std::to_string(total) + " independent molecule occurrences exceed m=" + std::to_string(scheme.m)};
  }
  for (const auto& o : occ)
    if (o.independent && !o.surface && o.molecule.size != MoleculeSize::Large)
      return {2, describe(o.molecule) + " has an independent non-surface occurrence at '" + o.path.str() + "'"};
  std::map<MoleculeRef, std::pair<int, int>> smalls;
  std::map<MoleculeRef, int> medium_pos;
  for (const auto& o : occ) {
    if (!o.independent) continue;
    bool pos = o.polarity == Polarity::Positive;
    if (o.molecule.size == MoleculeSize::Small) (pos ? smalls[o.molecule].first : smalls[o.molecule].second)++;
    if (o.molecule.size == MoleculeSize::Medium && pos) ++medium_pos[o.molecule];
  }
  for (const auto& [r, n] : smalls)
    if (n.first > 1 || n.second > 1) return {3, describe(r) + " has two independent occurrences of one polarity"};
  for (const auto& [r, n] : medium_pos) {
    if (n > 1) return {4, describe(r) + " has two positive independent occurrences"};
    for (const auto& [sr, sn] : smalls)
      if (sn.first > 0 && sr.general == r.general && sr.a == r.a)
        return {4, describe(r) + " and " + describe(sr) + " both occur positively"};
  }
  return {};
}

namespace {

Formula floor_rec(const Formula& f, const MoleculeScheme& s, const std::map<MoleculeRef, int>& independent_smalls) {
  if (auto r = s.recognize(f)) {
    if (r->size != MoleculeSize::Small) return Formula::general(r->general);
    auto it = independent_smalls.find(*r);
    return it != independent_smalls.end() && it->second == 1 ? Formula::general(r->general) : f;
  }
  if (f.arity() == 0) return f;
  std::vector<Formula> c;
  for (const auto& ch : f.children()) c.push_back(floor_rec(ch, s, independent_smalls));
  return Formula::make(f.kind(), std::move(c));
}

}  // namespace

Formula floor(const Formula& e, const MoleculeScheme& scheme) {
  std::map<MoleculeRef, int> smalls;
  for (const auto& o : independent_occurrences(e, scheme))
    if (o.independent && o.molecule.size == MoleculeSize::Small) ++smalls[o.molecule];
  return floor_rec(e, scheme, smalls);
}

// ---------------------------------------------------------------------------
// Proof translation

namespace {

class Translator {
 public:
  explicit Translator(const MoleculeScheme& s) : s_(s) {}

  ProofPtr translate(const ProofPtr& node) {
    if (auto it = memo_.find(node.get()); it != memo_.end()) return it->second;
    ProofPtr out = node->rule == Rule::A ? rule_a(*node) : rule_b(*node);
    memo_.emplace(node.get(), out);
    return out;
  }

 private:
  static const ProofPtr& child_with(const ProofNode& n, const Formula& h) {
    for (const auto& c : n.children)
      if (c->conclusion == h) return c;
    throw std::logic_error("premise missing from the CL1 proof: " + render(h));
  }

  bool has_independent(const std::vector<MoleculeOccurrence>& occ, const MoleculeRef& r) const {
    for (const auto& o : occ)
      if (o.independent && o.molecule == r) return true;
    return false;
  }

  ProofPtr rule_a(const ProofNode& n) {
    const Formula& e = n.conclusion;
    auto surface = surface_quasiatoms(e);
    auto occ = independent_occurrences(e, s_);
    // Positive surface large molecule: shrink it to a medium one whose row is
    // otherwise unused.
    for (const auto& o : surface) {
      if (o.kind != OccurrenceKind::ChandNode || o.polarity != Polarity::Positive) continue;
      auto r = s_.recognize(o.subject);
      if (!r || r->size != MoleculeSize::Large) continue;
      for (int a = 1; a <= s_.m; ++a) {
        bool used = has_independent(occ, {r->general, MoleculeSize::Medium, a, 0});
        for (int b = 1; b <= s_.m && !used; ++b) used = has_independent(occ, {r->general, MoleculeSize::Small, a, b});
        if (used) continue;
        return translate(child_with(n, replace_at(e, o.spec, s_.medium(r->general, a))));
      }
      throw std::logic_error("no free row for a large molecule");
    }
    // Negative surface medium molecule: pick an unused small one.
    for (const auto& o : surface) {
      if (o.kind != OccurrenceKind::ChorNode || o.polarity != Polarity::Negative) continue;
      auto r = s_.recognize(o.subject);
      if (!r || r->size != MoleculeSize::Medium) continue;
      for (int b = 1; b <= s_.m; ++b) {
        if (has_independent(occ, {r->general, MoleculeSize::Small, r->a, b})) continue;
        return translate(child_with(n, replace_at(e, o.spec, s_.small(r->general, r->a, b))));
      }
      throw std::logic_error("no free column for a medium molecule");
    }
    Formula fe = floor(e, s_);
    std::vector<ProofPtr> children;
    for (const auto& cp : premises_a_detailed(fe)) {
      auto at = quasiatom_at(e, cp.spec);
      if (!at || !at->subject.is_choice()) throw std::logic_error("floor changed the choice structure");
      Formula h = replace_at(e, cp.spec, at->subject.child(static_cast<std::size_t>(cp.index - 1)));
      ProofPtr c = translate(child_with(n, h));
      if (!(c->conclusion == cp.premise)) throw std::logic_error("translated premise differs from the floor premise");
      children.push_back(std::move(c));
    }
    return make_proof(fe, Rule::A, std::monostate{}, std::move(children));
  }

  ProofPtr rule_b(const ProofNode& n) {
    const Formula& e = n.conclusion;
    const auto& d = std::get<RuleBDetail>(n.detail);
    const ProofPtr& premise = n.children.at(0);
    auto at = quasiatom_at(e, d.spec);
    auto r = at ? s_.recognize(at->subject) : std::nullopt;
    if (!r) return make_proof(floor(e, s_), Rule::B, d, {translate(premise)});
    if (r->size == MoleculeSize::Large) return translate(premise);
    if (r->size != MoleculeSize::Medium) throw std::logic_error("Rule (b) on a small molecule");
    MoleculeRef small{r->general, MoleculeSize::Small, r->a, d.index};
    const MoleculeOccurrence* twin = nullptr;
    auto occ = independent_occurrences(e, s_);
    for (const auto& o : occ)
      if (o.independent && o.molecule == small) twin = &o;
    if (!twin) return translate(premise);
    RuleCDetail cd{d.spec, twin->path, r->general, s_.small_name(r->general, r->a, d.index)};
    return make_proof(floor(e, s_), Rule::C, std::move(cd), {translate(premise)});
  }

  const MoleculeScheme& s_;
  std::unordered_map<const ProofNode*, ProofPtr> memo_;
};

}  // namespace

ProofPtr claim1_translate(const ProofPtr& cl1_proof, const MoleculeScheme& scheme) {
  if (!cl1_proof) throw std::invalid_argument("no proof");
  if (auto r = check_proof(cl1_proof, System::CL1); !r)
    throw std::invalid_argument("not a CL1 proof: " + r.message);
  if (auto g = is_good(cl1_proof->conclusion, scheme); !g)
    throw std::invalid_argument("conclusion is not good (Cond" + std::to_string(g.failed_condition) + "): " + g.detail);
  return Translator(scheme).translate(cl1_proof);
}

// ---------------------------------------------------------------------------

std::optional<RefutationCertificate> refute(const Formula& f, MoleculeSpec spec, SearchLimits limits) {
  auto start = std::chrono::steady_clock::now();
  if (decide(f, System::CL2)) return std::nullopt;
  auto [c, scheme] = ceiling(f, spec);
  RefutationCertificate cert{f, c, scheme, spec};
  cert.cl2_unprovable = true;
  cert.ceiling_good = static_cast<bool>(is_good(c, scheme));
  cert.floor_roundtrip = floor(c, scheme) == f;
  try {
    Decider d(System::CL1, limits);
    cert.cl1_unprovable = !d.provable(c);
  } catch (const BudgetExceeded&) {
    cert.budget_exceeded = true;
  }
  cert.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return cert;
}

}  // namespace cl2
