// Molecules, ceilings and floors of formulas, goodness, the translation of
// CL1 proofs of good formulas into CL2 proofs of their floors, and
// refutation certificates.

#ifndef CL2_COMPLETENESS_HPP_
#define CL2_COMPLETENESS_HPP_

#include <chrono>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cl2/calculus.hpp"
#include "cl2/syntax.hpp"

namespace cl2 {

enum class MoleculeMode { Total, PerAtom, Fixed };

struct MoleculeSpec {
  MoleculeMode mode = MoleculeMode::PerAtom;
  int k = 0;  // Fixed only
};

// "total", "per-atom" or a decimal k.
MoleculeSpec parse_molecule_spec(const std::string& text);
std::string to_string(const MoleculeSpec& s);

enum class MoleculeSize { Small, Medium, Large };
std::string to_string(MoleculeSize s);

struct MoleculeRef {
  std::string general;
  MoleculeSize size = MoleculeSize::Small;
  int a = 0;  // medium and small
  int b = 0;  // small
  friend bool operator==(const MoleculeRef&, const MoleculeRef&) = default;
  friend auto operator<=>(const MoleculeRef&, const MoleculeRef&) = default;
};

struct MoleculeScheme {
  int m = 2;
  std::set<std::string> generals;
  // Cond1 bounds the molecule occurrences of each general atom separately
  // (PerAtom and Fixed) instead of all of them together (Total).
  bool per_atom_bound = true;

  // Small molecule atom name `_P_a_b`.
  std::string small_name(const std::string& general, int a, int b) const;
  Formula small(const std::string& general, int a, int b) const;
  Formula medium(const std::string& general, int a) const;  // ⊔ of m smalls
  Formula large(const std::string& general) const;          // ⊓ of m mediums
  Formula build(const MoleculeRef& r) const;
  std::optional<MoleculeRef> recognize(const Formula& f) const;
};

// Throws std::invalid_argument when `f` contains hybrid or reserved atoms or
// Fixed(k) is below 2 or below some atom's occurrence count.
std::pair<Formula, MoleculeScheme> ceiling(const Formula& f, MoleculeSpec spec = {});

struct MoleculeOccurrence {
  SpecPath path;  // child indices from the root, negations skipped
  MoleculeRef molecule;
  Polarity polarity = Polarity::Positive;
  bool surface = false;
  bool independent = false;
  bool isolated = false;  // independent small molecule with no other independent occurrence
};

// Every molecule occurrence in pre-order; parts of a larger molecule are
// listed after it with independent = false.
std::vector<MoleculeOccurrence> independent_occurrences(const Formula& e, const MoleculeScheme& scheme);

struct GoodResult {
  int failed_condition = 0;  // 0 when good, otherwise 1..4
  std::string detail;
  explicit operator bool() const noexcept { return failed_condition == 0; }
};

GoodResult is_good(const Formula& e, const MoleculeScheme& scheme);

Formula floor(const Formula& e, const MoleculeScheme& scheme);

// Transforms a CL1 proof of a good formula E into a CL2 proof of floor(E).
// Throws std::invalid_argument when the proof does not check in CL1 or its
// conclusion is not good.
ProofPtr claim1_translate(const ProofPtr& cl1_proof, const MoleculeScheme& scheme);

struct RefutationCertificate {
  Formula formula;
  Formula ceiling;
  MoleculeScheme scheme;
  MoleculeSpec spec;
  bool cl2_unprovable = false;
  bool cl1_unprovable = false;
  bool budget_exceeded = false;  // CL1 search ran out of budget; cl1_unprovable unknown
  bool floor_roundtrip = false;
  bool ceiling_good = false;
  double seconds = 0;
  bool valid() const noexcept {
    return cl2_unprovable && cl1_unprovable && floor_roundtrip && ceiling_good && !budget_exceeded;
  }
};

// nullopt when `f` is CL2-provable.
std::optional<RefutationCertificate> refute(const Formula& f, MoleculeSpec spec = {}, SearchLimits limits = {});

}  // namespace cl2

#endif  // CL2_COMPLETENESS_HPP_
