// Elementarization, classical evaluation and stability.

#ifndef CL2_CLASSICAL_HPP_
#define CL2_CLASSICAL_HPP_

#include <map>
#include <stdexcept>
#include <string>

#include "cl2/syntax.hpp"

namespace cl2 {

// Truth tables are enumerated explicitly; inputs with more distinct
// elementary atoms are rejected.
inline constexpr int kMaxTautologyAtoms = 20;

class TooManyAtoms : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ‖h‖: surface ⊓ ↦ ⊤, surface ⊔ ↦ ⊥, positive/negative surface general atom
// ↦ ⊥/⊤, surface hybrid P_q ↦ q.
Formula elementarize(const Formula& h);

// Throws std::invalid_argument on non-elementary input.
bool is_tautology(const Formula& e);
bool evaluate(const Formula& e, const std::map<std::string, bool>& assignment);

// Equivalent to is_tautology(elementarize(h)) without building ‖h‖.
bool is_stable(const Formula& h);

}  // namespace cl2

#endif  // CL2_CLASSICAL_HPP_
