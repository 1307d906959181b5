// Brute-force legality by the compositional definitions of the game
// operations, independent of the incremental engine in games.hpp.

#ifndef CL2_LEGALITY_ORACLE_HPP_
#define CL2_LEGALITY_ORACLE_HPP_

#include <cstddef>
#include <vector>

#include "cl2/games.hpp"

namespace cl2::oracle {

// Every legal run of g. Throws std::length_error past `cap` runs.
std::vector<Run> legal_runs(const Game& g, std::size_t cap = 200000);

// Membership test: ⟨⟩ for trivial games; ¬Γ for negation; every move of a
// parallel combination addresses some component and each component's
// projection is legal; a choice run is empty or starts with the owner's
// choice followed by a legal run of the chosen component.
bool is_legal(const Game& g, const Run& run);

// Winner of a legal run by the same definitions.
Player winner_of_legal(const Game& g, const Run& run);

}  // namespace cl2::oracle

#endif  // CL2_LEGALITY_ORACLE_HPP_
