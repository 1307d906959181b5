// JSON encodings of proofs, games, interpretations, runs, sessions and
// refutation certificates.

#ifndef CL2_SERIALIZE_HPP_
#define CL2_SERIALIZE_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "cl2/calculus.hpp"
#include "cl2/completeness.hpp"
#include "cl2/games.hpp"
#include "cl2/strategy.hpp"
#include "json.hpp"

namespace cl2 {

using Json = nlohmann::json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Node table {"root": id, "nodes": [{"id", "conclusion", "rule", "detail", "premises": [ids]}]};
// shared subproofs are stored once.
Json proof_to_json(const ProofPtr& p);
ProofPtr proof_from_json(const Json& j);  // throws FormatError or ParseError

std::string proof_to_text(const ProofPtr& p);

// {"op": "chand"|"chor"|"and"|"or"|"neg"|"triv", "children": [...], "value": "T"|"F"}
Json game_to_json(const Game& g);
// Also accepts strings: a preset name or the compact term syntax.
Game game_from_json(const Json& j);
// Compact term syntax "chand(T,chor(F,T))".
Game parse_game_term(std::string_view text);

Json interpretation_to_json(const Interpretation& I);
Interpretation interpretation_from_json(const Json& j);

Json run_to_json(const Run& r);
Run run_from_json(const Json& j);

Json session_state(const Session& s);

Json certificate_to_json(const RefutationCertificate& c);

// "cl1", "cl2" or "cl2circ". Throws FormatError.
System parse_system(const std::string& name);

// Named families: "standard" (the soundness presets), "molecules:m=K" (leaf
// patterns T and F for K=1, TT, TF, FT and FF otherwise), or a single preset
// name.
std::vector<std::pair<std::string, Game>> family_presets(const std::string& name);

}  // namespace cl2

#endif  // CL2_SERIALIZE_HPP_
