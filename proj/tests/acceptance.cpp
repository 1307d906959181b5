// Acceptance harness: one PASS/FAIL line per primary criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cl2/calculus.hpp"
#include "cl2/classical.hpp"
#include "cl2/completeness.hpp"
#include "cl2/generate.hpp"
#include "cl2/lemmas.hpp"
#include "cl2/strategy.hpp"

using namespace cl2;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string secs(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

std::size_t node_count(const Formula& f) {
  std::size_t n = 1;
  for (const auto& c : f.children()) n += node_count(c);
  return n;
}

struct GoldenRow {
  const char* formula;
  bool provable;
};

const std::vector<GoldenRow>& golden() {
  static const std::vector<GoldenRow> rows{
      {"P | ~P", true},
      {"P + ~P", false},
      {"P -> P * P", true},
      {"(P & Q) | (R & S) -> (P | R) & (Q | S)", true},
      {"p & (p -> Q) & (p -> R) -> Q & R", true},
      {"P & (P -> Q) & (P -> R) -> Q & R", false},
      {"P * (Q | R) -> (P * Q) | (P * R)", true},
      {"(P * Q) | (P * R) -> P * (Q | R)", false},
      {"(p * Q) | (p * R) -> p * (Q | R)", true},
      {"P & P -> P", true},
      {"P -> P & P", false},
  };
  return rows;
}

// Provable formulas with at least one general atom and at most five nodes
// over {p, q, P, Q}.
std::vector<Formula> small_provable_corpus() {
  std::vector<Formula> out;
  Decider d(System::CL2);
  GenOptions opt;
  enumerate_formulas({Formula::elem("p"), Formula::elem("q"), Formula::general("P"), Formula::general("Q")}, 4, opt,
                     [&](const Formula& f) {
                       if (node_count(f) <= 5 && contains_general(f) && d.provable(f)) out.push_back(f);
                     });
  return out;
}

Outcome golden_table() {
  int wrong = 0;
  std::string first;
  for (const auto& r : golden())
    if (decide(parse(r.formula), System::CL2) != r.provable) {
      if (!wrong++) first = r.formula;
    }
  return {wrong == 0, std::to_string(golden().size()) + " verdicts, " + std::to_string(wrong) + " wrong" +
                          (first.empty() ? "" : " (first: " + first + ")")};
}

Outcome conservativity() {
  Decider d1(System::CL1), d2(System::CL2);
  d1.set_memo_capacity(1000000);
  d2.set_memo_capacity(1000000);
  std::size_t count = 0, mismatches = 0;
  auto check = [&](const Formula& f) {
    ++count;
    bool a = d2.provable(f);
    if (a != d1.provable(f)) ++mismatches;
    if (is_elementary(f) && a != is_tautology(f)) ++mismatches;
  };
  enumerate_formulas({Formula::elem("p"), Formula::elem("q")}, 5, GenOptions{}, check);
  std::mt19937_64 rng(2024);
  GenOptions opt;
  opt.general.clear();
  opt.elementary = {"p", "q", "r"};
  opt.max_connectives = 7;
  for (int i = 0; i < 500; ++i) check(random_formula(rng, opt));
  return {mismatches == 0, std::to_string(count) + " formulas, " + std::to_string(mismatches) + " mismatches"};
}

Outcome soundness(const std::vector<Formula>& corpus) {
  std::vector<Formula> formulas;
  for (const char* s : {"P | ~P", "P -> P * P", "(P & Q) | (R & S) -> (P | R) & (Q | S)", "p & (p -> Q) & (p -> R) -> Q & R",
                        "P * (Q | R) -> (P * Q) | (P * R)", "(p * Q) | (p * R) -> p * (Q | R)", "P & P -> P"})
    formulas.push_back(parse(s));
  formulas.insert(formulas.end(), corpus.begin(), corpus.end());
  Decider d(System::CL2);
  enumerate_formulas({Formula::elem("p"), Formula::general("P")}, 3, GenOptions{}, [&](const Formula& f) {
    if (contains_general(f) && d.provable(f)) formulas.push_back(f);
  });
  auto presets = standard_game_presets();
  std::size_t interps = 0, branches = 0, failed = 0;
  std::string first;
  for (const auto& f : formulas) {
    auto r = verify_all(f, interpretation_family(f, presets));
    interps += r.interpretations;
    branches += r.branches;
    if (!r.passed()) {
      if (!failed++) first = render(f) + ": " + (r.failures.empty() ? "lost" : r.failures.front().message);
    }
  }
  return {failed == 0, std::to_string(formulas.size()) + " formulas, " + std::to_string(interps) + " interpretations, " +
                           std::to_string(branches) + " branches, " + std::to_string(failed) + " failing" +
                           (first.empty() ? "" : " (first: " + first + ")")};
}

Outcome refutation() {
  struct Item {
    const char* formula;
    double budget;
    bool may_exceed;
  };
  const Item items[] = {
      {"P + ~P", 60, false},
      {"(P * Q) | (P * R) -> P * (Q | R)", 60, false},
      {"P & (P -> Q) & (P -> R) -> Q & R", 600, true},
  };
  bool ok = true;
  std::ostringstream detail;
  for (const auto& it : items) {
    SearchLimits limits;
    limits.time_limit = std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(it.budget));
    auto t0 = Clock::now();
    auto cert = refute(parse(it.formula), {MoleculeMode::PerAtom}, limits);
    double s = since(t0);
    std::string status;
    if (!cert) {
      status = "provable";
      ok = false;
    } else if (cert->valid() && s <= it.budget) {
      status = "refuted";
    } else if (cert->budget_exceeded && it.may_exceed) {
      status = "budget-exceeded";
    } else {
      status = "invalid";
      ok = false;
    }
    detail << it.formula << ": " << status << " in " << secs(s) << "; ";
  }
  std::string d = detail.str();
  return {ok, d.substr(0, d.size() - 2)};
}

Outcome translation(const std::vector<Formula>& corpus) {
  std::size_t checked = 0, failures = 0;
  auto translate = [&](const ProofPtr& cl1, const MoleculeScheme& s, const Formula& expected) {
    ++checked;
    auto t = claim1_translate(cl1, s);
    if (!check_proof(t, System::CL2) || !(t->conclusion == expected)) ++failures;
  };
  std::size_t ceilings = 0;
  for (const auto& f : corpus) {
    if (ceilings >= 150) break;
    auto [c, s] = ceiling(f);
    auto p = prove(c, System::CL1);
    if (!p || !is_good(c, s)) {
      ++checked;
      ++failures;
      continue;
    }
    translate(p, s, f);
    ++ceilings;
  }
  std::mt19937_64 rng(17);
  MoleculeScheme scheme = ceiling(parse("P & Q")).second;
  GenOptions mo;
  mo.max_connectives = 4;
  std::size_t generated = 0;
  for (int i = 0; i < 200000 && generated < 100; ++i) {
    Formula e = random_molecular_formula(rng, mo, scheme);
    if (!is_good(e, scheme)) continue;
    auto p = prove(e, System::CL1);
    if (!p) continue;
    translate(p, scheme, floor(e, scheme));
    ++generated;
  }
  return {failures == 0 && checked >= 100, std::to_string(checked) + " translations (" + std::to_string(ceilings) +
                                               " ceilings, " + std::to_string(generated) + " generated), " +
                                               std::to_string(failures) + " failures"};
}

Outcome identities() {
  std::mt19937_64 rng(31);
  GenOptions opt;
  opt.max_connectives = 6;
  std::size_t failures = 0;
  for (int i = 0; i < 1000; ++i) {
    Formula f = random_formula(rng, opt);
    auto [c, s] = ceiling(f);
    if (!(floor(c, s) == f) || !is_good(c, s)) ++failures;
  }
  return {failures == 0, "1000 formulas, " + std::to_string(failures) + " failures"};
}

Outcome lemma_suites_criterion() {
  std::size_t failing = 0, suites = 0, checks = 0;
  std::string names;
  for (const auto& p : lemma_suites()) {
    auto r = run_property(p, 1000, 1);
    ++suites;
    checks += r.checks;
    if (!r.passed()) {
      ++failing;
      names += " " + r.suite;
      for (const auto& c : r.counterexamples) std::cerr << r.suite << ": " << c.message << "\n  " << c.minimized << "\n";
    }
  }
  return {failing == 0, std::to_string(suites) + " suites x 1000 cases, " + std::to_string(checks) + " checks, " +
                            std::to_string(failing) + " failing" + names};
}

Outcome hygiene(const std::vector<Formula>& corpus) {
  std::vector<Formula> formulas = corpus;
  for (const auto& r : golden())
    if (r.provable) formulas.push_back(parse(r.formula));
  std::mt19937_64 rng(43);
  GenOptions opt;
  opt.max_connectives = 6;
  for (int i = 0, found = 0; i < 5000 && found < 500; ++i) {
    Formula f = random_formula(rng, opt);
    if (decide(f, System::CL2)) {
      formulas.push_back(f);
      ++found;
    }
  }
  std::size_t nodes = 0, failures = 0;
  for (const auto& f : formulas) {
    auto circ = hybridize(prove(f, System::CL2));
    bool ok = static_cast<bool>(check_proof(circ, System::CL2circ));
    for_each_node(circ, [&](const ProofNode& n) {
      ++nodes;
      if (!is_balanced(n.conclusion)) ok = false;
    });
    if (!ok) ++failures;
  }
  return {failures == 0, std::to_string(formulas.size()) + " proofs, " + std::to_string(nodes) + " nodes, " +
                             std::to_string(failures) + " failures"};
}

}  // namespace

int main() {
  auto t0 = Clock::now();
  const auto corpus = small_provable_corpus();
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"golden provability table", golden_table},
      {"conservativity", conservativity},
      {"soundness sweep", [&] { return soundness(corpus); }},
      {"refutation pipeline", refutation},
      {"ceiling proof translation", [&] { return translation(corpus); }},
      {"floor/ceiling identities", identities},
      {"lemma property suites", lemma_suites_criterion},
      {"proof hygiene", [&] { return hygiene(corpus); }},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    auto t = Clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << " [" << secs(since(t)) << "]" << std::endl;
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << criteria.size() - failed << "/" << criteria.size() << " ["
            << secs(since(t0)) << "]" << std::endl;
  return failed ? 1 : 0;
}
