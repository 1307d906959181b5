#include "cl2/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cl2/calculus.hpp"
#include "cl2/completeness.hpp"
#include "cl2/lemmas.hpp"
#include "cl2/serialize.hpp"
#include "cl2/service.hpp"
#include "cl2/strategy.hpp"
#include "httplib.h"

namespace cl2 {

std::uint64_t default_seed() {
  const char* env = std::getenv("CL2_SEED");
  if (!env || !*env) return 0;
  try {
    std::size_t used = 0;
    auto v = std::stoull(env, &used);
    return used == std::string(env).size() ? v : 0;
  } catch (const std::exception&) {
    return 0;
  }
}

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// A path to a JSON file, inline JSON, or a bare game preset name.
Json json_argument(const std::string& text) {
  std::ifstream probe(text);
  std::string source = probe ? read_file(text) : text;
  Json j = Json::parse(source, nullptr, false);
  if (j.is_discarded()) {
    if (probe) throw UsageError("'" + text + "' is not JSON");
    return Json(text);
  }
  return j;
}

Interpretation interpretation_argument(const std::string& text, const Formula& f) {
  Json j = json_argument(text);
  if (j.is_string()) {
    Game g = game_from_json(j);
    Interpretation I;
    for (const auto& e : elementary_names(dehybridize(f))) I.elementary[e] = true;
    for (const auto& p : general_names(dehybridize(f))) I.general.insert_or_assign(p, g);
    return I;
  }
  return interpretation_from_json(j);
}

void emit(std::ostream& out, bool json, const Json& report, const std::function<void()>& text) {
  if (json)
    out << report.dump(2) << "\n";
  else
    text();
}

// Search events arrive children first; rebuild the tree to print it top down.
struct TraceNode {
  TraceEvent event;
  std::vector<TraceNode> children;
};

void print_trace(std::ostream& out, const std::vector<TraceEvent>& events) {
  std::vector<TraceNode> stack;
  for (const auto& e : events) {
    TraceNode node{e, {}};
    auto first = stack.end();
    while (first != stack.begin() && (first - 1)->event.depth > e.depth) --first;
    node.children.assign(std::make_move_iterator(first), std::make_move_iterator(stack.end()));
    stack.erase(first, stack.end());
    stack.push_back(std::move(node));
  }
  std::function<void(const TraceNode&)> rec = [&](const TraceNode& n) {
    out << std::string(static_cast<std::size_t>(n.event.depth) * 2, ' ') << render(n.event.formula) << "  "
        << (n.event.provable ? "provable" : "unprovable");
    if (n.event.rule) out << " by " << to_string(*n.event.rule);
    if (n.event.cached) out << " (cached)";
    out << "\n";
    for (const auto& c : n.children) rec(c);
  };
  for (const auto& n : stack) rec(n);
}

struct Context {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

int cmd_decide(Context& io, const std::string& text, const std::string& system_name, bool trace, bool json) {
  Formula f = parse(text);
  System system = parse_system(system_name);
  Decider d(system);
  std::vector<TraceEvent> events;
  if (trace) d.set_trace([&](const TraceEvent& e) { events.push_back(e); });
  bool provable = d.provable(f);
  Json report{{"command", "decide"}, {"formula", render(f)}, {"system", to_string(system)}, {"provable", provable}};
  if (trace) report["search_nodes"] = events.size();
  emit(io.out, json, report, [&] {
    if (trace) print_trace(io.out, events);
    io.out << (provable ? "provable" : "unprovable") << "\n";
  });
  return provable ? kExitOk : kExitNegative;
}

int cmd_prove(Context& io, const std::string& text, const std::string& system_name, const std::string& format) {
  Formula f = parse(text);
  System system = parse_system(system_name);
  ProofPtr p = prove(f, system == System::CL2circ ? System::CL2 : system);
  if (!p) {
    io.err << "unprovable in " << to_string(system) << "\n";
    return kExitNegative;
  }
  if (system == System::CL2circ) p = hybridize(p);
  if (format == "json")
    io.out << proof_to_json(p).dump(2) << "\n";
  else
    io.out << proof_to_text(p);
  return kExitOk;
}

int cmd_check(Context& io, const std::string& path, const std::string& system_name, bool json) {
  System system = parse_system(system_name);
  Json j = Json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) throw UsageError("'" + path + "' is not JSON");
  ProofPtr p = proof_from_json(j);
  CheckResult r = check_proof(p, system);
  Json report{{"command", "check"},    {"file", path},          {"system", to_string(system)},
              {"ok", r.ok},            {"conclusion", render(p->conclusion)}, {"nodes", proof_size(p)}};
  if (!r.ok) report["error"] = {{"path", r.path}, {"message", r.message}};
  emit(io.out, json, report, [&] {
    if (r.ok)
      io.out << "ok: valid " << to_string(system) << " proof of " << render(p->conclusion) << "\n";
    else
      io.out << "invalid at node [" << r.path << "]: " << r.message << "\n";
  });
  return r.ok ? kExitOk : kExitNegative;
}

std::optional<std::string> stdin_move(Context& io, const Session& s) {
  io.err << "position: " << to_string(s.theta()) << "\nlegal:";
  for (const auto& m : s.adversary_options()) io.err << " " << m;
  io.err << "\nmove (or 'stop')> " << std::flush;
  std::string line;
  while (std::getline(io.in, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    if (line == "stop") return std::nullopt;
    return line;
  }
  return std::nullopt;
}

int cmd_play(Context& io, const std::string& text, const std::string& interp, const std::string& adversary,
             std::uint64_t seed, bool json) {
  Formula f = parse(text);
  ProofPtr p = prove(f, System::CL2);
  if (!p) {
    io.err << "unprovable: no strategy to play\n";
    return kExitNegative;
  }
  Interpretation I = interpretation_argument(interp, f);
  AdversaryPolicy policy;
  if (adversary == "random") {
    policy = RandomPolicy{seed};
  } else if (adversary == "stdin") {
    policy = ExternalPolicy{[&io](const Session& s) { return stdin_move(io, s); }};
  } else if (adversary.rfind("script:", 0) == 0) {
    std::istringstream lines(read_file(adversary.substr(7)));
    ScriptedPolicy script;
    for (std::string line; std::getline(lines, line);) {
      std::istringstream words(line);
      if (std::string w; words >> w) script.moves.push_back(w);
    }
    policy = script;
  } else {
    throw UsageError("--adversary must be random, stdin or script:<file>");
  }
  PlayoutResult r = playout(hybridize(p), I, policy);
  Json report{{"command", "play"},
              {"formula", render(f)},
              {"interpretation", interpretation_to_json(I)},
              {"adversary", adversary},
              {"run", run_to_json(r.run)},
              {"winner", to_string(r.winner)},
              {"violations", r.violations}};
  if (adversary == "random") report["seed"] = seed;
  emit(io.out, json, report, [&] {
    for (const auto& m : r.run) io.out << to_string(m.player) << " " << m.move << "\n";
    io.out << "winner: " << to_string(r.winner) << "\n";
    for (const auto& v : r.violations) io.out << "violation: " << v << "\n";
  });
  return r.violations.empty() ? kExitOk : kExitInvariant;
}

int cmd_verify(Context& io, const std::string& text, const std::string& family_name, bool exhaustive,
               std::size_t playouts, bool memo, std::uint64_t seed, bool json) {
  Formula f = parse(text);
  ProofPtr p = prove(f, System::CL2);
  if (!p) {
    io.err << "unprovable: nothing to verify\n";
    return kExitNegative;
  }
  ProofPtr circ = hybridize(p);
  auto family = interpretation_family(f, family_presets(family_name));
  VerifyReport r;
  if (exhaustive) {
    VerifyOptions o;
    o.memoize = memo;
    r = verify_all(circ, family, o);
  } else {
    r.interpretations = family.size();
    for (std::size_t i = 0; i < family.size(); ++i)
      for (std::size_t k = 0; k < playouts; ++k) {
        auto out = playout(circ, family[i], RandomPolicy{seed + i * playouts + k});
        ++r.branches;
        if (out.winner == Player::Top && out.violations.empty()) {
          ++r.top_wins;
        } else if (r.failures.size() < 8) {
          std::string msg = out.violations.empty() ? "lost by T" : out.violations.front();
          r.failures.push_back({i, out.run, out.winner, msg});
        }
      }
  }
  Json failures = Json::array();
  for (const auto& x : r.failures)
    failures.push_back({{"interpretation", interpretation_to_json(family[x.interpretation])},
                        {"run", run_to_json(x.run)},
                        {"winner", to_string(x.winner)},
                        {"message", x.message}});
  Json report{{"command", "verify"},          {"formula", render(f)},     {"family", family_name},
              {"mode", exhaustive ? "exhaustive" : "random"},             {"interpretations", r.interpretations},
              {"branches", r.branches},       {"top_wins", r.top_wins},   {"failures", failures},
              {"passed", r.passed()}};
  if (!exhaustive) report["seed"] = seed;
  emit(io.out, json, report, [&] {
    io.out << (exhaustive ? "exhaustive" : "random") << " verification of " << render(f) << " over " << r.interpretations
           << " interpretations (" << family_name << ")\n"
           << "branches: " << r.branches << ", won by T: " << r.top_wins << "\n";
    for (const auto& x : r.failures)
      io.out << "failure under interpretation " << x.interpretation << ": " << x.message << " run " << to_string(x.run) << "\n";
    io.out << (r.passed() ? "pass" : "FAIL") << "\n";
  });
  return r.passed() ? kExitOk : kExitInvariant;
}

int cmd_refute(Context& io, const std::string& text, const std::string& m, const std::string& out_path, double budget,
               bool json) {
  Formula f = parse(text);
  MoleculeSpec spec = parse_molecule_spec(m);
  SearchLimits limits;
  if (budget > 0)
    limits.time_limit =
        std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(budget));
  auto cert = refute(f, spec, limits);
  Json report{{"command", "refute"}, {"formula", render(f)}, {"m_mode", to_string(spec)}};
  int code = kExitOk;
  if (!cert) {
    report["status"] = "provable";
  } else {
    Json c = certificate_to_json(*cert);
    c.erase("seconds");
    report["certificate"] = c;
    if (cert->valid()) {
      report["status"] = "refuted";
      code = kExitNegative;
    } else if (cert->budget_exceeded) {
      report["status"] = "budget-exceeded";
      code = kExitNegative;
    } else {
      report["status"] = "inconsistent";
      code = kExitInvariant;
    }
    if (!out_path.empty()) {
      std::ofstream file(out_path);
      if (!file) throw UsageError("cannot write '" + out_path + "'");
      file << certificate_to_json(*cert).dump(2) << "\n";
    }
  }
  emit(io.out, json, report, [&] {
    io.out << report["status"].get<std::string>() << "\n";
    if (!cert) return;
    io.out << std::boolalpha << "ceiling: " << render(cert->ceiling) << "\n"
           << "m = " << cert->scheme.m << " (" << to_string(spec) << ")\n"
           << "CL2-unprovable: " << cert->cl2_unprovable << ", CL1-unprovable ceiling: " << cert->cl1_unprovable
           << ", floor round trip: " << cert->floor_roundtrip << ", ceiling good: " << cert->ceiling_good << "\n";
  });
  return code;
}

std::vector<SuiteReport> run_suites(const std::string& suite, std::size_t cases, std::uint64_t seed) {
  std::vector<SuiteReport> out;
  if (suite == "all") {
    for (const auto& p : lemma_suites()) out.push_back(run_property(p, cases, seed));
    return out;
  }
  const Property* p = find_lemma_suite(suite);
  if (!p) {
    std::string names;
    for (const auto& q : lemma_suites()) names += " " + q.name;
    throw UsageError("unknown suite '" + suite + "'; known:" + names + " all");
  }
  out.push_back(run_property(*p, cases, seed));
  return out;
}

int cmd_lemmas(Context& io, const std::string& suite, std::size_t cases, std::uint64_t seed, bool json) {
  if (cases < 1) throw UsageError("--cases must be at least 1");
  auto reports = run_suites(suite, cases, seed);
  bool ok = true;
  Json list = Json::array();
  for (const auto& r : reports) {
    ok = ok && r.passed();
    Json cx = Json::array();
    for (const auto& c : r.counterexamples)
      cx.push_back({{"case", c.case_index},
                    {"case_seed", c.case_seed},
                    {"message", c.message},
                    {"original", c.original},
                    {"minimized", c.minimized},
                    {"shrink_steps", c.shrink_steps}});
    list.push_back({{"suite", r.suite},
                    {"property", r.description},
                    {"cases", r.cases},
                    {"checks", r.checks},
                    {"vacuous", r.vacuous},
                    {"violations", r.violations},
                    {"passed", r.passed()},
                    {"counterexamples", cx}});
  }
  Json report{{"command", "lemmas"}, {"seed", seed}, {"suites", list}, {"passed", ok}};
  emit(io.out, json, report, [&] {
    for (const auto& r : reports) {
      io.out << r.suite << ": " << (r.passed() ? "pass" : "FAIL") << " (" << r.cases << " cases, " << r.checks
             << " checks, " << r.vacuous << " vacuous, " << r.violations << " violations)\n";
      for (const auto& c : r.counterexamples)
        io.out << "  case " << c.case_index << " (seed " << c.case_seed << "): " << c.message << "\n"
               << "    minimized: " << c.minimized << "\n";
    }
  });
  return ok ? kExitOk : kExitInvariant;
}

int cmd_serve(Context& io, const std::string& host, int port, bool strict, int idle) {
  ServiceOptions o;
  o.strict = strict;
  o.idle_timeout = std::chrono::seconds(idle);
  o.seed = default_seed();
  PlayService svc(o);
  httplib::Server server;
  svc.mount(server);
  if (!server.bind_to_port(host, port)) {
    io.err << "cannot listen on " << host << ":" << port << "\n";
    return kExitUsage;
  }
  io.out << "cl2 " << kVersion << " listening on " << host << ":" << port << (strict ? " (strict)" : "") << std::endl;
  server.listen_after_bind();
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Context io{in, out, err};
  CLI::App app{"Workbench for the propositional computability logic CL2", "cl2"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string formula, system = "cl2", format = "text", file, interp, adversary = "random", family = "standard";
  std::string m = "per-atom", out_path, suite, host = "127.0.0.1";
  bool trace = false, json = false, exhaustive = false, no_memo = false, strict = false;
  std::uint64_t seed = default_seed();
  std::size_t cases = 1000, playouts = 200;
  double budget = 600;
  int port = 8080, idle = 1800;

  auto* decide = app.add_subcommand("decide", "Decide provability of a formula");
  decide->add_option("formula", formula, "Formula")->required();
  decide->add_option("--system", system, "cl1, cl2 or cl2circ")->capture_default_str();
  decide->add_flag("--trace", trace, "Print the memoized search tree");
  decide->add_flag("--json", json, "Machine-readable report");

  auto* prove_cmd = app.add_subcommand("prove", "Print a proof of a formula");
  prove_cmd->add_option("formula", formula, "Formula")->required();
  prove_cmd->add_option("--system", system, "cl1, cl2 or cl2circ")->capture_default_str();
  prove_cmd->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();

  auto* check = app.add_subcommand("check", "Check a proof stored as JSON");
  check->add_option("proof", file, "Proof file")->required();
  check->add_option("--system", system, "cl1, cl2 or cl2circ")->capture_default_str();
  check->add_flag("--json", json, "Machine-readable report");

  auto* play = app.add_subcommand("play", "Play the extracted strategy against an adversary");
  play->add_option("--formula", formula, "Formula")->required();
  play->add_option("--interp", interp, "Interpretation: JSON file, inline JSON or a game preset")->required();
  play->add_option("--adversary", adversary, "random, stdin or script:<file>")->capture_default_str();
  play->add_option("--seed", seed, "Random adversary seed (default CL2_SEED)");
  play->add_flag("--json", json, "Machine-readable report");

  auto* verify = app.add_subcommand("verify", "Check the strategy against every adversary branch");
  verify->add_option("--formula", formula, "Formula")->required();
  verify->add_option("--interp-family", family, "standard, molecules:m=K or a preset name")->capture_default_str();
  verify->add_flag("--exhaustive", exhaustive, "Explore every branch instead of random playouts");
  verify->add_option("--playouts", playouts, "Random playouts per interpretation")->capture_default_str();
  verify->add_flag("--no-memo", no_memo, "Walk the full tree without sharing equal states");
  verify->add_option("--seed", seed, "Seed for random playouts (default CL2_SEED)");
  verify->add_flag("--json", json, "Machine-readable report");

  auto* refute_cmd = app.add_subcommand("refute", "Build a refutation certificate for an unprovable formula");
  refute_cmd->add_option("formula", formula, "Formula")->required();
  refute_cmd->add_option("--m", m, "total, per-atom or a number")->capture_default_str();
  refute_cmd->add_option("--out", out_path, "Write the certificate here");
  refute_cmd->add_option("--budget", budget, "Seconds allowed for the CL1 search (0: unlimited)")->capture_default_str();
  refute_cmd->add_flag("--json", json, "Machine-readable report");

  auto* lemmas = app.add_subcommand("lemmas", "Run a randomized property suite");
  lemmas->add_option("suite", suite, "Suite name or 'all'")->required();
  lemmas->add_option("--cases", cases, "Cases per suite")->capture_default_str();
  lemmas->add_option("--seed", seed, "Seed (default CL2_SEED)");
  lemmas->add_flag("--json", json, "Machine-readable report");

  auto* serve = app.add_subcommand("serve", "Serve the play protocol over HTTP");
  serve->add_option("--port", port, "Port")->capture_default_str();
  serve->add_option("--host", host, "Address to bind")->capture_default_str();
  serve->add_flag("--strict", strict, "Illegal moves forfeit instead of being rejected");
  serve->add_option("--idle-timeout", idle, "Seconds before an idle session is dropped")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*decide) return cmd_decide(io, formula, system, trace, json);
    if (*prove_cmd) return cmd_prove(io, formula, system, format);
    if (*check) return cmd_check(io, file, system, json);
    if (*play) return cmd_play(io, formula, interp, adversary, seed, json);
    if (*verify) return cmd_verify(io, formula, family, exhaustive, playouts, !no_memo, seed, json);
    if (*refute_cmd) return cmd_refute(io, formula, m, out_path, budget, json);
    if (*lemmas) return cmd_lemmas(io, suite, cases, seed, json);
    if (*serve) return cmd_serve(io, host, port, strict, idle);
  } catch (const ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const FormatError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const UnmappedAtom& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  }
  return kExitUsage;
}

}  // namespace cl2
