#include "cl2/service.hpp"

#include <algorithm>
#include <cstdio>

#include "cl2/calculus.hpp"
#include "cl2/completeness.hpp"
#include "httplib.h"

namespace cl2 {

namespace {

ServiceResponse error(int status, const std::string& message) { return {status, Json{{"error", message}}}; }

Json moves_json(const std::vector<LabeledMove>& ms) {
  Json out = Json::array();
  for (const auto& m : ms) out.push_back(m.move);
  return out;
}

Formula formula_field(const Json& body) {
  if (!body.is_object() || !body.contains("formula") || !body["formula"].is_string())
    throw FormatError("request needs a string field 'formula'");
  return parse(body["formula"].get<std::string>());
}

Interpretation session_interpretation(const Json& j, const Formula& f) {
  if (j.is_string()) {
    Game g = game_from_json(j);
    Interpretation I;
    for (const auto& e : elementary_names(dehybridize(f))) I.elementary[e] = true;
    for (const auto& p : general_names(dehybridize(f))) I.general.insert_or_assign(p, g);
    return I;
  }
  return interpretation_from_json(j);
}

// Runs a handler, mapping library exceptions onto HTTP statuses.
template <class F>
ServiceResponse guarded(F&& handler) {
  try {
    return handler();
  } catch (const ParseError& e) {
    return error(400, std::string("parse error: ") + e.what());
  } catch (const FormatError& e) {
    return error(400, e.what());
  } catch (const Json::exception& e) {
    return error(400, std::string("bad request: ") + e.what());
  } catch (const UnmappedAtom& e) {
    return error(400, e.what());
  } catch (const std::invalid_argument& e) {
    return error(400, e.what());
  } catch (const PhaseError& e) {
    return error(409, e.what());
  }
}

}  // namespace

PlayService::PlayService(ServiceOptions options) : options_(std::move(options)), ids_(options_.seed) {}

std::string PlayService::next_id() {
  char buf[32];
  std::snprintf(buf, sizeof buf, "s%llu-%08llx", static_cast<unsigned long long>(++counter_),
                static_cast<unsigned long long>(ids_() & 0xffffffffULL));
  return buf;
}

std::shared_ptr<PlayService::Entry> PlayService::find(const std::string& id) {
  std::lock_guard guard(store_lock_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::size_t PlayService::session_count() {
  std::lock_guard guard(store_lock_);
  return sessions_.size();
}

std::size_t PlayService::expire_idle(Clock::time_point now) {
  std::lock_guard guard(store_lock_);
  std::size_t dropped = 0;
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    bool idle;
    {
      std::lock_guard entry(it->second->lock);
      idle = now - it->second->last_used > options_.idle_timeout;
    }
    if (idle) {
      it = sessions_.erase(it);
      ++dropped;
    } else {
      ++it;
    }
  }
  return dropped;
}

ServiceResponse PlayService::create_session(const Json& body) {
  return guarded([&]() -> ServiceResponse {
    Formula f = formula_field(body);
    std::string side = body.value("human_player", "bot");
    if (side != "bot") return error(400, "only human_player \"bot\" is supported");
    auto proof = prove(f, System::CL2);
    if (!proof) {
      Json out{{"error", "unprovable"}, {"formula", render(f)}};
      SearchLimits limits;
      limits.time_limit = options_.refute_budget;
      try {
        if (auto cert = cl2::refute(f, {}, limits)) out["refutation"] = certificate_to_json(*cert);
      } catch (const std::exception&) {
      }
      return {422, out};
    }
    if (!body.contains("interpretation")) return error(400, "request needs an 'interpretation'");
    Session s(hybridize(proof), session_interpretation(body["interpretation"], f));
    auto replies = s.machine_flush();
    expire_idle();
    std::lock_guard guard(store_lock_);
    if (sessions_.size() >= options_.max_sessions) return error(503, "too many sessions");
    std::string id = next_id();
    auto entry = std::make_shared<Entry>(std::move(s));
    Json out{{"session_id", id}, {"machine_replies", moves_json(replies)}, {"state", session_state(entry->session)}};
    sessions_.emplace(id, std::move(entry));
    return {201, out};
  });
}

ServiceResponse PlayService::get_session(const std::string& id) {
  auto e = find(id);
  if (!e) return error(404, "no session '" + id + "'");
  std::lock_guard guard(e->lock);
  e->last_used = Clock::now();
  return {200, session_state(e->session)};
}

ServiceResponse PlayService::move(const std::string& id, const Json& body) {
  auto e = find(id);
  if (!e) return error(404, "no session '" + id + "'");
  return guarded([&]() -> ServiceResponse {
    if (!body.is_object() || !body.contains("move") || !body["move"].is_string())
      throw FormatError("request needs a string field 'move'");
    std::string alpha = body["move"].get<std::string>();
    std::lock_guard guard(e->lock);
    e->last_used = Clock::now();
    Session& s = e->session;
    Json out{{"accepted", false}, {"machine_replies", Json::array()}};
    if (s.phase() != Phase::InnerWait) {
      out["reason"] = "session is " + to_string(s.phase()) + ", not awaiting a move";
      out["state"] = session_state(s);
      return {409, out};
    }
    auto options = s.adversary_options();
    if (!options_.strict && std::find(options.begin(), options.end(), alpha) == options.end()) {
      out["reason"] = "illegal move '" + alpha + "'";
      out["state"] = session_state(s);
      return {200, out};
    }
    auto outcome = s.adversary_move(alpha);
    std::vector<LabeledMove> replies = outcome.replies;
    if (s.phase() == Phase::MainLoop) {
      auto more = s.machine_flush();
      replies.insert(replies.end(), more.begin(), more.end());
    }
    out["accepted"] = outcome.accepted;
    if (!outcome.accepted) out["reason"] = outcome.reason;
    out["subcase"] = outcome.subcase;
    out["machine_replies"] = moves_json(replies);
    out["state"] = session_state(s);
    return {200, out};
  });
}

ServiceResponse PlayService::stop(const std::string& id) {
  auto e = find(id);
  if (!e) return error(404, "no session '" + id + "'");
  std::lock_guard guard(e->lock);
  e->last_used = Clock::now();
  if (e->session.phase() != Phase::InnerWait) return {409, session_state(e->session)};
  e->session.adversary_stop();
  return {200, session_state(e->session)};
}

ServiceResponse PlayService::decide(const Json& body) const {
  return guarded([&]() -> ServiceResponse {
    Formula f = formula_field(body);
    System system = parse_system(body.value("system", "cl2"));
    return {200, Json{{"formula", render(f)}, {"system", to_string(system)}, {"provable", cl2::decide(f, system)}}};
  });
}

ServiceResponse PlayService::refute(const Json& body) const {
  return guarded([&]() -> ServiceResponse {
    Formula f = formula_field(body);
    MoleculeSpec spec = parse_molecule_spec(body.value("m", "per-atom"));
    SearchLimits limits;
    if (body.contains("budget_seconds"))
      limits.time_limit = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
          std::chrono::duration<double>(body["budget_seconds"].get<double>()));
    auto cert = cl2::refute(f, spec, limits);
    if (!cert) return {200, Json{{"formula", render(f)}, {"provable", true}}};
    Json out = certificate_to_json(*cert);
    out["provable"] = false;
    return {200, out};
  });
}

ServiceResponse PlayService::health() const {
  return {200, Json{{"status", "ok"}, {"version", kVersion}, {"strict", options_.strict}}};
}

void PlayService::mount(httplib::Server& server) {
  auto reply = [](httplib::Response& res, const ServiceResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  auto body_of = [](const httplib::Request& req) {
    return req.body.empty() ? Json::object() : Json::parse(req.body, nullptr, false);
  };
  auto bad_json = [&](httplib::Response& res) { reply(res, error(400, "request body is not JSON")); };

  server.Get("/health", [=, this](const httplib::Request&, httplib::Response& res) { reply(res, health()); });
  server.Post("/decide", [=, this](const httplib::Request& req, httplib::Response& res) {
    Json b = body_of(req);
    b.is_discarded() ? bad_json(res) : reply(res, decide(b));
  });
  server.Post("/refute", [=, this](const httplib::Request& req, httplib::Response& res) {
    Json b = body_of(req);
    b.is_discarded() ? bad_json(res) : reply(res, refute(b));
  });
  server.Post("/session", [=, this](const httplib::Request& req, httplib::Response& res) {
    Json b = body_of(req);
    b.is_discarded() ? bad_json(res) : reply(res, create_session(b));
  });
  server.Get(R"(/session/([^/]+))", [=, this](const httplib::Request& req, httplib::Response& res) {
    reply(res, get_session(req.matches[1]));
  });
  server.Post(R"(/session/([^/]+)/move)", [=, this](const httplib::Request& req, httplib::Response& res) {
    Json b = body_of(req);
    b.is_discarded() ? bad_json(res) : reply(res, move(req.matches[1], b));
  });
  server.Post(R"(/session/([^/]+)/stop)", [=, this](const httplib::Request& req, httplib::Response& res) {
    reply(res, stop(req.matches[1]));
  });
}

}  // namespace cl2
