#include <thread>

#include "cl2/service.hpp"
#include "doctest.h"
#include "httplib.h"

using namespace cl2;

namespace {

Json create(PlayService& svc, const std::string& formula, Json interp = "molecule(m=2,leaves=TF)") {
  auto r = svc.create_session({{"formula", formula}, {"interpretation", interp}, {"human_player", "bot"}});
  REQUIRE(r.status == 201);
  return r.body;
}

}  // namespace

TEST_CASE("session lifecycle on P | ~P") {
  PlayService svc;
  Json c = create(svc, "P | ~P");
  std::string id = c["session_id"];
  CHECK(c["machine_replies"].empty());
  CHECK(c["state"]["phase"] == "wait");
  CHECK(c["state"]["legal_moves"] == Json({"1.1", "1.2"}));

  auto m = svc.move(id, {{"move", "1.2"}});
  CHECK(m.status == 200);
  CHECK(m.body["accepted"] == true);
  CHECK(m.body["machine_replies"] == Json({"2.2"}));
  CHECK(m.body["state"]["run"].size() == 2);

  auto s = svc.stop(id);
  CHECK(s.status == 200);
  CHECK(s.body["phase"] == "finished");
  CHECK(s.body["winner"] == "T");
  CHECK_FALSE(s.body.contains("violations"));
  CHECK(svc.stop(id).status == 409);
  CHECK(svc.move(id, {{"move", "1.1"}}).status == 409);
  CHECK(svc.get_session(id).body["winner"] == "T");
  CHECK(svc.get_session("nope").status == 404);
}

TEST_CASE("a move in the consequent of P & P -> P is mirrored into the antecedent") {
  PlayService svc;
  Json c = create(svc, "P & P -> P", "molecule(m=2,leaves=TF)");
  std::string id = c["session_id"];
  auto legal = c["state"]["legal_moves"];
  REQUIRE(std::find(legal.begin(), legal.end(), "2.1") != legal.end());
  auto m = svc.move(id, {{"move", "2.1"}});
  CHECK(m.body["accepted"] == true);
  REQUIRE(m.body["machine_replies"].size() == 1);
  std::string reply = m.body["machine_replies"][0];
  CHECK(reply.rfind("1.", 0) == 0);
  CHECK(reply.substr(reply.size() - 2) == ".1");
  // Play the session to the end along the first legal move each time.
  for (int i = 0; i < 10; ++i) {
    auto st = svc.get_session(id).body;
    if (st["legal_moves"].empty()) break;
    svc.move(id, {{"move", st["legal_moves"][0]}});
  }
  CHECK(svc.stop(id).body["winner"] == "T");
}

TEST_CASE("illegal moves are rejected unless strict") {
  PlayService lenient;
  std::string id = create(lenient, "P | ~P")["session_id"];
  Json before = lenient.get_session(id).body;
  auto r = lenient.move(id, {{"move", "7.3"}});
  CHECK(r.status == 200);
  CHECK(r.body["accepted"] == false);
  CHECK(r.body.contains("reason"));
  CHECK(lenient.get_session(id).body == before);

  ServiceOptions o;
  o.strict = true;
  PlayService strict(o);
  id = create(strict, "P | ~P")["session_id"];
  r = strict.move(id, {{"move", "7.3"}});
  CHECK(r.body["accepted"] == false);
  CHECK(r.body["state"]["phase"] == "finished");
  CHECK(r.body["state"]["winner"] == "T");
  CHECK(r.body["state"]["residual_game"].is_null());
}

TEST_CASE("session requests are validated") {
  PlayService svc;
  CHECK(svc.create_session({{"formula", "P | ~P"}, {"interpretation", "irregular1"}, {"human_player", "machine"}}).status == 400);
  CHECK(svc.create_session({{"formula", "P | "}, {"interpretation", "irregular1"}}).status == 400);
  CHECK(svc.create_session({{"formula", "P | ~P"}}).status == 400);
  CHECK(svc.create_session({{"formula", "P & Q -> P"}, {"interpretation", Json{{"general", {{"P", "irregular1"}}}}}}).status == 400);
  auto r = svc.create_session({{"formula", "P + ~P"}, {"interpretation", "irregular1"}});
  CHECK(r.status == 422);
  CHECK(r.body["error"] == "unprovable");
  CHECK(r.body["refutation"]["valid"] == true);
  CHECK(svc.move("missing", {{"move", "1"}}).status == 404);
  std::string id = create(svc, "p | ~p", Json{{"elementary", {{"p", "F"}}}})["session_id"];
  CHECK(svc.move(id, Json{{"mv", "1"}}).status == 400);
  CHECK(svc.get_session(id).body["legal_moves"].empty());
  CHECK(svc.stop(id).body["winner"] == "T");
}

TEST_CASE("decide, refute and health") {
  PlayService svc;
  CHECK(svc.decide({{"formula", "P \\/ ~P"}}).body["provable"] == true);
  CHECK(svc.decide({{"formula", "P + ~P"}}).body["provable"] == false);
  CHECK(svc.decide({{"formula", "p + ~p"}, {"system", "cl1"}}).body["provable"] == false);
  CHECK(svc.decide({{"formula", "p &"}}).status == 400);
  CHECK(svc.decide({{"formula", "p"}, {"system", "cl9"}}).status == 400);
  auto r = svc.refute({{"formula", "P + ~P"}});
  CHECK(r.body["provable"] == false);
  CHECK(r.body["valid"] == true);
  CHECK(svc.refute({{"formula", "P | ~P"}}).body["provable"] == true);
  CHECK(svc.health().body["version"] == kVersion);
}

TEST_CASE("idle sessions expire") {
  ServiceOptions o;
  o.idle_timeout = std::chrono::seconds(5);
  PlayService svc(o);
  create(svc, "P | ~P");
  create(svc, "P | ~P");
  CHECK(svc.session_count() == 2);
  CHECK(svc.expire_idle(PlayService::Clock::now()) == 0);
  CHECK(svc.expire_idle(PlayService::Clock::now() + std::chrono::seconds(6)) == 2);
  CHECK(svc.session_count() == 0);
}

TEST_CASE("http transport") {
  PlayService svc;
  httplib::Server server;
  svc.mount(server);
  int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client cli("127.0.0.1", port);
  auto h = cli.Get("/health");
  REQUIRE(h);
  CHECK(h->status == 200);
  CHECK(Json::parse(h->body)["status"] == "ok");

  auto d = cli.Post("/decide", R"({"formula":"P \\/ ~P"})", "application/json");
  REQUIRE(d);
  CHECK(Json::parse(d->body)["provable"] == true);
  CHECK(cli.Post("/decide", "not json", "application/json")->status == 400);

  Json req{{"formula", "P | ~P"}, {"interpretation", "molecule(m=2,leaves=FT)"}, {"human_player", "bot"}};
  auto c = cli.Post("/session", req.dump(), "application/json");
  REQUIRE(c);
  REQUIRE(c->status == 201);
  std::string id = Json::parse(c->body)["session_id"];
  auto m = cli.Post("/session/" + id + "/move", R"({"move":"2.1"})", "application/json");
  REQUIRE(m);
  CHECK(Json::parse(m->body)["accepted"] == false);  // 2.1 belongs to the machine under this preset
  m = cli.Post("/session/" + id + "/move", R"({"move":"1.1"})", "application/json");
  CHECK(Json::parse(m->body)["machine_replies"] == Json({"2.1"}));
  auto g = cli.Get("/session/" + id);
  CHECK(Json::parse(g->body)["run"].size() == 2);
  auto s = cli.Post("/session/" + id + "/stop", "", "application/json");
  CHECK(Json::parse(s->body)["winner"] == "T");
  CHECK(cli.Get("/session/unknown")->status == 404);

  // Concurrent sessions each play through their own lock.
  std::vector<std::thread> players;
  std::atomic<int> wins{0};
  for (int i = 0; i < 4; ++i)
    players.emplace_back([&] {
      httplib::Client local("127.0.0.1", port);
      auto r = local.Post("/session", R"({"formula":"P & P -> P","interpretation":"irregular2"})", "application/json");
      if (!r || r->status != 201) return;
      std::string sid = Json::parse(r->body)["session_id"];
      for (int k = 0; k < 6; ++k) {
        auto st = Json::parse(local.Get("/session/" + sid)->body);
        if (st["legal_moves"].empty()) break;
        local.Post("/session/" + sid + "/move", Json{{"move", st["legal_moves"].back()}}.dump(), "application/json");
      }
      auto fin = local.Post("/session/" + sid + "/stop", "", "application/json");
      if (fin && Json::parse(fin->body)["winner"] == "T") ++wins;
    });
  for (auto& p : players) p.join();
  CHECK(wins == 4);

  server.stop();
  t.join();
}
