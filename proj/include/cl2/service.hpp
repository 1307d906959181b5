// The play protocol and the stateless decision endpoints, independent of the
// HTTP transport; mount() binds them to an httplib server.

#ifndef CL2_SERVICE_HPP_
#define CL2_SERVICE_HPP_

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>

#include "cl2/serialize.hpp"
#include "cl2/strategy.hpp"

namespace httplib {
class Server;
}

namespace cl2 {

inline constexpr const char* kVersion = "0.1.0";

struct ServiceOptions {
  // Illegal human moves forfeit the session instead of being rejected.
  bool strict = false;
  std::chrono::seconds idle_timeout{1800};
  std::size_t max_sessions = 1024;
  std::uint64_t seed = 0;
  // Time allowed for the refutation attached to an unprovable session request.
  std::chrono::milliseconds refute_budget{10000};
};

struct ServiceResponse {
  int status = 200;
  Json body;
};

class PlayService {
 public:
  using Clock = std::chrono::steady_clock;

  explicit PlayService(ServiceOptions options = {});

  // {formula, interpretation, human_player: "bot"} → {session_id, state, machine_replies}.
  // `interpretation` is an interpretation object, or a game preset name that
  // is then used for every general atom with every elementary atom true.
  ServiceResponse create_session(const Json& body);
  ServiceResponse get_session(const std::string& id);
  // {move} → {accepted, reason?, machine_replies, state}
  ServiceResponse move(const std::string& id, const Json& body);
  ServiceResponse stop(const std::string& id);
  // {formula, system?} → {formula, system, provable}
  ServiceResponse decide(const Json& body) const;
  // {formula, m?} → certificate, or {formula, provable: true}
  ServiceResponse refute(const Json& body) const;
  ServiceResponse health() const;

  std::size_t session_count();
  // Drops sessions idle since before `now - idle_timeout`.
  std::size_t expire_idle(Clock::time_point now = Clock::now());

  void mount(httplib::Server& server);

  const ServiceOptions& options() const noexcept { return options_; }

 private:
  struct Entry {
    std::mutex lock;
    Session session;
    Clock::time_point last_used;
    explicit Entry(Session s) : session(std::move(s)), last_used(Clock::now()) {}
  };
  std::shared_ptr<Entry> find(const std::string& id);
  std::string next_id();

  ServiceOptions options_;
  std::mutex store_lock_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::mt19937_64 ids_;
  std::uint64_t counter_ = 0;
};

}  // namespace cl2

#endif  // CL2_SERVICE_HPP_
