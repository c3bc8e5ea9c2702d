#pragma once

// Play and analysis service behind the HTTP API. Handlers take and return
// JSON so they can be exercised without a socket.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bwnim/solver.hpp"

namespace httplib {
class Server;
}

namespace bwnim::app {

enum class Mode { HumanVsEngine, HumanVsHuman };

struct Response {
  int status = 200;
  nlohmann::json body;
};

struct ServiceOptions {
  /// Default bound for GET /analysis when `max` is absent; the position's
  /// largest heap is used when that is larger.
  HeapSize analysis_bound = 0;
  /// Append-only JSON-lines log of state changes; replayed on construction.
  std::optional<std::filesystem::path> snapshot;
};

class Service {
 public:
  explicit Service(ServiceOptions options = {});
  ~Service();

  Response create_game(const nlohmann::json& request);
  Response get_game(const std::string& id);
  Response legal_moves(const std::string& id);
  Response post_move(const std::string& id, const nlohmann::json& request);
  Response analysis(const std::string& spec, const std::string& pos, const std::optional<std::string>& max);

  std::size_t session_count() const;

  /// Routes for the JSON API.
  void mount(httplib::Server& server);

 private:
  struct Session;

  std::shared_ptr<Session> find(const std::string& id) const;
  std::string next_id();
  void record(const nlohmann::json& event);
  void replay(const std::filesystem::path& path);
  Response apply_move(Session& session, const nlohmann::json& request, bool log);

  ServiceOptions options_;
  TableCache cache_;
  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::mutex snapshot_mutex_;
  std::uint64_t id_counter_ = 0;
  std::uint64_t id_salt_ = 0;
};

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);

}  // namespace bwnim::app
