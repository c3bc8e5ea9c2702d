#include "bwnim/app/service.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include <httplib.h>

#include "bwnim/engine.hpp"

namespace bwnim::app {

using nlohmann::json;

std::string to_string(Mode mode) { return mode == Mode::HumanVsEngine ? "HumanVsEngine" : "HumanVsHuman"; }

Mode parse_mode(const std::string& text) {
  if (text == "HumanVsEngine") return Mode::HumanVsEngine;
  if (text == "HumanVsHuman") return Mode::HumanVsHuman;
  throw std::invalid_argument("mode must be HumanVsEngine or HumanVsHuman");
}

namespace {

Response error(int status, const std::string& reason) { return {status, json{{"reason", reason}}}; }

json sizes(const Position& pos) { return json(std::vector<HeapSize>(pos.begin(), pos.end())); }

json heaps(const GameSpec& spec, const Position& pos) {
  json out = json::array();
  for (const auto h : pos) {
    json heap{{"size", h}};
    if (const auto* s = spec.coloring()) {
      heap["black"] = heap_is_black(*s, h);
    } else if (const auto* sp = std::get_if<Spectrum>(&spec.rules())) {
      heap["color"] = color_of_heap(sp->l, h);
    } else if (const auto* bc = std::get_if<Bichromatic>(&spec.rules())) {
      heap["color"] = color_of_heap(bc->l, h);
    }
    out.push_back(std::move(heap));
  }
  return out;
}

std::string illegal_target_reason(const GameSpec& spec) {
  return std::holds_alternative<BlackWhite>(spec.rules()) ? "target position has no black heap"
                                                          : "target position violates color rule";
}

json move_json(const Move& m) {
  return json{{"heap_size_from", m.lowered_heap_old}, {"to", m.lowered_heap_new}, {"position", sizes(m.to)}};
}

std::optional<HeapSize> integer_field(const json& request, const char* name) {
  const auto it = request.find(name);
  if (it == request.end() || !it->is_number_integer()) return std::nullopt;
  return it->get<HeapSize>();
}

}  // namespace

struct Service::Session {
  std::mutex mutex;
  std::string id;
  GameSpec spec;
  Position position;
  Mode mode;
  std::vector<Move> history;
  std::vector<std::string> movers;

  Session(std::string id_, GameSpec spec_, Position start, Mode mode_)
      : id(std::move(id_)), spec(std::move(spec_)), position(std::move(start)), mode(mode_) {}

  const char* player(std::size_t ply) const {
    if (mode == Mode::HumanVsEngine) return ply % 2 == 0 ? "human" : "engine";
    return ply % 2 == 0 ? "first" : "second";
  }

  bool finished() const { return bwnim::legal_moves(spec, position).empty(); }

  // The engine replies inside the same request, so with an engine the human
  // is always the one to move.
  std::string to_move() const {
    if (mode == Mode::HumanVsEngine) return "human";
    return player(history.size());
  }

  void apply(const Move& m) {
    movers.push_back(player(history.size()));
    history.push_back(m);
    position = m.to;
  }

  json state() const;
};

Service::Service(ServiceOptions options) : options_(std::move(options)) {
  std::random_device device;
  id_salt_ = (static_cast<std::uint64_t>(device()) << 32) ^ device();
  if (options_.snapshot && std::filesystem::exists(*options_.snapshot)) replay(*options_.snapshot);
}

Service::~Service() = default;

std::size_t Service::session_count() const {
  std::shared_lock lock(sessions_mutex_);
  return sessions_.size();
}

std::string Service::next_id() {
  std::ostringstream out;
  out << std::hex << (id_salt_ ^ (++id_counter_ * 0x9E3779B97F4A7C15ull));
  return out.str();
}

std::shared_ptr<Service::Session> Service::find(const std::string& id) const {
  std::shared_lock lock(sessions_mutex_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

void Service::record(const json& event) {
  if (!options_.snapshot) return;
  std::lock_guard lock(snapshot_mutex_);
  std::ofstream out(*options_.snapshot, std::ios::app);
  out << event.dump() << '\n';
}

void Service::replay(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto event = json::parse(line);
    const auto id = event.at("id").get<std::string>();
    if (event.at("event") == "create") {
      auto spec = GameSpec::parse(event.at("spec").get<std::string>(), event.at("k").get<int>());
      Position start(event.at("start").get<std::vector<HeapSize>>());
      sessions_[id] = std::make_shared<Session>(id, std::move(spec), std::move(start),
                                                parse_mode(event.at("mode").get<std::string>()));
    } else if (event.at("event") == "move") {
      auto& session = *sessions_.at(id);
      const auto from = event.at("heap_size_from").get<HeapSize>();
      const auto to = event.at("to").get<HeapSize>();
      session.apply(Move{session.position, session.position.lowered(from, to), from, to});
    }
  }
}

json Service::Session::state() const {
  const bool over = finished();
  json out{{"id", id},
           {"spec", spec.rules_string()},
           {"k", spec.k()},
           {"mode", to_string(mode)},
           {"position", sizes(position)},
           {"heaps", heaps(spec, position)},
           {"status", over ? "finished" : "in_progress"},
           {"to_move", over ? json(nullptr) : json(to_move())},
           {"winner", nullptr}};
  if (over) {
    // Normal play: whoever cannot move loses.
    out["winner"] = movers.empty() ? (mode == Mode::HumanVsEngine ? "engine" : "second") : movers.back();
  }
  json moves = json::array();
  for (std::size_t i = 0; i < history.size(); ++i) {
    auto m = move_json(history[i]);
    m["player"] = movers[i];
    moves.push_back(std::move(m));
  }
  out["history"] = std::move(moves);
  return out;
}

Response Service::create_game(const json& request) {
  if (!request.is_object()) return error(400, "request body must be a JSON object");
  std::optional<GameSpec> spec;
  Mode mode = Mode::HumanVsEngine;
  std::optional<Position> start;
  try {
    const auto k = request.at("k").get<int>();
    spec = GameSpec::parse(request.at("spec").get<std::string>(), k);
    const auto& s = request.at("start");
    start = s.is_string() ? Position::parse(s.get<std::string>()) : Position(s.get<std::vector<HeapSize>>());
    if (request.contains("mode")) mode = parse_mode(request.at("mode").get<std::string>());
  } catch (const json::exception&) {
    return error(400, "fields spec, k and start are required");
  } catch (const std::invalid_argument& e) {
    return error(400, e.what());
  }
  if (spec->is_partizan()) return error(400, "partizan rules are available through /analysis only");
  if (static_cast<int>(start->k()) != spec->k()) return error(400, "start must have k heaps");
  if (!is_legal(*spec, *start)) {
    return error(422, std::holds_alternative<BlackWhite>(spec->rules()) ? "start position has no black heap"
                                                                       : "start position violates color rule");
  }

  auto session = std::make_shared<Session>("", *spec, *start, mode);
  {
    std::unique_lock lock(sessions_mutex_);
    do {
      session->id = next_id();
    } while (sessions_.count(session->id) > 0);
    sessions_[session->id] = session;
  }
  record(json{{"event", "create"},
              {"id", session->id},
              {"spec", spec->rules_string()},
              {"k", spec->k()},
              {"start", sizes(*start)},
              {"mode", to_string(mode)}});
  std::lock_guard lock(session->mutex);
  return {201, session->state()};
}

Response Service::get_game(const std::string& id) {
  const auto session = find(id);
  if (!session) return error(404, "unknown session");
  std::lock_guard lock(session->mutex);
  return {200, session->state()};
}

Response Service::legal_moves(const std::string& id) {
  const auto session = find(id);
  if (!session) return error(404, "unknown session");
  std::lock_guard lock(session->mutex);
  json moves = json::array();
  for (const auto& m : bwnim::legal_moves(session->spec, session->position)) moves.push_back(move_json(m));
  return {200, json{{"id", id}, {"position", sizes(session->position)}, {"moves", std::move(moves)}}};
}

Response Service::post_move(const std::string& id, const json& request) {
  const auto session = find(id);
  if (!session) return error(404, "unknown session");
  std::lock_guard lock(session->mutex);
  return apply_move(*session, request, true);
}

Response Service::apply_move(Session& session, const json& request, bool log) {
  if (!request.is_object()) return error(400, "request body must be a JSON object");
  const auto from = integer_field(request, "heap_size_from");
  const auto to = integer_field(request, "to");
  if (!from || !to) return error(400, "heap_size_from and to must be integers");
  if (session.finished()) return error(409, "game over");

  const auto& pos = session.position;
  const auto copies = std::count(pos.begin(), pos.end(), *from);
  if (copies == 0) return error(422, "no heap of that size");
  if (request.contains("index")) {
    const auto index = integer_field(request, "index");
    if (!index || *index < 0 || *index >= copies) return error(422, "heap index out of range");
  }
  if (*to < 0 || *to >= *from) return error(422, "move must lower the heap");
  const Move human{pos, pos.lowered(*from, *to), *from, *to};
  if (!is_legal(session.spec, human.to)) return error(422, illegal_target_reason(session.spec));

  session.apply(human);
  if (log) record(json{{"event", "move"}, {"id", session.id}, {"heap_size_from", *from}, {"to", *to}});

  std::optional<Move> reply;
  if (session.mode == Mode::HumanVsEngine && !session.finished()) {
    try {
      reply = engine_move(session.spec, session.position, cache_);
    } catch (const ResourceLimitError&) {
      // Fall back to a legal move that needs no table.
      reply = delaying_move(session.spec, session.position);
    }
    session.apply(*reply);
    if (log) {
      record(json{{"event", "move"},
                  {"id", session.id},
                  {"heap_size_from", reply->lowered_heap_old},
                  {"to", reply->lowered_heap_new}});
    }
  }
  auto body = session.state();
  body["engine_move"] = reply ? move_json(*reply) : json(nullptr);
  return {200, std::move(body)};
}

Response Service::analysis(const std::string& spec_text, const std::string& pos_text,
                           const std::optional<std::string>& max_text) {
  std::optional<Position> pos;
  std::optional<GameSpec> spec;
  HeapSize bound = 0;
  try {
    pos = Position::parse(pos_text);
    spec = GameSpec::parse(spec_text, pos->k());
    if (max_text) {
      std::size_t used = 0;
      bound = std::stoll(*max_text, &used);
      if (used != max_text->size() || bound < 0) throw std::invalid_argument("max must be a non-negative integer");
    }
  } catch (const std::invalid_argument& e) {
    return error(400, e.what());
  } catch (const std::out_of_range&) {
    return error(400, "max out of range");
  }
  if (max_text && bound < pos->max()) return error(422, "position exceeds analysis bound");
  if (!max_text) bound = std::max(options_.analysis_bound, pos->max());

  json out{{"spec", spec->rules_string()}, {"position", sizes(*pos)}, {"max", bound}};
  try {
    if (spec->is_partizan()) {
      const auto table = partizan_outcomes(*spec->coloring(), spec->k(), bound);
      out["outcome"] = to_string(table.outcome(*pos));
      out["convention"] = "normal play";
      return {200, std::move(out)};
    }
    if (!is_legal(*spec, *pos)) return error(422, "position violates color rule");
    const auto table = cache_.get(*spec, bound);
    out["outcome"] = to_string(table->outcome(*pos));
    out["grundy"] = *table->grundy(*pos);
    json targets = json::array();
    for (const auto& m : winning_moves(*table, *pos)) targets.push_back(sizes(m.to));
    out["winning_targets"] = std::move(targets);
  } catch (const ResourceLimitError& e) {
    return error(413, e.what());
  }
  return {200, std::move(out)};
}

void Service::mount(httplib::Server& server) {
  const auto send = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(r.body.dump(), "application/json");
  };
  const auto body_of = [](const httplib::Request& req) { return json::parse(req.body, nullptr, false); };

  server.Post("/games", [=, this](const httplib::Request& req, httplib::Response& res) {
    const auto body = body_of(req);
    send(res, body.is_discarded() ? error(400, "malformed JSON") : create_game(body));
  });
  server.Get(R"(/games/([^/]+))", [=, this](const httplib::Request& req, httplib::Response& res) {
    send(res, get_game(req.matches[1]));
  });
  server.Get(R"(/games/([^/]+)/legal-moves)", [=, this](const httplib::Request& req, httplib::Response& res) {
    send(res, legal_moves(req.matches[1]));
  });
  server.Post(R"(/games/([^/]+)/moves)", [=, this](const httplib::Request& req, httplib::Response& res) {
    const auto body = body_of(req);
    send(res, body.is_discarded() ? error(400, "malformed JSON") : post_move(req.matches[1], body));
  });
  server.Get("/analysis", [=, this](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_param("spec") || !req.has_param("pos")) {
      send(res, error(400, "spec and pos are required"));
      return;
    }
    std::optional<std::string> max;
    if (req.has_param("max")) max = req.get_param_value("max");
    send(res, analysis(req.get_param_value("spec"), req.get_param_value("pos"), max));
  });
  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
}

}  // namespace bwnim::app
