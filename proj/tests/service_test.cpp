#include "bwnim/app/service.hpp"

#include <cstdlib>
#include <filesystem>
#include <random>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

namespace bwnim::app {
namespace {

using nlohmann::json;

json game(const std::string& spec, int k, const std::string& start, const std::string& mode = "HumanVsEngine") {
  return json{{"spec", spec}, {"k", k}, {"start", start}, {"mode", mode}};
}

Position position_of(const json& state) { return Position(state.at("position").get<std::vector<HeapSize>>()); }

TEST(Service, CreateGame) {
  Service service;
  const auto r = service.create_game(game("modular:2", 2, "4,3"));
  ASSERT_EQ(r.status, 201);
  EXPECT_EQ(r.body["to_move"], "human");
  EXPECT_EQ(r.body["position"], json({3, 4}));
  EXPECT_EQ(r.body["status"], "in_progress");
  EXPECT_EQ(r.body["heaps"][1], json({{"size", 4}, {"black", true}}));
  EXPECT_EQ(service.get_game(r.body["id"]).body, r.body);
}

TEST(Service, HumanMoveIsAnsweredByEngine) {
  Service service;
  const auto id = service.create_game(game("modular:2", 2, "4,3")).body["id"].get<std::string>();
  const auto r = service.post_move(id, {{"heap_size_from", 4}, {"to", 2}});
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body["position"], json({1, 2}));
  EXPECT_EQ(r.body["engine_move"]["position"], json({1, 2}));
  ASSERT_EQ(r.body["history"].size(), 2u);
  EXPECT_EQ(r.body["history"][0]["position"], json({2, 3}));
  EXPECT_EQ(r.body["history"][0]["player"], "human");
  EXPECT_EQ(r.body["history"][1]["player"], "engine");
}

TEST(Service, RejectionsCarryReasons) {
  Service service;
  const auto id = service.create_game(game("modular:2", 2, "3,4")).body["id"].get<std::string>();
  auto r = service.post_move(id, {{"heap_size_from", 4}, {"to", 3}});
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(r.body["reason"], "target position has no black heap");
  EXPECT_EQ(service.post_move(id, {{"heap_size_from", 5}, {"to", 3}}).body["reason"], "no heap of that size");
  EXPECT_EQ(service.post_move(id, {{"heap_size_from", 4}, {"to", 4}}).body["reason"], "move must lower the heap");
  EXPECT_EQ(service.post_move(id, {{"heap_size_from", 4}, {"to", 0}, {"index", 1}}).status, 422);
  EXPECT_EQ(service.post_move(id, {{"heap_size_from", "4"}, {"to", 0}}).status, 400);
  EXPECT_EQ(service.post_move("nope", {{"heap_size_from", 4}, {"to", 0}}).status, 404);
  EXPECT_EQ(service.get_game("nope").status, 404);
  EXPECT_EQ(service.legal_moves("nope").status, 404);
  EXPECT_EQ(service.get_game(id).body["position"], json({3, 4}));

  EXPECT_EQ(service.create_game(game("modular:2", 2, "1,3")).status, 422);
  EXPECT_EQ(service.create_game(game("modular:2", 3, "1,2")).status, 400);
  EXPECT_EQ(service.create_game(game("bogus", 2, "1,2")).status, 400);
  EXPECT_EQ(service.create_game(game("partizan:modular:2", 2, "1,2")).status, 400);
  EXPECT_EQ(service.create_game(json{{"spec", "modular:2"}}).status, 400);
  EXPECT_EQ(service.create_game(game("modular:2", 2, "1,2", "Robots")).status, 400);
}

TEST(Service, LegalMoves) {
  Service service;
  const auto id = service.create_game(game("explicit:2", 2, "1,2")).body["id"].get<std::string>();
  const auto r = service.legal_moves(id);
  ASSERT_EQ(r.status, 200);
  ASSERT_EQ(r.body["moves"].size(), 2u);
  EXPECT_EQ(r.body["moves"][0], json({{"heap_size_from", 2}, {"to", 0}, {"position", {0, 1}}}));
  EXPECT_EQ(r.body["moves"][1], json({{"heap_size_from", 1}, {"to", 0}, {"position", {0, 2}}}));
}

TEST(Service, FinishedGames) {
  Service service;
  const auto id = service.create_game(game("modular:2", 2, "0,1")).body["id"].get<std::string>();
  const auto r = service.post_move(id, {{"heap_size_from", 1}, {"to", 0}});
  EXPECT_EQ(r.body["status"], "finished");
  EXPECT_EQ(r.body["winner"], "human");
  EXPECT_EQ(r.body["to_move"], nullptr);
  EXPECT_EQ(r.body["engine_move"], nullptr);
  EXPECT_EQ(service.post_move(id, {{"heap_size_from", 1}, {"to", 0}}).status, 409);

  const auto over = service.create_game(game("modular:2", 2, "0,0"));
  EXPECT_EQ(over.body["status"], "finished");
  EXPECT_EQ(over.body["winner"], "engine");
}

TEST(Service, ScriptedSuboptimalLineLosesToEngine) {
  Service service;
  const auto id = service.create_game(game("modular:2", 2, "3,4")).body["id"].get<std::string>();
  json state;
  while (true) {
    state = service.get_game(id).body;
    if (state["status"] == "finished") break;
    // Always shrink the largest heap as little as legally possible.
    const auto moves = service.legal_moves(id).body["moves"];
    const auto& m = moves.back();
    state = service.post_move(id, {{"heap_size_from", m["heap_size_from"]}, {"to", m["to"]}}).body;
  }
  EXPECT_EQ(state["winner"], "engine");
}

TEST(Service, HumanVsHumanAlternates) {
  Service service;
  const auto id = service.create_game(game("modular:2", 2, "3,4", "HumanVsHuman")).body["id"].get<std::string>();
  EXPECT_EQ(service.get_game(id).body["to_move"], "first");
  const auto r = service.post_move(id, {{"heap_size_from", 4}, {"to", 2}});
  EXPECT_EQ(r.body["to_move"], "second");
  EXPECT_EQ(r.body["engine_move"], nullptr);
  EXPECT_EQ(r.body["position"], json({2, 3}));
}

TEST(Service, Analysis) {
  Service service;
  const auto r = service.analysis("modular:2", "2,2", std::nullopt);
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body["outcome"], "N");
  EXPECT_EQ(r.body["winning_targets"], json::array({{1, 2}}));
  EXPECT_EQ(r.body["grundy"], *grundy_table(GameSpec::parse("modular:2", 2), 2).grundy(Position({2, 2})));

  const auto p = service.analysis("modular:2", "3,4", "10");
  EXPECT_EQ(p.body["outcome"], "P");
  EXPECT_EQ(p.body["grundy"], 0);
  EXPECT_EQ(p.body["winning_targets"], json::array());

  const auto partizan = service.analysis("partizan:modular:2", "0,1", std::nullopt);
  EXPECT_EQ(partizan.body["outcome"], "R");
  EXPECT_EQ(partizan.body["convention"], "normal play");

  EXPECT_EQ(service.analysis("modular:2", "1,3", std::nullopt).status, 422);
  EXPECT_EQ(service.analysis("modular:2", "2,9", "5").status, 422);
  EXPECT_EQ(service.analysis("modular:2", "2,x", std::nullopt).status, 400);
  EXPECT_EQ(service.analysis("modular:2", "2,2", "-1").status, 400);
  EXPECT_EQ(service.analysis("nonsense", "2,2", std::nullopt).status, 400);
}

TEST(Service, AnalysisRespectsResourceGuard) {
  ::setenv("BWNIM_MAX_TABLE_ENTRIES", "10", 1);
  Service service;
  ::unsetenv("BWNIM_MAX_TABLE_ENTRIES");
  EXPECT_EQ(service.analysis("modular:2", "2,40", std::nullopt).status, 413);
}

TEST(Service, ResponsesAreByteStable) {
  Service a;
  Service b;
  auto strip = [](json j) {
    j.erase("id");
    return j.dump();
  };
  const auto ia = a.create_game(game("beatty:(1+1*sqrt(2))/1", 2, "9,14")).body["id"].get<std::string>();
  const auto ib = b.create_game(game("beatty:(1+1*sqrt(2))/1", 2, "9,14")).body["id"].get<std::string>();
  const json move{{"heap_size_from", 14}, {"to", 10}};
  EXPECT_EQ(strip(a.post_move(ia, move).body), strip(b.post_move(ib, move).body));
  EXPECT_EQ(a.analysis("rational:7/3", "3,10,12", std::nullopt).body.dump(),
            b.analysis("rational:7/3", "3,10,12", std::nullopt).body.dump());
}

void expect_consistent(Service& service, const std::string& id) {
  const auto state = service.get_game(id).body;
  const auto spec = GameSpec::parse(state["spec"].get<std::string>(), state["k"].get<int>());
  const auto pos = position_of(state);
  ASSERT_TRUE(is_legal(spec, pos)) << state.dump();
  // History chains move by move into the stored position.
  const auto& history = state["history"];
  if (!history.empty()) EXPECT_EQ(position_of(history.back()), pos);
  for (std::size_t i = 1; i < history.size(); ++i) {
    const auto before = position_of(history[i - 1]);
    const auto& m = history[i];
    EXPECT_EQ(before.lowered(m["heap_size_from"].get<HeapSize>(), m["to"].get<HeapSize>()), position_of(m));
  }
}

TEST(ServiceProperty, FuzzedMovesNeverStoreIllegalPositions) {
  Service service;
  std::mt19937 rng(99);
  const std::vector<std::pair<std::string, int>> specs = {
      {"modular:2", 2}, {"modular:3", 3}, {"beatty:(1+1*sqrt(2))/1", 2}, {"explicit:2,5", 3},
      {"spectrum:3:all", 3}, {"bichromatic:3:atleast", 3}};
  int accepted = 0;
  for (int game_no = 0; game_no < 60; ++game_no) {
    const auto& [rules, k] = specs[game_no % specs.size()];
    const auto spec = GameSpec::parse(rules, k);
    std::vector<HeapSize> heaps(k);
    do {
      for (auto& h : heaps) h = rng() % 16;
    } while (!is_legal(spec, Position(heaps)));
    const auto mode = game_no % 2 ? "HumanVsHuman" : "HumanVsEngine";
    const auto created = service.create_game(json{{"spec", rules}, {"k", k}, {"start", heaps}, {"mode", mode}});
    ASSERT_EQ(created.status, 201) << created.body.dump();
    const auto id = created.body["id"].get<std::string>();
    for (int step = 0; step < 40; ++step) {
      json request{{"heap_size_from", static_cast<HeapSize>(rng() % 18) - 1},
                   {"to", static_cast<HeapSize>(rng() % 18) - 1}};
      if (rng() % 5 == 0) request["index"] = static_cast<int>(rng() % 3);
      if (rng() % 20 == 0) request.erase("to");
      const auto r = service.post_move(id, request);
      if (r.status == 200) {
        ++accepted;
      } else {
        ASSERT_TRUE(r.body.contains("reason") && r.body["reason"].is_string()) << r.body.dump();
      }
      expect_consistent(service, id);
    }
  }
  EXPECT_GT(accepted, 50);
}

TEST(ServiceProperty, ConcurrentMovesOnOneSessionAreSerialized) {
  Service service;
  const auto id =
      service.create_game(game("modular:2", 3, "40,60,80", "HumanVsHuman")).body["id"].get<std::string>();
  std::vector<std::thread> workers;
  for (int t = 0; t < 6; ++t) {
    workers.emplace_back([&, t] {
      std::mt19937 rng(t);
      for (int i = 0; i < 200; ++i) {
        const auto moves = service.legal_moves(id).body["moves"];
        if (moves.empty()) return;
        const auto& m = moves[rng() % moves.size()];
        service.post_move(id, {{"heap_size_from", m["heap_size_from"]}, {"to", m["to"]}});
      }
    });
  }
  for (auto& w : workers) w.join();
  expect_consistent(service, id);
}

TEST(Service, SnapshotReplayRestoresSessions) {
  const auto path = std::filesystem::temp_directory_path() / ("bwnim_snapshot_" + std::to_string(::getpid()) + ".jsonl");
  std::filesystem::remove(path);
  json before;
  std::string id;
  {
    Service service({0, path});
    id = service.create_game(game("modular:3", 2, "5,9")).body["id"].get<std::string>();
    service.post_move(id, {{"heap_size_from", 5}, {"to", 2}});
    before = service.get_game(id).body;
  }
  Service restored({0, path});
  EXPECT_EQ(restored.session_count(), 1u);
  EXPECT_EQ(restored.get_game(id).body, before);
  std::filesystem::remove(path);
}

TEST(Service, HttpRoundTrip) {
  Service service;
  httplib::Server server;
  service.mount(server);
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread loop([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto created = client.Post("/games", game("modular:2", 2, "4,3").dump(), "application/json");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 201);
  const auto id = json::parse(created->body)["id"].get<std::string>();

  auto moved = client.Post("/games/" + id + "/moves", json{{"heap_size_from", 4}, {"to", 2}}.dump(), "application/json");
  ASSERT_TRUE(moved);
  EXPECT_EQ(json::parse(moved->body)["position"], json({1, 2}));

  auto bad = client.Post("/games/" + id + "/moves", "{not json", "application/json");
  EXPECT_EQ(bad->status, 400);
  EXPECT_EQ(client.Get("/games/missing")->status, 404);
  EXPECT_EQ(client.Get("/games/" + id + "/legal-moves")->status, 200);
  auto analysis = client.Get("/analysis?spec=modular:2&pos=2,2");
  EXPECT_EQ(json::parse(analysis->body)["winning_targets"], json::array({{1, 2}}));
  EXPECT_EQ(client.Get("/analysis?pos=2,2")->status, 400);

  server.stop();
  loop.join();
}

}  // namespace
}  // namespace bwnim::app
