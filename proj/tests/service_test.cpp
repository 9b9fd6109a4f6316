#include <gtest/gtest.h>

#include <set>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "semnav/service.hpp"

namespace semnav::app {
namespace {

using nlohmann::json;

class ServiceTest : public ::testing::Test {
 protected:
  Service service{load_runtime(AppConfig{}, true), Backend::relational};

  HttpResponse get(const std::string& path, std::multimap<std::string, std::string> query = {}) {
    return service.handle({"GET", path, std::move(query), ""});
  }
  HttpResponse post(const std::string& path, const json& body) {
    return service.handle({"POST", path, {}, body.dump()});
  }

  // Rejects every proposal until the session is exhausted; returns the last body.
  json reject_all(json body) {
    const std::string id = body["session"];
    for (int guard = 0; guard < 50 && body.contains("proposal"); ++guard) {
      auto r = post("/api/session/" + id + "/reject", {{"ordinal", body["proposal"]["ordinal"]}});
      EXPECT_EQ(r.status, 200) << r.body.dump();
      body = r.body;
    }
    return body;
  }
};

TEST_F(ServiceTest, State) {
  const auto r = get("/api/state");
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body["width"], 20);
  EXPECT_EQ(r.body["height"], 6);
  EXPECT_EQ(r.body["grid"].size(), 6u);
  EXPECT_EQ(r.body["robot"], (json{{"x", 9}, {"y", 3}}));
  EXPECT_TRUE(r.body["robot_room"].is_null());
}

TEST_F(ServiceTest, MethodCatalog) {
  const auto r = get("/api/kb/methods");
  ASSERT_EQ(r.status, 200);
  ASSERT_EQ(r.body.size(), 14u);
  std::set<std::string> names;
  for (const auto& m : r.body) names.insert(m["name"].get<std::string>());
  EXPECT_EQ(names.size(), 14u);
  EXPECT_TRUE(names.count("probable_locations"));
  EXPECT_TRUE(names.count("characteristics_of"));
}

TEST_F(ServiceTest, QuerySingleAndBoth) {
  auto r = get("/api/kb/query", {{"method", "probable_locations"}, {"input", "Soft drink"}});
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body["backend"], "relational");
  EXPECT_EQ(r.body["answers"],
            (json::array({{{"name", "kitchen"}, {"chain", json::array({"refrigerator"})}}})));

  r = get("/api/kb/query",
          {{"method", "label_rooms_by_objects"}, {"input", "Chair,Computer"}, {"backend", "both"}});
  ASSERT_EQ(r.status, 200);
  EXPECT_TRUE(r.body["equal"].get<bool>());
  EXPECT_EQ(r.body["results"]["ontology"]["answers"][0]["name"], "office");

  // Repeated and comma-separated inputs are the same request.
  const auto a = get("/api/kb/query", {{"method", "label_rooms_by_objects"},
                                       {"input", "Chair"},
                                       {"input", "Computer"}});
  const auto b = get("/api/kb/query",
                     {{"method", "label_rooms_by_objects"}, {"input", "Chair,Computer"}});
  EXPECT_EQ(a.body, b.body);
}

TEST_F(ServiceTest, QueryErrors) {
  auto r = get("/api/kb/query", {{"method", "room_class_of"}, {"input", "Room9"}});
  EXPECT_EQ(r.status, 404);
  EXPECT_EQ(r.body["error"]["kind"], "UnknownEntity");
  EXPECT_EQ(r.body["error"]["subject"], "room9");

  r = get("/api/kb/query", {{"method", "probable_locations"}, {"input", "Office"}});
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(r.body["error"]["kind"], "WrongKind");

  EXPECT_EQ(get("/api/kb/query", {{"method", "teleport"}}).status, 404);
  EXPECT_EQ(get("/api/kb/query", {}).status, 400);
  EXPECT_EQ(get("/api/kb/query", {{"method", "all_utilities"}, {"backend", "sql"}}).status, 400);
  EXPECT_EQ(get("/api/kb/query", {{"method", "room_class_of"}}).status, 400);
  EXPECT_EQ(get("/api/nothing").status, 404);
}

TEST_F(ServiceTest, GoalAcceptMovesRobot) {
  auto r = post("/api/goal", {{"request", "Work"}});
  ASSERT_EQ(r.status, 200) << r.body.dump();
  EXPECT_EQ(r.body["session"], "s1");
  EXPECT_EQ(r.body["proposal"]["destination"], "room1");
  EXPECT_EQ(r.body["proposal"]["ordinal"], 0);
  EXPECT_EQ(r.body["proposal"]["chain"].back(), "room1");
  EXPECT_EQ(r.body["proposal"]["hop_kinds"].size(), r.body["proposal"]["chain"].size());
  EXPECT_EQ(r.body["proposal"]["hop_kinds"].front(), "origin");
  EXPECT_EQ(r.body["proposal"]["hop_kinds"].back(), "room_class_to_physical_room");

  r = post("/api/session/s1/accept", {{"ordinal", 0}});
  ASSERT_EQ(r.status, 200) << r.body.dump();
  EXPECT_EQ(r.body["arrived"], "room1");
  EXPECT_EQ(r.body["room_class"], "office");
  EXPECT_EQ(r.body["robot"], (json{{"x", 3}, {"y", 2}}));
  EXPECT_EQ(r.body["trajectory"].size(), 8u);
  EXPECT_EQ(r.body["trajectory"].front(), (json{{"x", 9}, {"y", 3}}));
  EXPECT_EQ(get("/api/state").body["robot_room"], "room1");
}

TEST_F(ServiceTest, RejectOnlyProposalExhausts) {
  auto r = post("/api/goal", {{"request", "Work"}});
  const auto body = reject_all(r.body);
  EXPECT_TRUE(body["exhausted"].get<bool>());
  EXPECT_TRUE(body["unrealizable"].empty());
}

TEST_F(ServiceTest, FunnyListsTwoUnrealizableChains) {
  auto r = post("/api/goal", {{"request", "Funny"}, {"backend", "ontology"}});
  ASSERT_EQ(r.status, 200);
  const auto body = reject_all(r.body);
  ASSERT_TRUE(body["exhausted"].get<bool>());
  ASSERT_EQ(body["unrealizable"].size(), 2u);
  for (const auto& u : body["unrealizable"]) {
    EXPECT_NE(u["reason"].get<std::string>().find("no physical room of class"), std::string::npos);
    EXPECT_EQ(u["hop_kinds"].size(), u["chain"].size());
    EXPECT_EQ(u["hop_kinds"].back(), "object_to_room_class");
  }
}

TEST_F(ServiceTest, SessionsAreIndependent) {
  const auto a = post("/api/goal", {{"request", "Work"}}).body;
  const auto b = post("/api/goal", {{"request", "Work"}}).body;
  EXPECT_EQ(a["session"], "s1");
  EXPECT_EQ(b["session"], "s2");
  reject_all(a);
  const auto r = post("/api/session/s2/accept", {{"ordinal", 0}});
  EXPECT_EQ(r.status, 200);
}

TEST_F(ServiceTest, GoalAndSessionErrors) {
  auto r = post("/api/goal", {{"request", "Xyzzy"}});
  EXPECT_EQ(r.status, 404);
  EXPECT_EQ(r.body["error"]["kind"], "UnknownEntity");
  EXPECT_EQ(post("/api/goal", {{"nothing", 1}}).status, 400);
  EXPECT_EQ(service.handle({"POST", "/api/goal", {}, "{not json"}).status, 400);
  EXPECT_EQ(post("/api/goal", {{"request", "Work"}, {"backend", "sql"}}).status, 400);

  EXPECT_EQ(post("/api/session/s99/reject", {{"ordinal", 0}}).status, 404);
  post("/api/goal", {{"request", "Work"}});
  EXPECT_EQ(post("/api/session/s1/accept", {{"ordinal", "zero"}}).status, 400);
  EXPECT_EQ(post("/api/session/s1/accept", {{"ordinal", -1}}).status, 400);
  EXPECT_EQ(post("/api/session/s1/accept", {{"ordinal", 7}}).status, 400);
  EXPECT_EQ(post("/api/session/s1/launch", {{"ordinal", 0}}).status, 404);

  post("/api/session/s1/reject", {{"ordinal", 0}});
  r = post("/api/session/s1/accept", {{"ordinal", 0}});
  EXPECT_EQ(r.status, 400);  // a rejected proposal cannot be accepted
  EXPECT_EQ(get("/api/state").body["robot"], (json{{"x", 9}, {"y", 3}}));
}

TEST_F(ServiceTest, Bench) {
  const auto r = get("/api/bench", {{"reps", "2"}});
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body["cases"].size(), 13u);
  EXPECT_TRUE(r.body["all_equal"].get<bool>());
  EXPECT_GT(r.body["mean_ns"]["relational"].get<double>(), 0);
  EXPECT_GT(r.body["ratio_ontology_over_relational"].get<double>(), 0);
  EXPECT_EQ(r.body["cases"][0]["runs"].size(), 2u);
  for (const char* bad : {"0", "100001", "abc", ""})
    EXPECT_EQ(get("/api/bench", {{"reps", bad}}).status, 400) << bad;
}

TEST(ServiceHttp, RoundTripOverSocket) {
  Service service(load_runtime(AppConfig{}, true), Backend::relational);
  httplib::Server server;
  mount_routes(server, service);
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto res = client.Get("/api/kb/query?method=room_class_of&input=Room2");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->get_header_value("Content-Type"), "application/json");
  EXPECT_EQ(json::parse(res->body)["answers"][0]["name"], "kitchen");

  res = client.Post("/api/goal", R"({"request":"Soft drink"})", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(json::parse(res->body)["proposal"]["destination"], "room2");

  res = client.Get("/api/missing");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 404);

  server.stop();
  thread.join();
}

TEST(ServiceHttp, OccupiedPortFailsToServe) {
  httplib::Server blocker;
  const int port = blocker.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread thread([&] { blocker.listen_after_bind(); });
  blocker.wait_until_ready();
  AppConfig c;
  c.listen = "127.0.0.1:" + std::to_string(port);
  std::ostringstream out, err;
  EXPECT_EQ(cmd_serve(c, out, err), kExitLoadFailure);
  EXPECT_NE(err.str().find("cannot listen"), std::string::npos) << err.str();
  blocker.stop();
  thread.join();
}

}  // namespace
}  // namespace semnav::app
