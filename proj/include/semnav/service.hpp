#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "json.hpp"
#include "semnav/app.hpp"
#include "semnav/planner.hpp"

namespace httplib {
class Server;
}

namespace semnav::app {

struct HttpRequest {
  std::string method;  // GET, POST
  std::string path;
  std::multimap<std::string, std::string> query;
  std::string body;
};

struct HttpResponse {
  int status = 200;
  nlohmann::json body;
};

/// JSON API behind `serve`. Independent of the HTTP transport so it can be
/// exercised directly. Reasoner endpoints are stateless; goal, reject and
/// accept touch session or world state.
class Service {
 public:
  Service(Runtime runtime, Backend default_backend);

  HttpResponse handle(const HttpRequest& request);

  const Runtime& runtime() const { return runtime_; }

 private:
  struct Session {
    std::mutex mutex;
    PlanSession plan;
    Backend backend;
  };

  HttpResponse state();
  HttpResponse methods() const;
  HttpResponse query(const HttpRequest& request) const;
  HttpResponse goal(const HttpRequest& request);
  HttpResponse reject(const std::string& id, const HttpRequest& request);
  HttpResponse accept(const std::string& id, const HttpRequest& request);
  HttpResponse bench(const HttpRequest& request) const;

  std::shared_ptr<Session> session(const std::string& id);
  static nlohmann::json advance(const std::string& id, Session& s);

  Runtime runtime_;
  Backend default_backend_;
  std::mutex world_mutex_;
  std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::size_t next_session_ = 1;
};

// Routes every /api request of the server to the service.
void mount_routes(httplib::Server& server, Service& service);

nlohmann::json to_json(const ReasonerResult& r);
nlohmann::json to_json(const Proposal& p);
nlohmann::json to_json(const Unrealizable& u);
nlohmann::json to_json(const BenchReport& report);
nlohmann::json to_json(Cell c);

}  // namespace semnav::app
