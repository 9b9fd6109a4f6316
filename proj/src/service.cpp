#include "semnav/service.hpp"

#include <cstdlib>
#include <iostream>

#include "httplib.h"

namespace semnav::app {

using nlohmann::json;

json to_json(Cell c) { return {{"x", c.x}, {"y", c.y}}; }

json to_json(const ReasonerResult& r) {
  json answers = json::array();
  for (std::size_t i = 0; i < r.size(); ++i) {
    json chain = json::array();
    for (const auto& hop : r.chains[i]) chain.push_back(hop.canonical());
    answers.push_back({{"name", r.answers[i].canonical()}, {"chain", chain}});
  }
  return {{"backend", to_string(r.backend)}, {"answers", answers}};
}

namespace {

json chain_json(const PlanChain& chain) {
  json names = json::array();
  for (const auto& hop : chain) names.push_back(hop.entity.canonical());
  return names;
}

json hop_kinds_json(const PlanChain& chain) {
  json kinds = json::array();
  for (const auto& hop : chain) kinds.push_back(to_string(hop.kind));
  return kinds;
}

HttpResponse error(int status, std::string_view kind, const std::string& subject) {
  return {status, {{"error", {{"kind", kind}, {"subject", subject}}}}};
}

std::optional<std::string> query_param(const HttpRequest& r, const std::string& key) {
  auto it = r.query.find(key);
  if (it == r.query.end()) return std::nullopt;
  return it->second;
}

std::optional<json> parse_body(const HttpRequest& r) {
  if (r.body.empty()) return json::object();
  auto j = json::parse(r.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  return j;
}

}  // namespace

json to_json(const Proposal& p) {
  return {{"destination", p.destination.canonical()},
          {"chain", chain_json(p.chain)},
          {"hop_kinds", hop_kinds_json(p.chain)},
          {"ordinal", p.ordinal}};
}

json to_json(const Unrealizable& u) {
  return {{"chain", chain_json(u.chain)}, {"hop_kinds", hop_kinds_json(u.chain)},
          {"reason", u.reason}};
}

json to_json(const BenchReport& report) {
  json cases = json::array();
  for (const auto& c : report.cases) {
    json runs = json::array();
    for (const auto& r : c.runs) {
      json run = {{"backend", to_string(r.backend)},
                  {"mean_ns", r.mean_ns},
                  {"runs", r.runs},
                  {"output_digest", r.digest}};
      if (r.result) run["output"] = to_json(*r.result)["answers"];
      if (r.error) run["error"] = to_string(*r.error);
      runs.push_back(std::move(run));
    }
    cases.push_back({{"method", to_string(c.bench_case.method())},
                     {"input", c.bench_case.input_label()},
                     {"outputs_equal", c.outputs_equal},
                     {"runs", runs}});
  }
  const double rel = report.overall_mean_ns(Backend::relational);
  const double onto = report.overall_mean_ns(Backend::ontology);
  return {{"kb_digest", report.kb_digest},
          {"timestamp", report.timestamp},
          {"timing_boundary", report.timing_boundary},
          {"all_equal", report.all_equal()},
          {"mean_ns", {{"relational", rel}, {"ontology", onto}}},
          {"ratio_ontology_over_relational", rel > 0 ? onto / rel : 0.0},
          {"cases", cases}};
}

Service::Service(Runtime runtime, Backend default_backend)
    : runtime_(std::move(runtime)), default_backend_(default_backend) {
  if (!runtime_.world) throw std::invalid_argument("service needs a world");
}

HttpResponse Service::handle(const HttpRequest& request) {
  const auto& path = request.path;
  try {
    if (request.method == "GET") {
      if (path == "/api/state") return state();
      if (path == "/api/kb/methods") return methods();
      if (path == "/api/kb/query") return query(request);
      if (path == "/api/bench") return bench(request);
    } else if (request.method == "POST") {
      if (path == "/api/goal") return goal(request);
      const std::string prefix = "/api/session/";
      if (path.rfind(prefix, 0) == 0) {
        const auto rest = path.substr(prefix.size());
        const auto slash = rest.find('/');
        if (slash != std::string::npos) {
          const auto id = rest.substr(0, slash);
          const auto action = rest.substr(slash + 1);
          if (action == "reject") return reject(id, request);
          if (action == "accept") return accept(id, request);
        }
      }
    }
    return error(404, "NotFound", request.method + " " + path);
  } catch (const ReasonerError& e) {
    return error(e.kind() == ReasonerErrorKind::unknown_entity ? 404 : 400, to_string(e.kind()),
                 e.subject());
  } catch (const PlanError& e) {
    return error(e.kind() == PlanErrorKind::unknown_entity ? 404 : 400, to_string(e.kind()),
                 e.subject());
  } catch (const WorldError& e) {
    return error(400, to_string(e.kind()), e.what());
  } catch (const std::invalid_argument& e) {
    return error(400, "BadRequest", e.what());
  }
}

HttpResponse Service::state() {
  std::lock_guard lock(world_mutex_);
  const auto& w = *runtime_.world;
  json regions = json::object(), anchors = json::object();
  for (const auto& [id, cells] : w.regions()) {
    json list = json::array();
    for (auto c : cells) list.push_back(to_json(c));
    regions[id] = list;
  }
  for (const auto& [id, c] : w.anchors()) anchors[id] = to_json(c);
  const auto room = w.region_of(w.robot());
  return {200,
          {{"width", w.width()},
           {"height", w.height()},
           {"grid", w.render()},
           {"regions", regions},
           {"anchors", anchors},
           {"robot", to_json(w.robot())},
           {"robot_room", room ? json(*room) : json(nullptr)}}};
}

HttpResponse Service::methods() const {
  json list = json::array();
  for (const auto& mi : method_catalog())
    list.push_back({{"name", mi.name},
                    {"title", mi.title},
                    {"input", to_string(mi.shape)},
                    {"input_kind", mi.shape == InputShape::none ? json(nullptr)
                                                                : json(to_string(mi.input))},
                    {"output_kind", to_string(mi.output)},
                    {"chained", mi.chained}});
  return {200, list};
}

HttpResponse Service::query(const HttpRequest& request) const {
  const auto name = query_param(request, "method");
  if (!name) return error(400, "BadRequest", "method");
  const auto m = method_from_name(*name);
  if (!m) return error(404, "UnknownMethod", *name);

  std::vector<std::string> inputs;
  auto [lo, hi] = request.query.equal_range("input");
  for (auto it = lo; it != hi; ++it) {
    std::string_view v = it->second;
    while (!v.empty()) {
      auto comma = v.find(',');
      auto part = v.substr(0, comma);
      if (!part.empty()) inputs.emplace_back(part);
      if (comma == std::string_view::npos) break;
      v.remove_prefix(comma + 1);
    }
  }

  const auto backend_name = query_param(request, "backend").value_or(
      std::string(to_string(default_backend_)));
  if (backend_name == "both") {
    auto a = runtime_.relational->run(*m, inputs);
    auto b = runtime_.ontology->run(*m, inputs);
    return {200,
            {{"method", *name},
             {"results", {{"relational", to_json(a)}, {"ontology", to_json(b)}}},
             {"equal", compare_outputs(a, b)}}};
  }
  const auto b = backend_from_name(backend_name);
  if (!b) return error(400, "BadRequest", "backend=" + backend_name);
  auto r = runtime_.reasoner(*b).run(*m, inputs);
  auto body = to_json(r);
  body["method"] = *name;
  return {200, body};
}

json Service::advance(const std::string& id, Session& s) {
  json out = {{"session", id}};
  if (auto p = s.plan.next_proposal()) {
    out["proposal"] = to_json(*p);
  } else {
    json list = json::array();
    for (const auto& u : s.plan.unrealizable()) list.push_back(to_json(u));
    out["exhausted"] = true;
    out["unrealizable"] = list;
  }
  return out;
}

HttpResponse Service::goal(const HttpRequest& request) {
  auto body = parse_body(request);
  if (!body || !body->contains("request") || !(*body)["request"].is_string())
    return error(400, "BadRequest", "request");
  Backend backend = default_backend_;
  if (body->contains("backend")) {
    auto b = backend_from_name((*body)["backend"].get<std::string>());
    if (!b) return error(400, "BadRequest", "backend");
    backend = *b;
  }
  auto plan = resolve((*body)["request"].get<std::string>(), *runtime_.kb,
                      runtime_.reasoner(backend));
  auto s = std::make_shared<Session>();
  s->plan = std::move(plan);
  s->backend = backend;

  std::string id;
  {
    std::lock_guard lock(sessions_mutex_);
    id = "s" + std::to_string(next_session_++);
    sessions_[id] = s;
  }
  std::lock_guard lock(s->mutex);
  return {200, advance(id, *s)};
}

std::shared_ptr<Service::Session> Service::session(const std::string& id) {
  std::lock_guard lock(sessions_mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

namespace {

std::optional<std::size_t> ordinal_of(const HttpRequest& request) {
  auto body = parse_body(request);
  if (!body || !body->contains("ordinal") || !(*body)["ordinal"].is_number_integer())
    return std::nullopt;
  const auto v = (*body)["ordinal"].get<long long>();
  if (v < 0) return std::nullopt;
  return static_cast<std::size_t>(v);
}

}  // namespace

HttpResponse Service::reject(const std::string& id, const HttpRequest& request) {
  auto s = session(id);
  if (!s) return error(404, "UnknownSession", id);
  const auto ordinal = ordinal_of(request);
  if (!ordinal) return error(400, "BadRequest", "ordinal");
  std::lock_guard lock(s->mutex);
  s->plan.reject(*ordinal);
  return {200, advance(id, *s)};
}

HttpResponse Service::accept(const std::string& id, const HttpRequest& request) {
  auto s = session(id);
  if (!s) return error(404, "UnknownSession", id);
  const auto ordinal = ordinal_of(request);
  if (!ordinal) return error(400, "BadRequest", "ordinal");

  std::lock_guard session_lock(s->mutex);
  const auto& proposal = s->plan.emitted(*ordinal);
  if (s->plan.rejected().count(proposal.destination.canonical()))
    return error(400, "UnknownOrdinal", std::to_string(*ordinal));
  const auto destination = proposal.destination.canonical();

  // Robot motion is serialized across sessions.
  std::lock_guard world_lock(world_mutex_);
  auto& world = *runtime_.world;
  const auto path = world.plan_path(destination);
  world.execute(path);
  s->plan.accept(*ordinal);

  json cells = json::array();
  for (auto c : path) cells.push_back(to_json(c));
  const auto* room = runtime_.kb->find_physical_room(destination);
  return {200,
          {{"session", id},
           {"trajectory", cells},
           {"arrived", destination},
           {"room_class", room ? json(room->room_class.canonical()) : json(nullptr)},
           {"robot", to_json(world.robot())}}};
}

HttpResponse Service::bench(const HttpRequest& request) const {
  int reps = 100;
  if (auto r = query_param(request, "reps")) {
    char* end = nullptr;
    const long v = std::strtol(r->c_str(), &end, 10);
    if (r->empty() || *end != '\0' || v < 1 || v > 100000) return error(400, "BadRequest", "reps");
    reps = static_cast<int>(v);
  }
  const auto cases = reference_suite(reps);
  const Reasoner* backends[] = {runtime_.relational.get(), runtime_.ontology.get()};
  return {200, to_json(run_suite(cases, backends, runtime_.kb->digest()))};
}

void mount_routes(httplib::Server& server, Service& service) {
  auto bridge = [&service](const httplib::Request& req, httplib::Response& res) {
    HttpRequest r{req.method, req.path, {}, req.body};
    for (const auto& [k, v] : req.params) r.query.emplace(k, v);
    auto response = service.handle(r);
    res.status = response.status;
    res.set_content(response.body.dump(), "application/json");
  };
  server.Get(R"(/api/.*)", bridge);
  server.Post(R"(/api/.*)", bridge);
}

// ---------------------------------------------------------------------------

int cmd_serve(const AppConfig& config, std::ostream& out, std::ostream& err) {
  if (config.backend == BackendChoice::both) {
    err << "serve needs a single default backend\n";
    return kExitLoadFailure;
  }
  std::unique_ptr<Service> service;
  try {
    service = std::make_unique<Service>(
        load_runtime(config, true),
        config.backend == BackendChoice::ontology ? Backend::ontology : Backend::relational);
  } catch (const std::exception& e) {
    err << "load failed: " << e.what() << "\n";
    return kExitLoadFailure;
  }

  const auto colon = config.listen.rfind(':');
  if (colon == std::string::npos) {
    err << "listen address must be host:port\n";
    return kExitLoadFailure;
  }
  const auto host = config.listen.substr(0, colon);
  const int port = std::atoi(config.listen.c_str() + colon + 1);

  httplib::Server server;
  mount_routes(server, *service);
  // SO_REUSEADDR only, without httplib's default SO_REUSEPORT.
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });

  if (!server.bind_to_port(host, port)) {
    err << "fatal: cannot listen on " << config.listen << "\n";
    return kExitLoadFailure;
  }
  out << "serving on http://" << config.listen << "\n" << std::flush;
  server.listen_after_bind();
  return kExitOk;
}

}  // namespace semnav::app
