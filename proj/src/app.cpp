#include "semnav/app.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "semnav/planner.hpp"

namespace semnav::app {

std::optional<BackendChoice> backend_choice_from_name(std::string_view name) {
  if (name == "relational") return BackendChoice::relational;
  if (name == "ontology") return BackendChoice::ontology;
  if (name == "both") return BackendChoice::both;
  return std::nullopt;
}

std::string default_conceptual_path() { return SEMNAV_DATA_DIR "/reference.skb"; }
std::string default_physical_path() { return SEMNAV_DATA_DIR "/reference.pkb"; }
std::string default_world_path() { return SEMNAV_DATA_DIR "/reference.world"; }

const Reasoner& Runtime::reasoner(Backend b) const {
  if (b == Backend::relational) return *relational;
  return *ontology;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Runtime load_runtime(const AppConfig& config, bool with_world) {
  Runtime rt;
  auto kb = std::make_shared<KnowledgeBase>(
      build_kb(parse_conceptual_document(read_file(config.conceptual)),
               parse_physical_document(read_file(config.physical))));
  rt.relational = std::make_unique<relational::RelationalReasoner>(*kb);
  rt.ontology = std::make_unique<ontology::OntologyReasoner>(*kb);
  if (with_world) rt.world = load_world(read_file(config.world), *kb);
  rt.kb = std::move(kb);
  return rt;
}

std::vector<BenchCase> parse_case_file(std::string_view text, int repetitions) {
  std::vector<BenchCase> cases;
  std::istringstream in{std::string(text)};
  int number = 0;
  for (std::string line; std::getline(in, line);) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string method;
    if (!(words >> method)) continue;
    auto m = method_from_name(method);
    if (!m) throw SyntaxError(number, "unknown method '" + method + "'");
    std::vector<std::string> inputs;
    for (std::string w; words >> w;) inputs.push_back(w);
    cases.emplace_back(*m, std::move(inputs), repetitions);
  }
  return cases;
}

std::string render_result(const ReasonerResult& r) {
  if (r.answers.empty()) return "(none)\n";
  std::string out;
  for (std::size_t i = 0; i < r.size(); ++i) {
    out += r.answers[i].canonical();
    if (!r.chains[i].empty()) {
      out += " (via ";
      for (std::size_t j = 0; j < r.chains[i].size(); ++j) {
        if (j) out += ", ";
        out += r.chains[i][j].canonical();
      }
      out += ")";
    }
    out += "\n";
  }
  return out;
}

namespace {

struct Outcome {
  std::optional<ReasonerResult> result;
  std::optional<ReasonerErrorKind> error;
  std::string message;
};

Outcome try_run(const Reasoner& r, Method m, const std::vector<std::string>& inputs) {
  try {
    return {r.run(m, inputs), std::nullopt, {}};
  } catch (const ReasonerError& e) {
    return {std::nullopt, e.kind(), e.what()};
  }
}

}  // namespace

int cmd_query(const AppConfig& config, std::string_view method,
              const std::vector<std::string>& inputs, std::ostream& out, std::ostream& err) {
  const auto m = method_from_name(method);
  if (!m) {
    err << "unknown method '" << method << "'\n";
    return kExitLoadFailure;
  }
  Runtime rt;
  try {
    rt = load_runtime(config, false);
  } catch (const std::exception& e) {
    err << "load failed: " << e.what() << "\n";
    return kExitLoadFailure;
  }

  try {
    const auto choice = config.backend.value_or(BackendChoice::relational);
    if (choice != BackendChoice::both) {
      const auto b = choice == BackendChoice::relational ? Backend::relational : Backend::ontology;
      auto o = try_run(rt.reasoner(b), *m, inputs);
      if (o.error) {
        err << o.message << "\n";
        return kExitReasonerError;
      }
      out << render_result(*o.result);
      return kExitOk;
    }

    auto a = try_run(*rt.relational, *m, inputs);
    auto b = try_run(*rt.ontology, *m, inputs);
    if (a.error && b.error && a.error == b.error) {
      err << a.message << "\n";
      return kExitReasonerError;
    }
    out << "[relational]\n" << (a.result ? render_result(*a.result) : a.message + "\n");
    out << "[ontology]\n" << (b.result ? render_result(*b.result) : b.message + "\n");
    const bool equal = a.result && b.result && compare_outputs(*a.result, *b.result);
    out << (equal ? "EQUAL" : "DIFFER") << "\n";
    return equal ? kExitOk : kExitDiffer;
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return kExitReasonerError;
  }
}

int run_bench(std::span<const BenchCase> cases, const Reasoner& first, const Reasoner& second,
              const std::string& kb_digest, const std::string& out_dir, std::ostream& out,
              std::ostream& err) {
  const Reasoner* backends[] = {&first, &second};
  const auto report = run_suite(cases, backends, kb_digest);
  const auto csv = emit_report(report, ReportFormat::csv);
  const auto md = emit_report(report, ReportFormat::markdown);

  if (!out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    std::ofstream(out_dir + "/bench.csv", std::ios::binary) << csv;
    std::ofstream(out_dir + "/bench.md", std::ios::binary) << md;
    if (ec) err << "warning: " << ec.message() << "\n";
  }
  out << md;
  for (const auto& c : report.cases)
    if (!c.outputs_equal)
      err << "DIFFER: " << to_string(c.bench_case.method()) << " " << c.bench_case.input_label()
          << "\n";
  return report.all_equal() ? kExitOk : kExitDiffer;
}

int cmd_bench(const AppConfig& config, std::ostream& out, std::ostream& err) {
  if (config.backend && *config.backend != BackendChoice::both) {
    err << "bench compares both backends; --backend must be 'both'\n";
    return kExitLoadFailure;
  }
  Runtime rt;
  std::vector<BenchCase> cases;
  try {
    rt = load_runtime(config, false);
    cases = config.cases_path.empty()
                ? reference_suite(config.repetitions)
                : parse_case_file(read_file(config.cases_path), config.repetitions);
  } catch (const std::exception& e) {
    err << "load failed: " << e.what() << "\n";
    return kExitLoadFailure;
  }
  return run_bench(cases, *rt.relational, *rt.ontology, rt.kb->digest(), config.out_dir, out,
                   err);
}

int run_repl(const KnowledgeBase& kb, const Reasoner& reasoner, GridWorld& world,
             std::istream& in, std::ostream& out) {
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };

  for (;;) {
    out << "request> " << std::flush;
    std::string line;
    if (!std::getline(in, line)) return kExitOk;
    line = trim(line);
    if (line.empty()) continue;
    if (line == "q" || line == "quit") return kExitOk;

    std::optional<PlanSession> session;
    try {
      session = resolve(line, kb, reasoner);
    } catch (const PlanError& e) {
      out << "error: " << e.what() << "\n";
      continue;
    }

    auto proposal = session->next_proposal();
    for (;;) {
      if (!proposal) {
        out << "no more possibilities\n";
        for (const auto& u : session->unrealizable())
          out << "  unrealizable: " << render(u.chain) << " (" << u.reason << ")\n";
        break;
      }
      out << "proposal " << proposal->ordinal << ": " << proposal->destination.canonical()
          << "  [" << render(proposal->chain) << "]\n"
          << "accept? [y/n/q] " << std::flush;
      std::string answer;
      if (!std::getline(in, answer)) return kExitOk;
      answer = trim(answer);
      if (answer == "q") return kExitOk;
      if (answer == "y") {
        try {
          const auto path = world.plan_path(proposal->destination.canonical());
          world.execute(path);
          session->accept(proposal->ordinal);
          const auto* room = kb.find_physical_room(proposal->destination.canonical());
          out << "arrived at " << proposal->destination.canonical();
          if (room) out << " (" << room->room_class.canonical() << ")";
          out << " after " << path.size() - 1 << " steps\n";
          break;
        } catch (const WorldError& e) {
          out << "error: " << e.what() << "\n";
          continue;
        }
      }
      if (answer == "n") {
        session->reject(proposal->ordinal);
        proposal = session->next_proposal();
        continue;
      }
      out << "please answer y, n or q\n";
    }
  }
}

int cmd_repl(const AppConfig& config, std::istream& in, std::ostream& out, std::ostream& err) {
  if (config.backend == BackendChoice::both) {
    err << "repl needs a single backend\n";
    return kExitLoadFailure;
  }
  Runtime rt;
  try {
    rt = load_runtime(config, true);
  } catch (const std::exception& e) {
    err << "load failed: " << e.what() << "\n";
    return kExitLoadFailure;
  }
  const auto b =
      config.backend == BackendChoice::ontology ? Backend::ontology : Backend::relational;
  return run_repl(*rt.kb, rt.reasoner(b), *rt.world, in, out);
}

int cmd_validate(const AppConfig& config, std::ostream& out, std::ostream& err) {
  try {
    auto rt = load_runtime(config, !config.world.empty());
    const auto& kb = *rt.kb;
    std::size_t classes = 0, relations = 0;
    for (auto ns : {Namespace::room_class, Namespace::object_class, Namespace::utility,
                    Namespace::meaning, Namespace::characteristic})
      classes += kb.entities(ns).size();
    for (std::size_t r = 0; r < kRelationCount; ++r)
      relations += kb.edges(static_cast<Relation>(r)).size();
    out << "conceptual: " << classes << " entities, " << relations << " relations\n"
        << "physical: " << kb.physical_rooms().size() << " rooms, "
        << kb.physical_objects().size() << " objects\n";
    if (rt.world)
      out << "world: " << rt.world->width() << "x" << rt.world->height() << ", "
          << rt.world->anchors().size() << " rooms\n";
    out << "OK\n";
    return kExitOk;
  } catch (const std::exception& e) {
    err << "invalid: " << e.what() << "\n";
    return kExitLoadFailure;
  }
}

}  // namespace semnav::app
