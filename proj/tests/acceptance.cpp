// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "grid.hpp"
#include "oracle.hpp"
#include "random_kb.hpp"
#include "semnav/app.hpp"
#include "semnav/planner.hpp"

namespace semnav {
namespace {

using Clock = std::chrono::steady_clock;

// Returns an empty string on success, otherwise the first failure.
using Check = std::function<std::string()>;

std::string sorted_answers(const ReasonerResult& r) {
  std::vector<std::string> items;
  for (std::size_t i = 0; i < r.size(); ++i) {
    std::string s = r.answers[i].canonical();
    if (!r.chains[i].empty()) {
      s += " (via ";
      for (std::size_t j = 0; j < r.chains[i].size(); ++j)
        s += (j ? " > " : "") + r.chains[i][j].canonical();
      s += ")";
    }
    items.push_back(s);
  }
  std::sort(items.begin(), items.end());
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

std::string elapsed_over(Clock::time_point start, double limit_s) {
  const double s = std::chrono::duration<double>(Clock::now() - start).count();
  if (s < limit_s) return {};
  return "took " + std::to_string(s) + " s, limit " + std::to_string(limit_s) + " s";
}

std::string reference_table() {
  const auto start = Clock::now();
  std::ifstream in(SEMNAV_FIXTURES "/reference_table.golden");
  std::vector<std::string> golden;
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#') golden.push_back(line);
  const auto cases = reference_suite(1);
  if (golden.size() != 13 || cases.size() != 13) return "expected 13 rows";

  const relational::RelationalReasoner rel(reference_kb());
  const ontology::OntologyReasoner onto(reference_kb());
  for (const Reasoner* r : {static_cast<const Reasoner*>(&rel), static_cast<const Reasoner*>(&onto)})
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const auto res = r->run(cases[i].method(), cases[i].inputs());
      const auto row = std::string(to_string(cases[i].method())) + " | " +
                       cases[i].input_label() + " | " + sorted_answers(res);
      if (row != golden[i])
        return std::string(to_string(r->backend())) + ": got '" + row + "', want '" + golden[i] + "'";
    }
  return elapsed_over(start, 1.0);
}

std::string cross_backend() {
  const auto start = Clock::now();
  std::mt19937 rng(20261019);
  for (int k = 0; k < 200; ++k) {
    const auto kb = testing::random_kb(rng);
    const relational::RelationalReasoner rel(kb);
    const ontology::OntologyReasoner onto(kb);
    for (const auto& mi : method_catalog())
      for (const auto& in : testing::valid_inputs(kb, mi.id)) {
        const auto a = rel.run(mi.id, in);
        const auto b = onto.run(mi.id, in);
        if (!compare_outputs(a, b))
          return "kb #" + std::to_string(k) + " " + std::string(mi.name) + ": backends differ";
        if (!testing::same_chains(a, testing::oracle(kb, mi.id, in)))
          return "kb #" + std::to_string(k) + " " + std::string(mi.name) + ": oracle mismatch";
      }
  }
  return elapsed_over(start, 60.0);
}

std::string navigation() {
  struct Script {
    const char* name;
    const char* input;
    const char* expect;
    Cell robot;
  };
  const Script scripts[] = {
      {"work", "Work\ny\nq\n", "arrived at room1 (office)", {3, 2}},
      {"soft drink", "Soft drink\ny\nq\n", "arrived at room2 (kitchen)", {15, 2}},
  };
  for (const auto& s : scripts) {
    auto rt = app::load_runtime(app::AppConfig{}, true);
    std::istringstream in(s.input);
    std::ostringstream out;
    app::run_repl(*rt.kb, *rt.relational, *rt.world, in, out);
    if (out.str().find(s.expect) == std::string::npos || rt.world->robot() != s.robot)
      return std::string(s.name) + ": " + out.str();
  }

  auto rt = app::load_runtime(app::AppConfig{}, true);
  auto session = resolve("funny", *rt.kb, *rt.relational);
  while (auto p = session.next_proposal()) session.reject(p->ordinal);
  if (session.unrealizable().size() != 2)
    return "funny: " + std::to_string(session.unrealizable().size()) + " unrealizable chains";
  return {};
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream ss(line);
  for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
  return fields;
}

std::string benchmark() {
  const auto dir = std::filesystem::temp_directory_path() / "semnav_acceptance_bench";
  std::filesystem::remove_all(dir);
  app::AppConfig config;
  config.repetitions = 100;
  config.out_dir = dir.string();
  std::ostringstream out, err;
  const int code = app::cmd_bench(config, out, err);
  if (code != 0) return "exit " + std::to_string(code) + ": " + err.str();

  std::istringstream csv(app::read_file((dir / "bench.csv").string()));
  std::string line;
  std::getline(csv, line);
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    const auto f = split(line);
    if (f.size() != 7) return "malformed row: " + line;
    if (!(std::stod(f[3]) > 0)) return "mean_ns not positive: " + line;
    if (f[6] != "true") return "outputs differ: " + line;
  }
  std::filesystem::remove_all(dir);
  if (rows != 26) return std::to_string(rows) + " csv rows";
  const auto md = out.str();
  for (const char* needle : {"Mean over cases, relational: ", "Mean over cases, ontology: ",
                             "Ratio ontology/relational: "})
    if (md.find(needle) == std::string::npos) return std::string("markdown lacks '") + needle + "'";
  return {};
}

std::string validation() {
  const std::pair<const char*, KbErrorKind> fixtures[] = {
      {"cycle.skb", KbErrorKind::containment_cycle},
      {"dangling.skb", KbErrorKind::unknown_reference},
      {"collision.skb", KbErrorKind::cross_namespace_collision}};
  const auto physical = parse_physical_document(app::read_file(SEMNAV_FIXTURES "/empty.pkb"));
  for (const auto& [file, kind] : fixtures) {
    const auto text = app::read_file(std::string(SEMNAV_FIXTURES "/") + file);
    try {
      build_kb(parse_conceptual_document(text), physical);
      return std::string(file) + " accepted";
    } catch (const KbError& e) {
      if (e.kind() != kind) return std::string(file) + ": " + e.what();
    }
  }
  return {};
}

std::string path_planning() {
  std::mt19937 rng(7);
  for (int i = 0; i < 100; ++i) {
    const auto g = testing::random_solvable_grid(rng);
    const auto world = GridWorld::from_rows(g.rows);
    const auto path = world.plan_path(g.goal);
    const auto d = testing::bfs_distance(g.rows, world.robot(), g.goal);
    if (!d || static_cast<int>(path.size()) - 1 != *d)
      return "grid #" + std::to_string(i) + ": length differs from BFS";
    if (testing::moves_of(path) != testing::lex_min_moves(g.rows, world.robot(), g.goal))
      return "grid #" + std::to_string(i) + ": tie-break differs";
    for (int k = 0; k < 3; ++k)
      if (world.plan_path(g.goal) != path) return "grid #" + std::to_string(i) + ": nondeterministic";
  }
  return {};
}

}  // namespace
}  // namespace semnav

int main() {
  const std::pair<const char*, semnav::Check> criteria[] = {
      {"reference table on both backends", semnav::reference_table},
      {"cross-backend equivalence on 200 random KBs", semnav::cross_backend},
      {"navigation scenarios", semnav::navigation},
      {"benchmark methodology", semnav::benchmark},
      {"validation suite", semnav::validation},
      {"path planning on 100 random grids", semnav::path_planning},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    std::string why;
    try {
      why = check();
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    if (why.empty()) {
      std::cout << "PASS " << name << "\n";
    } else {
      std::cout << "FAIL " << name << ": " << why << "\n";
      ++failed;
    }
  }
  return failed == 0 ? 0 : 1;
}
