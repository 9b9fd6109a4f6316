#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semnav/bench.hpp"
#include "semnav/kb.hpp"
#include "semnav/ontology.hpp"
#include "semnav/reasoner.hpp"
#include "semnav/relational.hpp"
#include "semnav/simworld.hpp"

namespace semnav::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitLoadFailure = 1;
inline constexpr int kExitReasonerError = 2;
inline constexpr int kExitDiffer = 3;

enum class BackendChoice { relational, ontology, both };
std::optional<BackendChoice> backend_choice_from_name(std::string_view name);

std::string default_conceptual_path();
std::string default_physical_path();
std::string default_world_path();

struct AppConfig {
  std::string conceptual = default_conceptual_path();
  std::string physical = default_physical_path();
  std::string world = default_world_path();
  std::optional<BackendChoice> backend;  // per-command default when unset
  int repetitions = 100;
  std::string listen = "127.0.0.1:8080";
  std::string out_dir = ".";
  std::string cases_path;  // bench case file; reference suite when empty
};

/// Knowledge base plus both backends (and the world, when requested).
struct Runtime {
  std::shared_ptr<const KnowledgeBase> kb;
  std::unique_ptr<relational::RelationalReasoner> relational;
  std::unique_ptr<ontology::OntologyReasoner> ontology;
  std::optional<GridWorld> world;

  const Reasoner& reasoner(Backend b) const;
};

// Throws SyntaxError, KbError, WorldError or std::runtime_error (I/O).
Runtime load_runtime(const AppConfig& config, bool with_world);
std::string read_file(const std::string& path);

// Bench case file: one `method [input...]` per line, `#` comments.
std::vector<BenchCase> parse_case_file(std::string_view text, int repetitions);

// "kitchen (via refrigerator)" lines.
std::string render_result(const ReasonerResult& r);

int cmd_query(const AppConfig& config, std::string_view method,
              const std::vector<std::string>& inputs, std::ostream& out, std::ostream& err);

int cmd_bench(const AppConfig& config, std::ostream& out, std::ostream& err);

// Runs the suite on two backends, writes bench.csv and bench.md into out_dir
// (skipped when empty). Exit 0 iff every case's outputs are equal.
int run_bench(std::span<const BenchCase> cases, const Reasoner& first, const Reasoner& second,
              const std::string& kb_digest, const std::string& out_dir, std::ostream& out,
              std::ostream& err);

int cmd_repl(const AppConfig& config, std::istream& in, std::ostream& out, std::ostream& err);

// Request / y / n / q loop over one world.
int run_repl(const KnowledgeBase& kb, const Reasoner& reasoner, GridWorld& world,
             std::istream& in, std::ostream& out);

int cmd_validate(const AppConfig& config, std::ostream& out, std::ostream& err);

int cmd_serve(const AppConfig& config, std::ostream& out, std::ostream& err);

}  // namespace semnav::app
