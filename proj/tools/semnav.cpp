// semnav: query, bench, repl, serve, validate.

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "semnav/app.hpp"

using namespace semnav::app;

int main(int argc, char** argv) {
  CLI::App cli{"Semantic knowledge engine for robot navigation"};
  cli.require_subcommand(1);
  cli.fallthrough();

  AppConfig config;
  std::string backend;
  cli.add_option("--conceptual", config.conceptual, "conceptual KB file")->check(CLI::ExistingFile);
  cli.add_option("--physical", config.physical, "physical KB file")->check(CLI::ExistingFile);
  cli.add_option("--world", config.world, "grid world file")->check(CLI::ExistingFile);
  cli.add_option("--backend", backend, "relational | ontology | both")
      ->check(CLI::IsMember({"relational", "ontology", "both"}));

  std::string method;
  std::vector<std::string> inputs;
  auto* query = cli.add_subcommand("query", "run one reasoner method");
  query->add_option("method", method, "method name")->required();
  query->add_option("inputs", inputs, "input entities");

  auto* bench = cli.add_subcommand("bench", "time the reference suite on both backends");
  bench->add_option("--reps", config.repetitions, "timed repetitions per case")
      ->check(CLI::Range(1, 1000000));
  bench->add_option("--out", config.out_dir, "directory for bench.csv and bench.md");
  bench->add_option("--cases", config.cases_path, "case file instead of the reference suite")
      ->check(CLI::ExistingFile);

  auto* repl = cli.add_subcommand("repl", "interactive goal dialogue");

  std::string listen;
  auto* serve = cli.add_subcommand("serve", "JSON API over HTTP");
  serve->add_option("--listen", listen, "host:port");

  auto* validate = cli.add_subcommand("validate", "load and check the KB and world");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? kExitOk : kExitLoadFailure;
  }

  if (!backend.empty()) config.backend = backend_choice_from_name(backend);

  if (*query) return cmd_query(config, method, inputs, std::cout, std::cerr);
  if (*bench) return cmd_bench(config, std::cout, std::cerr);
  if (*repl) return cmd_repl(config, std::cin, std::cout, std::cerr);
  if (*validate) return cmd_validate(config, std::cout, std::cerr);
  if (*serve) {
    if (!listen.empty())
      config.listen = listen;
    else if (const char* env = std::getenv("SEMNAV_LISTEN"); env && *env)
      config.listen = env;
    return cmd_serve(config, std::cout, std::cerr);
  }
  return kExitLoadFailure;
}
