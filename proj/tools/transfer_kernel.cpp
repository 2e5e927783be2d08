#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "transfer/session/session.hpp"

int main(int argc, char** argv) {
  using namespace tk::session;
  CLI::App app{"transfer-kernel: checks scripts and runs the transfer tactics"};
  app.require_subcommand(1);

  Options opts;
  std::string file, engine, format = "human";
  CLI::App* run = app.add_subcommand("run", "run a .tk script");
  run->add_option("file", file, "script")->required();
  run->add_option("--engine", engine, "force an engine for every Theorem")->check(CLI::IsMember({"v1", "v2"}));
  run->add_flag("--trace", opts.trace, "print derivation traces");
  run->add_flag("--print-proofs", opts.print_proofs, "print emitted proof terms");
  run->add_flag("--keep-going", opts.keep_going, "continue past failures");
  bool no_prefill = false;
  run->add_flag("--no-prefill", no_prefill, "start with empty tables");
  run->add_flag("--check-every-node", opts.check_every_node, "kernel-check each v2 judgment");
  run->add_option("--format", format, "report format")->check(CLI::IsMember({"human", "machine"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kScriptError;
  }
  opts.prefill = !no_prefill;
  if (engine == "v1") opts.engine = EngineChoice::V1;
  if (engine == "v2") opts.engine = EngineChoice::V2;

  Report r = run_file(file, opts);
  std::cout << (format == "machine" ? format_machine(r, opts) : format_human(r, opts));
  return r.exit_code();
}
