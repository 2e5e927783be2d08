// Session :: runs a script command by command against an evolving
// environment and tables, and reports per-theorem results

#ifndef TRANSFER_SESSION_SESSION_HPP_
#define TRANSFER_SESSION_SESSION_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "transfer/kernel/env.hpp"
#include "transfer/surface/syntax.hpp"
#include "transfer/tables/tables.hpp"

namespace tk::session {

enum class EngineChoice { ByTactic, V1, V2 };

struct Options {
  EngineChoice engine = EngineChoice::ByTactic;
  bool trace = false;
  bool print_proofs = false;
  bool keep_going = false;
  bool prefill = true;
  bool check_every_node = false;
};

enum class Status { Proved, Failed };

struct TheoremResult {
  std::string name;
  Status status = Status::Failed;
  std::string engine;  // v1 or v2
  surface::Position pos;
  std::optional<Term> statement, proof;
  std::string proof_text;    // printed proof
  std::string trace;         // formatted derivation
  std::string failure_kind;  // empty when proved
  std::string failure;
  double millis = 0;
};

// Exit codes.
enum ExitCode : int { kSuccess = 0, kProofFailure = 1, kScriptError = 2, kKernelRejection = 3 };

struct CommandError {
  surface::Position pos;
  std::string message;
  int code = kScriptError;
};

struct Report {
  std::string file;
  std::vector<TheoremResult> theorems;
  std::vector<CommandError> errors;
  bool aborted = false;
  int exit_code() const;
};

class Session {
public:
  explicit Session(Options opts = {});

  // Executes every command of text; never throws for script-level problems.
  Report run(std::string_view text, std::string file = "<input>");

  const GlobalEnv& env() const { return env_; }
  const tables::DeclTables& tables() const { return tables_; }

private:
  // Returns false when the session should stop.
  bool execute(const surface::Command& cmd, Report& report);
  TheoremResult prove(const surface::TheoremCmd& thm, surface::Position pos);

  Options opts_;
  GlobalEnv env_;
  tables::DeclTables tables_;
};

// Reads path and runs it; a missing file is a script error.
Report run_file(const std::string& path, const Options& opts);

std::string format_human(const Report& r, const Options& opts);
// JSON; stable field order, no timings.
std::string format_machine(const Report& r, const Options& opts);

} // namespace tk::session

#endif // TRANSFER_SESSION_SESSION_HPP_
