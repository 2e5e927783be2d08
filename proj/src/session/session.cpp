#include "transfer/session/session.hpp"

#include <cctype>
#include <chrono>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "transfer/kernel/prelude.hpp"
#include "transfer/kernel/typecheck.hpp"
#include "transfer/surface/elaborate.hpp"
#include "transfer/surface/printer.hpp"
#include "transfer/transfer_v1/exact_modulo.hpp"
#include "transfer/transfer_v2/transfer_modulo.hpp"

namespace tk::session {

using surface::Position;

int Report::exit_code() const {
  bool script_error = false;
  for (const CommandError& e : errors) {
    if (e.code == kKernelRejection) return kKernelRejection;
    script_error = true;
  }
  for (const TheoremResult& t : theorems)
    if (t.failure_kind == "internal-error") return kKernelRejection;
  if (script_error) return kScriptError;
  for (const TheoremResult& t : theorems)
    if (t.status != Status::Proved) return kProofFailure;
  return kSuccess;
}

Session::Session(Options opts) : opts_(opts), env_(prelude::make_env()) {
  if (opts_.prefill) tables_.prefill_core(env_);
}

Report Session::run(std::string_view text, std::string file) {
  Report report;
  report.file = std::move(file);
  surface::Script script;
  try {
    script = surface::parse_script(text);
  } catch (const surface::SyntaxError& e) {
    report.errors.push_back({e.pos, e.what(), kScriptError});
    report.aborted = true;
    return report;
  }
  for (const surface::Command& cmd : script.commands) {
    if (!execute(cmd, report)) {
      report.aborted = true;
      break;
    }
  }
  return report;
}

namespace {

std::string with_pos(const Position& pos, const std::string& msg) { return surface::to_string(pos) + ": " + msg; }

} // namespace

bool Session::execute(const surface::Command& cmd, Report& report) {
  using namespace surface;
  auto error = [&](const std::string& msg, int code = kScriptError) {
    report.errors.push_back({cmd.pos, msg, code});
    return opts_.keep_going;
  };
  try {
    if (auto* p = std::get_if<ParameterCmd>(&cmd.node)) {
      Term type = elaborate_type(env_, LocalContext{}, p->type);
      for (const std::string& n : p->names) add_checked(env_, {n, DeclKind::Parameter, type, std::nullopt});
    } else if (auto* a = std::get_if<AxiomCmd>(&cmd.node)) {
      add_checked(env_, {a->name, DeclKind::Axiom, elaborate_type(env_, LocalContext{}, a->statement), std::nullopt});
    } else if (auto* d = std::get_if<DefinitionCmd>(&cmd.node)) {
      Elaborated e = elaborate_definition(env_, *d, cmd.pos);
      add_checked(env_, {d->name, DeclKind::Definition, e.type, e.term});
    } else if (auto* s = std::get_if<DeclareSurjectionCmd>(&cmd.node)) {
      tables_.declare_surjection(env_, s->f, s->g, s->proof);
    } else if (auto* t = std::get_if<DeclareTransferCmd>(&cmd.node)) {
      tables_.declare_transfer_v1(env_, t->lemma);
    } else if (auto* r = std::get_if<DeclareRelationCmd>(&cmd.node)) {
      tables_.declare_relation_v2(env_, r->lemma);
    } else if (auto* th = std::get_if<TheoremCmd>(&cmd.node)) {
      report.theorems.push_back(prove(*th, cmd.pos));
      return report.theorems.back().status == Status::Proved || opts_.keep_going;
    }
  } catch (const SyntaxError& e) {
    return error(e.what());
  } catch (const ElabError& e) {
    return error(e.what());
  } catch (const KernelError& e) {
    return error(with_pos(cmd.pos, e.what()));
  } catch (const tables::TableError& e) {
    return error(with_pos(cmd.pos, e.what()));
  }
  return true;
}

TheoremResult Session::prove(const surface::TheoremCmd& thm, Position pos) {
  using clock = std::chrono::steady_clock;
  auto start = clock::now();
  TheoremResult res;
  res.name = thm.name;
  res.pos = pos;
  auto fail = [&](std::string kind, std::string msg) {
    res.status = Status::Failed;
    res.failure_kind = std::move(kind);
    res.failure = std::move(msg);
    res.millis = std::chrono::duration<double, std::milli>(clock::now() - start).count();
    return res;
  };

  Term goal;
  try {
    goal = surface::elaborate_type(env_, LocalContext{}, thm.statement);
  } catch (const std::exception& e) {
    return fail("script-error", e.what());
  }
  res.statement = goal;
  if (env_.contains(thm.name)) return fail("script-error", with_pos(pos, "'" + thm.name + "' is already declared"));
  const Declaration* src = env_.find(thm.source);
  if (!src) return fail("script-error", with_pos(pos, "unknown theorem '" + thm.source + "'"));
  // env_ may grow below
  const Term thm_statement = src->type;
  const Term thm_proof = Term::constant(thm.source);

  bool v2 = opts_.engine == EngineChoice::V2 ||
            (opts_.engine == EngineChoice::ByTactic && thm.tactic == surface::TacticKind::TransferModulo);
  res.engine = v2 ? "v2" : "v1";
  std::optional<Term> proof;
  if (v2) {
    try {
      tables_.encode_pending_surjections(env_);
    } catch (const tables::TableError& e) {
      return fail("internal-error", e.what());
    }
    v2::Options o;
    o.check_every_node = opts_.check_every_node;
    v2::Outcome out = v2::transfer_modulo(env_, tables_, thm_statement, goal, thm_proof, o);
    if (out.trace) res.trace = v2::format_trace(*out.trace);
    if (!out) return fail(out.failure->internal ? "internal-error" : "no-derivation", v2::describe(*out.failure));
    proof = out.proof;
  } else {
    v1::Outcome out = v1::exact_modulo(env_, tables_, LocalContext{}, thm_statement, goal, thm_proof);
    res.trace = v1::format_trace(out.trace);
    if (!out) return fail(std::string(v1::failure_kind_name(out.failure->kind)), v1::describe(*out.failure));
    proof = out.proof;
  }

  // independent re-check before admission
  CheckResult check = check_proof(env_, LocalContext{}, *proof, goal);
  if (!check) return fail("internal-error", "kernel rejected the emitted proof: " + check.diagnostic);
  try {
    add_checked(env_, {thm.name, DeclKind::Definition, goal, *proof});
  } catch (const KernelError& e) {
    return fail("internal-error", e.what());
  }
  res.status = Status::Proved;
  res.proof = proof;
  res.proof_text = surface::print_term(*proof, &env_);
  res.millis = std::chrono::duration<double, std::milli>(clock::now() - start).count();
  return res;
}

Report run_file(const std::string& path, const Options& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    Report r;
    r.file = path;
    r.errors.push_back({Position{0, 0}, "cannot read '" + path + "'", kScriptError});
    r.aborted = true;
    return r;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  Session s(opts);
  return s.run(ss.str(), path);
}

namespace {

std::string indent(const std::string& text, const std::string& prefix) {
  std::string out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out += prefix + line + "\n";
  return out;
}

} // namespace

std::string format_human(const Report& r, const Options& opts) {
  std::ostringstream out;
  for (const CommandError& e : r.errors) {
    bool positioned = !e.message.empty() && std::isdigit(static_cast<unsigned char>(e.message[0]));
    out << r.file << (positioned ? ":" : ": ") << e.message << "\n";
  }
  for (const TheoremResult& t : r.theorems) {
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.1f", t.millis);
    out << t.name << " : " << (t.status == Status::Proved ? "proved" : "failed");
    if (!t.engine.empty()) out << " [" << t.engine << "]";
    out << " (" << ms << " ms)\n";
    if (t.status != Status::Proved) out << indent(t.failure, "  ");
    if (opts.print_proofs && t.status == Status::Proved) out << "  proof: " << t.proof_text << "\n";
    if (opts.trace && !t.trace.empty()) out << indent(t.trace, "  | ");
  }
  if (r.aborted) out << "stopped at the first error (use --keep-going to continue)\n";
  return out.str();
}

std::string format_machine(const Report& r, const Options& opts) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["file"] = r.file;
  j["exit_code"] = r.exit_code();
  ordered_json thms = ordered_json::array();
  for (const TheoremResult& t : r.theorems) {
    ordered_json o;
    o["theorem"] = t.name;
    o["status"] = t.status == Status::Proved ? "proved" : "failed";
    o["engine"] = t.engine;
    if (t.status == Status::Proved) {
      o["proof"] = t.proof_text;
    } else {
      o["failure_kind"] = t.failure_kind;
      o["failure"] = t.failure;
    }
    if (opts.trace) o["trace"] = t.trace;
    thms.push_back(std::move(o));
  }
  j["theorems"] = std::move(thms);
  ordered_json errs = ordered_json::array();
  for (const CommandError& e : r.errors)
    errs.push_back(ordered_json{{"line", e.pos.line}, {"column", e.pos.column}, {"message", e.message}});
  j["errors"] = std::move(errs);
  j["aborted"] = r.aborted;
  return j.dump(2) + "\n";
}

} // namespace tk::session
