// Transfer v2 :: relational judgments lhs ⇝[R] rhs synthesized with the
// Env, Table, Lambda, App, Forall and Arrow rules

#ifndef TRANSFER_TRANSFER_V2_TRANSFER_MODULO_HPP_
#define TRANSFER_TRANSFER_V2_TRANSFER_MODULO_HPP_

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "transfer/kernel/env.hpp"
#include "transfer/kernel/term.hpp"
#include "transfer/tables/tables.hpp"

namespace tk::v2 {

// Expected relation: a ##> chain whose leaves are known relations or
// metavariables.
class RelPattern {
public:
  enum class Kind { Meta, Known, Arrow };

  static RelPattern meta(std::size_t id);
  static RelPattern known(Term rel);
  static RelPattern arrow(RelPattern dom, RelPattern cod);

  Kind kind() const { return kind_; }
  std::size_t meta_id() const { return id_; }
  const Term& rel() const { return rel_; }
  const RelPattern& dom() const { return *dom_; }
  const RelPattern& cod() const { return *cod_; }

private:
  Kind kind_ = Kind::Meta;
  std::size_t id_ = 0;
  Term rel_;
  std::shared_ptr<const RelPattern> dom_, cod_;
};

// Metavariable solutions, indexed by id.
class MetaStore {
public:
  std::size_t fresh();
  const std::optional<Term>& solution(std::size_t id) const { return solutions_.at(id); }
  void solve(std::size_t id, Term t) { solutions_.at(id) = std::move(t); }
  std::size_t size() const { return solutions_.size(); }

private:
  std::vector<std::optional<Term>> solutions_;
};

// One-way matching of pattern against stored (never instantiated). Known
// leaves compare up to conversion; solved metavariables too. On mismatch
// metas is left as it was.
bool match_relation(const GlobalEnv& env, const Term& stored, const RelPattern& pattern, MetaStore& metas);

std::string show_pattern(const GlobalEnv& env, const LocalContext& ctx, const RelPattern& p, const MetaStore& metas);

struct TraceNode {
  std::string rule;  // Env, Table, Lambda, App, Forall, Arrow
  std::string lhs, relation, rhs;
  std::string source;      // leaves: hypothesis or table entry
  bool arg_first = false;  // App: the argument was resolved before the function
  std::vector<TraceNode> children;
};

// Indented, one line per node: RULE lhs ⇝[relation] rhs [by source].
std::string format_trace(const TraceNode& root);
// Rule names in pre-order.
std::vector<std::string> rule_sequence(const TraceNode& root);

struct Judgment {
  LocalContext ctx;
  Term lhs, rhs, relation, proof;
};

struct Failure {
  std::string message;
  std::size_t depth = 0;
  std::string lhs, rhs, expected;  // deepest failing judgment
  std::vector<std::string> attempts;
  bool internal = false;  // the kernel rejected an emitted proof
};

std::string describe(const Failure& f);

struct Options {
  // Kernel-check every intermediate judgment, not only the result.
  bool check_every_node = false;
  // Replay: follow the rules recorded in this trace instead of searching.
  const TraceNode* guide = nullptr;
};

struct Outcome {
  std::optional<Term> proof;  // proof of the goal
  std::optional<Judgment> root;
  std::optional<TraceNode> trace;
  std::optional<Failure> failure;
  explicit operator bool() const { return proof.has_value(); }
};

// Single judgment lhs ⇝[expected] rhs in ctx.
Outcome synth(const GlobalEnv& env, const tables::DeclTables& tables, const LocalContext& ctx, const Term& lhs,
              const Term& rhs, const RelPattern& expected, MetaStore& metas, const Options& opts = {});

// thm ⇝[impl] goal, then the impl proof applied to thm_proof.
Outcome transfer_modulo(const GlobalEnv& env, const tables::DeclTables& tables, const Term& thm_statement,
                        const Term& goal, const Term& thm_proof, const Options& opts = {});

} // namespace tk::v2

#endif // TRANSFER_TRANSFER_V2_TRANSFER_MODULO_HPP_
