// Transfer v1 :: recursive transfer over atoms and products, driven by
// surjections and transfer lemmas

#ifndef TRANSFER_TRANSFER_V1_EXACT_MODULO_HPP_
#define TRANSFER_TRANSFER_V1_EXACT_MODULO_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "transfer/kernel/env.hpp"
#include "transfer/kernel/term.hpp"
#include "transfer/tables/tables.hpp"

namespace tk::v1 {

enum class Polarity : std::uint8_t { Covariant, Contravariant };

inline Polarity flip(Polarity p) {
  return p == Polarity::Covariant ? Polarity::Contravariant : Polarity::Covariant;
}

// Replaces Var(target) by replacement, but only inside atoms reached at
// covariant polarity. Binder types of products flip the polarity, bodies
// keep it. replacement lives in the same context as f.
Term subst_polarized(const Term& f, std::uint32_t target, const Term& replacement,
                     Polarity start = Polarity::Covariant);

// eq_ind A' from (λ y, B' with covariant x' := y) inner x' eq_proof,
// where x' is Var(target) of ctx and A' its type. inner must prove B' with
// covariant x' := from; eq_proof must prove from = x'.
Term build_rewrite(const LocalContext& ctx, const Term& b_prime, std::uint32_t target, const Term& from,
                   const Term& eq_proof, const Term& inner);

// R t1 .. tn
struct AtomView {
  Term head;
  std::vector<Term> args;
};

// A Prop-typed application spine with a constant head.
std::optional<AtomView> view_atom(const GlobalEnv& env, const LocalContext& ctx, const Term& f);

enum class FailureKind : std::uint8_t { NoTableEntry, ArgumentMismatch, ShapeMismatch, InternalError };

std::string_view failure_kind_name(FailureKind k);

struct Failure {
  FailureKind kind = FailureKind::ShapeMismatch;
  std::string message;
  std::string lhs;  // F at the failing node, printed
  std::string rhs;  // F'
};

std::string describe(const Failure& f);

struct TraceStep {
  std::size_t depth = 0;
  std::string rule;  // Identity, Atom, Hypothesis, Surjection, Rewrite
  std::string detail;
};

std::string format_trace(const std::vector<TraceStep>& trace);

struct Outcome {
  std::optional<Term> proof;
  std::optional<Failure> failure;
  std::vector<TraceStep> trace;
  explicit operator bool() const { return proof.has_value(); }
};

// Proof of f_prime from rho : f, or a structured failure. Never throws on
// ill-shaped input; a proof the kernel rejects comes back as InternalError.
Outcome exact_modulo(const GlobalEnv& env, const tables::DeclTables& tables, const LocalContext& ctx,
                     const Term& f, const Term& f_prime, const Term& rho);

} // namespace tk::v1

#endif // TRANSFER_TRANSFER_V1_EXACT_MODULO_HPP_
