// Tables :: surjections, v1 transfer lemmas and v2 relation entries

#ifndef TRANSFER_TABLES_TABLES_HPP_
#define TRANSFER_TABLES_TABLES_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "transfer/kernel/env.hpp"
#include "transfer/kernel/term.hpp"

namespace tk::tables {

struct TableError : public std::runtime_error {
  explicit TableError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SurjectionEntry {
  Term domain;    // A
  Term codomain;  // A'
  Term f;         // A -> A'
  Term g;         // A' -> A, right inverse of f
  Term surj_proof;  // forall x' : A', eq A' (f (g x')) x'
  std::string name;  // "f by (g, proof)" for diagnostics
};

// forall x1 .. xn : A, R x1 .. xn -> R' (f x1) .. (f xn)
struct TransferEntryV1 {
  Term source_rel;
  Term target_rel;
  std::size_t arity = 0;
  Term transfer_fn;
  Term lemma_proof;
  Term domain;  // A
  std::string name;
};

// proof : relation lhs rhs
struct RelationEntryV2 {
  Term lhs;
  Term rhs;
  Term relation;
  Term proof;
  std::string name;
};

struct RelationLookup {
  RelationEntryV2 entry;
  bool inverted = false;
};

// Names and terms produced by surjection_to_relational.
struct RelationalEncoding {
  std::string relation;  // R
  bool reused_relation = false;
  std::string surj, tot, func;
};

// Statement of a v1 entry, rebuilt from its components.
Term transfer_v1_statement(const TransferEntryV1& e);

// Swaps lhs and rhs, flipping every component of the ##> chain through inv
// (inv R is unwrapped to R). The proof is the old one with each argument
// pair swapped. Throws TableError when the relation is not Prop-valued.
RelationEntryV2 invert_entry(const GlobalEnv& env, const RelationEntryV2& entry);

// Flips one relation: inv X Y R <-> R (X, Y taken from R's type).
Term invert_relation(const GlobalEnv& env, const Term& rel);

class DeclTables {
public:
  // All declarations validate first and insert last: on error the tables
  // are left untouched.
  void declare_surjection(const GlobalEnv& env, const std::string& f, const std::string& g,
                          const std::string& proof);
  void declare_transfer_v1(const GlobalEnv& env, const std::string& lemma);
  void declare_relation_v2(const GlobalEnv& env, const std::string& lemma);
  // Inserts an already-built entry after checking its proof.
  void insert_relation_v2(const GlobalEnv& env, RelationEntryV2 entry);

  // Defines R (or reuses an existing definition with the same normal form),
  // adds R_surj, R_tot, R_func to env as checked definitions and inserts
  // the three relation entries.
  RelationalEncoding surjection_to_relational(GlobalEnv& env, const SurjectionEntry& s);
  // Encodes every surjection not encoded yet; returns the new encodings.
  std::vector<RelationalEncoding> encode_pending_surjections(GlobalEnv& env);

  // (impl, impl) at impl⁻¹ ##> impl ##> impl.
  void prefill_core(const GlobalEnv& env);

  const SurjectionEntry* lookup_surjection(const GlobalEnv& env, const Term& a, const Term& a2) const;
  const TransferEntryV1* lookup_transfer_v1(const GlobalEnv& env, const Term& r, const Term& r2) const;
  const RelationEntryV2* lookup_relation_v2_direct(const GlobalEnv& env, const Term& lhs,
                                                   const Term& rhs) const;
  // (rhs, lhs) stored, returned inverted.
  std::optional<RelationEntryV2> lookup_relation_v2_inverse(const GlobalEnv& env, const Term& lhs,
                                                            const Term& rhs) const;
  // Direct, then inverse fallback when the direct key is absent.
  std::optional<RelationLookup> lookup_relation_v2(const GlobalEnv& env, const Term& lhs,
                                                   const Term& rhs) const;

  // Removes the entry declared under name; false when none.
  bool erase(const std::string& name);

  // Re-checks every stored proof. Returns one message per bad entry.
  std::vector<std::string> audit(const GlobalEnv& env) const;

  std::size_t surjection_count() const { return surjections_.size(); }
  std::size_t transfer_v1_count() const { return transfers_v1_.size(); }
  std::size_t relation_v2_count() const { return relations_v2_.size(); }
  const std::map<std::string, RelationEntryV2>& relations_v2() const { return relations_v2_; }
  const std::map<std::string, TransferEntryV1>& transfers_v1() const { return transfers_v1_; }
  const std::map<std::string, SurjectionEntry>& surjections() const { return surjections_; }

private:
  std::map<std::string, SurjectionEntry> surjections_;
  std::map<std::string, TransferEntryV1> transfers_v1_;
  std::map<std::string, RelationEntryV2> relations_v2_;
  std::set<std::string> encoded_;
};

// Normalized key for a pair of terms.
std::string pair_key(const GlobalEnv& env, const Term& a, const Term& b);

} // namespace tk::tables

#endif // TRANSFER_TABLES_TABLES_HPP_
