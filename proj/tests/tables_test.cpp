#include "doctest.h"

#include <unordered_set>

#include "support/decls.hpp"
#include "transfer/kernel/reduce.hpp"
#include "transfer/kernel/typecheck.hpp"
#include "transfer/surface/printer.hpp"
#include "transfer/tables/tables.hpp"

using namespace tk;
using namespace tk::tables;

namespace {

Term C(const char* name) { return Term::constant(name); }

const char* kIntro = R"(
Parameter A A' : Set.
Parameter f : A → A'.
Parameter g : A' → A.
Axiom surjf : ∀ x' : A', f (g x') = x'.
Axiom notsurj : ∀ x : A, g (f x) = x.
)";

const char* kNat = R"(
Parameters nat N bool : Set.
Parameter le : nat → nat → Prop.
Parameter N.le : N → N → Prop.
Parameter N.to_nat : N → nat.
Parameter N.of_nat : nat → N.
Parameter iszero_nat : nat → bool.
Parameter iszero_N : N → bool.
Parameter Nat.add : nat → nat → nat.
Parameter N.add : N → N → N.
Parameters p q : Prop.
Axiom ax2 : ∀ x' : N, N.of_nat (N.to_nat x') = x'.
Axiom ax3 : ∀ x' y' : N, N.le x' y' → le (N.to_nat x') (N.to_nat y').
Axiom ax4 : ∀ x y : nat, le x y → N.le (N.of_nat x) (N.of_nat y).
Parameter N.of_nat2 : nat → N.
Axiom mixed : ∀ x y : nat, le x y → N.le (N.of_nat x) (N.of_nat2 y).
Parameter zero : nat.
Axiom nullary : le zero zero → N.le (N.of_nat zero) (N.of_nat zero).
Definition natN x x' := N.of_nat x = x'.
Axiom le_transfer : (natN ##> natN ##> impl) le N.le.
Axiom le_transfer_inv : (natN⁻¹ ##> natN⁻¹ ##> impl) N.le le.
Axiom iszero_transfer : (natN ##> @eq bool) iszero_nat iszero_N.
Axiom plus_transf : (natN ##> natN ##> natN) Nat.add N.add.
Axiom pq : @eq Prop (impl p q) (impl p q).
)";

bool mentions(const Term& t, const std::unordered_set<std::string>& names) {
  switch (t.kind()) {
    case TermKind::Const: return names.count(t.name()) > 0;
    case TermKind::App: return mentions(t.fn(), names) || mentions(t.arg(), names);
    case TermKind::Lambda:
    case TermKind::Pi: return mentions(t.binder_type(), names) || mentions(t.body(), names);
    default: return false;
  }
}

std::string show(const GlobalEnv& env, const Term& t) { return surface::print_term(t, &env); }

} // namespace

TEST_SUITE("tables.surjection") {
  TEST_CASE("intro surjection is keyed by its domain and codomain") {
    GlobalEnv env = decls::make(kIntro);
    DeclTables t;
    t.declare_surjection(env, "f", "g", "surjf");
    const SurjectionEntry* e = t.lookup_surjection(env, C("A"), C("A'"));
    REQUIRE(e != nullptr);
    CHECK(e->f == C("f"));
    CHECK(e->g == C("g"));
    CHECK(e->surj_proof == C("surjf"));
    CHECK(t.lookup_surjection(env, C("A'"), C("A")) == nullptr);
    CHECK(t.surjection_count() == 1);
  }

  TEST_CASE("duplicate surjection is rejected and tables are unchanged") {
    GlobalEnv env = decls::make(std::string(kIntro) + "Axiom surjf2 : ∀ x' : A', f (g x') = x'.");
    DeclTables t;
    t.declare_surjection(env, "f", "g", "surjf");
    CHECK_THROWS_AS(t.declare_surjection(env, "f", "g", "surjf2"), TableError);
    CHECK(t.surjection_count() == 1);
    CHECK(t.lookup_surjection(env, C("A"), C("A'"))->name == "surjf");
  }

  TEST_CASE("wrong proof, wrong inverse type, unknown names") {
    GlobalEnv env = decls::make(kIntro);
    DeclTables t;
    CHECK_THROWS_AS(t.declare_surjection(env, "f", "g", "notsurj"), TableError);
    CHECK_THROWS_AS(t.declare_surjection(env, "f", "f", "surjf"), TableError);
    CHECK_THROWS_AS(t.declare_surjection(env, "f", "g", "nope"), TableError);
    CHECK(t.surjection_count() == 0);
  }

  TEST_CASE("both directions may coexist") {
    GlobalEnv env = decls::make(std::string(kIntro) + "Axiom gsurj : ∀ x : A, g (f x) = x.");
    DeclTables t;
    t.declare_surjection(env, "f", "g", "surjf");
    t.declare_surjection(env, "g", "f", "gsurj");
    CHECK(t.lookup_surjection(env, C("A"), C("A'"))->f == C("f"));
    CHECK(t.lookup_surjection(env, C("A'"), C("A"))->f == C("g"));
  }
}

TEST_SUITE("tables.transfer_v1") {
  TEST_CASE("ax3 and ax4 entries") {
    GlobalEnv env = decls::make(kNat);
    DeclTables t;
    t.declare_transfer_v1(env, "ax3");
    t.declare_transfer_v1(env, "ax4");
    const TransferEntryV1* e3 = t.lookup_transfer_v1(env, C("N.le"), C("le"));
    REQUIRE(e3 != nullptr);
    CHECK(e3->arity == 2);
    CHECK(e3->transfer_fn == C("N.to_nat"));
    CHECK(e3->domain == C("N"));
    const TransferEntryV1* e4 = t.lookup_transfer_v1(env, C("le"), C("N.le"));
    REQUIRE(e4 != nullptr);
    CHECK(e4->transfer_fn == C("N.of_nat"));
    CHECK(e4->domain == C("nat"));
    CHECK(convertible(env, transfer_v1_statement(*e4), env.find("ax4")->type));
    CHECK(t.audit(env).empty());
  }

  TEST_CASE("mixed transfer functions are a shape error") {
    GlobalEnv env = decls::make(kNat);
    DeclTables t;
    try {
      t.declare_transfer_v1(env, "mixed");
      FAIL("expected TableError");
    } catch (const TableError& e) {
      CHECK(std::string(e.what()).find("different transfer function") != std::string::npos);
    }
    CHECK(t.transfer_v1_count() == 0);
  }

  TEST_CASE("zero quantified variables are rejected") {
    GlobalEnv env = decls::make(kNat);
    DeclTables t;
    CHECK_THROWS_AS(t.declare_transfer_v1(env, "nullary"), TableError);
  }

  TEST_CASE("duplicate v1 entry") {
    GlobalEnv env = decls::make(std::string(kNat) +
                                "Axiom ax4b : ∀ x y : nat, le x y → N.le (N.of_nat x) (N.of_nat y).");
    DeclTables t;
    t.declare_transfer_v1(env, "ax4");
    CHECK_THROWS_AS(t.declare_transfer_v1(env, "ax4b"), TableError);
    CHECK(t.lookup_transfer_v1(env, C("le"), C("N.le"))->name == "ax4");
  }
}

TEST_SUITE("tables.relation_v2") {
  TEST_CASE("declared relations are keyed by lhs and rhs") {
    GlobalEnv env = decls::make(kNat);
    DeclTables t;
    t.declare_relation_v2(env, "le_transfer");
    t.declare_relation_v2(env, "iszero_transfer");
    t.declare_relation_v2(env, "plus_transf");
    const RelationEntryV2* le = t.lookup_relation_v2_direct(env, C("le"), C("N.le"));
    REQUIRE(le != nullptr);
    CHECK(show(env, le->relation) == "natN ##> natN ##> impl");
    CHECK(show(env, t.lookup_relation_v2_direct(env, C("iszero_nat"), C("iszero_N"))->relation) ==
          "natN ##> @eq bool");
    CHECK(show(env, t.lookup_relation_v2_direct(env, C("Nat.add"), C("N.add"))->relation) ==
          "natN ##> natN ##> natN");
    CHECK(t.lookup_relation_v2_direct(env, C("N.le"), C("le")) == nullptr);
    CHECK(t.audit(env).empty());
  }

  TEST_CASE("keys are normalized") {
    GlobalEnv env = decls::make(kNat);
    CHECK(pair_key(env, decls::term(env, "impl p q"), C("p")) == pair_key(env, decls::term(env, "p → q"), C("p")));
    DeclTables t;
    t.insert_relation_v2(env, {decls::term(env, "impl p q"), decls::term(env, "impl p q"),
                               decls::term(env, "@eq Prop"), C("pq"), "pq"});
    CHECK(t.lookup_relation_v2_direct(env, decls::term(env, "p → q"), decls::term(env, "p → q")) != nullptr);
  }

  TEST_CASE("inverse fallback") {
    GlobalEnv env = decls::make(kNat);
    DeclTables t;
    t.declare_relation_v2(env, "le_transfer");
    auto r = t.lookup_relation_v2(env, C("N.le"), C("le"));
    REQUIRE(r.has_value());
    CHECK(r->inverted);
    CHECK(show(env, r->entry.relation) == "natN⁻¹ ##> natN⁻¹ ##> impl⁻¹");
    CHECK(check_proof(env, LocalContext{}, r->entry.proof, mk_app(r->entry.relation, {C("N.le"), C("le")})));
    auto d = t.lookup_relation_v2(env, C("le"), C("N.le"));
    REQUIRE(d.has_value());
    CHECK_FALSE(d->inverted);
  }

  TEST_CASE("inversion is an involution on relations") {
    GlobalEnv env = decls::make(kNat);
    DeclTables t;
    for (const char* n : {"le_transfer", "le_transfer_inv", "iszero_transfer", "plus_transf"}) {
      t.declare_relation_v2(env, n);
    }
    for (const auto& [k, e] : t.relations_v2()) {
      RelationEntryV2 once = invert_entry(env, e);
      RelationEntryV2 twice = invert_entry(env, once);
      CHECK(twice.relation == e.relation);
      CHECK(twice.lhs == e.lhs);
      CHECK(twice.rhs == e.rhs);
      CHECK(check_proof(env, LocalContext{}, once.proof, mk_app(once.relation, {once.lhs, once.rhs})));
      CHECK(check_proof(env, LocalContext{}, twice.proof, mk_app(e.relation, {e.lhs, e.rhs})));
    }
  }

  TEST_CASE("ill-typed or non-Prop statements are rejected") {
    GlobalEnv env = decls::make(kNat);
    DeclTables t;
    CHECK_THROWS_AS(t.insert_relation_v2(env, {C("le"), C("N.le"), C("impl"), C("pq"), "bad"}), TableError);
    CHECK_THROWS_AS(t.insert_relation_v2(env, {C("p"), C("q"), C("impl"), C("pq"), "bad"}), TableError);
    CHECK(t.relation_v2_count() == 0);
  }

  TEST_CASE("erase") {
    GlobalEnv env = decls::make(kNat);
    DeclTables t;
    t.declare_relation_v2(env, "le_transfer");
    CHECK(t.erase("le_transfer"));
    CHECK_FALSE(t.erase("le_transfer"));
    CHECK(t.relation_v2_count() == 0);
  }
}

TEST_SUITE("tables.encoding") {
  TEST_CASE("surjection to relational reuses natN") {
    GlobalEnv env = decls::make(kNat);
    DeclTables t;
    t.declare_surjection(env, "N.of_nat", "N.to_nat", "ax2");
    auto enc = t.encode_pending_surjections(env);
    REQUIRE(enc.size() == 1);
    CHECK(enc[0].relation == "natN");
    CHECK(enc[0].reused_relation);
    CHECK(enc[0].surj == "natN_surj");
    CHECK(env.find("natN_surj") != nullptr);
    CHECK(env.find("natN_tot") != nullptr);
    CHECK(env.find("natN_func") != nullptr);
    CHECK(t.encode_pending_surjections(env).empty());

    auto surj = t.lookup_relation_v2_direct(env, decls::term(env, "@all nat"), decls::term(env, "@all N"));
    REQUIRE(surj != nullptr);
    CHECK(show(env, mk_app(surj->relation, {surj->lhs, surj->rhs})) == "((natN ##> impl) ##> impl) (@all nat) (@all N)");
    auto tot = t.lookup_relation_v2_direct(env, decls::term(env, "@all N"), decls::term(env, "@all nat"));
    REQUIRE(tot != nullptr);
    CHECK(show(env, mk_app(tot->relation, {tot->lhs, tot->rhs})) == "((natN⁻¹ ##> impl) ##> impl) (@all N) (@all nat)");
    auto func = t.lookup_relation_v2_direct(env, decls::term(env, "@eq nat"), decls::term(env, "@eq N"));
    REQUIRE(func != nullptr);
    CHECK(show(env, mk_app(func->relation, {func->lhs, func->rhs})) == "(natN ##> natN ##> impl) (@eq nat) (@eq N)");
    CHECK(t.audit(env).empty());
  }

  TEST_CASE("unfolded statements match the pointwise forms") {
    GlobalEnv env = decls::make(kNat);
    DeclTables t;
    t.declare_surjection(env, "N.of_nat", "N.to_nat", "ax2");
    t.encode_pending_surjections(env);
    auto unfolded = [&](const char* name) { return unfold_only(env, env.find(name)->type, prelude::relator_names()); };
    Term surj = unfolded("natN_surj");
    Term func = unfolded("natN_func");
    CHECK_FALSE(mentions(surj, prelude::relator_names()));
    CHECK_FALSE(mentions(func, prelude::relator_names()));
    Term surj_ref = decls::term(env,
        "∀ (P : nat → Prop) (P' : N → Prop), (∀ (x : nat) (x' : N), natN x x' → P x → P' x') → "
        "(∀ x : nat, P x) → ∀ x' : N, P' x'");
    Term func_ref = decls::term(env,
        "∀ (x : nat) (x' : N), natN x x' → ∀ (y : nat) (y' : N), natN y y' → x = y → x' = y'");
    CHECK(surj == surj_ref);
    CHECK(func == func_ref);
  }

  TEST_CASE("a fresh relation is defined when none matches") {
    GlobalEnv env = decls::make(kIntro);
    DeclTables t;
    t.declare_surjection(env, "f", "g", "surjf");
    auto enc = t.encode_pending_surjections(env);
    REQUIRE(enc.size() == 1);
    CHECK(enc[0].relation == "f_rel");
    CHECK_FALSE(enc[0].reused_relation);
    CHECK(env.find("f_rel_func") != nullptr);
    CHECK(t.relation_v2_count() == 3);
  }

  TEST_CASE("prefilled implication entry") {
    GlobalEnv env = decls::make(kNat);
    DeclTables fresh;
    CHECK(fresh.lookup_relation_v2(env, C("impl"), C("impl")) == std::nullopt);
    DeclTables t;
    t.prefill_core(env);
    const RelationEntryV2* e = t.lookup_relation_v2_direct(env, C("impl"), C("impl"));
    REQUIRE(e != nullptr);
    CHECK(show(env, e->relation) == "impl⁻¹ ##> impl ##> impl");
    Term ref = decls::term(env, "∀ A A' : Prop, (A' → A) → ∀ B B' : Prop, (B → B') → (A → B) → A' → B'");
    CHECK(unfold_only(env, mk_app(e->relation, {e->lhs, e->rhs}), prelude::relator_names()) == ref);
    CHECK(t.audit(env).empty());
  }
}
