// Random well-typed terms over a small fixed signature, for property tests.

#pragma once

#include <random>
#include <vector>

#include "transfer/kernel/builder.hpp"
#include "transfer/kernel/env.hpp"
#include "transfer/kernel/prelude.hpp"
#include "transfer/kernel/typecheck.hpp"

namespace gen {

using tk::Term;

// nat N : Set, zero : nat, succ : nat -> nat, le : nat -> nat -> Prop,
// Pn : nat -> Prop, of_nat : nat -> N,
// twice := fun (f : nat -> nat) (n : nat) => f (f n),
// lep := fun x y : nat => le x y
inline tk::GlobalEnv signature() {
  using namespace tk;
  GlobalEnv env = prelude::make_env();
  Term set = Term::sort(Sort::Set);
  Term nat = Term::constant("nat");
  add_checked(env, {"nat", DeclKind::Parameter, set, std::nullopt});
  add_checked(env, {"N", DeclKind::Parameter, set, std::nullopt});
  add_checked(env, {"zero", DeclKind::Parameter, nat, std::nullopt});
  add_checked(env, {"succ", DeclKind::Parameter, mk_arrow(nat, nat), std::nullopt});
  add_checked(env, {"le", DeclKind::Parameter, mk_arrow(nat, mk_arrow(nat, prelude::prop())), std::nullopt});
  add_checked(env, {"Pn", DeclKind::Parameter, mk_arrow(nat, prelude::prop()), std::nullopt});
  add_checked(env, {"of_nat", DeclKind::Parameter, mk_arrow(nat, Term::constant("N")), std::nullopt});
  TermBuilder b;
  Term f = b.fresh("f", mk_arrow(nat, nat));
  Term n = b.fresh("n", nat);
  add_checked(env, {"twice", DeclKind::Definition, mk_arrow(mk_arrow(nat, nat), mk_arrow(nat, nat)),
                    b.lams({f, n}, Term::app(f, Term::app(f, n)))});
  Term x = b.fresh("x", nat);
  Term y = b.fresh("y", nat);
  add_checked(env, {"lep", DeclKind::Definition, mk_arrow(nat, mk_arrow(nat, prelude::prop())),
                    b.lams({x, y}, tk::mk_app(Term::constant("le"), {x, y}))});
  return env;
}

// Generates terms in a context whose entries all have type nat; ctx_size
// is the number of such variables.
class Generator {
public:
  explicit Generator(unsigned seed) : rng_(seed) {}

  Term nat_term(std::uint32_t ctx_size, int depth) {
    Term nat = Term::constant("nat");
    int choice = pick(depth <= 0 ? 2 : 6);
    switch (choice) {
      case 0: return Term::constant("zero");
      case 1:
        if (ctx_size > 0) return Term::var(static_cast<std::uint32_t>(pick(static_cast<int>(ctx_size))));
        return Term::constant("zero");
      case 2: return Term::app(Term::constant("succ"), nat_term(ctx_size, depth - 1));
      case 3: {
        // beta redex (fun y : nat => body) arg
        Term body = nat_term(ctx_size + 1, depth - 1);
        return Term::app(Term::lambda("y", nat, body), nat_term(ctx_size, depth - 1));
      }
      case 4: return tk::mk_app(Term::constant("twice"), {fun_term(ctx_size, depth - 1), nat_term(ctx_size, depth - 1)});
      default: return Term::app(fun_term(ctx_size, depth - 1), nat_term(ctx_size, depth - 1));
    }
  }

  Term fun_term(std::uint32_t ctx_size, int depth) {
    Term nat = Term::constant("nat");
    int choice = pick(depth <= 0 ? 1 : 3);
    switch (choice) {
      case 0: return Term::constant("succ");
      case 1: return Term::lambda("z", nat, nat_term(ctx_size + 1, depth - 1));
      default: return Term::app(Term::constant("twice"), fun_term(ctx_size, depth - 1));
    }
  }

  Term prop_term(std::uint32_t ctx_size, int depth) {
    Term nat = Term::constant("nat");
    int choice = pick(depth <= 0 ? 3 : 8);
    switch (choice) {
      case 0: return tk::mk_app(Term::constant("le"), {nat_term(ctx_size, depth - 1), nat_term(ctx_size, depth - 1)});
      case 1: return Term::app(Term::constant("Pn"), nat_term(ctx_size, depth - 1));
      case 2: return tk::mk_app(Term::constant("lep"), {nat_term(ctx_size, depth - 1), nat_term(ctx_size, depth - 1)});
      case 3: return Term::pi("w", nat, prop_term(ctx_size + 1, depth - 1));
      case 4: return tk::mk_arrow(prop_term(ctx_size, depth - 1), prop_term(ctx_size, depth - 1));
      case 5:
        return tk::prelude::mk_all(nat, Term::lambda("w", nat, prop_term(ctx_size + 1, depth - 1)));
      case 6: return tk::prelude::mk_impl(prop_term(ctx_size, depth - 1), prop_term(ctx_size, depth - 1));
      default: return tk::Term::constant("False");
    }
  }

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

private:
  std::mt19937 rng_;
};

inline tk::LocalContext nat_context(std::uint32_t n) {
  tk::LocalContext ctx;
  for (std::uint32_t i = 0; i < n; ++i) ctx.push("c" + std::to_string(i), Term::constant("nat"));
  return ctx;
}

} // namespace gen
