// Kernel :: the prelude (equality, False, impl, all, respectful, inv)

#ifndef TRANSFER_KERNEL_PRELUDE_HPP_
#define TRANSFER_KERNEL_PRELUDE_HPP_

#include <optional>
#include <string>
#include <unordered_set>

#include "transfer/kernel/env.hpp"
#include "transfer/kernel/term.hpp"

namespace tk::prelude {

inline const std::string kFalse = "False";
inline const std::string kEq = "eq";
inline const std::string kEqRefl = "eq_refl";
inline const std::string kEqInd = "eq_ind";
inline const std::string kImpl = "impl";
inline const std::string kAll = "all";
inline const std::string kRespectful = "respectful";
inline const std::string kInv = "inv";

//   False      : Prop
//   eq         : forall A : Type, A -> A -> Prop
//   eq_refl    : forall (A : Type) (x : A), eq A x x
//   eq_ind     : forall (A : Type) (x : A) (P : A -> Prop), P x -> forall y : A, eq A x y -> P y
//   impl       := fun A B : Prop => A -> B
//   all        := fun (A : Type) (P : A -> Prop) => forall x : A, P x
//   respectful := fun X Y X' Y' R R' f g => forall x y, R x y -> R' (f x) (g y)
//   inv        := fun X Y R y x => R x y
GlobalEnv make_env();

// The relator definitions: impl, all, respectful, inv.
const std::unordered_set<std::string>& relator_names();

Term prop();
Term type();

Term mk_eq(const Term& type, const Term& a, const Term& b);
Term mk_eq_refl(const Term& type, const Term& a);
Term mk_eq_ind(const Term& type, const Term& from, const Term& motive, const Term& proof,
               const Term& to, const Term& eq_proof);
Term mk_impl(const Term& a, const Term& b);
Term mk_all(const Term& type, const Term& pred);
Term mk_respectful(const Term& x, const Term& y, const Term& xp, const Term& yp, const Term& r,
                   const Term& rp);
Term mk_inv(const Term& x, const Term& y, const Term& r);

// respectful X Y X' Y' R R' (exactly six arguments).
struct RespectfulView {
  Term x, y, xp, yp, r, rp;
};
std::optional<RespectfulView> view_respectful(const Term& rel);

// inv X Y R (exactly three arguments).
struct InvView {
  Term x, y, r;
};
std::optional<InvView> view_inv(const Term& rel);

bool is_const(const Term& t, const std::string& name);

} // namespace tk::prelude

#endif // TRANSFER_KERNEL_PRELUDE_HPP_
