#include "transfer/kernel/prelude.hpp"

#include "transfer/kernel/builder.hpp"
#include "transfer/kernel/typecheck.hpp"

namespace tk::prelude {

Term prop() { return Term::sort(Sort::Prop); }
Term type() { return Term::sort(Sort::Type); }

namespace {

Term c(const std::string& name) { return Term::constant(name); }

} // namespace

GlobalEnv make_env() {
  GlobalEnv env;
  TermBuilder b;

  add_checked(env, {kFalse, DeclKind::Parameter, prop(), std::nullopt});

  {
    Term A = b.fresh("A", type());
    add_checked(env, {kEq, DeclKind::Parameter, b.pi(A, mk_arrow(A, mk_arrow(A, prop()))), std::nullopt});
  }
  {
    Term A = b.fresh("A", type());
    Term x = b.fresh("x", A);
    add_checked(env, {kEqRefl, DeclKind::Axiom, b.pis({A, x}, mk_eq(A, x, x)), std::nullopt});
  }
  {
    Term A = b.fresh("A", type());
    Term x = b.fresh("x", A);
    Term P = b.fresh("P", mk_arrow(A, prop()));
    Term y = b.fresh("y", A);
    Term stmt = b.pis({A, x, P},
                      mk_arrow(Term::app(P, x), b.pi(y, mk_arrow(mk_eq(A, x, y), Term::app(P, y)))));
    add_checked(env, {kEqInd, DeclKind::Axiom, stmt, std::nullopt});
  }
  {
    Term A = b.fresh("A", prop());
    Term B = b.fresh("B", prop());
    add_checked(env, {kImpl, DeclKind::Definition, mk_arrow(prop(), mk_arrow(prop(), prop())),
                      b.lams({A, B}, mk_arrow(A, B))});
  }
  {
    Term A = b.fresh("A", type());
    Term P = b.fresh("P", mk_arrow(A, prop()));
    Term x = b.fresh("x", A);
    Term A2 = b.fresh("A", type());
    Term ty = b.pi(A2, mk_arrow(mk_arrow(A2, prop()), prop()));
    add_checked(env, {kAll, DeclKind::Definition, ty, b.lams({A, P}, b.pi(x, Term::app(P, x)))});
  }
  {
    Term X = b.fresh("X", type());
    Term Y = b.fresh("Y", type());
    Term Xp = b.fresh("X'", type());
    Term Yp = b.fresh("Y'", type());
    Term R = b.fresh("R", mk_arrow(X, mk_arrow(Y, prop())));
    Term Rp = b.fresh("R'", mk_arrow(Xp, mk_arrow(Yp, prop())));
    Term f = b.fresh("f", mk_arrow(X, Xp));
    Term g = b.fresh("g", mk_arrow(Y, Yp));
    Term x = b.fresh("x", X);
    Term y = b.fresh("y", Y);
    Term body = b.pis({x, y}, mk_arrow(mk_app(R, {x, y}),
                                       mk_app(Rp, {Term::app(f, x), Term::app(g, y)})));
    Term def = b.lams({X, Y, Xp, Yp, R, Rp, f, g}, body);
    Term ty = b.pis({X, Y, Xp, Yp, R, Rp}, mk_arrow(mk_arrow(X, Xp), mk_arrow(mk_arrow(Y, Yp), prop())));
    add_checked(env, {kRespectful, DeclKind::Definition, ty, def});
  }
  {
    Term X = b.fresh("X", type());
    Term Y = b.fresh("Y", type());
    Term R = b.fresh("R", mk_arrow(X, mk_arrow(Y, prop())));
    Term y = b.fresh("y", Y);
    Term x = b.fresh("x", X);
    Term def = b.lams({X, Y, R, y, x}, mk_app(R, {x, y}));
    Term ty = b.pis({X, Y, R}, mk_arrow(Y, mk_arrow(X, prop())));
    add_checked(env, {kInv, DeclKind::Definition, ty, def});
  }
  return env;
}

const std::unordered_set<std::string>& relator_names() {
  static const std::unordered_set<std::string> names{kImpl, kAll, kRespectful, kInv};
  return names;
}

Term mk_eq(const Term& type, const Term& a, const Term& b) { return mk_app(c(kEq), {type, a, b}); }

Term mk_eq_refl(const Term& type, const Term& a) { return mk_app(c(kEqRefl), {type, a}); }

Term mk_eq_ind(const Term& type, const Term& from, const Term& motive, const Term& proof,
               const Term& to, const Term& eq_proof) {
  return mk_app(c(kEqInd), {type, from, motive, proof, to, eq_proof});
}

Term mk_impl(const Term& a, const Term& b) { return mk_app(c(kImpl), {a, b}); }

Term mk_all(const Term& type, const Term& pred) { return mk_app(c(kAll), {type, pred}); }

Term mk_respectful(const Term& x, const Term& y, const Term& xp, const Term& yp, const Term& r,
                   const Term& rp) {
  return mk_app(c(kRespectful), {x, y, xp, yp, r, rp});
}

Term mk_inv(const Term& x, const Term& y, const Term& r) { return mk_app(c(kInv), {x, y, r}); }

bool is_const(const Term& t, const std::string& name) { return t.is_const() && t.name() == name; }

std::optional<RespectfulView> view_respectful(const Term& rel) {
  Spine s = unfold_app(rel);
  if (!is_const(s.head, kRespectful) || s.args.size() != 6) return std::nullopt;
  return RespectfulView{s.args[0], s.args[1], s.args[2], s.args[3], s.args[4], s.args[5]};
}

std::optional<InvView> view_inv(const Term& rel) {
  Spine s = unfold_app(rel);
  if (!is_const(s.head, kInv) || s.args.size() != 3) return std::nullopt;
  return InvView{s.args[0], s.args[1], s.args[2]};
}

} // namespace tk::prelude
