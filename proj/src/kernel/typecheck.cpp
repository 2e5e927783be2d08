#include "transfer/kernel/typecheck.hpp"

#include <vector>

#include "transfer/kernel/reduce.hpp"

namespace tk {

namespace {

class Checker {
public:
  Checker(const GlobalEnv& env) : env_(env) {}

  Term infer(const LocalContext& ctx, const Term& t) {
    switch (t.kind()) {
      case TermKind::Sort: return Term::sort(Sort::Type);
      case TermKind::Var:
        if (t.index() >= ctx.size()) fail("unbound variable #" + std::to_string(t.index()));
        return ctx.type_of(t.index());
      case TermKind::Const: {
        const Declaration* d = env_.find(t.name());
        if (!d) fail("unknown constant '" + t.name() + "'");
        return d->type;
      }
      case TermKind::Pi: {
        enter("pi.domain");
        sort_of(ctx, t.binder_type());
        leave();
        enter("pi.body");
        Sort s2 = sort_of(ctx.pushed(t.name(), t.binder_type()), t.body());
        leave();
        return Term::sort(s2);
      }
      case TermKind::Lambda: {
        enter("lambda.domain");
        sort_of(ctx, t.binder_type());
        leave();
        enter("lambda.body");
        Term body_ty = infer(ctx.pushed(t.name(), t.binder_type()), t.body());
        leave();
        return Term::pi(t.name(), t.binder_type(), std::move(body_ty));
      }
      case TermKind::App: {
        enter("app.fn");
        Term fn_ty = whnf(env_, infer(ctx, t.fn()));
        leave();
        if (!fn_ty.is_pi()) fail("applying a non-function (type " + debug_string(fn_ty) + ")");
        enter("app.arg");
        Term arg_ty = infer(ctx, t.arg());
        if (!subtype(env_, arg_ty, fn_ty.binder_type()))
          fail("argument type " + debug_string(arg_ty) + " does not match expected " +
               debug_string(fn_ty.binder_type()));
        leave();
        return instantiate(fn_ty.body(), t.arg());
      }
    }
    fail("malformed term");
  }

  Sort sort_of(const LocalContext& ctx, const Term& t) {
    Term ty = whnf(env_, infer(ctx, t));
    if (!ty.is_sort()) fail("expected a type, got a term of type " + debug_string(ty));
    return ty.sort_tag();
  }

private:
  [[noreturn]] void fail(const std::string& msg) {
    std::string p;
    for (const auto& s : path_) {
      if (!p.empty()) p += '/';
      p += s;
    }
    throw TypeError(msg, p);
  }
  void enter(const char* step) { path_.push_back(step); }
  void leave() { path_.pop_back(); }

  const GlobalEnv& env_;
  std::vector<const char*> path_;
};

bool sort_leq(Sort a, Sort b) { return a == b || b == Sort::Type; }

} // namespace

Term infer_type(const GlobalEnv& env, const LocalContext& ctx, const Term& t) {
  return Checker(env).infer(ctx, t);
}

Sort infer_sort(const GlobalEnv& env, const LocalContext& ctx, const Term& t) {
  return Checker(env).sort_of(ctx, t);
}

bool subtype(const GlobalEnv& env, const Term& a, const Term& b) {
  if (convertible(env, a, b)) return true;
  Term x = whnf(env, a);
  Term y = whnf(env, b);
  if (x.is_sort() && y.is_sort()) return sort_leq(x.sort_tag(), y.sort_tag());
  if (x.is_pi() && y.is_pi())
    return convertible(env, x.binder_type(), y.binder_type()) && subtype(env, x.body(), y.body());
  return false;
}

CheckResult check_proof(const GlobalEnv& env, const LocalContext& ctx, const Term& proof,
                        const Term& statement) {
  try {
    Term ty = infer_type(env, ctx, proof);
    if (convertible(env, ty, statement)) return {true, {}};
    return {false, "proof has type " + debug_string(ty) + ", expected " + debug_string(statement)};
  } catch (const KernelError& e) {
    return {false, e.what()};
  }
}

void add_checked(GlobalEnv& env, Declaration decl) {
  if (env.contains(decl.name)) throw KernelError("'" + decl.name + "' is already declared");
  infer_sort(env, LocalContext{}, decl.type);
  if (decl.body) {
    Term body_ty = infer_type(env, LocalContext{}, *decl.body);
    if (!subtype(env, body_ty, decl.type))
      throw KernelError("body of '" + decl.name + "' has type " + debug_string(body_ty) +
                        ", declared " + debug_string(decl.type));
  }
  env.add(std::move(decl));
}

} // namespace tk
