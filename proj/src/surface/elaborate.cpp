#include "transfer/surface/elaborate.hpp"

#include <optional>
#include <stdexcept>

#include "transfer/kernel/prelude.hpp"
#include "transfer/kernel/reduce.hpp"
#include "transfer/kernel/typecheck.hpp"
#include "transfer/surface/printer.hpp"

namespace tk::surface {

std::size_t implicit_arguments(const std::string& name) {
  if (name == prelude::kEq || name == prelude::kAll) return 1;
  if (name == prelude::kInv) return 2;
  if (name == prelude::kRespectful) return 4;
  return 0;
}

namespace {

constexpr char kHoleMark = '\x02';

struct Hole {
  std::uint32_t depth;  // context size where the hole lives
  std::optional<Term> solution;
  std::string what;
  Position pos;
};

struct Local {
  std::string name;
  Term type;  // relative to the locals before it
};

class Elaborator {
public:
  Elaborator(const GlobalEnv& env, const LocalContext& ctx) : env_(env) {
    for (const ContextEntry& e : ctx.entries()) locals_.push_back({e.name, e.type});
  }

  Term infer_top(const PreTermPtr& pt, Term* type_out) {
    auto [t, ty] = infer(pt);
    if (type_out) *type_out = ty;
    return t;
  }

  Term check_top(const PreTermPtr& pt, const Term& expected) { return check(pt, expected); }

  Term type_top(const PreTermPtr& pt) { return as_type(pt); }

  Elaborated definition(const DefinitionCmd& def) {
    std::vector<Term> types;
    for (const PreBinder& b : def.binders) {
      Term ty = b.type ? as_type(b.type) : new_hole("the type of '" + b.name + "'", b.pos);
      types.push_back(ty);
      locals_.push_back({b.name, ty});
    }
    Term body, body_ty;
    if (def.type) {
      body_ty = as_type(def.type);
      body = check(def.body, body_ty);
    } else {
      std::tie(body, body_ty) = infer(def.body);
    }
    for (std::size_t i = def.binders.size(); i-- > 0;) {
      locals_.pop_back();
      body = Term::lambda(def.binders[i].name, types[i], body);
      body_ty = Term::pi(def.binders[i].name, types[i], body_ty);
    }
    return {body, body_ty};
  }

  // Substitutes solved holes; throws on any hole left open.
  Term finish(const Term& t) {
    Term z = zonk(t, depth());
    if (auto h = first_hole(z)) {
      const Hole& hole = holes_[*h];
      throw ElabError("cannot infer " + hole.what, hole.pos);
    }
    return z;
  }

private:
  std::uint32_t depth() const { return static_cast<std::uint32_t>(locals_.size()); }

  [[noreturn]] void fail(const std::string& msg, Position pos) const { throw ElabError(msg, pos); }

  std::string show(const Term& t) { return print_term(zonk(t, depth())); }

  Term new_hole(std::string what, Position pos) {
    holes_.push_back({depth(), std::nullopt, std::move(what), pos});
    return Term::constant(std::string(1, kHoleMark) + std::to_string(holes_.size() - 1));
  }

  std::optional<std::size_t> hole_id(const Term& t) const {
    if (!t.is_const() || t.name().empty() || t.name()[0] != kHoleMark) return std::nullopt;
    return std::stoul(t.name().substr(1));
  }

  std::optional<std::size_t> first_hole(const Term& t) const {
    switch (t.kind()) {
      case TermKind::Const: return hole_id(t);
      case TermKind::App: {
        if (auto h = first_hole(t.fn())) return h;
        return first_hole(t.arg());
      }
      case TermKind::Lambda:
      case TermKind::Pi: {
        if (auto h = first_hole(t.binder_type())) return h;
        return first_hole(t.body());
      }
      default: return std::nullopt;
    }
  }

  Term zonk(const Term& t, std::uint32_t d) {
    switch (t.kind()) {
      case TermKind::Const: {
        auto h = hole_id(t);
        if (!h || !holes_[*h].solution) return t;
        Hole& hole = holes_[*h];
        Term sol = zonk(*hole.solution, hole.depth);
        hole.solution = sol;
        return lift(sol, d - hole.depth);
      }
      case TermKind::App: {
        Term f = zonk(t.fn(), d), a = zonk(t.arg(), d);
        if (f.same_node(t.fn()) && a.same_node(t.arg())) return t;
        return Term::app(f, a);
      }
      case TermKind::Lambda:
      case TermKind::Pi: {
        Term ty = zonk(t.binder_type(), d), body = zonk(t.body(), d + 1);
        if (ty.same_node(t.binder_type()) && body.same_node(t.body())) return t;
        return t.is_lambda() ? Term::lambda(t.name(), ty, body) : Term::pi(t.name(), ty, body);
      }
      default: return t;
    }
  }

  bool contains_hole(const Term& t, std::size_t id) const {
    switch (t.kind()) {
      case TermKind::Const: return hole_id(t) == id;
      case TermKind::App: return contains_hole(t.fn(), id) || contains_hole(t.arg(), id);
      case TermKind::Lambda:
      case TermKind::Pi: return contains_hole(t.binder_type(), id) || contains_hole(t.body(), id);
      default: return false;
    }
  }

  bool assign(std::size_t id, const Term& value, std::uint32_t d) {
    if (contains_hole(value, id)) return false;
    Hole& hole = holes_[id];
    try {
      hole.solution = lower(value, d - hole.depth);
    } catch (const std::logic_error&) {
      return false;  // value mentions binders the hole cannot see
    }
    return true;
  }

  // First-order unification; without holes it is the kernel's subtyping.
  bool unify(const Term& actual, const Term& expected, std::uint32_t d) {
    Term a = zonk(actual, d), b = zonk(expected, d);
    if (a == b) return true;
    if (auto h = hole_id(a)) return assign(*h, b, d);
    if (auto h = hole_id(b)) return assign(*h, a, d);
    if (!first_hole(a) && !first_hole(b)) return subtype(env_, a, b);
    if (a.kind() == b.kind()) {
      if (a.is_binder())
        return unify(a.binder_type(), b.binder_type(), d) && unify(a.body(), b.body(), d + 1);
      if (a.is_app() && unify(a.fn(), b.fn(), d) && unify(a.arg(), b.arg(), d)) return true;
    }
    Term wa = whnf(env_, a), wb = whnf(env_, b);
    if (wa == a && wb == b) return false;
    return unify(wa, wb, d);
  }

  Term expect_pi(const Term& fty, const char* what, Position pos) {
    Term t = whnf(env_, zonk(fty, depth()));
    if (t.is_pi()) return t;
    if (hole_id(t)) fail(std::string("cannot infer the type of ") + what, pos);
    fail(std::string(what) + " is not a function; its type is " + show(t), pos);
  }

  Sort expect_sort(const Term& ty, Position pos) {
    Term t = whnf(env_, zonk(ty, depth()));
    if (t.is_sort()) return t.sort_tag();
    fail("expected a type, found a term of type " + show(t), pos);
  }

  std::pair<Term, Term> apply(Term f, Term fty, const PreTermPtr& arg, Position pos) {
    Term pi = expect_pi(fty, "the applied term", pos);
    Term a = check(arg, pi.binder_type());
    return {Term::app(std::move(f), a), instantiate(pi.body(), a)};
  }

  std::pair<Term, Term> global(const std::string& name, bool explicit_args, Position pos) {
    const Declaration* decl = env_.find(name);
    if (!decl) fail("unknown identifier '" + name + "'", pos);
    Term t = Term::constant(name), ty = decl->type;
    if (!explicit_args) {
      for (std::size_t i = 0; i < implicit_arguments(name); ++i) {
        Term pi = expect_pi(ty, "an implicit constant", pos);
        Term h = new_hole("an implicit argument of '" + name + "'", pos);
        t = Term::app(t, h);
        ty = instantiate(pi.body(), h);
      }
    }
    return {t, ty};
  }

  std::pair<Term, Term> infer(const PreTermPtr& pt) {
    const PreTerm& p = *pt;
    switch (p.kind) {
      case PreTerm::Kind::Sort: return {Term::sort(p.sort), Term::sort(Sort::Type)};
      case PreTerm::Kind::Ident: {
        if (!p.explicit_args) {
          for (std::uint32_t i = 0; i < locals_.size(); ++i) {
            const Local& l = locals_[locals_.size() - 1 - i];
            if (l.name == p.name) return {Term::var(i), lift(l.type, i + 1)};
          }
        }
        return global(p.name, p.explicit_args, p.pos);
      }
      case PreTerm::Kind::App: {
        auto [f, fty] = infer(p.lhs);
        return apply(f, fty, p.rhs, p.pos);
      }
      case PreTerm::Kind::Eq: {
        auto [f, fty] = global(prelude::kEq, false, p.pos);
        std::tie(f, fty) = apply(f, fty, p.lhs, p.pos);
        return apply(f, fty, p.rhs, p.pos);
      }
      case PreTerm::Kind::Respectful: {
        auto [f, fty] = global(prelude::kRespectful, false, p.pos);
        std::tie(f, fty) = apply(f, fty, p.lhs, p.pos);
        return apply(f, fty, p.rhs, p.pos);
      }
      case PreTerm::Kind::Inv: {
        auto [f, fty] = global(prelude::kInv, false, p.pos);
        return apply(f, fty, p.lhs, p.pos);
      }
      case PreTerm::Kind::Arrow: {
        Term a = as_type(p.lhs);
        auto [b, bty] = infer(p.rhs);
        Sort s = expect_sort(bty, p.rhs->pos);
        return {mk_arrow(a, b), Term::sort(s)};
      }
      case PreTerm::Kind::Pi: return binders(p, 0, std::nullopt);
      case PreTerm::Kind::Lambda: return binders(p, 0, std::nullopt);
    }
    fail("unsupported term", p.pos);
  }

  // Elaborates binder i onward of a Lambda/Pi. expected only for lambdas.
  std::pair<Term, Term> binders(const PreTerm& p, std::size_t i, std::optional<Term> expected) {
    bool lambda = p.kind == PreTerm::Kind::Lambda;
    if (i == p.binders.size()) {
      if (lambda) {
        if (expected) {
          Term body = check(p.body, *expected);
          return {body, *expected};
        }
        return infer(p.body);
      }
      auto [body, ty] = infer(p.body);
      Sort s = expect_sort(ty, p.body->pos);
      return {body, Term::sort(s)};
    }
    const PreBinder& b = p.binders[i];
    std::optional<Term> exp_pi;
    if (expected) {
      Term e = whnf(env_, zonk(*expected, depth()));
      if (e.is_pi()) exp_pi = e;
    }
    Term ty;
    if (b.type) {
      ty = as_type(b.type);
      if (exp_pi && !unify(exp_pi->binder_type(), ty, depth()))
        fail("binder '" + b.name + "' has type " + show(ty) + " but " +
                 show(exp_pi->binder_type()) + " was expected",
             b.pos);
    } else if (exp_pi) {
      ty = exp_pi->binder_type();
    } else {
      ty = new_hole("the type of '" + b.name + "'", b.pos);
    }
    locals_.push_back({b.name, ty});
    auto [body, body_ty] =
        binders(p, i + 1, exp_pi ? std::optional<Term>(exp_pi->body()) : std::nullopt);
    locals_.pop_back();
    if (lambda) return {Term::lambda(b.name, ty, body), Term::pi(b.name, ty, body_ty)};
    return {Term::pi(b.name, ty, body), body_ty};
  }

  Term check(const PreTermPtr& pt, const Term& expected) {
    if (pt->kind == PreTerm::Kind::Lambda) {
      auto [t, ty] = binders(*pt, 0, expected);
      if (!unify(ty, expected, depth()))
        fail("type mismatch: expected " + show(expected) + ", found " + show(ty), pt->pos);
      return t;
    }
    auto [t, ty] = infer(pt);
    if (!unify(ty, expected, depth()))
      fail("type mismatch: expected " + show(expected) + ", found " + show(ty), pt->pos);
    return t;
  }

  Term as_type(const PreTermPtr& pt) {
    auto [t, ty] = infer(pt);
    expect_sort(ty, pt->pos);
    return t;
  }

  const GlobalEnv& env_;
  std::vector<Local> locals_;
  std::vector<Hole> holes_;
};

Term kernel_type(const GlobalEnv& env, const LocalContext& ctx, const Term& t, Position pos) {
  try {
    return infer_type(env, ctx, t);
  } catch (const KernelError& e) {
    throw ElabError(std::string("kernel rejected the elaborated term: ") + e.what(), pos);
  }
}

} // namespace

Elaborated elaborate(const GlobalEnv& env, const LocalContext& ctx, const PreTermPtr& pt) {
  Elaborator el(env, ctx);
  Term t = el.finish(el.infer_top(pt, nullptr));
  return {t, kernel_type(env, ctx, t, pt->pos)};
}

Term elaborate_against(const GlobalEnv& env, const LocalContext& ctx, const PreTermPtr& pt,
                       const Term& expected) {
  Elaborator el(env, ctx);
  Term t = el.finish(el.check_top(pt, expected));
  Term ty = kernel_type(env, ctx, t, pt->pos);
  if (!subtype(env, ty, expected))
    throw ElabError("type mismatch: expected " + print_term(expected) + ", found " + print_term(ty),
                    pt->pos);
  return t;
}

Term elaborate_type(const GlobalEnv& env, const LocalContext& ctx, const PreTermPtr& pt) {
  Elaborator el(env, ctx);
  Term t = el.finish(el.type_top(pt));
  Term ty = whnf(env, kernel_type(env, ctx, t, pt->pos));
  if (!ty.is_sort()) throw ElabError("expected a type", pt->pos);
  return t;
}

Elaborated elaborate_definition(const GlobalEnv& env, const DefinitionCmd& def, Position pos) {
  Elaborator el(env, LocalContext{});
  Elaborated r = el.definition(def);
  Term body = el.finish(r.term);
  Term type = el.finish(r.type);
  Term inferred = kernel_type(env, LocalContext{}, body, pos);
  if (!subtype(env, inferred, type))
    throw ElabError("definition body does not have the declared type", pos);
  kernel_type(env, LocalContext{}, type, pos);
  return {body, type};
}

Elaborated elaborate_string(const GlobalEnv& env, std::string_view text) {
  return elaborate(env, LocalContext{}, parse_term(text));
}

} // namespace tk::surface
