// Test oracle: a named-variable lambda calculus with small-step
// leftmost-outermost reduction and capture-avoiding substitution by
// renaming. It shares no code with the kernel's de Bruijn machinery; terms
// cross over only through to_named / from_named.

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "transfer/kernel/env.hpp"
#include "transfer/kernel/term.hpp"

namespace oracle {

struct Named;
using NamedPtr = std::shared_ptr<const Named>;

struct Named {
  enum Kind { Sort, Var, Const, Lam, App, Pi } kind;
  tk::Sort sort = tk::Sort::Prop;
  std::string name;  // variable, constant or binder name
  NamedPtr a, b;     // (fn, arg) or (binder type, body)
};

inline NamedPtr mk(Named n) { return std::make_shared<const Named>(std::move(n)); }

inline void free_vars(const NamedPtr& t, std::set<std::string>& out, std::set<std::string>& bound) {
  switch (t->kind) {
    case Named::Var:
      if (!bound.contains(t->name)) out.insert(t->name);
      break;
    case Named::App: free_vars(t->a, out, bound); free_vars(t->b, out, bound); break;
    case Named::Lam:
    case Named::Pi: {
      free_vars(t->a, out, bound);
      bool had = bound.contains(t->name);
      bound.insert(t->name);
      free_vars(t->b, out, bound);
      if (!had) bound.erase(t->name);
      break;
    }
    default: break;
  }
}

inline std::set<std::string> free_vars(const NamedPtr& t) {
  std::set<std::string> out, bound;
  free_vars(t, out, bound);
  return out;
}

class Evaluator {
public:
  explicit Evaluator(const tk::GlobalEnv* env) : env_(env) {}

  // t[x := s], renaming binders that would capture free variables of s.
  NamedPtr subst(const NamedPtr& t, const std::string& x, const NamedPtr& s) {
    switch (t->kind) {
      case Named::Var: return t->name == x ? s : t;
      case Named::App: return mk({Named::App, {}, {}, subst(t->a, x, s), subst(t->b, x, s)});
      case Named::Lam:
      case Named::Pi: {
        NamedPtr ty = subst(t->a, x, s);
        if (t->name == x) return mk({t->kind, {}, t->name, ty, t->b});
        std::string y = t->name;
        NamedPtr body = t->b;
        if (free_vars(s).contains(y)) {
          std::string fresh = y;
          auto avoid = free_vars(s);
          auto fb = free_vars(body);
          while (avoid.contains(fresh) || fb.contains(fresh) || fresh == x) fresh += "_";
          body = subst(body, y, mk({Named::Var, {}, fresh}));
          y = fresh;
        }
        return mk({t->kind, {}, y, ty, subst(body, x, s)});
      }
      default: return t;
    }
  }

  // One leftmost-outermost beta or delta step, if any.
  std::optional<NamedPtr> step(const NamedPtr& t) {
    switch (t->kind) {
      case Named::Const:
        if (env_) {
          if (const tk::Term* body = env_->definition_body(t->name)) return to_named(*body, {});
        }
        return std::nullopt;
      case Named::App: {
        if (t->a->kind == Named::Lam) return subst(t->a->b, t->a->name, t->b);
        if (auto f = step(t->a)) return mk({Named::App, {}, {}, *f, t->b});
        if (auto x = step(t->b)) return mk({Named::App, {}, {}, t->a, *x});
        return std::nullopt;
      }
      case Named::Lam:
      case Named::Pi: {
        if (auto ty = step(t->a)) return mk({t->kind, {}, t->name, *ty, t->b});
        if (auto body = step(t->b)) return mk({t->kind, {}, t->name, t->a, *body});
        return std::nullopt;
      }
      default: return std::nullopt;
    }
  }

  NamedPtr normal_form(NamedPtr t, int fuel = 100000) {
    while (fuel-- > 0) {
      auto next = step(t);
      if (!next) return t;
      t = *next;
    }
    throw std::runtime_error("oracle: out of fuel");
  }

  // names[i] is the name of de Bruijn variable i (innermost first).
  NamedPtr to_named(const tk::Term& t, std::vector<std::string> names) {
    using tk::TermKind;
    switch (t.kind()) {
      case TermKind::Sort: return mk({Named::Sort, t.sort_tag()});
      case TermKind::Var:
        if (t.index() >= names.size()) throw std::runtime_error("oracle: loose variable");
        return mk({Named::Var, {}, names[t.index()]});
      case TermKind::Const: return mk({Named::Const, {}, t.name()});
      case TermKind::App:
        return mk({Named::App, {}, {}, to_named(t.fn(), names), to_named(t.arg(), names)});
      case TermKind::Lambda:
      case TermKind::Pi: {
        NamedPtr ty = to_named(t.binder_type(), names);
        std::string v = "v" + std::to_string(counter_++);
        names.insert(names.begin(), v);
        return mk({t.is_lambda() ? Named::Lam : Named::Pi, {}, v, ty, to_named(t.body(), names)});
      }
    }
    throw std::logic_error("unreachable");
  }

  tk::Term from_named(const NamedPtr& t, std::vector<std::string> scope) {
    switch (t->kind) {
      case Named::Sort: return tk::Term::sort(t->sort);
      case Named::Var:
        for (std::size_t i = 0; i < scope.size(); ++i)
          if (scope[i] == t->name) return tk::Term::var(static_cast<std::uint32_t>(i));
        throw std::runtime_error("oracle: free variable " + t->name);
      case Named::Const: return tk::Term::constant(t->name);
      case Named::App: return tk::Term::app(from_named(t->a, scope), from_named(t->b, scope));
      case Named::Lam:
      case Named::Pi: {
        tk::Term ty = from_named(t->a, scope);
        scope.insert(scope.begin(), t->name);
        tk::Term body = from_named(t->b, scope);
        return t->kind == Named::Lam ? tk::Term::lambda(t->name, ty, body) : tk::Term::pi(t->name, ty, body);
      }
    }
    throw std::logic_error("unreachable");
  }

  // Normal form of a kernel term whose free variables are named by ctx_names
  // (innermost first), converted back to de Bruijn form.
  tk::Term normalize(const tk::Term& t, const std::vector<std::string>& ctx_names = {}) {
    return from_named(normal_form(to_named(t, ctx_names)), ctx_names);
  }

private:
  const tk::GlobalEnv* env_;
  int counter_ = 0;
};

} // namespace oracle
