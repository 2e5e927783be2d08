#include "transfer/kernel/reduce.hpp"

namespace tk {

namespace {

// Performs one head step if possible. Returns a null term when t is in
// head normal form for the chosen reduction.
Term head_step(const GlobalEnv* env, const Term& t) {
  Spine s = unfold_app(t);
  if (s.head.is_lambda() && !s.args.empty()) {
    Term reduced = instantiate(s.head.body(), s.args.front());
    return mk_app(std::move(reduced), std::span<const Term>(s.args).subspan(1));
  }
  if (env && s.head.is_const()) {
    if (const Term* body = env->definition_body(s.head.name())) return mk_app(*body, s.args);
  }
  return Term{};
}

Term whnf_impl(const GlobalEnv* env, Term t) {
  for (;;) {
    Term next = head_step(env, t);
    if (!next) return t;
    t = std::move(next);
  }
}

template <typename Unfold>
Term normalize_impl(const Term& t0, const Unfold& unfold) {
  Term t = t0;
  for (;;) {
    Spine s = unfold_app(t);
    if (s.head.is_lambda() && !s.args.empty()) {
      t = mk_app(instantiate(s.head.body(), s.args.front()), std::span<const Term>(s.args).subspan(1));
      continue;
    }
    if (s.head.is_const()) {
      if (const Term* body = unfold(s.head.name())) {
        t = mk_app(*body, s.args);
        continue;
      }
    }
    Term head = s.head;
    if (head.is_binder()) {
      Term ty = normalize_impl(head.binder_type(), unfold);
      Term body = normalize_impl(head.body(), unfold);
      head = head.is_lambda() ? Term::lambda(head.name(), ty, body) : Term::pi(head.name(), ty, body);
    }
    for (Term& a : s.args) a = normalize_impl(a, unfold);
    return mk_app(std::move(head), s.args);
  }
}

bool conv(const GlobalEnv& env, const Term& a0, const Term& b0);

bool spine_args_conv(const GlobalEnv& env, const Spine& x, const Spine& y) {
  if (x.args.size() != y.args.size()) return false;
  for (std::size_t i = 0; i < x.args.size(); ++i)
    if (!conv(env, x.args[i], y.args[i])) return false;
  return true;
}

bool conv_whnf(const GlobalEnv& env, const Term& a, const Term& b) {
  if (a == b) return true;
  if (a.kind() != b.kind() && !(a.is_app() || b.is_app())) return false;
  switch (a.kind()) {
    case TermKind::Sort:
      return b.is_sort() && a.sort_tag() == b.sort_tag();
    case TermKind::Lambda:
    case TermKind::Pi:
      return a.kind() == b.kind() && conv(env, a.binder_type(), b.binder_type()) &&
             conv(env, a.body(), b.body());
    default: break;
  }
  Spine x = unfold_app(a);
  Spine y = unfold_app(b);
  if (x.head.kind() != y.head.kind()) return false;
  if (x.head.is_var() && x.head.index() != y.head.index()) return false;
  if (x.head.is_const() && x.head.name() != y.head.name()) return false;
  if (!x.head.is_var() && !x.head.is_const()) return false;
  return spine_args_conv(env, x, y);
}

bool conv(const GlobalEnv& env, const Term& a0, const Term& b0) {
  if (a0 == b0) return true;
  Term a = whnf_impl(nullptr, a0);
  Term b = whnf_impl(nullptr, b0);
  if (a == b) return true;
  // Lazy delta: identical constant heads are compared argument-wise first.
  Spine x = unfold_app(a);
  Spine y = unfold_app(b);
  if (x.head.is_const() && y.head.is_const() && x.head.name() == y.head.name() &&
      spine_args_conv(env, x, y))
    return true;
  return conv_whnf(env, whnf_impl(&env, a), whnf_impl(&env, b));
}

} // namespace

Term whnf(const GlobalEnv& env, const Term& t) { return whnf_impl(&env, t); }

Term whnf_beta(const Term& t) { return whnf_impl(nullptr, t); }

Term normalize(const GlobalEnv& env, const Term& t) {
  return normalize_impl(t, [&env](const std::string& name) { return env.definition_body(name); });
}

Term unfold_only(const GlobalEnv& env, const Term& t, const std::unordered_set<std::string>& names) {
  return normalize_impl(t, [&](const std::string& name) -> const Term* {
    return names.contains(name) ? env.definition_body(name) : nullptr;
  });
}

bool convertible(const GlobalEnv& env, const Term& a, const Term& b) { return conv(env, a, b); }

} // namespace tk
