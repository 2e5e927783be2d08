#include "transfer/transfer_v1/exact_modulo.hpp"

#include "transfer/kernel/prelude.hpp"
#include "transfer/kernel/reduce.hpp"
#include "transfer/kernel/typecheck.hpp"
#include "transfer/surface/elaborate.hpp"
#include "transfer/surface/printer.hpp"

namespace tk::v1 {

Term subst_polarized(const Term& f, std::uint32_t target, const Term& replacement, Polarity start) {
  if (f.is_pi()) {
    return Term::pi(f.name(), subst_polarized(f.binder_type(), target, replacement, flip(start)),
                    subst_polarized(f.body(), target + 1, lift(replacement, 1), start));
  }
  return start == Polarity::Covariant ? substitute(f, target, replacement) : f;
}

Term build_rewrite(const LocalContext& ctx, const Term& b_prime, std::uint32_t target, const Term& from,
                   const Term& eq_proof, const Term& inner) {
  Term a2 = ctx.type_of(target);
  Term motive = Term::lambda("y", a2, subst_polarized(lift(b_prime, 1), target + 1, Term::var(0)));
  return prelude::mk_eq_ind(a2, from, motive, inner, Term::var(target), eq_proof);
}

std::optional<AtomView> view_atom(const GlobalEnv& env, const LocalContext& ctx, const Term& f) {
  Term t = whnf_beta(f);
  Spine sp = unfold_app(t);
  if (!sp.head.is_const() || sp.args.empty()) return std::nullopt;
  try {
    Term ty = whnf(env, infer_type(env, ctx, t));
    if (!ty.is_sort() || ty.sort_tag() != Sort::Prop) return std::nullopt;
  } catch (const KernelError&) {
    return std::nullopt;
  }
  return AtomView{sp.head, std::move(sp.args)};
}

std::string_view failure_kind_name(FailureKind k) {
  switch (k) {
    case FailureKind::NoTableEntry: return "no-table-entry";
    case FailureKind::ArgumentMismatch: return "argument-mismatch";
    case FailureKind::ShapeMismatch: return "shape-mismatch";
    case FailureKind::InternalError: return "internal-error";
  }
  return "?";
}

std::string describe(const Failure& f) {
  std::string s = std::string(failure_kind_name(f.kind)) + ": " + f.message;
  if (!f.lhs.empty() || !f.rhs.empty()) s += " [at " + f.lhs + " ⇝ " + f.rhs + "]";
  return s;
}

std::string format_trace(const std::vector<TraceStep>& trace) {
  std::string out;
  for (const TraceStep& s : trace) {
    out += std::string(2 * s.depth, ' ') + s.rule;
    if (!s.detail.empty()) out += " " + s.detail;
    out += "\n";
  }
  return out;
}

namespace {

bool is_prop(const GlobalEnv& env, const LocalContext& ctx, const Term& t) {
  try {
    Term ty = whnf(env, infer_type(env, ctx, t));
    return ty.is_sort() && ty.sort_tag() == Sort::Prop;
  } catch (const KernelError&) {
    return false;
  }
}

// Unfolds definitions along the product spine so that polarity sees
// through them; atoms are kept as written.
Term expose_products(const GlobalEnv& env, const Term& t) {
  Term w = whnf(env, t);
  if (!w.is_pi()) return t;
  return Term::pi(w.name(), expose_products(env, w.binder_type()), expose_products(env, w.body()));
}

std::string fresh_name(const LocalContext& ctx, const std::string& base) {
  auto taken = [&](const std::string& n) {
    for (const ContextEntry& e : ctx.entries())
      if (e.name == n) return true;
    return false;
  };
  if (!taken(base)) return base;
  for (int k = 0;; ++k)
    if (!taken(base + std::to_string(k))) return base + std::to_string(k);
}

struct Step {
  std::optional<Term> proof;
  std::optional<Failure> failure;
};

class Engine {
public:
  Engine(const GlobalEnv& env, const tables::DeclTables& tables) : env_(env), tables_(tables) {}

  Step run(const LocalContext& ctx, const Term& f, const Term& f2, const Term& rho, std::size_t depth) {
    if (convertible(env_, f, f2)) {
      note(depth, "Identity", show(ctx, f2));
      return ok(rho);
    }
    Term w = whnf(env_, f), w2 = whnf(env_, f2);
    if (w.is_pi() && w2.is_pi()) return pi_case(ctx, w, w2, rho, depth);
    auto a = view_atom(env_, ctx, f);
    auto a2 = view_atom(env_, ctx, f2);
    if ((!a || !a2) && (w.is_app() || w2.is_app())) {
      // a defined relation may only expose its atom after unfolding
      if (!a) a = view_atom(env_, ctx, w);
      if (!a2) a2 = view_atom(env_, ctx, w2);
    }
    if (a && a2) return atom_case(ctx, *a, *a2, rho, depth);
    return fail(FailureKind::ShapeMismatch, "formulas are neither both atoms nor both products", ctx, f, f2);
  }

  std::vector<TraceStep> trace;

private:
  Step atom_case(const LocalContext& ctx, const AtomView& a, const AtomView& a2, const Term& rho,
                 std::size_t depth) {
    Term lhs = mk_app(a.head, a.args), rhs = mk_app(a2.head, a2.args);
    if (a.args.size() != a2.args.size())
      return fail(FailureKind::ShapeMismatch,
                  "atoms have different arities (" + std::to_string(a.args.size()) + " and " +
                      std::to_string(a2.args.size()) + ")",
                  ctx, lhs, rhs);
    const std::size_t m = a.args.size();
    // the longest relation prefix first: R = head a1..ak, n = m - k
    for (std::size_t k = 0; k < m; ++k) {
      Term r = mk_app(a.head, std::span<const Term>(a.args.data(), k));
      Term r2 = mk_app(a2.head, std::span<const Term>(a2.args.data(), k));
      const tables::TransferEntryV1* e = tables_.lookup_transfer_v1(env_, r, r2);
      if (!e || e->arity != m - k) continue;
      for (std::size_t i = k; i < m; ++i) {
        if (!convertible(env_, a2.args[i], Term::app(e->transfer_fn, a.args[i])))
          return fail(FailureKind::ArgumentMismatch,
                      "argument " + std::to_string(i - k + 1) + " is " + show(ctx, a2.args[i]) + ", expected " +
                          show(ctx, Term::app(e->transfer_fn, a.args[i])) + " (lemma " + e->name + ")",
                      ctx, lhs, rhs);
      }
      std::vector<Term> args(a.args.begin() + static_cast<std::ptrdiff_t>(k), a.args.end());
      args.push_back(rho);
      note(depth, "Atom", show(ctx, lhs) + " ⇝ " + show(ctx, rhs) + " by " + e->name);
      return ok(mk_app(e->lemma_proof, args));
    }
    std::size_t k = std::min<std::size_t>(surface::implicit_arguments(a.head.name()), m - 1);
    Term r = mk_app(a.head, std::span<const Term>(a.args.data(), k));
    Term r2 = mk_app(a2.head, std::span<const Term>(a2.args.data(), k));
    return fail(FailureKind::NoTableEntry,
                "no transfer lemma for (" + show(ctx, r) + ", " + show(ctx, r2) + ")", ctx, lhs, rhs);
  }

  Step pi_case(const LocalContext& ctx, const Term& f, const Term& f2, const Term& rho, std::size_t depth) {
    const Term& a = f.binder_type();
    const Term& a2 = f2.binder_type();
    const bool hypothesis = is_prop(env_, ctx, a2);
    std::string name = f2.name();
    if (name.empty() || name == "_") name = fresh_name(ctx, hypothesis ? "H" : "x");
    LocalContext inner = ctx.pushed(name, a2, hypothesis ? EntryRole::Hypothesis : EntryRole::Variable);
    const Term& b = f.body();
    const Term b2 = expose_products(env_, f2.body());

    // hypothesis direction: a proof of A from x' : A'
    std::size_t mark = trace.size();
    note(depth, "Hypothesis", name + " : " + show(ctx, a2));
    Step t = run(inner, lift(a2, 1), lift(a, 1), Term::var(0), depth + 1);
    if (t.proof) {
      Term b_inst = instantiate(lift(b, 1, 1), *t.proof);
      Step rec = run(inner, b_inst, b2, Term::app(lift(rho, 1), *t.proof), depth + 1);
      if (!rec.proof) return rec;
      return ok(Term::lambda(name, a2, *rec.proof));
    }
    trace.resize(mark);

    const tables::SurjectionEntry* s = tables_.lookup_surjection(env_, a, a2);
    if (!s) {
      if (hypothesis) return t;
      return fail(FailureKind::NoTableEntry,
                  "no surjection from " + show(ctx, a) + " to " + show(ctx, a2) + " declared", ctx, f, f2);
    }
    note(depth, "Surjection",
         name + " : " + show(ctx, a2) + " via " + show(ctx, s->f) + " (right inverse " + show(ctx, s->g) + ")");
    Term gx = Term::app(s->g, Term::var(0));
    Term fgx = Term::app(s->f, gx);
    Term b_subst = instantiate(lift(b, 1, 1), gx);
    Term b2_subst = subst_polarized(b2, 0, fgx);
    Step rec = run(inner, b_subst, b2_subst, Term::app(lift(rho, 1), gx), depth + 1);
    if (!rec.proof) return rec;
    Term body = *rec.proof;
    if (has_var(b2, 0)) {
      note(depth + 1, "Rewrite", name + " by " + s->name);
      body = build_rewrite(inner, b2, 0, fgx, Term::app(s->surj_proof, Term::var(0)), body);
    }
    return ok(Term::lambda(name, a2, body));
  }

  std::string show(const LocalContext& ctx, const Term& t) const { return surface::print_term(t, &env_, &ctx); }

  void note(std::size_t depth, std::string rule, std::string detail) {
    trace.push_back({depth, std::move(rule), std::move(detail)});
  }

  static Step ok(Term t) { return Step{std::move(t), std::nullopt}; }

  Step fail(FailureKind kind, std::string msg, const LocalContext& ctx, const Term& f, const Term& f2) const {
    return Step{std::nullopt, Failure{kind, std::move(msg), show(ctx, f), show(ctx, f2)}};
  }

  const GlobalEnv& env_;
  const tables::DeclTables& tables_;
};

} // namespace

Outcome exact_modulo(const GlobalEnv& env, const tables::DeclTables& tables, const LocalContext& ctx,
                     const Term& f, const Term& f_prime, const Term& rho) {
  Engine engine(env, tables);
  Outcome out;
  try {
    Step s = engine.run(ctx, f, f_prime, rho, 0);
    out.trace = std::move(engine.trace);
    if (!s.proof) {
      out.failure = std::move(s.failure);
      return out;
    }
    CheckResult r = check_proof(env, ctx, *s.proof, f_prime);
    if (!r) {
      out.failure = Failure{FailureKind::InternalError, "kernel rejected the emitted proof: " + r.diagnostic, "", ""};
      return out;
    }
    out.proof = std::move(s.proof);
  } catch (const std::exception& e) {
    out.trace = std::move(engine.trace);
    out.failure = Failure{FailureKind::InternalError, e.what(), "", ""};
  }
  return out;
}

} // namespace tk::v1
