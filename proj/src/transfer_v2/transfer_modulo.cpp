#include "transfer/transfer_v2/transfer_modulo.hpp"

#include "transfer/kernel/prelude.hpp"
#include "transfer/kernel/reduce.hpp"
#include "transfer/kernel/typecheck.hpp"
#include "transfer/surface/printer.hpp"

namespace tk::v2 {

RelPattern RelPattern::meta(std::size_t id) {
  RelPattern p;
  p.kind_ = Kind::Meta;
  p.id_ = id;
  return p;
}

RelPattern RelPattern::known(Term rel) {
  RelPattern p;
  p.kind_ = Kind::Known;
  p.rel_ = std::move(rel);
  return p;
}

RelPattern RelPattern::arrow(RelPattern dom, RelPattern cod) {
  RelPattern p;
  p.kind_ = Kind::Arrow;
  p.dom_ = std::make_shared<const RelPattern>(std::move(dom));
  p.cod_ = std::make_shared<const RelPattern>(std::move(cod));
  return p;
}

std::size_t MetaStore::fresh() {
  solutions_.emplace_back();
  return solutions_.size() - 1;
}

namespace {

std::optional<prelude::RespectfulView> respectful_view(const Term& rel) {
  if (auto v = prelude::view_respectful(rel)) return v;
  return prelude::view_respectful(whnf_beta(rel));
}

bool match_impl(const GlobalEnv& env, const Term& stored, const RelPattern& p, MetaStore& metas) {
  switch (p.kind()) {
    case RelPattern::Kind::Meta:
      if (const auto& s = metas.solution(p.meta_id())) return convertible(env, *s, stored);
      metas.solve(p.meta_id(), stored);
      return true;
    case RelPattern::Kind::Known: return convertible(env, p.rel(), stored);
    case RelPattern::Kind::Arrow: {
      auto v = respectful_view(stored);
      return v && match_impl(env, v->r, p.dom(), metas) && match_impl(env, v->rp, p.cod(), metas);
    }
  }
  return false;
}

} // namespace

bool match_relation(const GlobalEnv& env, const Term& stored, const RelPattern& pattern, MetaStore& metas) {
  MetaStore saved = metas;
  if (match_impl(env, stored, pattern, metas)) return true;
  metas = std::move(saved);
  return false;
}

std::string show_pattern(const GlobalEnv& env, const LocalContext& ctx, const RelPattern& p, const MetaStore& metas) {
  switch (p.kind()) {
    case RelPattern::Kind::Meta: {
      const auto& s = metas.solution(p.meta_id());
      return s ? surface::print_term(*s, &env, &ctx) : "?" + std::to_string(p.meta_id());
    }
    case RelPattern::Kind::Known: return surface::print_term(p.rel(), &env, &ctx);
    case RelPattern::Kind::Arrow: {
      std::string d = show_pattern(env, ctx, p.dom(), metas);
      bool wrap = p.dom().kind() == RelPattern::Kind::Arrow;
      if (p.dom().kind() == RelPattern::Kind::Known) wrap = prelude::view_respectful(p.dom().rel()).has_value();
      if (p.dom().kind() == RelPattern::Kind::Meta && metas.solution(p.dom().meta_id()))
        wrap = prelude::view_respectful(*metas.solution(p.dom().meta_id())).has_value();
      return (wrap ? "(" + d + ")" : d) + " ##> " + show_pattern(env, ctx, p.cod(), metas);
    }
  }
  return "?";
}

namespace {

void format_node(const TraceNode& n, std::size_t depth, std::string& out) {
  out += std::string(2 * depth, ' ') + n.rule + " " + n.lhs + " ⇝[" + n.relation + "] " + n.rhs;
  if (!n.source.empty()) out += " by " + n.source;
  out += "\n";
  for (const TraceNode& c : n.children) format_node(c, depth + 1, out);
}

void collect_rules(const TraceNode& n, std::vector<std::string>& out) {
  out.push_back(n.rule);
  for (const TraceNode& c : n.children) collect_rules(c, out);
}

} // namespace

std::string format_trace(const TraceNode& root) {
  std::string out;
  format_node(root, 0, out);
  return out;
}

std::vector<std::string> rule_sequence(const TraceNode& root) {
  std::vector<std::string> out;
  collect_rules(root, out);
  return out;
}

std::string describe(const Failure& f) {
  std::string s = f.message;
  if (!f.lhs.empty()) s += "\n  deepest failing judgment: " + f.lhs + " ⇝[" + f.expected + "] " + f.rhs;
  for (const std::string& a : f.attempts) s += "\n    " + a;
  return s;
}

namespace {

struct KernelRejection {
  std::string message;
};

bool is_prop(const GlobalEnv& env, const LocalContext& ctx, const Term& t) {
  try {
    Term ty = whnf(env, infer_type(env, ctx, t));
    return ty.is_sort() && ty.sort_tag() == Sort::Prop;
  } catch (const KernelError&) {
    return false;
  }
}

std::string fresh_name(const LocalContext& ctx, std::string base) {
  if (base.empty() || base == "_") base = "x";
  auto taken = [&](const std::string& n) {
    for (const ContextEntry& e : ctx.entries())
      if (e.name == n) return true;
    return false;
  };
  if (!taken(base)) return base;
  for (int k = 0;; ++k)
    if (!taken(base + std::to_string(k))) return base + std::to_string(k);
}

class Engine {
public:
  Engine(const GlobalEnv& env, const tables::DeclTables& tables, MetaStore& metas, const Options& opts)
      : env_(env), tables_(tables), metas_(metas), opts_(opts) {}

  std::optional<Judgment> synth(const LocalContext& ctx, const Term& lhs, const Term& rhs, const RelPattern& pat,
                                std::size_t depth, const TraceNode* guide, TraceNode& node) {
    node.lhs = show(ctx, lhs);
    node.rhs = show(ctx, rhs);
    std::vector<std::string> attempts;
    auto allowed = [&](const char* rule) { return !guide || guide->rule == rule; };
    auto child_guide = [&](std::size_t i) -> const TraceNode* {
      return guide && i < guide->children.size() ? &guide->children[i] : nullptr;
    };

    Term l = whnf_beta(lhs), r = whnf_beta(rhs);

    // Forall / Arrow: view products as all / impl applications
    if (l.is_pi() && r.is_pi()) {
      auto view = pi_view(ctx, l, r);
      if (view && allowed(view->rule)) {
        node.rule = view->rule;
        node.relation = show_pattern(env_, ctx, pat, metas_);
        node.children.emplace_back();
        auto j = synth(ctx, view->lhs, view->rhs, pat, depth + 1, child_guide(0), node.children.back());
        if (!j) return std::nullopt;
        node.relation = show(ctx, j->relation);
        return finish(Judgment{ctx, lhs, rhs, j->relation, j->proof});
      }
      if (!view) attempts.push_back("Forall/Arrow: the products do not live in Prop");
    }

    if (allowed("Env")) {
      if (auto j = env_rule(ctx, lhs, rhs, pat, node)) return finish(*j);
      attempts.push_back("Env: no hypothesis relates the two sides at " + show_pattern(env_, ctx, pat, metas_));
    }

    if (allowed("Table")) {
      if (auto j = table_rule(ctx, lhs, rhs, pat, node, attempts)) return finish(*j);
    }

    if (allowed("App")) {
      if (l.is_app() && r.is_app()) return app_rule(ctx, l, r, lhs, rhs, pat, depth, guide, node);
      attempts.push_back("App: the two sides are not both applications");
    }

    if (allowed("Lambda")) {
      if (l.is_lambda() && r.is_lambda()) {
        auto rel = known_relation(pat);
        auto v = rel ? respectful_view(*rel) : std::nullopt;
        if (v) return lambda_rule(ctx, l, r, lhs, rhs, *rel, *v, depth, child_guide(0), node);
        attempts.push_back("Lambda: expected relation " + show_pattern(env_, ctx, pat, metas_) +
                           " is not a known R ##> S");
      } else {
        attempts.push_back("Lambda: the two sides are not both abstractions");
      }
    }

    if (guide) attempts.push_back("replay: recorded rule " + guide->rule + " does not apply");
    node.rule = "Fail";
    node.relation = show_pattern(env_, ctx, pat, metas_);
    record_failure(depth, node, attempts);
    return std::nullopt;
  }

  std::optional<Failure> failure;

private:
  struct PiView {
    const char* rule;
    Term lhs, rhs;
  };

  std::optional<PiView> pi_view(const LocalContext& ctx, const Term& l, const Term& r) const {
    if (!is_prop(env_, ctx, l) || !is_prop(env_, ctx, r)) return std::nullopt;
    Term impl = Term::constant(prelude::kImpl);
    Term all = Term::constant(prelude::kAll);
    bool arrow = !has_var(l.body(), 0) && !has_var(r.body(), 0) && is_prop(env_, ctx, l.binder_type()) &&
                 is_prop(env_, ctx, r.binder_type());
    if (arrow) {
      return PiView{"Arrow", mk_app(impl, {l.binder_type(), lower(l.body(), 1)}),
                    mk_app(impl, {r.binder_type(), lower(r.body(), 1)})};
    }
    return PiView{"Forall", mk_app(all, {l.binder_type(), Term::lambda(l.name(), l.binder_type(), l.body())}),
                  mk_app(all, {r.binder_type(), Term::lambda(r.name(), r.binder_type(), r.body())})};
  }

  std::optional<Judgment> env_rule(const LocalContext& ctx, const Term& lhs, const Term& rhs, const RelPattern& pat,
                                   TraceNode& node) {
    for (std::uint32_t i = 0; i < ctx.size(); ++i) {
      const ContextEntry& e = ctx.at(i);
      if (e.role != EntryRole::Hypothesis) continue;
      Term type = whnf_beta(ctx.type_of(i));
      Spine sp = unfold_app(type);
      if (sp.args.size() < 2) continue;
      const Term& a = sp.args[sp.args.size() - 2];
      const Term& b = sp.args.back();
      if (!convertible(env_, a, lhs) || !convertible(env_, b, rhs)) continue;
      Term rel = mk_app(sp.head, std::span<const Term>(sp.args.data(), sp.args.size() - 2));
      if (!match_relation(env_, rel, pat, metas_)) continue;
      node.rule = "Env";
      node.relation = show(ctx, rel);
      node.source = e.name;
      return Judgment{ctx, lhs, rhs, rel, Term::var(i)};
    }
    return std::nullopt;
  }

  std::optional<Judgment> table_rule(const LocalContext& ctx, const Term& lhs, const Term& rhs, const RelPattern& pat,
                                     TraceNode& node, std::vector<std::string>& attempts) {
    std::string want = show_pattern(env_, ctx, pat, metas_);
    const tables::RelationEntryV2* direct = tables_.lookup_relation_v2_direct(env_, lhs, rhs);
    if (direct) {
      if (match_relation(env_, direct->relation, pat, metas_)) {
        node.rule = "Table";
        node.relation = show(ctx, direct->relation);
        node.source = direct->name;
        return Judgment{ctx, lhs, rhs, direct->relation, direct->proof};
      }
      attempts.push_back("Table: entry " + direct->name + " has relation " + show(ctx, direct->relation) +
                         ", expected " + want);
    } else {
      attempts.push_back("Table: no entry for (" + show(ctx, lhs) + ", " + show(ctx, rhs) + ")");
    }
    if (auto inv = tables_.lookup_relation_v2_inverse(env_, lhs, rhs)) {
      if (match_relation(env_, inv->relation, pat, metas_)) {
        node.rule = "Table";
        node.relation = show(ctx, inv->relation);
        node.source = inv->name + " (inverse)";
        return Judgment{ctx, lhs, rhs, inv->relation, inv->proof};
      }
      attempts.push_back("Table: inverse of " + inv->name + " has relation " + show(ctx, inv->relation) +
                         ", expected " + want);
    }
    return std::nullopt;
  }

  std::optional<Judgment> app_rule(const LocalContext& ctx, const Term& l, const Term& r, const Term& lhs,
                                   const Term& rhs, const RelPattern& pat, std::size_t depth, const TraceNode* guide,
                                   TraceNode& node) {
    node.rule = "App";
    node.relation = show_pattern(env_, ctx, pat, metas_);
    const Term& f = l.fn();
    const Term& e = l.arg();
    const Term& f2 = r.fn();
    const Term& e2 = r.arg();
    auto child_guide = [&](std::size_t i) -> const TraceNode* {
      return guide && i < guide->children.size() ? &guide->children[i] : nullptr;
    };

    std::optional<Judgment> je, jf;
    if (guide) {
      node.arg_first = guide->arg_first;
    } else {
      // an argument already related by a hypothesis fixes the domain
      TraceNode probe;
      RelPattern m = RelPattern::meta(metas_.fresh());
      probe.lhs = show(ctx, e);
      probe.rhs = show(ctx, e2);
      je = env_rule(ctx, e, e2, m, probe);
      if (je) {
        node.arg_first = true;
        node.children.push_back(std::move(probe));
      }
    }
    if (node.arg_first) {
      if (!je) {
        node.children.emplace_back();
        je = synth(ctx, e, e2, RelPattern::meta(metas_.fresh()), depth + 1, child_guide(0), node.children.back());
        if (!je) return std::nullopt;
      }
      node.children.emplace_back();
      jf = synth(ctx, f, f2, RelPattern::arrow(RelPattern::known(je->relation), pat), depth + 1, child_guide(1),
                 node.children.back());
      if (!jf) return std::nullopt;
    } else {
      node.children.emplace_back();
      jf = synth(ctx, f, f2, RelPattern::arrow(RelPattern::meta(metas_.fresh()), pat), depth + 1, child_guide(0),
                 node.children.back());
      if (!jf) return std::nullopt;
      auto v = respectful_view(jf->relation);
      if (!v) {
        node.rule = "Fail";
        record_failure(depth, node, {"App: function relation " + show(ctx, jf->relation) + " is not R ##> S"});
        return std::nullopt;
      }
      node.children.emplace_back();
      je = synth(ctx, e, e2, RelPattern::known(v->r), depth + 1, child_guide(1), node.children.back());
      if (!je) return std::nullopt;
    }
    auto v = respectful_view(jf->relation);
    node.relation = show(ctx, v->rp);
    return finish(Judgment{ctx, lhs, rhs, v->rp, mk_app(jf->proof, {e, e2, je->proof})});
  }

  std::optional<Judgment> lambda_rule(const LocalContext& ctx, const Term& l, const Term& r, const Term& lhs,
                                      const Term& rhs, const Term& rel, const prelude::RespectfulView& v,
                                      std::size_t depth, const TraceNode* guide, TraceNode& node) {
    node.rule = "Lambda";
    node.relation = show(ctx, rel);
    std::string x = fresh_name(ctx, l.name());
    LocalContext c1 = ctx.pushed(x, l.binder_type());
    std::string base2 = r.name() == l.name() ? r.name() + "'" : r.name();
    std::string x2 = fresh_name(c1, base2);
    Term t2 = lift(r.binder_type(), 1);
    LocalContext c2 = c1.pushed(x2, t2);
    std::string h = fresh_name(c2, "H");
    Term ht = mk_app(lift(v.r, 2), {Term::var(1), Term::var(0)});
    LocalContext c3 = c2.pushed(h, ht, EntryRole::Hypothesis);
    Term body = lift(l.body(), 2);
    Term body2 = lift(lift(r.body(), 1, 1), 1, 0);
    node.children.emplace_back();
    auto j = synth(c3, body, body2, RelPattern::known(lift(v.rp, 3)), depth + 1, guide, node.children.back());
    if (!j) return std::nullopt;
    Term proof = Term::lambda(x, l.binder_type(), Term::lambda(x2, t2, Term::lambda(h, ht, j->proof)));
    return finish(Judgment{ctx, lhs, rhs, rel, proof});
  }

  std::optional<Term> known_relation(const RelPattern& p) const {
    if (p.kind() == RelPattern::Kind::Known) return p.rel();
    if (p.kind() == RelPattern::Kind::Meta) return metas_.solution(p.meta_id());
    return std::nullopt;
  }

  Judgment finish(Judgment j) {
    if (opts_.check_every_node) {
      CheckResult r = check_proof(env_, j.ctx, j.proof, mk_app(j.relation, {j.lhs, j.rhs}));
      if (!r)
        throw KernelRejection{"judgment " + show(j.ctx, j.lhs) + " ⇝[" + show(j.ctx, j.relation) + "] " +
                              show(j.ctx, j.rhs) + ": " + r.diagnostic};
    }
    return j;
  }

  void record_failure(std::size_t depth, const TraceNode& node, std::vector<std::string> attempts) {
    if (failure && failure->depth >= depth) return;
    failure = Failure{"no rule applies", depth, node.lhs, node.rhs, node.relation, std::move(attempts), false};
  }

  std::string show(const LocalContext& ctx, const Term& t) const { return surface::print_term(t, &env_, &ctx); }

  const GlobalEnv& env_;
  const tables::DeclTables& tables_;
  MetaStore& metas_;
  const Options& opts_;
};

Outcome run(const GlobalEnv& env, const tables::DeclTables& tables, const LocalContext& ctx, const Term& lhs,
            const Term& rhs, const RelPattern& expected, MetaStore& metas, const Options& opts) {
  Engine engine(env, tables, metas, opts);
  Outcome out;
  TraceNode root;
  try {
    auto j = engine.synth(ctx, lhs, rhs, expected, 0, opts.guide, root);
    out.trace = std::move(root);
    if (!j) {
      out.failure = engine.failure ? *engine.failure : Failure{"no rule applies", 0, "", "", "", {}, false};
      return out;
    }
    CheckResult r = check_proof(env, ctx, j->proof, mk_app(j->relation, {j->lhs, j->rhs}));
    if (!r) {
      out.failure = Failure{"kernel rejected the emitted judgment: " + r.diagnostic, 0, "", "", "", {}, true};
      return out;
    }
    out.proof = j->proof;
    out.root = std::move(j);
  } catch (const KernelRejection& e) {
    out.trace = std::move(root);
    out.failure = Failure{"kernel rejected an intermediate judgment: " + e.message, 0, "", "", "", {}, true};
  } catch (const std::exception& e) {
    out.trace = std::move(root);
    out.failure = Failure{std::string("ill-formed transfer problem: ") + e.what(), 0, "", "", "", {}, false};
  }
  return out;
}

} // namespace

Outcome synth(const GlobalEnv& env, const tables::DeclTables& tables, const LocalContext& ctx, const Term& lhs,
              const Term& rhs, const RelPattern& expected, MetaStore& metas, const Options& opts) {
  return run(env, tables, ctx, lhs, rhs, expected, metas, opts);
}

Outcome transfer_modulo(const GlobalEnv& env, const tables::DeclTables& tables, const Term& thm_statement,
                        const Term& goal, const Term& thm_proof, const Options& opts) {
  MetaStore metas;
  Outcome out = run(env, tables, LocalContext{}, thm_statement, goal,
                    RelPattern::known(Term::constant(prelude::kImpl)), metas, opts);
  if (!out.proof) return out;
  Term proof = Term::app(*out.proof, thm_proof);
  CheckResult r = check_proof(env, LocalContext{}, proof, goal);
  if (!r) {
    out.proof.reset();
    out.failure = Failure{"kernel rejected the emitted proof: " + r.diagnostic, 0, "", "", "", {}, true};
    return out;
  }
  out.proof = proof;
  return out;
}

} // namespace tk::v2
