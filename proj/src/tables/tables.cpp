#include "transfer/tables/tables.hpp"

#include "transfer/kernel/builder.hpp"
#include "transfer/kernel/prelude.hpp"
#include "transfer/kernel/reduce.hpp"
#include "transfer/kernel/typecheck.hpp"

namespace tk::tables {

using prelude::prop;

std::string pair_key(const GlobalEnv& env, const Term& a, const Term& b) {
  return canonical_key(normalize(env, a)) + " | " + canonical_key(normalize(env, b));
}

namespace {

const Declaration& resolve(const GlobalEnv& env, const std::string& name, const char* role) {
  const Declaration* d = env.find(name);
  if (!d) throw TableError(std::string(role) + " '" + name + "' is not declared");
  return *d;
}

// A -> B with B not depending on the argument.
std::optional<std::pair<Term, Term>> view_function_type(const GlobalEnv& env, const Term& type) {
  Term t = whnf(env, type);
  if (!t.is_pi() || has_var(t.body(), 0)) return std::nullopt;
  return std::make_pair(t.binder_type(), lower(t.body(), 1));
}

// X -> Y -> Prop
std::optional<std::pair<Term, Term>> view_relation_type(const GlobalEnv& env, const Term& type) {
  auto first = view_function_type(env, type);
  if (!first) return std::nullopt;
  auto second = view_function_type(env, first->second);
  if (!second) return std::nullopt;
  Term s = whnf(env, second->second);
  if (!s.is_sort() || s.sort_tag() != Sort::Prop) return std::nullopt;
  return std::make_pair(first->first, second->first);
}

template <typename Map>
void ensure_absent(const Map& m, const std::string& key, const char* table, const std::string& what) {
  auto it = m.find(key);
  if (it != m.end())
    throw TableError("duplicate " + std::string(table) + " entry for " + what + " (already declared by '" +
                     it->second.name + "')");
}

std::string show_pair(const Term& a, const Term& b) {
  return "(" + debug_string(a) + ", " + debug_string(b) + ")";
}

void require_check(const GlobalEnv& env, const Term& proof, const Term& statement, const std::string& what) {
  CheckResult r = check_proof(env, LocalContext{}, proof, statement);
  if (!r) throw TableError(what + ": " + r.diagnostic);
}

} // namespace

Term transfer_v1_statement(const TransferEntryV1& e) {
  // forall x1..xn : A, R x1..xn -> R' (f x1)..(f xn)
  TermBuilder b;
  std::vector<Term> xs;
  for (std::size_t i = 0; i < e.arity; ++i) xs.push_back(b.fresh("x" + std::to_string(i + 1), e.domain));
  std::vector<Term> fx;
  for (const Term& x : xs) fx.push_back(Term::app(e.transfer_fn, x));
  Term body = mk_arrow(mk_app(e.source_rel, xs), mk_app(e.target_rel, fx));
  for (std::size_t i = xs.size(); i-- > 0;) body = b.pi(xs[i], body);
  return body;
}

Term invert_relation(const GlobalEnv& env, const Term& rel) {
  if (auto v = prelude::view_inv(rel)) return v->r;
  auto types = view_relation_type(env, infer_type(env, LocalContext{}, rel));
  if (!types) throw TableError("not a binary relation: " + debug_string(rel));
  return prelude::mk_inv(types->first, types->second, rel);
}

RelationEntryV2 invert_entry(const GlobalEnv& env, const RelationEntryV2& entry) {
  TermBuilder b;
  std::vector<Term> binders;
  Term applied = entry.proof;
  Term cur = entry.relation;
  std::vector<prelude::RespectfulView> views;
  while (auto v = prelude::view_respectful(cur)) {
    Term flipped = invert_relation(env, v->r);
    Term y = b.fresh("y", v->y);
    Term x = b.fresh("x", v->x);
    Term h = b.fresh("h", mk_app(flipped, {y, x}));
    binders.insert(binders.end(), {y, x, h});
    applied = mk_app(applied, {x, y, h});
    views.push_back(*v);
    cur = v->rp;
  }
  Term rel = invert_relation(env, cur);
  for (std::size_t i = views.size(); i-- > 0;) {
    const auto& v = views[i];
    rel = prelude::mk_respectful(v.y, v.x, v.yp, v.xp, invert_relation(env, v.r), rel);
  }
  for (std::size_t i = binders.size(); i-- > 0;) applied = b.lam(binders[i], applied);
  return RelationEntryV2{entry.rhs, entry.lhs, rel, applied, entry.name};
}

void DeclTables::declare_surjection(const GlobalEnv& env, const std::string& f, const std::string& g,
                                    const std::string& proof) {
  const Declaration& fd = resolve(env, f, "function");
  const Declaration& gd = resolve(env, g, "right inverse");
  const Declaration& pd = resolve(env, proof, "surjectivity proof");
  auto ft = view_function_type(env, fd.type);
  if (!ft) throw TableError("'" + f + "' is not a function between two types");
  auto gt = view_function_type(env, gd.type);
  if (!gt) throw TableError("'" + g + "' is not a function between two types");
  auto [a, a2] = *ft;
  if (!convertible(env, gt->first, a2) || !convertible(env, gt->second, a))
    throw TableError("'" + g + "' does not have type " + debug_string(mk_arrow(a2, a)));
  // forall x' : A', eq A' (f (g x')) x'
  TermBuilder b;
  Term x = b.fresh("x'", a2);
  Term expected = b.pi(x, prelude::mk_eq(a2, Term::app(Term::constant(f), Term::app(Term::constant(g), x)), x));
  if (!convertible(env, pd.type, expected))
    throw TableError("'" + proof + "' does not prove that " + f + " is a surjection with right inverse " + g);
  std::string key = pair_key(env, a, a2);
  ensure_absent(surjections_, key, "surjection", show_pair(a, a2));
  surjections_.emplace(key, SurjectionEntry{a, a2, Term::constant(f), Term::constant(g), Term::constant(proof), proof});
}

void DeclTables::declare_transfer_v1(const GlobalEnv& env, const std::string& lemma) {
  const Declaration& d = resolve(env, lemma, "transfer lemma");
  auto shape = [&](const std::string& msg) {
    return TableError("'" + lemma + "' is not a transfer lemma: " + msg);
  };
  // leading variables x1..xk : A
  Term t = whnf_beta(d.type);
  std::vector<Term> types;
  while (t.is_pi() && has_var(t.body(), 0)) {
    types.push_back(t.binder_type());
    t = whnf_beta(t.body());
  }
  const auto k = static_cast<std::uint32_t>(types.size());
  if (k == 0) throw shape("expected at least one quantified variable");
  Term domain = types[0];
  for (std::uint32_t i = 1; i < k; ++i)
    if (types[i] != lift(domain, i))
      throw shape("variable " + std::to_string(i + 1) + " has a different type than variable 1");
  if (!t.is_pi()) throw shape("expected a hypothesis R x1 .. xn after the variables");
  // hypothesis: R x1..xk
  Spine hyp = unfold_app(t.binder_type());
  if (hyp.args.size() < k) throw shape("the hypothesis takes fewer than " + std::to_string(k) + " arguments");
  std::size_t hprefix = hyp.args.size() - k;
  for (std::uint32_t i = 0; i < k; ++i) {
    const Term& arg = hyp.args[hprefix + i];
    if (!arg.is_var() || arg.index() != k - 1 - i)
      throw shape("argument " + std::to_string(i + 1) + " of the hypothesis is not variable x" + std::to_string(i + 1));
  }
  Term source = mk_app(hyp.head, std::span<const Term>(hyp.args.data(), hprefix));
  // conclusion: R' (f x1)..(f xk), under the hypothesis binder
  Term concl = whnf_beta(t.body());
  if (concl.is_pi()) throw shape("the conclusion must be a single relation application");
  Spine cs = unfold_app(concl);
  if (cs.args.size() < k) throw shape("the conclusion takes fewer than " + std::to_string(k) + " arguments");
  std::size_t cprefix = cs.args.size() - k;
  Term fn;
  for (std::uint32_t i = 0; i < k; ++i) {
    const Term& arg = cs.args[cprefix + i];
    std::string pos = "argument " + std::to_string(i + 1) + " of the conclusion";
    if (!arg.is_app() || !arg.arg().is_var() || arg.arg().index() != k - i)
      throw shape(pos + " is not of the form f x" + std::to_string(i + 1));
    if (!fn) {
      fn = arg.fn();
    } else if (arg.fn() != fn) {
      throw shape(pos + " uses a different transfer function than argument 1");
    }
  }
  Term target = mk_app(cs.head, std::span<const Term>(cs.args.data(), cprefix));
  try {
    source = lower(source, k);
    target = lower(target, k + 1);
    fn = lower(fn, k + 1);
  } catch (const std::logic_error&) {
    throw shape("the relations or the transfer function depend on the quantified variables");
  }
  TransferEntryV1 e{source, target, k, fn, Term::constant(lemma), domain, lemma};
  require_check(env, e.lemma_proof, transfer_v1_statement(e), "transfer lemma '" + lemma + "'");
  std::string key = pair_key(env, source, target);
  ensure_absent(transfers_v1_, key, "transfer", show_pair(source, target));
  transfers_v1_.emplace(key, std::move(e));
}

void DeclTables::declare_relation_v2(const GlobalEnv& env, const std::string& lemma) {
  const Declaration& d = resolve(env, lemma, "relation lemma");
  Term stmt = whnf_beta(d.type);
  Spine s = unfold_app(stmt);
  if (s.args.size() < 2)
    throw TableError("'" + lemma + "' is not a relation between two terms: " + debug_string(d.type));
  Term rel = mk_app(s.head, std::span<const Term>(s.args.data(), s.args.size() - 2));
  insert_relation_v2(env, RelationEntryV2{s.args[s.args.size() - 2], s.args.back(), rel, Term::constant(lemma), lemma});
}

void DeclTables::insert_relation_v2(const GlobalEnv& env, RelationEntryV2 entry) {
  Term stmt = mk_app(entry.relation, {entry.lhs, entry.rhs});
  Term sort;
  try {
    sort = whnf(env, infer_type(env, LocalContext{}, stmt));
  } catch (const KernelError& e) {
    throw TableError("'" + entry.name + "': ill-typed relation statement: " + e.what());
  }
  if (!sort.is_sort() || sort.sort_tag() != Sort::Prop)
    throw TableError("'" + entry.name + "' is not a Prop-valued relation statement");
  require_check(env, entry.proof, stmt, "relation entry '" + entry.name + "'");
  std::string key = pair_key(env, entry.lhs, entry.rhs);
  ensure_absent(relations_v2_, key, "relation", show_pair(entry.lhs, entry.rhs));
  relations_v2_.emplace(key, std::move(entry));
}

RelationalEncoding DeclTables::surjection_to_relational(GlobalEnv& env, const SurjectionEntry& s) {
  const Term& A = s.domain;
  const Term& A2 = s.codomain;
  TermBuilder b;
  RelationalEncoding out;

  // R := fun x x' => eq A' (f x) x'
  Term rx = b.fresh("x", A);
  Term rx2 = b.fresh("x'", A2);
  Term r_body = b.lams({rx, rx2}, prelude::mk_eq(A2, Term::app(s.f, rx), rx2));
  Term r_type = mk_arrow(A, mk_arrow(A2, prop()));
  Term r_norm = normalize(env, r_body);
  for (const Declaration& d : env.declarations()) {
    if (d.kind == DeclKind::Definition && d.body && convertible(env, d.type, r_type) &&
        normalize(env, *d.body) == r_norm) {
      out.relation = d.name;
      out.reused_relation = true;
      break;
    }
  }
  GlobalEnv next = env;
  if (!out.reused_relation) {
    std::string base = s.f.is_const() ? s.f.name() : "surj";
    out.relation = base + "_rel";
    add_checked(next, {out.relation, DeclKind::Definition, r_type, r_body});
  }
  Term R = Term::constant(out.relation);
  Term impl = Term::constant(prelude::kImpl);
  Term predA = mk_arrow(A, prop());
  Term predA2 = mk_arrow(A2, prop());
  auto all = [](const Term& t) { return Term::app(Term::constant(prelude::kAll), t); };
  auto eq = [](const Term& t) { return Term::app(Term::constant(prelude::kEq), t); };
  Term P = prop();

  // ((R ##> impl) ##> impl) (all A) (all A')
  Term surj_rel = prelude::mk_respectful(predA, predA2, P, P, prelude::mk_respectful(A, A2, P, P, R, impl), impl);
  Term surj_stmt = mk_app(surj_rel, {all(A), all(A2)});
  Term surj_proof;
  {
    Term p = b.fresh("P", predA), p2 = b.fresh("P'", predA2);
    Term h = b.fresh("h", mk_app(prelude::mk_respectful(A, A2, P, P, R, impl), {p, p2}));
    Term hp = b.fresh("hp", mk_app(Term::constant(prelude::kAll), {A, p}));
    Term x2 = b.fresh("x'", A2);
    Term gx = Term::app(s.g, x2);
    surj_proof = b.lams({p, p2, h, hp, x2},
                        mk_app(h, {gx, x2, Term::app(s.surj_proof, x2), Term::app(hp, gx)}));
  }

  // ((R⁻¹ ##> impl) ##> impl) (all A') (all A)
  Term Rinv = prelude::mk_inv(A, A2, R);
  Term tot_rel = prelude::mk_respectful(predA2, predA, P, P, prelude::mk_respectful(A2, A, P, P, Rinv, impl), impl);
  Term tot_stmt = mk_app(tot_rel, {all(A2), all(A)});
  Term tot_proof;
  {
    Term p2 = b.fresh("P'", predA2), p = b.fresh("P", predA);
    Term h = b.fresh("h", mk_app(prelude::mk_respectful(A2, A, P, P, Rinv, impl), {p2, p}));
    Term hp = b.fresh("hp", mk_app(Term::constant(prelude::kAll), {A2, p2}));
    Term x = b.fresh("x", A);
    Term fx = Term::app(s.f, x);
    tot_proof = b.lams({p2, p, h, hp, x}, mk_app(h, {fx, x, prelude::mk_eq_refl(A2, fx), Term::app(hp, fx)}));
  }

  // (R ##> R ##> impl) (eq A) (eq A')
  Term func_rel = prelude::mk_respectful(A, A2, predA, predA2, R, prelude::mk_respectful(A, A2, P, P, R, impl));
  Term func_stmt = mk_app(func_rel, {eq(A), eq(A2)});
  Term func_proof;
  {
    Term x = b.fresh("x", A), x2 = b.fresh("x'", A2);
    Term h = b.fresh("h", mk_app(R, {x, x2}));
    Term y = b.fresh("y", A), y2 = b.fresh("y'", A2);
    Term h2 = b.fresh("h'", mk_app(R, {y, y2}));
    Term e = b.fresh("e", prelude::mk_eq(A, x, y));
    Term fx = Term::app(s.f, x), fy = Term::app(s.f, y);
    Term z = b.fresh("z", A);
    Term w = b.fresh("w", A2);
    Term e1 = prelude::mk_eq_ind(A, x, b.lam(z, prelude::mk_eq(A2, fx, Term::app(s.f, z))),
                                 prelude::mk_eq_refl(A2, fx), y, e);
    Term e2 = prelude::mk_eq_ind(A2, fx, b.lam(w, prelude::mk_eq(A2, w, fy)), e1, x2, h);
    Term e3 = prelude::mk_eq_ind(A2, fy, b.lam(w, prelude::mk_eq(A2, x2, w)), e2, y2, h2);
    func_proof = b.lams({x, x2, h, y, y2, h2, e}, e3);
  }

  out.surj = out.relation + "_surj";
  out.tot = out.relation + "_tot";
  out.func = out.relation + "_func";
  DeclTables staged = *this;
  try {
    add_checked(next, {out.surj, DeclKind::Definition, surj_stmt, surj_proof});
    add_checked(next, {out.tot, DeclKind::Definition, tot_stmt, tot_proof});
    add_checked(next, {out.func, DeclKind::Definition, func_stmt, func_proof});
  } catch (const KernelError& e) {
    throw TableError(std::string("kernel rejected a synthesized surjection lemma (engine bug): ") + e.what());
  }
  staged.insert_relation_v2(next, {all(A), all(A2), surj_rel, Term::constant(out.surj), out.surj});
  staged.insert_relation_v2(next, {all(A2), all(A), tot_rel, Term::constant(out.tot), out.tot});
  staged.insert_relation_v2(next, {eq(A), eq(A2), func_rel, Term::constant(out.func), out.func});
  staged.encoded_.insert(pair_key(env, A, A2));
  env = std::move(next);
  *this = std::move(staged);
  return out;
}

std::vector<RelationalEncoding> DeclTables::encode_pending_surjections(GlobalEnv& env) {
  std::vector<RelationalEncoding> out;
  std::vector<SurjectionEntry> pending;
  for (const auto& [key, s] : surjections_)
    if (!encoded_.count(key)) pending.push_back(s);
  for (const SurjectionEntry& s : pending) out.push_back(surjection_to_relational(env, s));
  return out;
}

void DeclTables::prefill_core(const GlobalEnv& env) {
  Term P = prop();
  Term impl = Term::constant(prelude::kImpl);
  Term pp = mk_arrow(P, P);
  // impl⁻¹ ##> impl ##> impl
  Term rel = prelude::mk_respectful(P, P, pp, pp, prelude::mk_inv(P, P, impl), prelude::mk_respectful(P, P, P, P, impl, impl));
  TermBuilder b;
  Term a = b.fresh("A", P), a2 = b.fresh("A'", P);
  Term h = b.fresh("h", mk_app(prelude::mk_inv(P, P, impl), {a, a2}));
  Term bb = b.fresh("B", P), b2 = b.fresh("B'", P);
  Term h2 = b.fresh("h'", mk_app(impl, {bb, b2}));
  Term p = b.fresh("p", mk_app(impl, {a, bb}));
  Term x = b.fresh("a'", a2);
  Term proof = b.lams({a, a2, h, bb, b2, h2, p, x}, Term::app(h2, Term::app(p, Term::app(h, x))));
  insert_relation_v2(env, RelationEntryV2{impl, impl, rel, proof, "impl_prefill"});
}

const SurjectionEntry* DeclTables::lookup_surjection(const GlobalEnv& env, const Term& a, const Term& a2) const {
  auto it = surjections_.find(pair_key(env, a, a2));
  return it == surjections_.end() ? nullptr : &it->second;
}

const TransferEntryV1* DeclTables::lookup_transfer_v1(const GlobalEnv& env, const Term& r, const Term& r2) const {
  auto it = transfers_v1_.find(pair_key(env, r, r2));
  return it == transfers_v1_.end() ? nullptr : &it->second;
}

const RelationEntryV2* DeclTables::lookup_relation_v2_direct(const GlobalEnv& env, const Term& lhs,
                                                             const Term& rhs) const {
  auto it = relations_v2_.find(pair_key(env, lhs, rhs));
  return it == relations_v2_.end() ? nullptr : &it->second;
}

std::optional<RelationEntryV2> DeclTables::lookup_relation_v2_inverse(const GlobalEnv& env, const Term& lhs,
                                                                      const Term& rhs) const {
  const RelationEntryV2* e = lookup_relation_v2_direct(env, rhs, lhs);
  if (!e) return std::nullopt;
  try {
    return invert_entry(env, *e);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<RelationLookup> DeclTables::lookup_relation_v2(const GlobalEnv& env, const Term& lhs,
                                                             const Term& rhs) const {
  if (const RelationEntryV2* e = lookup_relation_v2_direct(env, lhs, rhs)) return RelationLookup{*e, false};
  if (auto inv = lookup_relation_v2_inverse(env, lhs, rhs)) return RelationLookup{*inv, true};
  return std::nullopt;
}

bool DeclTables::erase(const std::string& name) {
  auto drop = [&](auto& m) {
    for (auto it = m.begin(); it != m.end(); ++it)
      if (it->second.name == name) {
        m.erase(it);
        return true;
      }
    return false;
  };
  return drop(surjections_) || drop(transfers_v1_) || drop(relations_v2_);
}

std::vector<std::string> DeclTables::audit(const GlobalEnv& env) const {
  std::vector<std::string> bad;
  auto check = [&](const Term& proof, const Term& stmt, const std::string& name) {
    CheckResult r = check_proof(env, LocalContext{}, proof, stmt);
    if (!r) bad.push_back(name + ": " + r.diagnostic);
  };
  for (const auto& [k, s] : surjections_) {
    TermBuilder b;
    Term x = b.fresh("x'", s.codomain);
    check(s.surj_proof, b.pi(x, prelude::mk_eq(s.codomain, Term::app(s.f, Term::app(s.g, x)), x)), s.name);
  }
  for (const auto& [k, e] : transfers_v1_) check(e.lemma_proof, transfer_v1_statement(e), e.name);
  for (const auto& [k, e] : relations_v2_) check(e.proof, mk_app(e.relation, {e.lhs, e.rhs}), e.name);
  return bad;
}

} // namespace tk::tables
