#include "transfer/kernel/term.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <stdexcept>

namespace tk {

std::string_view sort_name(Sort s) {
  switch (s) {
    case Sort::Prop: return "Prop";
    case Sort::Set: return "Set";
    case Sort::Type: return "Type";
  }
  return "?";
}

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

const TermNode& node_of(const std::shared_ptr<const TermNode>& p) {
  assert(p && "null term");
  return *p;
}

} // namespace

Term Term::sort(Sort s) {
  auto n = std::make_shared<TermNode>();
  n->kind = TermKind::Sort;
  n->sort = s;
  n->hash = mix(1, static_cast<std::size_t>(s));
  return Term(std::move(n));
}

Term Term::var(std::uint32_t index) {
  auto n = std::make_shared<TermNode>();
  n->kind = TermKind::Var;
  n->index = index;
  n->loose = index + 1;
  n->hash = mix(2, index);
  return Term(std::move(n));
}

Term Term::constant(std::string name) {
  auto n = std::make_shared<TermNode>();
  n->kind = TermKind::Const;
  n->hash = mix(3, std::hash<std::string>{}(name));
  n->name = std::move(name);
  return Term(std::move(n));
}

Term Term::make_binder(TermKind kind, std::string binder, Term type, Term body) {
  if (!type || !body) throw std::invalid_argument("binder with null component");
  auto n = std::make_shared<TermNode>();
  n->kind = kind;
  n->name = std::move(binder);
  n->loose = std::max(type.loose_bound(), body.loose_bound() > 0 ? body.loose_bound() - 1 : 0);
  n->hash = mix(mix(static_cast<std::size_t>(kind) + 10, type.hash()), body.hash());
  n->first = std::move(type);
  n->second = std::move(body);
  return Term(std::move(n));
}

Term Term::lambda(std::string binder, Term type, Term body) {
  return make_binder(TermKind::Lambda, std::move(binder), std::move(type), std::move(body));
}

Term Term::pi(std::string binder, Term type, Term body) {
  return make_binder(TermKind::Pi, std::move(binder), std::move(type), std::move(body));
}

Term Term::app(Term fn, Term arg) {
  if (!fn || !arg) throw std::invalid_argument("application with null component");
  auto n = std::make_shared<TermNode>();
  n->kind = TermKind::App;
  n->loose = std::max(fn.loose_bound(), arg.loose_bound());
  n->hash = mix(mix(20, fn.hash()), arg.hash());
  n->first = std::move(fn);
  n->second = std::move(arg);
  return Term(std::move(n));
}

TermKind Term::kind() const { return node_of(node_).kind; }
Sort Term::sort_tag() const { return node_of(node_).sort; }
std::uint32_t Term::index() const { return node_of(node_).index; }
const std::string& Term::name() const { return node_of(node_).name; }
const Term& Term::binder_type() const { return node_of(node_).first; }
const Term& Term::body() const { return node_of(node_).second; }
const Term& Term::fn() const { return node_of(node_).first; }
const Term& Term::arg() const { return node_of(node_).second; }
std::uint32_t Term::loose_bound() const { return node_ ? node_->loose : 0; }
std::size_t Term::hash() const { return node_ ? node_->hash : 0; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.hash() != b.hash() || a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermKind::Sort: return a.sort_tag() == b.sort_tag();
    case TermKind::Var: return a.index() == b.index();
    case TermKind::Const: return a.name() == b.name();
    case TermKind::App: return a.fn() == b.fn() && a.arg() == b.arg();
    case TermKind::Lambda:
    case TermKind::Pi: return a.binder_type() == b.binder_type() && a.body() == b.body();
  }
  return false;
}

namespace {

// Generic variable-rewriting traversal. f(index, depth) returns the
// replacement for a loose variable (index >= depth) or a null term to keep it.
template <typename F>
Term map_loose(const Term& t, std::uint32_t depth, const F& f) {
  if (t.loose_bound() <= depth) return t;
  switch (t.kind()) {
    case TermKind::Var: {
      Term r = f(t.index(), depth);
      return r ? r : t;
    }
    case TermKind::App: {
      Term fn = map_loose(t.fn(), depth, f);
      Term arg = map_loose(t.arg(), depth, f);
      if (fn.same_node(t.fn()) && arg.same_node(t.arg())) return t;
      return Term::app(std::move(fn), std::move(arg));
    }
    case TermKind::Lambda:
    case TermKind::Pi: {
      Term ty = map_loose(t.binder_type(), depth, f);
      Term body = map_loose(t.body(), depth + 1, f);
      if (ty.same_node(t.binder_type()) && body.same_node(t.body())) return t;
      return t.is_lambda() ? Term::lambda(t.name(), std::move(ty), std::move(body))
                           : Term::pi(t.name(), std::move(ty), std::move(body));
    }
    default: return t;
  }
}

} // namespace

Term lift(const Term& t, std::uint32_t amount, std::uint32_t cutoff) {
  if (amount == 0) return t;
  return map_loose(t, cutoff, [amount](std::uint32_t i, std::uint32_t) {
    return Term::var(i + amount);
  });
}

Term lower(const Term& t, std::uint32_t amount, std::uint32_t cutoff) {
  if (amount == 0) return t;
  return map_loose(t, cutoff, [amount](std::uint32_t i, std::uint32_t depth) {
    if (i - depth < amount) throw std::logic_error("lower: variable in removed range");
    return Term::var(i - amount);
  });
}

Term instantiate(const Term& body, const Term& value) {
  return map_loose(body, 0, [&value](std::uint32_t i, std::uint32_t depth) {
    if (i == depth) return lift(value, depth);
    return Term::var(i - 1);
  });
}

Term substitute(const Term& t, std::uint32_t target, const Term& replacement) {
  return map_loose(t, 0, [&](std::uint32_t i, std::uint32_t depth) {
    if (i - depth == target) return lift(replacement, depth);
    return Term{};
  });
}

bool has_var(const Term& t, std::uint32_t index) {
  if (t.loose_bound() <= index) return false;
  switch (t.kind()) {
    case TermKind::Var: return t.index() == index;
    case TermKind::App: return has_var(t.fn(), index) || has_var(t.arg(), index);
    case TermKind::Lambda:
    case TermKind::Pi: return has_var(t.binder_type(), index) || has_var(t.body(), index + 1);
    default: return false;
  }
}

Term mk_app(Term fn, std::span<const Term> args) {
  for (const Term& a : args) fn = Term::app(std::move(fn), a);
  return fn;
}

Term mk_app(Term fn, std::initializer_list<Term> args) {
  return mk_app(std::move(fn), std::span<const Term>(args.begin(), args.size()));
}

Term mk_arrow(Term domain, Term codomain) {
  return Term::pi("_", std::move(domain), lift(codomain, 1));
}

Spine unfold_app(const Term& t) {
  Spine s;
  Term cur = t;
  while (cur.is_app()) {
    s.args.push_back(cur.arg());
    cur = cur.fn();
  }
  std::reverse(s.args.begin(), s.args.end());
  s.head = cur;
  return s;
}

namespace {

void write_key(const Term& t, std::string& out) {
  switch (t.kind()) {
    case TermKind::Sort:
      out += '#';
      out += sort_name(t.sort_tag());
      break;
    case TermKind::Var:
      out += '%';
      out += std::to_string(t.index());
      break;
    case TermKind::Const:
      out += '$';
      out += t.name();
      out += ';';
      break;
    case TermKind::App:
      out += "@(";
      write_key(t.fn(), out);
      out += ' ';
      write_key(t.arg(), out);
      out += ')';
      break;
    case TermKind::Lambda:
    case TermKind::Pi:
      out += t.is_lambda() ? "L(" : "P(";
      write_key(t.binder_type(), out);
      out += ' ';
      write_key(t.body(), out);
      out += ')';
      break;
  }
}

void write_debug(const Term& t, std::string& out) {
  switch (t.kind()) {
    case TermKind::Sort: out += sort_name(t.sort_tag()); break;
    case TermKind::Var: out += "#" + std::to_string(t.index()); break;
    case TermKind::Const: out += t.name(); break;
    case TermKind::App:
      out += '(';
      write_debug(t.fn(), out);
      out += ' ';
      write_debug(t.arg(), out);
      out += ')';
      break;
    case TermKind::Lambda:
    case TermKind::Pi:
      out += t.is_lambda() ? "(fun " : "(forall ";
      out += t.name() + " : ";
      write_debug(t.binder_type(), out);
      out += ", ";
      write_debug(t.body(), out);
      out += ')';
      break;
  }
}

} // namespace

std::string canonical_key(const Term& t) {
  std::string out;
  write_key(t, out);
  return out;
}

std::string debug_string(const Term& t) {
  if (!t) return "<null>";
  std::string out;
  write_debug(t, out);
  return out;
}

} // namespace tk
