#include "transfer/kernel/builder.hpp"

#include <stdexcept>

namespace tk {

namespace {

Term abstract_at(const Term& t, const std::string& name, std::uint32_t depth) {
  switch (t.kind()) {
    case TermKind::Const: return t.name() == name ? Term::var(depth) : t;
    case TermKind::Var: return t.index() >= depth ? Term::var(t.index() + 1) : t;
    case TermKind::App:
      return Term::app(abstract_at(t.fn(), name, depth), abstract_at(t.arg(), name, depth));
    case TermKind::Lambda:
      return Term::lambda(t.name(), abstract_at(t.binder_type(), name, depth),
                          abstract_at(t.body(), name, depth + 1));
    case TermKind::Pi:
      return Term::pi(t.name(), abstract_at(t.binder_type(), name, depth),
                      abstract_at(t.body(), name, depth + 1));
    default: return t;
  }
}

} // namespace

Term abstract_constant(const Term& t, const std::string& name) { return abstract_at(t, name, 0); }

Term TermBuilder::fresh(std::string display, Term type) {
  std::string placeholder = "\x01" + std::to_string(locals_.size()) + ":" + display;
  locals_.push_back(Local{placeholder, std::move(display), std::move(type)});
  return Term::constant(placeholder);
}

const TermBuilder::Local& TermBuilder::find(const Term& local) const {
  if (local.is_const())
    for (const Local& l : locals_)
      if (l.placeholder == local.name()) return l;
  throw std::logic_error("TermBuilder: not a local placeholder");
}

const Term& TermBuilder::type_of(const Term& local) const { return find(local).type; }

Term TermBuilder::lam(const Term& local, const Term& body) const {
  const Local& l = find(local);
  return Term::lambda(l.display, l.type, abstract_constant(body, l.placeholder));
}

Term TermBuilder::pi(const Term& local, const Term& body) const {
  const Local& l = find(local);
  return Term::pi(l.display, l.type, abstract_constant(body, l.placeholder));
}

Term TermBuilder::lams(std::initializer_list<Term> locals, const Term& body) const {
  Term r = body;
  for (auto it = std::rbegin(locals); it != std::rend(locals); ++it) r = lam(*it, r);
  return r;
}

Term TermBuilder::pis(std::initializer_list<Term> locals, const Term& body) const {
  Term r = body;
  for (auto it = std::rbegin(locals); it != std::rend(locals); ++it) r = pi(*it, r);
  return r;
}

} // namespace tk
