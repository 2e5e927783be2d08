#include "transfer/kernel/env.hpp"

namespace tk {

std::string_view decl_kind_name(DeclKind k) {
  switch (k) {
    case DeclKind::Parameter: return "parameter";
    case DeclKind::Axiom: return "axiom";
    case DeclKind::Definition: return "definition";
  }
  return "?";
}

void GlobalEnv::add(Declaration decl) {
  if (index_.contains(decl.name)) throw KernelError("'" + decl.name + "' is already declared");
  if (decl.kind == DeclKind::Definition && !decl.body)
    throw KernelError("definition '" + decl.name + "' has no body");
  if (decl.type.loose_bound() != 0 || (decl.body && decl.body->loose_bound() != 0))
    throw KernelError("global declaration '" + decl.name + "' is not closed");
  index_.emplace(decl.name, decls_.size());
  decls_.push_back(std::move(decl));
}

const Declaration* GlobalEnv::find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &decls_[it->second];
}

const Term* GlobalEnv::definition_body(const std::string& name) const {
  const Declaration* d = find(name);
  if (!d || d->kind != DeclKind::Definition) return nullptr;
  return &*d->body;
}

LocalContext LocalContext::pushed(std::string name, Term type, EntryRole role) const {
  LocalContext c = *this;
  c.push(std::move(name), std::move(type), role);
  return c;
}

void LocalContext::push(std::string name, Term type, EntryRole role) {
  entries_.push_back(ContextEntry{std::move(name), std::move(type), role});
}

void LocalContext::pop() { entries_.pop_back(); }

const ContextEntry& LocalContext::at(std::uint32_t index) const {
  if (index >= entries_.size()) throw KernelError("unbound variable #" + std::to_string(index));
  return entries_[entries_.size() - 1 - index];
}

Term LocalContext::type_of(std::uint32_t index) const {
  return lift(at(index).type, index + 1);
}

} // namespace tk
