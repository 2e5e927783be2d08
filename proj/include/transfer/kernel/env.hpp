// Kernel :: GlobalEnv, LocalContext, KernelError

#ifndef TRANSFER_KERNEL_ENV_HPP_
#define TRANSFER_KERNEL_ENV_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "transfer/kernel/term.hpp"

namespace tk {

struct KernelError : public std::runtime_error {
  explicit KernelError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class DeclKind : std::uint8_t { Parameter, Axiom, Definition };

std::string_view decl_kind_name(DeclKind k);

struct Declaration {
  std::string name;
  DeclKind kind;
  Term type;
  std::optional<Term> body;
};

// Ordered global declarations. Adding does not type-check; callers go
// through add_checked (typecheck.hpp) unless the declaration is trusted.
class GlobalEnv {
public:
  // Throws KernelError on redeclaration.
  void add(Declaration decl);

  const Declaration* find(const std::string& name) const;
  bool contains(const std::string& name) const { return find(name) != nullptr; }

  // Body of a definition, if name is one.
  const Term* definition_body(const std::string& name) const;

  const std::vector<Declaration>& declarations() const { return decls_; }
  std::size_t size() const { return decls_.size(); }

private:
  std::vector<Declaration> decls_;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class EntryRole : std::uint8_t { Variable, Hypothesis };

struct ContextEntry {
  std::string name;
  Term type;  // relative to the prefix preceding this entry
  EntryRole role = EntryRole::Variable;
};

// Ordered telescope of local binders. The last entry is Var(0).
class LocalContext {
public:
  LocalContext() = default;

  LocalContext pushed(std::string name, Term type, EntryRole role = EntryRole::Variable) const;
  void push(std::string name, Term type, EntryRole role = EntryRole::Variable);
  void pop();

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // Entry referenced by de Bruijn index.
  const ContextEntry& at(std::uint32_t index) const;
  // Type of Var(index), lifted into the full context.
  Term type_of(std::uint32_t index) const;

  const std::vector<ContextEntry>& entries() const { return entries_; }

private:
  std::vector<ContextEntry> entries_;
};

} // namespace tk

#endif // TRANSFER_KERNEL_ENV_HPP_
