// Kernel :: locally-nameless construction of binders

#ifndef TRANSFER_KERNEL_BUILDER_HPP_
#define TRANSFER_KERNEL_BUILDER_HPP_

#include <initializer_list>
#include <string>
#include <vector>

#include "transfer/kernel/term.hpp"

namespace tk {

// Builds terms with named placeholders instead of de Bruijn indices.
// fresh() returns a placeholder constant; lam()/pi() bind it, turning its
// occurrences into the right indices. Placeholder names cannot collide with
// user identifiers.
class TermBuilder {
public:
  Term fresh(std::string display, Term type);

  Term lam(const Term& local, const Term& body) const;
  Term pi(const Term& local, const Term& body) const;
  Term lams(std::initializer_list<Term> locals, const Term& body) const;
  Term pis(std::initializer_list<Term> locals, const Term& body) const;

  const Term& type_of(const Term& local) const;

private:
  struct Local {
    std::string placeholder;
    std::string display;
    Term type;
  };
  const Local& find(const Term& local) const;
  std::vector<Local> locals_;
};

// Replaces Const(name) by the variable bound just outside t.
Term abstract_constant(const Term& t, const std::string& name);

} // namespace tk

#endif // TRANSFER_KERNEL_BUILDER_HPP_
