// Surface :: name resolution and elaboration of pre-terms into kernel terms

#ifndef TRANSFER_SURFACE_ELABORATE_HPP_
#define TRANSFER_SURFACE_ELABORATE_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

#include "transfer/kernel/env.hpp"
#include "transfer/kernel/term.hpp"
#include "transfer/surface/syntax.hpp"

namespace tk::surface {

// Resolution or typing failure while elaborating.
struct ElabError : public std::runtime_error {
  ElabError(const std::string& msg, Position pos_)
      : std::runtime_error(to_string(pos_) + ": " + msg), pos(pos_) {}
  Position pos;
};

// Number of leading type arguments a constant takes implicitly when it is
// written without '@': eq 1, all 1, inv 2, respectful 4, anything else 0.
std::size_t implicit_arguments(const std::string& name);

struct Elaborated {
  Term term;
  Term type;  // as inferred by the kernel
};

// Untyped binders and implicit arguments become holes solved by first-order
// unification against their uses. The result is re-checked by the kernel.
Elaborated elaborate(const GlobalEnv& env, const LocalContext& ctx, const PreTermPtr& pt);

// Elaborates pt and checks it against expected.
Term elaborate_against(const GlobalEnv& env, const LocalContext& ctx, const PreTermPtr& pt,
                       const Term& expected);

// pt must denote a type (its type is a sort).
Term elaborate_type(const GlobalEnv& env, const LocalContext& ctx, const PreTermPtr& pt);

// Definition name binders [: T] := body, closed.
Elaborated elaborate_definition(const GlobalEnv& env, const DefinitionCmd& def, Position pos);

// Convenience: parse then elaborate in the empty context.
Elaborated elaborate_string(const GlobalEnv& env, std::string_view text);

} // namespace tk::surface

#endif // TRANSFER_SURFACE_ELABORATE_HPP_
