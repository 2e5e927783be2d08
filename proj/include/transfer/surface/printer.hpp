// Surface :: pretty-printing kernel terms back to concrete syntax

#ifndef TRANSFER_SURFACE_PRINTER_HPP_
#define TRANSFER_SURFACE_PRINTER_HPP_

#include <string>

#include "transfer/kernel/env.hpp"
#include "transfer/kernel/term.hpp"

namespace tk::surface {

// Prints t with Unicode notation. Without an environment the implicit
// arguments of eq/inv/respectful are always written out (@eq T a b); with
// one, the sugared forms (a = b, R ##> R', R⁻¹) are used whenever
// re-elaborating them gives back the same term. Binder names are kept
// unless they would capture, then freshened. ctx names the loose variables.
std::string print_term(const Term& t, const GlobalEnv* env = nullptr,
                       const LocalContext* ctx = nullptr);

inline std::string print_term(const Term& t, const GlobalEnv& env,
                              const LocalContext& ctx = LocalContext{}) {
  return print_term(t, &env, &ctx);
}

} // namespace tk::surface

#endif // TRANSFER_SURFACE_PRINTER_HPP_
