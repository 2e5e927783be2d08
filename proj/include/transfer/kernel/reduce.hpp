// Kernel :: head reduction, normalization, conversion

#ifndef TRANSFER_KERNEL_REDUCE_HPP_
#define TRANSFER_KERNEL_REDUCE_HPP_

#include <string>
#include <unordered_set>

#include "transfer/kernel/env.hpp"
#include "transfer/kernel/term.hpp"

namespace tk {

// Beta + delta head reduction. Parameters and axioms never unfold.
Term whnf(const GlobalEnv& env, const Term& t);

// Beta-only head reduction; definitions stay folded.
Term whnf_beta(const Term& t);

// Full beta-delta normal form. Terminates on kernel-accepted terms.
Term normalize(const GlobalEnv& env, const Term& t);

// Beta normal form that delta-unfolds only the listed constants.
Term unfold_only(const GlobalEnv& env, const Term& t, const std::unordered_set<std::string>& names);

// Equality modulo alpha, beta and delta (no eta). Definitions are unfolded
// lazily: matching heads are compared argument-wise before unfolding.
bool convertible(const GlobalEnv& env, const Term& a, const Term& b);

} // namespace tk

#endif // TRANSFER_KERNEL_REDUCE_HPP_
