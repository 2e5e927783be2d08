// Kernel :: type inference and proof checking

#ifndef TRANSFER_KERNEL_TYPECHECK_HPP_
#define TRANSFER_KERNEL_TYPECHECK_HPP_

#include <optional>
#include <string>

#include "transfer/kernel/env.hpp"
#include "transfer/kernel/term.hpp"

namespace tk {

// Ill-typed term. path locates the failing subterm from the root, e.g.
// "app.arg/lambda.body".
struct TypeError : public KernelError {
  TypeError(const std::string& msg, std::string path_)
      : KernelError(path_.empty() ? msg : msg + " (at " + path_ + ")"), path(std::move(path_)) {}
  std::string path;
};

// Sorts: Prop : Type, Set : Type, Type : Type. A product lives in the sort
// of its codomain. Arguments are accepted up to conversion and the sort
// inclusions Prop <= Type, Set <= Type.
Term infer_type(const GlobalEnv& env, const LocalContext& ctx, const Term& t);

// The sort a type lives in; throws TypeError if t is not a type.
Sort infer_sort(const GlobalEnv& env, const LocalContext& ctx, const Term& t);

// Conversion extended with the sort inclusions, covariantly in product
// codomains.
bool subtype(const GlobalEnv& env, const Term& a, const Term& b);

struct CheckResult {
  bool ok = false;
  std::string diagnostic;
  explicit operator bool() const { return ok; }
};

// True iff proof's inferred type is convertible with statement.
CheckResult check_proof(const GlobalEnv& env, const LocalContext& ctx, const Term& proof,
                        const Term& statement);

// Type-checks and adds a declaration. For definitions the body must check
// against the declared type.
void add_checked(GlobalEnv& env, Declaration decl);

} // namespace tk

#endif // TRANSFER_KERNEL_TYPECHECK_HPP_
