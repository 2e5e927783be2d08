// Kernel :: Sort, Term and de Bruijn index manipulation

#ifndef TRANSFER_KERNEL_TERM_HPP_
#define TRANSFER_KERNEL_TERM_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tk {

enum class Sort : std::uint8_t { Prop, Set, Type };

std::string_view sort_name(Sort s);

enum class TermKind : std::uint8_t { Sort, Var, Const, Lambda, App, Pi };

struct TermNode;

// Immutable, shared term. Bound variables are de Bruijn indices: Var(0) is
// the innermost enclosing binder. Binder display names are kept only for
// printing and never take part in equality.
class Term {
public:
  Term() = default;

  static Term sort(Sort s);
  static Term var(std::uint32_t index);
  static Term constant(std::string name);
  static Term lambda(std::string binder, Term type, Term body);
  static Term app(Term fn, Term arg);
  static Term pi(std::string binder, Term type, Term body);

  explicit operator bool() const { return node_ != nullptr; }

  TermKind kind() const;
  bool is_sort() const { return kind() == TermKind::Sort; }
  bool is_var() const { return kind() == TermKind::Var; }
  bool is_const() const { return kind() == TermKind::Const; }
  bool is_lambda() const { return kind() == TermKind::Lambda; }
  bool is_app() const { return kind() == TermKind::App; }
  bool is_pi() const { return kind() == TermKind::Pi; }
  bool is_binder() const { return is_lambda() || is_pi(); }

  Sort sort_tag() const;
  std::uint32_t index() const;
  // Constant name, or binder display name for Lambda/Pi.
  const std::string& name() const;
  const Term& binder_type() const;
  const Term& body() const;
  const Term& fn() const;
  const Term& arg() const;

  // One more than the largest loose bound variable (0 for closed terms).
  std::uint32_t loose_bound() const;
  std::size_t hash() const;

  bool same_node(const Term& other) const { return node_ == other.node_; }

  // Alpha-equivalence (structural on the nameless representation).
  friend bool operator==(const Term& a, const Term& b);

private:
  static Term make_binder(TermKind kind, std::string binder, Term type, Term body);
  explicit Term(std::shared_ptr<const TermNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const TermNode> node_;
};

struct TermNode {
  TermKind kind;
  Sort sort = Sort::Prop;
  std::uint32_t index = 0;
  std::string name;
  Term first;   // binder type, or application function
  Term second;  // body, or application argument
  std::uint32_t loose = 0;
  std::size_t hash = 0;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

// Shifts every variable with index >= cutoff up by amount.
Term lift(const Term& t, std::uint32_t amount, std::uint32_t cutoff = 0);

// Shifts every variable with index >= cutoff down by amount. The range
// [cutoff, cutoff + amount) must not occur.
Term lower(const Term& t, std::uint32_t amount, std::uint32_t cutoff = 0);

// Beta-style instantiation: replaces Var(0) of a binder body with value and
// lowers the remaining loose variables by one.
Term instantiate(const Term& body, const Term& value);

// Replaces occurrences of Var(target) by replacement without removing the
// variable from scope. replacement lives in the same context as t; it is
// lifted when pushed under binders.
Term substitute(const Term& t, std::uint32_t target, const Term& replacement);

bool has_var(const Term& t, std::uint32_t index);

Term mk_app(Term fn, std::span<const Term> args);
Term mk_app(Term fn, std::initializer_list<Term> args);
// Non-dependent product: the body is given in the outer context.
Term mk_arrow(Term domain, Term codomain);

struct Spine {
  Term head;
  std::vector<Term> args;
};
Spine unfold_app(const Term& t);

// Canonical nameless serialization; equal strings iff alpha-equal terms.
std::string canonical_key(const Term& t);

// Compact debugging form with raw de Bruijn indices.
std::string debug_string(const Term& t);

} // namespace tk

#endif // TRANSFER_KERNEL_TERM_HPP_
