// Independent polarity annotation: lists every occurrence of a variable with
// its path and polarity, then rewrites the covariant ones by path.

#pragma once

#include <random>
#include <set>
#include <string>
#include <vector>

#include "transfer/kernel/term.hpp"

namespace oracle {

using tk::Term;

struct Occurrence {
  std::string path;
  bool covariant = true;
};

// Polarity only changes along the chain of products starting at the root;
// once inside an atom it is frozen.
inline void occurrences(const Term& t, std::uint32_t target, std::uint32_t depth, int flips, bool on_spine,
                        const std::string& path, std::vector<Occurrence>& out) {
  switch (t.kind()) {
    case tk::TermKind::Var:
      if (t.index() == target + depth) out.push_back({path, flips % 2 == 0});
      break;
    case tk::TermKind::App:
      occurrences(t.fn(), target, depth, flips, false, path + "f", out);
      occurrences(t.arg(), target, depth, flips, false, path + "a", out);
      break;
    case tk::TermKind::Pi:
      occurrences(t.binder_type(), target, depth, on_spine ? flips + 1 : flips, on_spine, path + "d", out);
      occurrences(t.body(), target, depth + 1, flips, on_spine, path + "b", out);
      break;
    case tk::TermKind::Lambda:
      occurrences(t.binder_type(), target, depth, flips, false, path + "d", out);
      occurrences(t.body(), target, depth + 1, flips, false, path + "b", out);
      break;
    default: break;
  }
}

inline Term replace_paths(const Term& t, const std::set<std::string>& paths, const Term& repl, std::uint32_t depth,
                          const std::string& path) {
  if (paths.count(path)) return tk::lift(repl, depth);
  switch (t.kind()) {
    case tk::TermKind::App:
      return Term::app(replace_paths(t.fn(), paths, repl, depth, path + "f"),
                       replace_paths(t.arg(), paths, repl, depth, path + "a"));
    case tk::TermKind::Pi:
      return Term::pi(t.name(), replace_paths(t.binder_type(), paths, repl, depth, path + "d"),
                      replace_paths(t.body(), paths, repl, depth + 1, path + "b"));
    case tk::TermKind::Lambda:
      return Term::lambda(t.name(), replace_paths(t.binder_type(), paths, repl, depth, path + "d"),
                          replace_paths(t.body(), paths, repl, depth + 1, path + "b"));
    default: return t;
  }
}

inline Term covariant_substitution(const Term& t, std::uint32_t target, const Term& repl) {
  std::vector<Occurrence> occ;
  occurrences(t, target, 0, 0, true, "", occ);
  std::set<std::string> paths;
  for (const auto& o : occ)
    if (o.covariant) paths.insert(o.path);
  return replace_paths(t, paths, repl, 0, "");
}

// Formulas over the context [x' : N; y' : N] (x' = Var 1, y' = Var 0) and
// P : N -> Prop, Q : N -> N -> Prop, R : Prop, s t : N -> N.
class FormulaGen {
public:
  explicit FormulaGen(unsigned seed) : rng_(seed) {}

  Term formula(std::uint32_t depth, int budget) {
    int c = pick(budget <= 0 ? 3 : 6);
    if (c < 3) return atom(depth);
    if (c < 5) return tk::mk_arrow(formula(depth, budget - 1), formula(depth, budget - 1));
    return Term::pi("z", Term::constant("N"), formula(depth + 1, budget - 1));
  }

private:
  Term point(std::uint32_t depth) {
    int c = pick(4);
    if (c == 3 && depth > 2) return Term::var(static_cast<std::uint32_t>(pick(static_cast<int>(depth - 2))));
    if (c == 2) return Term::app(Term::constant("s"), point(depth));
    return Term::var(depth - 2 + static_cast<std::uint32_t>(c % 2));  // y' or x'
  }
  Term atom(std::uint32_t depth) {
    int c = pick(3);
    if (c == 0) return Term::app(Term::constant("P"), point(depth));
    if (c == 1) return tk::mk_app(Term::constant("Q"), {point(depth), point(depth)});
    return Term::constant("R");
  }
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  std::mt19937 rng_;
};

} // namespace oracle
