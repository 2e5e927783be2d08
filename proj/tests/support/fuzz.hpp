// Random well-typed transfer problems between nat and N, as surface text.
#pragma once

#include <random>
#include <string>
#include <vector>

namespace fuzz {

// Base declarations and both engines' table entries for the problems below.
inline const char* kBase = R"(
Parameters nat N : Set.
Parameter le : nat → nat → Prop.
Parameter N.le : N → N → Prop.
Parameter P : nat → Prop.
Parameter P' : N → Prop.
Parameter Q' : N → Prop.
Parameter R : Prop.
Parameter N.to_nat : N → nat.
Parameter N.of_nat : nat → N.
Axiom ax2 : ∀ x' : N, N.of_nat (N.to_nat x') = x'.
Axiom ax3 : ∀ x' y' : N, N.le x' y' → le (N.to_nat x') (N.to_nat y').
Axiom ax4 : ∀ x y : nat, le x y → N.le (N.of_nat x) (N.of_nat y).
Axiom P3 : ∀ x' : N, P' x' → P (N.to_nat x').
Axiom P4 : ∀ x : nat, P x → P' (N.of_nat x).
Definition natN x x' := N.of_nat x = x'.
Axiom le_transfer : (natN ##> natN ##> impl) le N.le.
Axiom le_transfer_inv : (natN⁻¹ ##> natN⁻¹ ##> impl) N.le le.
Axiom P_transfer : (natN ##> impl) P P'.
Axiom P_transfer_inv : (natN⁻¹ ##> impl) P' P.
Axiom R_refl : impl R R.
Axiom False_refl : impl False False.
)";

inline const char* kV1Entries[] = {"ax3", "ax4", "P3", "P4"};
inline const char* kV2Entries[] = {"le_transfer", "le_transfer_inv", "P_transfer", "P_transfer_inv", "R_refl",
                                   "False_refl"};

struct Problem {
  std::string source;  // over nat
  std::string target;  // over N
  bool mutated = false;
};

// Quantifiers only on the spine; hypotheses are quantifier-free and may
// nest implications. At most one atom of the target is mutated.
class Generator {
public:
  explicit Generator(unsigned seed) : rng_(seed) {}

  Problem next() {
    vars_.clear();
    atoms_ = 0;
    mutate_at_ = pick(10) < 3 ? pick(3) : -1;
    mutated_ = false;
    Problem p;
    auto [s, t] = spine(3 + pick(3));
    p.source = s;
    p.target = t;
    p.mutated = mutated_;
    return p;
  }

private:
  using Pair = std::pair<std::string, std::string>;

  Pair spine(int budget) {
    int c = budget <= 0 ? 2 : pick(vars_.empty() ? 2 : 5);
    if (c == 0 || (c == 3 && vars_.size() < 3)) {
      std::string v = "v" + std::to_string(vars_.size());
      vars_.push_back(v);
      auto [s, t] = spine(budget - 1);
      return {"∀ " + v + " : nat, " + s, "∀ " + v + "' : N, " + t};
    }
    if (c == 1 || c == 3) {
      auto [hs, ht] = hyp(2);
      auto [s, t] = spine(budget - 1);
      return {hs + " → " + s, ht + " → " + t};
    }
    return atom();
  }

  Pair hyp(int depth) {
    if (depth <= 0 || pick(3) == 0) return atom();
    auto [a, a2] = hyp(depth - 1);
    auto [b, b2] = pick(2) ? hyp(depth - 1) : atom();
    return {"(" + a + " → " + b + ")", "(" + a2 + " → " + b2 + ")"};
  }

  Pair atom() {
    bool mut = mutate_now();
    int c = pick(vars_.empty() ? 2 : 6);
    if (c == 0) return {"R", mut ? "False" : "R"};
    if (c == 1) return {"False", mut ? "R" : "False"};
    if (c <= 3) {
      std::size_t a = pick(static_cast<int>(vars_.size()));
      std::size_t b = pick(static_cast<int>(vars_.size()));
      if (mut && a == b) b = (b + 1) % vars_.size();
      std::size_t b2 = mut ? a : b, a2 = mut ? b : a;
      return {"le " + vars_[a] + " " + vars_[b], "N.le " + vars_[a2] + "' " + vars_[b2] + "'"};
    }
    std::size_t a = pick(static_cast<int>(vars_.size()));
    return {"P " + vars_[a], std::string(mut ? "Q' " : "P' ") + vars_[a] + "'"};
  }

  bool mutate_now() {
    bool m = atoms_++ == mutate_at_;
    mutated_ = mutated_ || m;
    return m;
  }

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  std::mt19937 rng_;
  std::vector<std::string> vars_;
  int atoms_ = 0, mutate_at_ = -1;
  bool mutated_ = false;
};

} // namespace fuzz
