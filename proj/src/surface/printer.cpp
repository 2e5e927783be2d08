#include "transfer/surface/printer.hpp"

#include <unordered_set>

#include "transfer/kernel/prelude.hpp"
#include "transfer/surface/elaborate.hpp"

namespace tk::surface {

namespace {

// Precedence levels, loosest first.
enum Level : int { kBinder = 0, kArrow = 1, kEq = 2, kResp = 3, kApp = 4, kPostfix = 5, kAtom = 6 };

std::string wrap(const std::string& s, int level, int prec) {
  return level < prec ? "(" + s + ")" : s;
}

void collect_constants(const Term& t, std::unordered_set<std::string>& out) {
  switch (t.kind()) {
    case TermKind::Const: out.insert(t.name()); break;
    case TermKind::App:
      collect_constants(t.fn(), out);
      collect_constants(t.arg(), out);
      break;
    case TermKind::Lambda:
    case TermKind::Pi:
      collect_constants(t.binder_type(), out);
      collect_constants(t.body(), out);
      break;
    default: break;
  }
}

std::string display_constant(const std::string& name) {
  if (name.empty()) return name;
  if (name[0] == '\x02') return "?" + name.substr(1);  // elaboration hole
  if (name[0] == '\x01') {                             // builder placeholder
    auto colon = name.find(':');
    return colon == std::string::npos ? name.substr(1) : name.substr(colon + 1);
  }
  return name;
}

bool keyword(const std::string& n) {
  static const std::unordered_set<std::string> kws = {"forall", "fun", "Prop", "Set", "Type"};
  return kws.count(n) > 0;
}

class Printer {
public:
  Printer(const Term& root, const GlobalEnv* env, const LocalContext* ctx) : env_(env) {
    collect_constants(root, consts_);
    if (ctx) {
      ctx_ = *ctx;
      for (const ContextEntry& e : ctx->entries()) names_.push_back(e.name);
    }
  }

  std::string print(const Term& t, int prec) {
    switch (t.kind()) {
      case TermKind::Sort: return std::string(sort_name(t.sort_tag()));
      case TermKind::Var: {
        if (t.index() < names_.size()) return names_[names_.size() - 1 - t.index()];
        return "#" + std::to_string(t.index() - names_.size());
      }
      case TermKind::Const: {
        std::string n = display_constant(t.name());
        return implicit_arguments(t.name()) > 0 ? "@" + n : n;
      }
      case TermKind::App: return print_app(t, prec);
      case TermKind::Lambda:
      case TermKind::Pi: return print_binder(t, prec);
    }
    return "?";
  }

private:
  bool clashes(const std::string& n, const Term& body) const {
    if (keyword(n) || consts_.count(n)) return true;
    for (std::size_t j = 0; j < names_.size(); ++j) {
      if (names_[j] != n) continue;
      auto idx = static_cast<std::uint32_t>(names_.size() - 1 - j) + 1;
      if (has_var(body, idx)) return true;
    }
    return false;
  }

  bool in_scope(const std::string& n) const {
    for (const auto& s : names_)
      if (s == n) return true;
    return false;
  }

  // Name for a binder whose body is body.
  std::string pick(const std::string& display, const Term& body) {
    bool used = has_var(body, 0);
    std::string base = display_constant(display);
    if (base.empty() || base == "_") {
      if (!used) return "_";
      base = "x";
    }
    if (!clashes(base, body)) return base;
    for (int k = 0;; ++k) {
      std::string cand = base + std::to_string(k);
      if (!keyword(cand) && !consts_.count(cand) && !in_scope(cand)) return cand;
    }
  }

  void push(const std::string& name, const Term& type) {
    names_.push_back(name);
    ctx_.push(name, type);
  }
  void pop() {
    names_.pop_back();
    ctx_.pop();
  }

  std::string print_binder(const Term& t, int prec) {
    if (t.is_pi() && !has_var(t.body(), 0) && (t.name().empty() || t.name() == "_")) {
      std::string lhs = print(t.binder_type(), kEq);
      push("_", t.binder_type());
      std::string rhs = print(t.body(), kBinder);
      pop();
      return wrap(lhs + " → " + rhs, kArrow, prec);
    }
    const bool lambda = t.is_lambda();
    const Term& type = t.binder_type();
    std::string type_str = print(type, kArrow);
    std::string out = lambda ? "λ" : "∀";
    Term cur = t;
    std::size_t pushed = 0;
    for (;;) {
      std::string n = pick(cur.name(), cur.body());
      out += " " + n;
      push(n, cur.binder_type());
      ++pushed;
      const Term& next = cur.body();
      bool same_kind = lambda ? next.is_lambda() : (next.is_pi() && next.name() != "_");
      if (!same_kind || !(next.binder_type() == lift(type, static_cast<std::uint32_t>(pushed))))
        break;
      cur = next;
    }
    out += " : " + type_str + ", " + print(cur.body(), kBinder);
    for (; pushed > 0; --pushed) pop();
    return wrap(out, kBinder, prec);
  }

  bool reproduces(const std::string& text, const Term& t) const {
    try {
      return elaborate(*env_, ctx_, parse_term(text)).term == t;
    } catch (const std::exception&) {
      return false;
    }
  }

  std::string print_app(const Term& t, int prec) {
    Spine sp = unfold_app(t);
    if (sp.head.is_const()) {
      const std::string& c = sp.head.name();
      std::size_t need = c == prelude::kEq ? 3 : c == prelude::kInv ? 3 : c == prelude::kRespectful ? 6 : 0;
      if (env_ && need > 0 && sp.args.size() >= need) {
        std::string s;
        int level;
        if (c == prelude::kEq) {
          s = print(sp.args[1], kResp) + " = " + print(sp.args[2], kResp);
          level = kEq;
        } else if (c == prelude::kInv) {
          s = print(sp.args[2], kPostfix) + "⁻¹";
          level = kPostfix;
        } else {
          s = print(sp.args[4], kApp) + " ##> " + print(sp.args[5], kResp);
          level = kResp;
        }
        if (sp.args.size() > need) {
          s = wrap(s, level, kApp);
          for (std::size_t i = need; i < sp.args.size(); ++i) s += " " + print(sp.args[i], kPostfix);
          level = kApp;
        }
        if (reproduces(s, t)) return wrap(s, level, prec);
      }
    }
    std::string s = print(sp.head, kApp);
    for (const Term& a : sp.args) s += " " + print(a, kPostfix);
    return wrap(s, kApp, prec);
  }

  const GlobalEnv* env_;
  LocalContext ctx_;
  std::vector<std::string> names_;
  std::unordered_set<std::string> consts_;
};

} // namespace

std::string print_term(const Term& t, const GlobalEnv* env, const LocalContext* ctx) {
  if (!t) return "<null>";
  return Printer(t, env, ctx).print(t, kBinder);
}

} // namespace tk::surface
