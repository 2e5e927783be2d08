#include <cctype>
#include <optional>

#include "transfer/surface/syntax.hpp"

namespace tk::surface {

std::string to_string(const Position& pos) {
  return std::to_string(pos.line) + ":" + std::to_string(pos.column);
}

std::string_view tactic_name(TacticKind k) {
  return k == TacticKind::ExactModulo ? "exact modulo" : "transfer modulo";
}

namespace {

enum class Tok {
  Ident,
  LParen,
  RParen,
  Colon,
  Comma,
  ColonEq,
  DArrow,   // =>
  Arrow,    // -> or U+2192
  Equal,
  Resp,     // ##>
  InvSup,   // U+207B U+00B9
  At,
  Dot,
  Forall,   // forall or U+2200
  Lambda,   // fun or U+03BB
  Eof,
};

struct Token {
  Tok kind;
  std::string text;
  Position pos;
};

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_'; }
bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '\''; }

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space_and_comments();
      Position pos = pos_;
      if (i_ >= src_.size()) {
        out.push_back({Tok::Eof, "", pos});
        return out;
      }
      out.push_back(next(pos));
    }
  }

private:
  bool starts(std::string_view s) const { return src_.substr(i_, s.size()) == s; }

  void advance(std::size_t n) {
    for (std::size_t k = 0; k < n && i_ < src_.size(); ++k) {
      unsigned char c = static_cast<unsigned char>(src_[i_++]);
      if (c == '\n') {
        ++pos_.line;
        pos_.column = 1;
      } else if ((c & 0xC0) != 0x80) {
        ++pos_.column;
      }
    }
  }

  void skip_space_and_comments() {
    for (;;) {
      while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) advance(1);
      if (!starts("(*")) return;
      Position open = pos_;
      int depth = 0;
      do {
        if (i_ >= src_.size()) throw SyntaxError("unterminated comment", open);
        if (starts("(*")) {
          ++depth;
          advance(2);
        } else if (starts("*)")) {
          --depth;
          advance(2);
        } else {
          advance(1);
        }
      } while (depth > 0);
    }
  }

  Token next(Position pos) {
    struct Sym {
      std::string_view text;
      Tok kind;
    };
    static const Sym symbols[] = {
        {"##>", Tok::Resp}, {":=", Tok::ColonEq}, {"=>", Tok::DArrow}, {"->", Tok::Arrow},
        {"→", Tok::Arrow}, {"∀", Tok::Forall}, {"λ", Tok::Lambda},
        {"⁻¹", Tok::InvSup}, {"(", Tok::LParen}, {")", Tok::RParen}, {":", Tok::Colon},
        {",", Tok::Comma}, {"=", Tok::Equal}, {"@", Tok::At},
    };
    for (const Sym& s : symbols) {
      if (starts(s.text)) {
        advance(s.text.size());
        return {s.kind, std::string(s.text), pos};
      }
    }
    unsigned char c = static_cast<unsigned char>(src_[i_]);
    if (c == '.') {
      advance(1);
      return {Tok::Dot, ".", pos};
    }
    if (ident_start(c)) {
      std::size_t start = i_;
      for (;;) {
        while (i_ < src_.size() && ident_char(static_cast<unsigned char>(src_[i_]))) advance(1);
        // qualified names such as N.le: a dot glued to a following identifier
        if (i_ + 1 < src_.size() && src_[i_] == '.' && ident_start(static_cast<unsigned char>(src_[i_ + 1]))) {
          advance(1);
          continue;
        }
        break;
      }
      std::string text(src_.substr(start, i_ - start));
      if (text == "forall") return {Tok::Forall, text, pos};
      if (text == "fun") return {Tok::Lambda, text, pos};
      return {Tok::Ident, text, pos};
    }
    if (c == '#' || c == '-' || c == '*')
      throw SyntaxError("unknown token '" + std::string(1, static_cast<char>(c)) + "'", pos);
    std::size_t len = 1;
    while (i_ + len < src_.size() && (static_cast<unsigned char>(src_[i_ + len]) & 0xC0) == 0x80) ++len;
    throw SyntaxError("unknown token '" + std::string(src_.substr(i_, len)) + "'", pos);
  }

  std::string_view src_;
  std::size_t i_ = 0;
  Position pos_;
};

PreTerm node(PreTerm::Kind kind, Position pos) {
  PreTerm t;
  t.kind = kind;
  t.pos = pos;
  return t;
}

PreTermPtr make(PreTerm t) { return std::make_shared<const PreTerm>(std::move(t)); }

PreTermPtr binary(PreTerm::Kind kind, Position pos, PreTermPtr lhs, PreTermPtr rhs) {
  PreTerm t = node(kind, pos);
  t.lhs = std::move(lhs);
  t.rhs = std::move(rhs);
  return make(std::move(t));
}

class Parser {
public:
  explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

  PreTermPtr whole_term() {
    PreTermPtr t = term();
    if (peek().kind != Tok::Eof) error("unexpected '" + peek().text + "' after term");
    return t;
  }

  Script script() {
    Script s;
    while (peek().kind != Tok::Eof) s.commands.push_back(command());
    return s;
  }

private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  Token take() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    take();
    return true;
  }
  [[noreturn]] void error(const std::string& msg) const { throw SyntaxError(msg, peek().pos); }
  Token expect(Tok k, const char* what) {
    if (peek().kind != k) {
      if (peek().kind == Tok::Eof) error(std::string("expected ") + what + ", reached end of input");
      error(std::string("expected ") + what + ", found '" + peek().text + "'");
    }
    return take();
  }
  bool at_keyword(std::string_view kw) const { return peek().kind == Tok::Ident && peek().text == kw; }
  void expect_keyword(std::string_view kw) {
    if (!at_keyword(kw)) error("expected '" + std::string(kw) + "'");
    take();
  }
  std::string ident(const char* what) { return expect(Tok::Ident, what).text; }

  // term := binder_term | arrow_expr
  PreTermPtr term() {
    if (peek().kind == Tok::Forall || peek().kind == Tok::Lambda) return binder_term();
    return arrow_expr();
  }

  PreTermPtr binder_term() {
    Token head = take();
    bool is_lambda = head.kind == Tok::Lambda;
    PreTerm t = node(is_lambda ? PreTerm::Kind::Lambda : PreTerm::Kind::Pi, head.pos);
    t.binders = binders(true);
    if (t.binders.empty()) error("expected a binder");
    if (is_lambda) {
      if (!accept(Tok::DArrow)) expect(Tok::Comma, "',' or '=>'");
    } else {
      expect(Tok::Comma, "','");
    }
    t.body = term();
    return make(std::move(t));
  }

  // binders := ident+ [: term] | ( ident+ : term )+
  std::vector<PreBinder> binders(bool allow_bare_type) {
    std::vector<PreBinder> out;
    if (peek().kind == Tok::LParen) {
      while (peek().kind == Tok::LParen) {
        take();
        std::vector<PreBinder> group;
        while (peek().kind == Tok::Ident) {
          Token n = take();
          group.push_back({n.text, nullptr, n.pos});
        }
        if (group.empty()) error("expected a binder name");
        expect(Tok::Colon, "':'");
        PreTermPtr ty = term();
        expect(Tok::RParen, "')'");
        for (auto& b : group) b.type = ty;
        out.insert(out.end(), group.begin(), group.end());
      }
      return out;
    }
    while (peek().kind == Tok::Ident) {
      Token n = take();
      out.push_back({n.text, nullptr, n.pos});
    }
    if (allow_bare_type && !out.empty() && accept(Tok::Colon)) {
      // type ends at the binder's ',' or '=>'
      PreTermPtr ty = arrow_expr();
      for (auto& b : out) b.type = ty;
    }
    return out;
  }

  PreTermPtr arrow_expr() {
    PreTermPtr lhs = eq_expr();
    Position pos = peek().pos;
    if (accept(Tok::Arrow)) return binary(PreTerm::Kind::Arrow, pos, lhs, term());
    return lhs;
  }

  PreTermPtr eq_expr() {
    PreTermPtr lhs = resp_expr();
    Position pos = peek().pos;
    if (accept(Tok::Equal)) return binary(PreTerm::Kind::Eq, pos, lhs, resp_expr());
    return lhs;
  }

  PreTermPtr resp_expr() {
    PreTermPtr lhs = app_expr();
    Position pos = peek().pos;
    if (accept(Tok::Resp)) return binary(PreTerm::Kind::Respectful, pos, lhs, resp_expr());
    return lhs;
  }

  bool atom_start() const {
    switch (peek().kind) {
      case Tok::Ident:
      case Tok::LParen:
      case Tok::At: return true;
      default: return false;
    }
  }
  PreTermPtr app_expr() {
    PreTermPtr fn = postfix_expr();
    while (atom_start()) {
      Position pos = peek().pos;
      fn = binary(PreTerm::Kind::App, pos, fn, postfix_expr());
    }
    return fn;
  }

  PreTermPtr postfix_expr() {
    PreTermPtr t = atom();
    while (peek().kind == Tok::InvSup) {
      PreTerm inv = node(PreTerm::Kind::Inv, take().pos);
      inv.lhs = t;
      t = make(std::move(inv));
    }
    return t;
  }

  PreTermPtr atom() {
    Token tok = peek();
    switch (tok.kind) {
      case Tok::LParen: {
        take();
        PreTermPtr t = term();
        expect(Tok::RParen, "')'");
        return t;
      }
      case Tok::At: {
        take();
        Token n = expect(Tok::Ident, "identifier after '@'");
        PreTerm t = node(PreTerm::Kind::Ident, tok.pos);
        t.name = n.text;
        t.explicit_args = true;
        return make(std::move(t));
      }
      case Tok::Ident: {
        take();
        if (tok.text == "Prop" || tok.text == "Set" || tok.text == "Type") {
          PreTerm t = node(PreTerm::Kind::Sort, tok.pos);
          t.sort = tok.text == "Prop" ? Sort::Prop : tok.text == "Set" ? Sort::Set : Sort::Type;
          return make(std::move(t));
        }
        PreTerm t = node(PreTerm::Kind::Ident, tok.pos);
        t.name = tok.text;
        return make(std::move(t));
      }
      case Tok::RParen: error("unbalanced ')'");
      case Tok::Eof: error("expected a term, reached end of input");
      default: error("expected a term, found '" + tok.text + "'");
    }
  }

  Command command() {
    Token kw = peek();
    if (kw.kind != Tok::Ident) error("expected a command, found '" + kw.text + "'");
    take();
    Command cmd{.node = ParameterCmd{}, .pos = kw.pos};
    const std::string& k = kw.text;
    if (k == "Parameter" || k == "Parameters") {
      ParameterCmd p;
      while (peek().kind == Tok::Ident) p.names.push_back(take().text);
      if (p.names.empty()) error("expected parameter names");
      expect(Tok::Colon, "':'");
      p.type = term();
      cmd.node = std::move(p);
    } else if (k == "Axiom") {
      AxiomCmd a;
      a.name = ident("axiom name");
      expect(Tok::Colon, "':'");
      a.statement = term();
      cmd.node = std::move(a);
    } else if (k == "Definition") {
      DefinitionCmd d;
      d.name = ident("definition name");
      d.binders = binders(false);
      if (accept(Tok::Colon)) d.type = term();
      expect(Tok::ColonEq, "':='");
      d.body = term();
      cmd.node = std::move(d);
    } else if (k == "Theorem" || k == "Lemma") {
      cmd.node = theorem();
      return cmd;
    } else if (k == "Declare") {
      Token what = expect(Tok::Ident, "'Surjection', 'Transfer' or 'Relation'");
      if (what.text == "Surjection") {
        DeclareSurjectionCmd s;
        s.f = ident("surjection function");
        expect_keyword("by");
        expect(Tok::LParen, "'('");
        s.g = ident("right-inverse");
        expect(Tok::Comma, "','");
        s.proof = ident("surjectivity proof");
        expect(Tok::RParen, "')'");
        cmd.node = std::move(s);
      } else if (what.text == "Transfer") {
        cmd.node = DeclareTransferCmd{ident("transfer lemma")};
      } else if (what.text == "Relation") {
        cmd.node = DeclareRelationCmd{ident("relation lemma")};
      } else {
        throw SyntaxError("unknown declaration 'Declare " + what.text + "'", what.pos);
      }
    } else {
      throw SyntaxError("unknown command '" + k + "'", kw.pos);
    }
    expect(Tok::Dot, "'.' ending the command");
    return cmd;
  }

  // Theorem name binders : stmt. [Proof.] (exact|transfer) modulo src. Qed.
  TheoremCmd theorem() {
    TheoremCmd t;
    Position name_pos = peek().pos;
    t.name = ident("theorem name");
    std::vector<PreBinder> bs = binders(false);
    expect(Tok::Colon, "':'");
    t.statement = term();
    if (!bs.empty()) {
      PreTerm pi = node(PreTerm::Kind::Pi, name_pos);
      pi.binders = std::move(bs);
      pi.body = t.statement;
      t.statement = make(std::move(pi));
    }
    expect(Tok::Dot, "'.' ending the statement");
    if (at_keyword("Proof")) {
      take();
      expect(Tok::Dot, "'.' after Proof");
    }
    if (at_keyword("exact")) {
      t.tactic = TacticKind::ExactModulo;
    } else if (at_keyword("transfer")) {
      t.tactic = TacticKind::TransferModulo;
    } else {
      error("expected 'exact modulo' or 'transfer modulo'");
    }
    take();
    expect_keyword("modulo");
    t.source = ident("source theorem");
    expect(Tok::Dot, "'.' after the tactic");
    if (!at_keyword("Qed") && !at_keyword("Defined")) error("expected 'Qed'");
    take();
    expect(Tok::Dot, "'.' after Qed");
    return t;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

} // namespace

PreTermPtr parse_term(std::string_view input) { return Parser(input).whole_term(); }

Script parse_script(std::string_view input) { return Parser(input).script(); }

} // namespace tk::surface
