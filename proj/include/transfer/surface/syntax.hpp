// Surface :: pre-terms, commands, scripts

#ifndef TRANSFER_SURFACE_SYNTAX_HPP_
#define TRANSFER_SURFACE_SYNTAX_HPP_

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "transfer/kernel/term.hpp"

namespace tk::surface {

struct Position {
  int line = 1;
  int column = 1;
};

std::string to_string(const Position& pos);

// Lexing or parsing failure.
struct SyntaxError : public std::runtime_error {
  SyntaxError(const std::string& msg, Position pos_)
      : std::runtime_error(to_string(pos_) + ": " + msg), pos(pos_) {}
  Position pos;
};

struct PreTerm;
using PreTermPtr = std::shared_ptr<const PreTerm>;

struct PreBinder {
  std::string name;
  PreTermPtr type;  // null when omitted
  Position pos;
};

// Name-based term as written, before resolution and elaboration.
struct PreTerm {
  enum class Kind {
    Ident,       // name, explicit_args when written @name
    Sort,        // sort
    App,         // lhs applied to rhs
    Lambda,      // binders, body
    Pi,          // binders, body
    Arrow,       // lhs -> rhs
    Eq,          // lhs = rhs
    Respectful,  // lhs ##> rhs
    Inv,         // lhs^-1
  };
  Kind kind;
  Position pos;
  std::string name;
  bool explicit_args = false;
  Sort sort = Sort::Prop;
  PreTermPtr lhs, rhs;
  std::vector<PreBinder> binders;
  PreTermPtr body;
};

enum class TacticKind { ExactModulo, TransferModulo };

std::string_view tactic_name(TacticKind k);

struct ParameterCmd {
  std::vector<std::string> names;
  PreTermPtr type;
};
struct AxiomCmd {
  std::string name;
  PreTermPtr statement;
};
struct DefinitionCmd {
  std::string name;
  std::vector<PreBinder> binders;
  PreTermPtr type;  // may be null
  PreTermPtr body;
};
struct DeclareSurjectionCmd {
  std::string f, g, proof;
};
struct DeclareTransferCmd {
  std::string lemma;
};
struct DeclareRelationCmd {
  std::string lemma;
};
struct TheoremCmd {
  std::string name;
  PreTermPtr statement;
  TacticKind tactic;
  std::string source;
};

struct Command {
  std::variant<ParameterCmd, AxiomCmd, DefinitionCmd, DeclareSurjectionCmd, DeclareTransferCmd,
               DeclareRelationCmd, TheoremCmd>
      node;
  Position pos;
};

struct Script {
  std::vector<Command> commands;
};

PreTermPtr parse_term(std::string_view input);
Script parse_script(std::string_view input);

} // namespace tk::surface

#endif // TRANSFER_SURFACE_SYNTAX_HPP_
