#ifndef REVQ_PARSER_HPP
#define REVQ_PARSER_HPP

#include <optional>
#include <string>
#include <vector>

#include "revq/ast.hpp"

namespace revq {

// A parsed source file: ordered declarations plus an optional entry term
// (a `def main = ...` declaration). Iso names are resolved at parse time
// against prior declarations and enclosing binders; the resolved bodies are
// inlined, so the evaluators never see free declaration names.
struct Decl {
  std::string name;
  bool is_iso = false;
  IsoPtr iso;           // when is_iso
  IsoTypePtr iso_type;  // declared annotation (when is_iso)
  TermPtr term;         // otherwise
  int line = -1, col = -1;
};

struct SourceProgram {
  Dialect dialect = Dialect::Quantum;
  std::vector<Decl> decls;

  const Decl* find(const std::string& name) const;
  // Last iso declaration, or the one named `name` when non-empty.
  const Decl* pick_iso(const std::string& name = "") const;
  std::optional<TermPtr> entry() const;  // body of `def main`
};

SourceProgram parse(const std::string& text, Dialect dialect);
// Convenience entry points for fragments (used by tests and the CLI).
TermPtr parse_term(const std::string& text, Dialect dialect);
TypePtr parse_type(const std::string& text, Dialect dialect);
IsoTypePtr parse_isotype(const std::string& text, Dialect dialect);

// Deterministic printers; parse(pretty(x)) is alpha-equivalent to x.
// `precision` controls significant digits of scalars.
std::string pretty(const TermPtr& t, int precision = 17);
std::string pretty(const IsoPtr& w, int precision = 17);
std::string pretty(const TypePtr& t);
std::string pretty(const IsoTypePtr& t);
std::string pretty_program(const SourceProgram& p, int precision = 17);

}  // namespace revq

#endif
