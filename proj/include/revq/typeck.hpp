#ifndef REVQ_TYPECK_HPP
#define REVQ_TYPECK_HPP

#include <map>
#include <set>

#include "revq/ast.hpp"
#include "revq/parser.hpp"

namespace revq {

// Typing context: a linear term context (every binding must be consumed
// exactly once) and a non-linear iso context (classical dialect only).
struct Context {
  std::vector<std::pair<std::string, TypePtr>> linear;
  std::vector<std::pair<std::string, IsoTypePtr>> isos;

  const TypePtr* lookup_linear(const std::string& n) const;
  const IsoTypePtr* lookup_iso(const std::string& n) const;
};

// Inferred ground types of fix nodes, needed to materialize Omega when a
// bounded unfolding runs out.
using FixTypes = std::map<const Iso*, IsoTypePtr>;

// Derive the linear context bound by a clause pattern against a type.
std::vector<std::pair<std::string, TypePtr>> bind_pattern(const TermPtr& pat, const TypePtr& ty,
                                                          Dialect dialect);

// Term checking. `typecheck_term` infers where the syntax determines the type
// (variables, unit, naturals, pairs, applications); injections need the
// checking entry point. Both enforce exact linear consumption of the context.
TypePtr typecheck_term(const Context& ctx, const TermPtr& t, Dialect dialect,
                       FixTypes* fix_types = nullptr);
void typecheck_term_at(const Context& ctx, const TermPtr& t, const TypePtr& ty, Dialect dialect,
                       FixTypes* fix_types = nullptr);

// Iso typing. Clause sets and fix binders draw their type from annotations
// (or the enclosing checking position).
IsoTypePtr typecheck_iso(const Context& ctx, const IsoPtr& w, Dialect dialect,
                         FixTypes* fix_types = nullptr);
void typecheck_iso_at(const Context& ctx, const IsoPtr& w, const IsoTypePtr& ty, Dialect dialect,
                      FixTypes* fix_types = nullptr);

// Check every declaration of a program at its declared type; returns the
// collected fix types.
FixTypes check_program(const SourceProgram& prog);

}  // namespace revq

#endif
