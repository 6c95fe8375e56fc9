#ifndef REVQ_AST_HPP
#define REVQ_AST_HPP

#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "revq/scalar.hpp"

namespace revq {

enum class Dialect { Quantum, Classical };

struct Type;
struct Term;
struct Iso;
struct IsoType;
using TypePtr = std::shared_ptr<const Type>;
using TermPtr = std::shared_ptr<const Term>;
using IsoPtr = std::shared_ptr<const Iso>;
using IsoTypePtr = std::shared_ptr<const IsoType>;

// ---------------------------------------------------------------------------
// Ground types. Quantum dialect: Unit, Sum, Tensor, Nat.
// Classical dialect: Unit, Sum, Tensor, Mu, Var (closed in judgements).
struct Type {
  enum class Tag { Unit, Sum, Tensor, Nat, Mu, Var };
  Tag tag;
  TypePtr lhs, rhs;  // Sum, Tensor
  std::string name;  // Mu binder, Var
  TypePtr body;      // Mu
};

TypePtr ty_unit();
TypePtr ty_sum(TypePtr a, TypePtr b);
TypePtr ty_tensor(TypePtr a, TypePtr b);
TypePtr ty_nat();
TypePtr ty_mu(std::string var, TypePtr body);
TypePtr ty_var(std::string name);

// Classical encodings: nat = mu X. I + X, [A] = mu X. I + (A * X).
TypePtr ty_nat_rec();
TypePtr ty_list(TypePtr elem);
TypePtr ty_bool();  // I + I

bool type_equal(const TypePtr& a, const TypePtr& b);  // up to alpha
bool type_closed(const TypePtr& t);
TypePtr type_subst(const TypePtr& body, const std::string& var, const TypePtr& repl);
TypePtr mu_unfold(const TypePtr& mu);  // A[mu X. A / X]
std::string show_type(const TypePtr& t);

// ---------------------------------------------------------------------------
// Iso types: ground A <-> B, classical arrows T1 -> T2.
struct IsoType {
  enum class Tag { Ground, Arrow };
  Tag tag;
  TypePtr src, dst;      // Ground
  IsoTypePtr from, to;   // Arrow
};

IsoTypePtr it_ground(TypePtr a, TypePtr b);
IsoTypePtr it_arrow(IsoTypePtr f, IsoTypePtr t);
bool isotype_equal(const IsoTypePtr& a, const IsoTypePtr& b);
IsoTypePtr isotype_invert(const IsoTypePtr& t);  // A<->B becomes B<->A, arrows map
std::string show_isotype(const IsoTypePtr& t);

// ---------------------------------------------------------------------------
// Terms. One tree for both dialects; dialect legality is enforced by the
// parser and re-checked by the type checker.
struct Term {
  enum class Tag { Unit, Var, InL, InR, Pair, Zero, Suc, Fold, App, Let, Sum };
  Tag tag;
  std::string name;                                // Var
  TermPtr a, b;                                    // child / pair / Let bound+body
  IsoPtr iso;                                      // App
  std::vector<std::string> pattern;                // Let: flat tuple of names
  std::vector<std::pair<Complex, TermPtr>> parts;  // Sum
  int line = -1, col = -1;
};

TermPtr mk_unit();
TermPtr mk_var(std::string name);
TermPtr mk_inl(TermPtr t);
TermPtr mk_inr(TermPtr t);
TermPtr mk_pair(TermPtr a, TermPtr b);
TermPtr mk_zero();
TermPtr mk_suc(TermPtr t);
TermPtr mk_fold(TermPtr t);
TermPtr mk_app(IsoPtr iso, TermPtr arg);
TermPtr mk_let(std::vector<std::string> pattern, TermPtr bound, TermPtr body);
TermPtr mk_sum(std::vector<std::pair<Complex, TermPtr>> parts);
TermPtr with_pos(TermPtr t, int line, int col);

// Classical sugar: numerals and lists over the mu encodings.
TermPtr mk_nat_rec(unsigned n);                    // fold-encoded numeral
TermPtr mk_nat_q(unsigned n);                      // suc^n zero
TermPtr mk_list(const std::vector<TermPtr>& xs);   // fold-encoded list
TermPtr mk_cons(TermPtr h, TermPtr t);
TermPtr mk_nil();
TermPtr mk_tt();
TermPtr mk_ff();

// ---------------------------------------------------------------------------
// Isos. Quantum combinators and the classical higher-order forms share the
// tree; Omega is an empty clause set (annotated) or a lambda over one.
struct Iso {
  enum class Tag { Clauses, Tensor, SumC, Compose, Inverse, Ctrl, Lambda, Var, App, Fix, NFix };
  Tag tag;
  std::vector<std::pair<TermPtr, TermPtr>> clauses;  // Clauses (lhs <-> rhs)
  IsoPtr a, b;        // combinators; Compose: a then b; App: a = fn, b = arg
  std::string name;   // Var, binder of Lambda/Fix/NFix
  int n = 0;          // NFix depth
  IsoTypePtr ann;     // optional annotation: Clauses, Fix/NFix binder type
  IsoTypePtr param_ann;  // Lambda parameter type
  int line = -1, col = -1;
};

IsoPtr iso_clauses(std::vector<std::pair<TermPtr, TermPtr>> clauses, IsoTypePtr ann = nullptr);
IsoPtr iso_tensor(IsoPtr a, IsoPtr b);
IsoPtr iso_sum(IsoPtr a, IsoPtr b);
IsoPtr iso_compose(IsoPtr first, IsoPtr then);
IsoPtr iso_inverse(IsoPtr a);
IsoPtr iso_ctrl(IsoPtr a);
IsoPtr iso_lambda(std::string var, IsoTypePtr param, IsoPtr body);
IsoPtr iso_var(std::string name);
IsoPtr iso_app(IsoPtr fn, IsoPtr arg);
IsoPtr iso_fix(std::string var, IsoPtr body, IsoTypePtr ann = nullptr);
IsoPtr iso_nfix(int n, std::string var, IsoPtr body, IsoTypePtr ann);
IsoPtr make_omega(const IsoTypePtr& t);  // {| } at ground, lambda-wrapped at arrows

// ---------------------------------------------------------------------------
// Basis values and the canonical total order.
// A basis value contains no App, Let or Sum node.
bool is_basis_value(const TermPtr& t);
// Classical values additionally admit Fold; no Sum/App/Let.
bool is_classical_value(const TermPtr& t);

// Total order on basis values. Constructor precedence:
//   Unit < Var(by name) < Zero < Suc < InL < InR < Pair < Fold,
// recursing lexicographically. Throws malformed-input on non-basis input.
int compare_basis(const TermPtr& a, const TermPtr& b);

// Exact syntactic equality (scalars compared with tolerance).
bool term_equal(const TermPtr& a, const TermPtr& b);
bool iso_equal(const IsoPtr& a, const IsoPtr& b);
// Alpha-equivalence: Let and iso binders may be renamed.
bool term_alpha_equal(const TermPtr& a, const TermPtr& b);
bool iso_alpha_equal(const IsoPtr& a, const IsoPtr& b);

// Flatten nested sums, merge equal basis values, drop ~0 scalars, sort by
// compare_basis; a single part with scalar ~1 collapses to the bare value.
TermPtr canonicalize_sum(const std::vector<std::pair<Complex, TermPtr>>& parts);

// Rewrite a closed App/Let-free expression into its canonical combination of
// basis values (pushing constructors through sums).
std::vector<std::pair<Complex, TermPtr>> combination_of_expression(const TermPtr& e);

std::set<std::string> free_vars(const TermPtr& t);

// ---------------------------------------------------------------------------
// Valuations: finite maps from variables to closed terms.
using Valuation = std::map<std::string, TermPtr>;

// Homomorphic substitution; every free variable of t must be bound.
TermPtr substitute(const Valuation& sigma, const TermPtr& t);

size_t term_size(const TermPtr& t);

}  // namespace revq

#endif
