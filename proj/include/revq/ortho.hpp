#ifndef REVQ_ORTHO_HPP
#define REVQ_ORTHO_HPP

#include "revq/ast.hpp"

namespace revq {

// Decision procedure for the orthogonality relation. Quantum: syntax-directed
// over injections, zero/suc, pair congruence, identical-iso application and
// the two linear-combination rules (matched coefficients must have vanishing
// inner product). Classical: congruence through inl/inr/fold/pairs, looking
// through let bodies.
bool orthogonal(const TermPtr& t1, const TermPtr& t2, Dialect dialect);

enum class ODKind { Basis, Extended };

struct ODSet {
  TypePtr type;
  std::vector<TermPtr> elements;
  ODKind kind = ODKind::Basis;
};

// True iff the set is a derivable orthogonal decomposition of `type`.
// Basis kind: elements must be basis values; Extended kind additionally
// admits one unitary change of basis, detected after canonicalizing each
// element (elements are padded with zero scalars onto the common support
// before the coefficient matrix is extracted and tested for unitarity).
bool check_od(const TypePtr& type, const std::vector<TermPtr>& S, ODKind kind);

// One summand of a decomposition: e == canonicalize(sum of coef * val(element)).
struct DecompItem {
  Complex coef;
  size_t index;      // position in the ODSet's element list
  TermPtr element;   // canonical form of that element
  Valuation val;
};

// Decompose a closed App/Let-free expression over a valid Extended OD by
// structural recursion on the decomposition; the change-of-basis case
// inverts the coefficient matrix with its conjugate transpose.
std::vector<DecompItem> decompose(const ODSet& od, const TermPtr& e);

// Canonical form of an App/Let-free expression: either a basis value or a
// sorted flat sum of basis values.
TermPtr canonicalize_expression(const TermPtr& e);

}  // namespace revq

#endif
