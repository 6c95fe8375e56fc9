#ifndef REVQ_QEVAL_HPP
#define REVQ_QEVAL_HPP

#include <optional>

#include "revq/ast.hpp"
#include "revq/ortho.hpp"

namespace revq {

// Canonical value form of a closed well-typed quantum term: a flat linear
// combination of strictly increasing basis values with nonzero scalars.
struct NormalValue {
  std::vector<std::pair<Complex, TermPtr>> parts;

  TermPtr to_term() const;  // bare value when a single ~1 scalar remains
  double norm2() const;
};

// Matching of a closed basis value against a basis-value pattern. Returns the
// least valuation, or nullopt iff the two are orthogonal. Overlapping
// variable supports in the pattern raise malformed-input.
std::optional<Valuation> match_value(const TermPtr& pattern, const TermPtr& subject);

// Normalization to the unique value normal form (innermost-first: arguments
// are normalized, applications distribute over sums, combinators fire on
// basis values, the result is canonicalized).
NormalValue normalize(const TermPtr& t);

// Forward application of an iso to an already-normalized value.
NormalValue apply_iso(const IsoPtr& w, const NormalValue& v);

// Inverse application: combinators invert structurally; the inverse of a
// clause set applied to v decomposes normalize(v) over the clause outputs and
// recombines the matching patterns.
NormalValue apply_inverse(const IsoPtr& w, const TermPtr& v);

// Decidable equality of closed well-typed terms at a common type.
bool equal_terms(const TermPtr& t1, const TermPtr& t2);

}  // namespace revq

#endif
