#ifndef REVQ_CEVAL_HPP
#define REVQ_CEVAL_HPP

#include "revq/ast.hpp"
#include "revq/typeck.hpp"

namespace revq {

// Result of a fueled classical evaluation. Bottom arises only from finitary
// evaluation (an exhausted nfix reduces to the empty iso, whose application
// yields bottom and propagates).
struct Outcome {
  enum class Tag { Value, Stuck, OutOfFuel, Bottom };
  Tag tag;
  TermPtr value;       // Value
  std::string site;    // Stuck: description of the stuck application
  long steps = 0;      // steps consumed
};

// One reduction step at the iso level (fix unfolding, beta, head congruence).
// Returns nullptr when the iso is already an iso value (clauses or lambda).
IsoPtr step_iso(const IsoPtr& w, const FixTypes* fix_types = nullptr);

// One term-level step (drives eval; exposed for step-by-step audits).
struct StepOutcome {
  enum class Tag { Stepped, IsValue, Stuck, Bottom };
  Tag tag;
  TermPtr next;
  std::string site;
};
StepOutcome step_term_once(const TermPtr& t, bool finitary = false,
                           const FixTypes* fix_types = nullptr);

// Deterministic small-step evaluation, up to `fuel` steps.
Outcome eval(const TermPtr& t, long fuel, const FixTypes* fix_types = nullptr);

// Replace every fix by a depth-bounded nfix. The input must have been type
// checked with the given FixTypes so each unfolding limit knows its type.
IsoPtr finitize(const IsoPtr& w, int n, const FixTypes& fix_types);
TermPtr finitize(const TermPtr& t, int n, const FixTypes& fix_types);

// Finitary evaluation: always terminates, no fuel needed.
Outcome eval_finitary(const TermPtr& t, const FixTypes* fix_types = nullptr);

// Number of redex positions admitted by the congruence contexts; exactly one
// for every well-typed non-value configuration (forward determinism).
int count_redexes(const TermPtr& t);

// Syntactic inversion of a classical iso: clause sides swap and their let
// chains run backwards. Bound terms must be iso applications to variable
// tuples (as in the expression grammar), otherwise not-invertible is raised.
IsoPtr invert_iso(const IsoPtr& w);

// Substitution of an iso variable (used by fix unfolding and beta).
IsoPtr subst_iso_var(const IsoPtr& w, const std::string& name, const IsoPtr& repl);
TermPtr subst_iso_var(const TermPtr& t, const std::string& name, const IsoPtr& repl);

}  // namespace revq

#endif
