#include "revq/ceval.hpp"

#include <algorithm>
#include <functional>

#include "revq/parser.hpp"

namespace revq {

// ---------------------------------------------------------------------------
// iso-variable substitution

namespace {

bool occurs_iso(const IsoPtr& w, const std::string& name);

bool occurs_term(const TermPtr& t, const std::string& name) {
  switch (t->tag) {
    case Term::Tag::InL:
    case Term::Tag::InR:
    case Term::Tag::Suc:
    case Term::Tag::Fold:
      return occurs_term(t->a, name);
    case Term::Tag::Pair:
    case Term::Tag::Let:
      return occurs_term(t->a, name) || occurs_term(t->b, name);
    case Term::Tag::App:
      return occurs_iso(t->iso, name) || occurs_term(t->a, name);
    case Term::Tag::Sum:
      for (auto& [c, u] : t->parts) {
        (void)c;
        if (occurs_term(u, name)) return true;
      }
      return false;
    default:
      return false;
  }
}

bool occurs_iso(const IsoPtr& w, const std::string& name) {
  switch (w->tag) {
    case Iso::Tag::Var:
      return w->name == name;
    case Iso::Tag::Clauses:
      for (auto& [l, r] : w->clauses) {
        (void)l;
        if (occurs_term(r, name)) return true;
      }
      return false;
    case Iso::Tag::Inverse:
    case Iso::Tag::Ctrl:
      return occurs_iso(w->a, name);
    case Iso::Tag::Tensor:
    case Iso::Tag::SumC:
    case Iso::Tag::Compose:
    case Iso::Tag::App:
      return occurs_iso(w->a, name) || occurs_iso(w->b, name);
    case Iso::Tag::Lambda:
    case Iso::Tag::Fix:
    case Iso::Tag::NFix:
      if (w->name == name) return false;
      return occurs_iso(w->a, name);
  }
  return false;
}

}  // namespace

TermPtr subst_iso_var(const TermPtr& t, const std::string& name, const IsoPtr& repl) {
  if (!occurs_term(t, name)) return t;
  switch (t->tag) {
    case Term::Tag::Unit:
    case Term::Tag::Var:
    case Term::Tag::Zero:
      return t;
    case Term::Tag::InL:
      return mk_inl(subst_iso_var(t->a, name, repl));
    case Term::Tag::InR:
      return mk_inr(subst_iso_var(t->a, name, repl));
    case Term::Tag::Suc:
      return mk_suc(subst_iso_var(t->a, name, repl));
    case Term::Tag::Fold:
      return mk_fold(subst_iso_var(t->a, name, repl));
    case Term::Tag::Pair:
      return mk_pair(subst_iso_var(t->a, name, repl), subst_iso_var(t->b, name, repl));
    case Term::Tag::App:
      return mk_app(subst_iso_var(t->iso, name, repl), subst_iso_var(t->a, name, repl));
    case Term::Tag::Let:
      return mk_let(t->pattern, subst_iso_var(t->a, name, repl),
                    subst_iso_var(t->b, name, repl));
    case Term::Tag::Sum: {
      std::vector<std::pair<Complex, TermPtr>> parts;
      for (auto& [c, u] : t->parts) parts.emplace_back(c, subst_iso_var(u, name, repl));
      return mk_sum(std::move(parts));
    }
  }
  return t;
}

IsoPtr subst_iso_var(const IsoPtr& w, const std::string& name, const IsoPtr& repl) {
  if (!occurs_iso(w, name)) return w;
  switch (w->tag) {
    case Iso::Tag::Var:
      return w->name == name ? repl : w;
    case Iso::Tag::Clauses: {
      std::vector<std::pair<TermPtr, TermPtr>> clauses;
      for (auto& [l, r] : w->clauses)
        clauses.emplace_back(l, subst_iso_var(r, name, repl));
      return iso_clauses(std::move(clauses), w->ann);
    }
    case Iso::Tag::Tensor:
      return iso_tensor(subst_iso_var(w->a, name, repl), subst_iso_var(w->b, name, repl));
    case Iso::Tag::SumC:
      return iso_sum(subst_iso_var(w->a, name, repl), subst_iso_var(w->b, name, repl));
    case Iso::Tag::Compose:
      return iso_compose(subst_iso_var(w->a, name, repl), subst_iso_var(w->b, name, repl));
    case Iso::Tag::Inverse:
      return iso_inverse(subst_iso_var(w->a, name, repl));
    case Iso::Tag::Ctrl:
      return iso_ctrl(subst_iso_var(w->a, name, repl));
    case Iso::Tag::Lambda:
      if (w->name == name) return w;  // shadowed
      return iso_lambda(w->name, w->param_ann, subst_iso_var(w->a, name, repl));
    case Iso::Tag::Fix:
      if (w->name == name) return w;
      return iso_fix(w->name, subst_iso_var(w->a, name, repl), w->ann);
    case Iso::Tag::NFix:
      if (w->name == name) return w;
      return iso_nfix(w->n, w->name, subst_iso_var(w->a, name, repl), w->ann);
    case Iso::Tag::App:
      return iso_app(subst_iso_var(w->a, name, repl), subst_iso_var(w->b, name, repl));
  }
  return w;
}

// ---------------------------------------------------------------------------
// iso reduction

static bool is_iso_value(const IsoPtr& w) {
  return w->tag == Iso::Tag::Clauses || w->tag == Iso::Tag::Lambda;
}

IsoPtr step_iso(const IsoPtr& w, const FixTypes* fix_types) {
  switch (w->tag) {
    case Iso::Tag::Clauses:
    case Iso::Tag::Lambda:
      return nullptr;
    case Iso::Tag::Fix:
      return subst_iso_var(w->a, w->name, w);
    case Iso::Tag::NFix: {
      IsoTypePtr ty = w->ann;
      if (!ty && fix_types) {
        auto it = fix_types->find(w.get());
        if (it != fix_types->end()) ty = it->second;
      }
      if (w->n == 0) {
        if (!ty) throw Error(errc::annotation, "nfix 0 needs its type to produce the empty iso");
        return make_omega(ty);
      }
      return subst_iso_var(w->a, w->name, iso_nfix(w->n - 1, w->name, w->a, ty));
    }
    case Iso::Tag::App: {
      if (!is_iso_value(w->a)) {
        IsoPtr fn = step_iso(w->a, fix_types);
        if (!fn) throw Error(errc::internal, "iso application head neither value nor reducible");
        return iso_app(fn, w->b);
      }
      if (w->a->tag != Iso::Tag::Lambda)
        throw Error(errc::internal, "clause set applied to an iso (ill-typed)");
      return subst_iso_var(w->a->a, w->a->name, w->b);
    }
    case Iso::Tag::Var:
      throw Error(errc::unbound_iso, "evaluation reached a free iso variable '" + w->name + "'");
    default:
      throw Error(errc::dialect, "quantum combinator in classical evaluation");
  }
}

// ---------------------------------------------------------------------------
// term reduction

namespace {

struct Step {
  enum class Tag { Stepped, IsValue, Stuck, Bottom };
  Tag tag;
  TermPtr next;
  std::string site;
};

Step value_step() { return {Step::Tag::IsValue, nullptr, ""}; }

// match a classical clause pattern against a value
bool classical_match(const TermPtr& p, const TermPtr& v, Valuation& sigma) {
  switch (p->tag) {
    case Term::Tag::Var:
      sigma[p->name] = v;
      return true;
    case Term::Tag::Unit:
      return v->tag == Term::Tag::Unit;
    case Term::Tag::InL:
      return v->tag == Term::Tag::InL && classical_match(p->a, v->a, sigma);
    case Term::Tag::InR:
      return v->tag == Term::Tag::InR && classical_match(p->a, v->a, sigma);
    case Term::Tag::Fold:
      return v->tag == Term::Tag::Fold && classical_match(p->a, v->a, sigma);
    case Term::Tag::Pair:
      return v->tag == Term::Tag::Pair && classical_match(p->a, v->a, sigma) &&
             classical_match(p->b, v->b, sigma);
    default:
      throw Error(errc::malformed, "invalid clause pattern during evaluation");
  }
}

// destructure a value against a flat let pattern (right-nested pairs)
Valuation destructure(const std::vector<std::string>& names, const TermPtr& v) {
  Valuation out;
  TermPtr cur = v;
  for (size_t i = 0; i + 1 < names.size(); i++) {
    if (cur->tag != Term::Tag::Pair)
      throw Error(errc::internal, "let pattern arity mismatch during evaluation");
    out[names[i]] = cur->a;
    cur = cur->b;
  }
  out[names.back()] = cur;
  return out;
}

Step step_term(const TermPtr& t, bool finitary, const FixTypes* fix_types) {
  switch (t->tag) {
    case Term::Tag::Unit:
    case Term::Tag::Var:
      return value_step();
    case Term::Tag::InL:
    case Term::Tag::InR:
    case Term::Tag::Fold: {
      Step s = step_term(t->a, finitary, fix_types);
      if (s.tag == Step::Tag::Stepped)
        s.next = t->tag == Term::Tag::InL   ? mk_inl(s.next)
                 : t->tag == Term::Tag::InR ? mk_inr(s.next)
                                            : mk_fold(s.next);
      return s;
    }
    case Term::Tag::Pair: {
      Step sa = step_term(t->a, finitary, fix_types);
      if (sa.tag == Step::Tag::Stepped) {
        sa.next = mk_pair(sa.next, t->b);
        return sa;
      }
      if (sa.tag != Step::Tag::IsValue) return sa;
      Step sb = step_term(t->b, finitary, fix_types);
      if (sb.tag == Step::Tag::Stepped) sb.next = mk_pair(t->a, sb.next);
      return sb;
    }
    case Term::Tag::App: {
      if (!is_iso_value(t->iso)) {
        IsoPtr w = step_iso(t->iso, fix_types);
        if (!w) throw Error(errc::internal, "unreachable: iso neither value nor reducible");
        return {Step::Tag::Stepped, mk_app(w, t->a), ""};
      }
      if (t->iso->tag == Iso::Tag::Lambda)
        throw Error(errc::arrow_applied, "lambda iso applied to a term during evaluation");
      Step sa = step_term(t->a, finitary, fix_types);
      if (sa.tag == Step::Tag::Stepped) {
        sa.next = mk_app(t->iso, sa.next);
        return sa;
      }
      if (sa.tag != Step::Tag::IsValue) return sa;
      for (auto& [lhs, rhs] : t->iso->clauses) {
        Valuation sigma;
        if (classical_match(lhs, t->a, sigma))
          return {Step::Tag::Stepped, substitute(sigma, rhs), ""};
      }
      if (finitary) return {Step::Tag::Bottom, nullptr, ""};
      return {Step::Tag::Stuck, nullptr, "no clause matched " + pretty(t->a, 6)};
    }
    case Term::Tag::Let: {
      Step sa = step_term(t->a, finitary, fix_types);
      if (sa.tag == Step::Tag::Stepped) {
        sa.next = mk_let(t->pattern, sa.next, t->b);
        return sa;
      }
      if (sa.tag != Step::Tag::IsValue) return sa;
      Valuation sigma = destructure(t->pattern, t->a);
      return {Step::Tag::Stepped, substitute(sigma, t->b), ""};
    }
    default:
      throw Error(errc::dialect, "quantum construct in classical evaluation");
  }
}

}  // namespace

StepOutcome step_term_once(const TermPtr& t, bool finitary, const FixTypes* fix_types) {
  Step s = step_term(t, finitary, fix_types);
  StepOutcome out;
  out.tag = static_cast<StepOutcome::Tag>(static_cast<int>(s.tag));
  out.next = s.next;
  out.site = s.site;
  return out;
}

Outcome eval(const TermPtr& t, long fuel, const FixTypes* fix_types) {
  TermPtr cur = t;
  for (long used = 0; used < fuel; used++) {
    Step s = step_term(cur, false, fix_types);
    switch (s.tag) {
      case Step::Tag::IsValue:
        return {Outcome::Tag::Value, cur, "", used};
      case Step::Tag::Stuck:
        return {Outcome::Tag::Stuck, nullptr, s.site, used};
      case Step::Tag::Bottom:
        return {Outcome::Tag::Bottom, nullptr, "", used};
      case Step::Tag::Stepped:
        cur = s.next;
        break;
    }
  }
  return {Outcome::Tag::OutOfFuel, nullptr, "", fuel};
}

Outcome eval_finitary(const TermPtr& t, const FixTypes* fix_types) {
  TermPtr cur = t;
  // finitary reduction is strongly normalising; the cap only guards the
  // implementation against its own bugs
  const long cap = 50'000'000;
  for (long used = 0; used < cap; used++) {
    Step s = step_term(cur, true, fix_types);
    switch (s.tag) {
      case Step::Tag::IsValue:
        return {Outcome::Tag::Value, cur, "", used};
      case Step::Tag::Stuck:
        return {Outcome::Tag::Stuck, nullptr, s.site, used};
      case Step::Tag::Bottom:
        return {Outcome::Tag::Bottom, nullptr, "", used};
      case Step::Tag::Stepped:
        cur = s.next;
        break;
    }
  }
  throw Error(errc::internal, "finitary evaluation exceeded the safety cap");
}

int count_redexes(const TermPtr& t) {
  switch (t->tag) {
    case Term::Tag::Unit:
    case Term::Tag::Var:
      return 0;
    case Term::Tag::InL:
    case Term::Tag::InR:
    case Term::Tag::Fold:
      return count_redexes(t->a);
    case Term::Tag::Pair: {
      int n = count_redexes(t->a);
      if (is_classical_value(t->a)) n += count_redexes(t->b);
      return n;
    }
    case Term::Tag::App: {
      if (!is_iso_value(t->iso)) {
        // iso-level steps are head-linear, hence at most one
        return 1;
      }
      if (t->iso->tag == Iso::Tag::Lambda) return 0;
      if (!is_classical_value(t->a)) return count_redexes(t->a);
      int matches = 0;
      for (auto& [lhs, rhs] : t->iso->clauses) {
        (void)rhs;
        Valuation sigma;
        if (classical_match(lhs, t->a, sigma)) matches++;
      }
      return matches > 0 ? matches : 1;  // a no-match state still fires one rule (stuck/bottom)
    }
    case Term::Tag::Let:
      return is_classical_value(t->a) ? 1 : count_redexes(t->a);
    default:
      return 0;
  }
}

// ---------------------------------------------------------------------------
// finitization

IsoPtr finitize(const IsoPtr& w, int n, const FixTypes& fix_types) {
  switch (w->tag) {
    case Iso::Tag::Var:
      return w;
    case Iso::Tag::Clauses: {
      std::vector<std::pair<TermPtr, TermPtr>> clauses;
      for (auto& [l, r] : w->clauses) clauses.emplace_back(l, finitize(r, n, fix_types));
      return iso_clauses(std::move(clauses), w->ann);
    }
    case Iso::Tag::Lambda:
      return iso_lambda(w->name, w->param_ann, finitize(w->a, n, fix_types));
    case Iso::Tag::Fix: {
      IsoTypePtr ty = w->ann;
      if (!ty) {
        auto it = fix_types.find(w.get());
        if (it != fix_types.end()) ty = it->second;
      }
      if (!ty)
        throw Error(errc::annotation, "finitize: fix node without a recorded type (typecheck first)");
      return iso_nfix(n, w->name, finitize(w->a, n, fix_types), ty);
    }
    case Iso::Tag::NFix:
      return iso_nfix(w->n, w->name, finitize(w->a, n, fix_types), w->ann);
    case Iso::Tag::App:
      return iso_app(finitize(w->a, n, fix_types), finitize(w->b, n, fix_types));
    default:
      throw Error(errc::dialect, "finitize: quantum combinator in classical iso");
  }
}

TermPtr finitize(const TermPtr& t, int n, const FixTypes& fix_types) {
  switch (t->tag) {
    case Term::Tag::Unit:
    case Term::Tag::Var:
    case Term::Tag::Zero:
      return t;
    case Term::Tag::InL:
      return mk_inl(finitize(t->a, n, fix_types));
    case Term::Tag::InR:
      return mk_inr(finitize(t->a, n, fix_types));
    case Term::Tag::Suc:
      return mk_suc(finitize(t->a, n, fix_types));
    case Term::Tag::Fold:
      return mk_fold(finitize(t->a, n, fix_types));
    case Term::Tag::Pair:
      return mk_pair(finitize(t->a, n, fix_types), finitize(t->b, n, fix_types));
    case Term::Tag::App:
      return mk_app(finitize(t->iso, n, fix_types), finitize(t->a, n, fix_types));
    case Term::Tag::Let:
      return mk_let(t->pattern, finitize(t->a, n, fix_types), finitize(t->b, n, fix_types));
    case Term::Tag::Sum:
      throw Error(errc::dialect, "finitize: quantum construct in classical term");
  }
  return t;
}

// ---------------------------------------------------------------------------
// syntactic inversion

namespace {

// a let-bound argument must be a variable tuple; returns its names
std::vector<std::string> tuple_names(const TermPtr& t) {
  std::vector<std::string> out;
  TermPtr cur = t;
  while (cur->tag == Term::Tag::Pair) {
    if (cur->a->tag != Term::Tag::Var)
      throw Error(errc::not_invertible, "let argument is not a variable tuple");
    out.push_back(cur->a->name);
    cur = cur->b;
  }
  if (cur->tag != Term::Tag::Var)
    throw Error(errc::not_invertible, "let argument is not a variable tuple");
  out.push_back(cur->name);
  return out;
}

TermPtr tuple_term(const std::vector<std::string>& names) {
  TermPtr cur = mk_var(names.back());
  for (size_t i = names.size() - 1; i-- > 0;) cur = mk_pair(mk_var(names[i]), cur);
  return cur;
}

}  // namespace

IsoPtr invert_iso(const IsoPtr& w) {
  switch (w->tag) {
    case Iso::Tag::Clauses: {
      std::vector<std::pair<TermPtr, TermPtr>> clauses;
      for (auto& [lhs, rhs] : w->clauses) {
        // decompose rhs into let chain + value
        struct Link {
          std::vector<std::string> out_pattern;
          IsoPtr iso;
          std::vector<std::string> in_names;
        };
        std::vector<Link> chain;
        TermPtr cur = rhs;
        while (cur->tag == Term::Tag::Let) {
          if (cur->a->tag != Term::Tag::App)
            throw Error(errc::not_invertible, "let binds a non-application; cannot invert");
          chain.push_back({cur->pattern, cur->a->iso, tuple_names(cur->a->a)});
          cur = cur->b;
        }
        if (!is_classical_value(cur))
          throw Error(errc::not_invertible, "clause body does not end in a value");
        // inverted clause: value <-> reversed chain ending in lhs
        TermPtr new_rhs = lhs;
        for (auto it = chain.begin(); it != chain.end(); ++it) {
          new_rhs = mk_let(it->in_names, mk_app(invert_iso(it->iso), tuple_term(it->out_pattern)),
                           new_rhs);
        }
        clauses.emplace_back(cur, new_rhs);
      }
      IsoTypePtr ann = w->ann ? isotype_invert(w->ann) : nullptr;
      return iso_clauses(std::move(clauses), ann);
    }
    case Iso::Tag::Var:
      return w;
    case Iso::Tag::Lambda:
      return iso_lambda(w->name, w->param_ann ? isotype_invert(w->param_ann) : nullptr,
                        invert_iso(w->a));
    case Iso::Tag::Fix:
      return iso_fix(w->name, invert_iso(w->a), w->ann ? isotype_invert(w->ann) : nullptr);
    case Iso::Tag::NFix:
      return iso_nfix(w->n, w->name, invert_iso(w->a), w->ann ? isotype_invert(w->ann) : nullptr);
    case Iso::Tag::App:
      return iso_app(invert_iso(w->a), invert_iso(w->b));
    default:
      throw Error(errc::not_invertible, "quantum combinators invert with 'inv'");
  }
}

}  // namespace revq
