#include "revq/typeck.hpp"

#include <algorithm>

#include "revq/ortho.hpp"

namespace revq {

const TypePtr* Context::lookup_linear(const std::string& n) const {
  for (auto it = linear.rbegin(); it != linear.rend(); ++it)
    if (it->first == n) return &it->second;
  return nullptr;
}
const IsoTypePtr* Context::lookup_iso(const std::string& n) const {
  for (auto it = isos.rbegin(); it != isos.rend(); ++it)
    if (it->first == n) return &it->second;
  return nullptr;
}

namespace {

using Used = std::set<std::string>;

[[noreturn]] void err(const char* code, const std::string& msg, const TermPtr& at) {
  throw Error(code, msg, at ? at->line : -1, at ? at->col : -1);
}
[[noreturn]] void erri(const char* code, const std::string& msg, const IsoPtr& at) {
  throw Error(code, msg, at ? at->line : -1, at ? at->col : -1);
}

void merge_disjoint(Used& into, const Used& add, const TermPtr& at) {
  for (auto& n : add) {
    if (into.count(n))
      err(errc::duplicate_var, "linear variable '" + n + "' used more than once", at);
    into.insert(n);
  }
}

struct Checker {
  Dialect dialect;
  FixTypes* fix_types;
  // types discovered for let-bound variables whose bound value could not be
  // inferred directly (the body determines them at the use sites)
  std::map<std::string, TypePtr> holes;

  // ---- patterns ----
  void bind_rec(const TermPtr& pat, const TypePtr& ty,
                std::vector<std::pair<std::string, TypePtr>>& out) {
    switch (pat->tag) {
      case Term::Tag::Var: {
        for (auto& [n, t] : out)
          if (n == pat->name)
            err(errc::duplicate_var, "variable '" + pat->name + "' bound twice in pattern", pat);
        out.emplace_back(pat->name, ty);
        return;
      }
      case Term::Tag::Unit:
        if (ty->tag != Type::Tag::Unit)
          err(errc::type_mismatch, "pattern * needs type I, got " + show_type(ty), pat);
        return;
      case Term::Tag::InL:
        if (ty->tag != Type::Tag::Sum)
          err(errc::type_mismatch, "pattern inl needs a sum type, got " + show_type(ty), pat);
        bind_rec(pat->a, ty->lhs, out);
        return;
      case Term::Tag::InR:
        if (ty->tag != Type::Tag::Sum)
          err(errc::type_mismatch, "pattern inr needs a sum type, got " + show_type(ty), pat);
        bind_rec(pat->a, ty->rhs, out);
        return;
      case Term::Tag::Pair:
        if (ty->tag != Type::Tag::Tensor)
          err(errc::type_mismatch, "pair pattern needs a tensor type, got " + show_type(ty), pat);
        bind_rec(pat->a, ty->lhs, out);
        bind_rec(pat->b, ty->rhs, out);
        return;
      case Term::Tag::Zero:
        if (dialect != Dialect::Quantum) err(errc::dialect, "zero is quantum-only", pat);
        if (ty->tag != Type::Tag::Nat)
          err(errc::type_mismatch, "pattern zero needs Nat", pat);
        return;
      case Term::Tag::Suc:
        if (dialect != Dialect::Quantum) err(errc::dialect, "suc is quantum-only", pat);
        if (ty->tag != Type::Tag::Nat) err(errc::type_mismatch, "pattern suc needs Nat", pat);
        bind_rec(pat->a, ty, out);
        return;
      case Term::Tag::Fold:
        if (dialect != Dialect::Classical) err(errc::dialect, "fold is classical-only", pat);
        if (ty->tag != Type::Tag::Mu)
          err(errc::type_mismatch, "pattern fold needs a mu type, got " + show_type(ty), pat);
        bind_rec(pat->a, mu_unfold(ty), out);
        return;
      default:
        err(errc::malformed, "invalid pattern", pat);
    }
  }

  // ---- terms ----
  void check(const Context& ctx, const TermPtr& t, const TypePtr& ty, Used& used) {
    switch (t->tag) {
      case Term::Tag::Unit:
        if (ty->tag != Type::Tag::Unit)
          err(errc::type_mismatch, "* has type I, expected " + show_type(ty), t);
        return;
      case Term::Tag::Var: {
        const TypePtr* found = ctx.lookup_linear(t->name);
        if (!found) err(errc::unbound_var, "unbound variable '" + t->name + "'", t);
        if (!*found) {
          // hole: the use site fixes the type
          auto it = holes.find(t->name);
          if (it == holes.end())
            holes[t->name] = ty;
          else if (!type_equal(it->second, ty))
            err(errc::type_mismatch, "conflicting uses of '" + t->name + "'", t);
        } else if (!type_equal(*found, ty)) {
          err(errc::type_mismatch,
              "variable '" + t->name + "' has type " + show_type(*found) + ", expected " +
                  show_type(ty),
              t);
        }
        if (used.count(t->name))
          err(errc::duplicate_var, "linear variable '" + t->name + "' used more than once", t);
        used.insert(t->name);
        return;
      }
      case Term::Tag::InL:
        if (ty->tag != Type::Tag::Sum)
          err(errc::type_mismatch, "inl produces a sum type, expected " + show_type(ty), t);
        check(ctx, t->a, ty->lhs, used);
        return;
      case Term::Tag::InR:
        if (ty->tag != Type::Tag::Sum)
          err(errc::type_mismatch, "inr produces a sum type, expected " + show_type(ty), t);
        check(ctx, t->a, ty->rhs, used);
        return;
      case Term::Tag::Pair: {
        if (ty->tag != Type::Tag::Tensor)
          err(errc::type_mismatch, "pair produces a tensor type, expected " + show_type(ty), t);
        Used ua, ub;
        check(ctx, t->a, ty->lhs, ua);
        check(ctx, t->b, ty->rhs, ub);
        for (auto& n : ua)
          if (ub.count(n))
            err(errc::duplicate_var, "linear variable '" + n + "' used in both pair components",
                t);
        merge_disjoint(used, ua, t);
        merge_disjoint(used, ub, t);
        return;
      }
      case Term::Tag::Zero:
        if (dialect != Dialect::Quantum) err(errc::dialect, "zero is quantum-only", t);
        if (ty->tag != Type::Tag::Nat)
          err(errc::type_mismatch, "zero has type Nat, expected " + show_type(ty), t);
        return;
      case Term::Tag::Suc:
        if (dialect != Dialect::Quantum) err(errc::dialect, "suc is quantum-only", t);
        if (ty->tag != Type::Tag::Nat)
          err(errc::type_mismatch, "suc has type Nat, expected " + show_type(ty), t);
        check(ctx, t->a, ty_nat(), used);
        return;
      case Term::Tag::Fold:
        if (dialect != Dialect::Classical) err(errc::dialect, "fold is classical-only", t);
        if (ty->tag != Type::Tag::Mu)
          err(errc::type_mismatch, "fold produces a mu type, expected " + show_type(ty), t);
        check(ctx, t->a, mu_unfold(ty), used);
        return;
      case Term::Tag::App: {
        IsoTypePtr wt = synth_iso(ctx, t->iso);
        if (wt->tag != IsoType::Tag::Ground)
          err(errc::arrow_applied,
              "iso of arrow type " + show_isotype(wt) + " applied to a term", t);
        if (!type_equal(wt->dst, ty))
          err(errc::type_mismatch,
              "application produces " + show_type(wt->dst) + ", expected " + show_type(ty), t);
        check(ctx, t->a, wt->src, used);
        return;
      }
      case Term::Tag::Let:
        do_let(ctx, t, ty, used);
        return;
      case Term::Tag::Sum: {
        if (dialect != Dialect::Quantum)
          err(errc::dialect, "linear combinations are quantum-only", t);
        if (t->parts.empty()) err(errc::norm_violation, "empty linear combination", t);
        double norm2 = 0;
        std::vector<Used> part_used(t->parts.size());
        for (size_t i = 0; i < t->parts.size(); i++) {
          norm2 += std::norm(t->parts[i].first);
          check(ctx, t->parts[i].second, ty, part_used[i]);
        }
        if (std::abs(norm2 - 1.0) >= eps())
          err(errc::norm_violation,
              "squared scalars of a linear combination must sum to 1 (got " +
                  std::to_string(norm2) + ")",
              t);
        for (size_t i = 0; i < t->parts.size(); i++)
          for (size_t j = i + 1; j < t->parts.size(); j++)
            if (!orthogonal(t->parts[i].second, t->parts[j].second, dialect))
              err(errc::non_orthogonal, "summands of a linear combination must be orthogonal", t);
        for (size_t i = 1; i < t->parts.size(); i++)
          if (part_used[i] != part_used[0])
            err(errc::unused_var,
                "components of a linear combination must use the same variables", t);
        merge_disjoint(used, part_used[0], t);
        return;
      }
    }
  }

  // cheap syntactic test: can infer() synthesize this term's type?
  static bool inferable(const TermPtr& t) {
    switch (t->tag) {
      case Term::Tag::Unit:
      case Term::Tag::Var:
      case Term::Tag::Zero:
      case Term::Tag::Suc:
      case Term::Tag::App:
        return true;
      case Term::Tag::Pair:
        return inferable(t->a) && inferable(t->b);
      case Term::Tag::Let:
        return inferable(t->b);
      case Term::Tag::Sum:
        return !t->parts.empty() && inferable(t->parts[0].second);
      default:
        return false;
    }
  }

  // Shared handling of `let p = bound in body`; `expected` is null when the
  // overall type is inferred. The bound is inferred first; if its type is not
  // syntactically determined (a bare value, as arises mid-reduction), the
  // pattern variables become holes whose use sites in the body fix them, and
  // the bound value is then checked against the reconstructed tensor.
  TypePtr do_let(const Context& ctx, const TermPtr& t, const TypePtr& expected, Used& used) {
    if (dialect != Dialect::Classical) err(errc::dialect, "let is classical-only", t);
    for (auto& n : t->pattern)
      if (ctx.lookup_linear(n))
        err(errc::duplicate_var, "let rebinds live variable '" + n + "'", t);
    Used ub;
    TypePtr bound_ty;
    bool deferred = false;
    if (!inferable(t->a)) {
      deferred = true;
    } else {
      try {
        bound_ty = infer(ctx, t->a, ub);
      } catch (const Error& e) {
        if (e.code != std::string(errc::annotation)) throw;
        deferred = true;
        ub.clear();
      }
    }
    Context inner = ctx;
    std::vector<TypePtr> comps;
    if (!deferred) {
      comps = split_tensor(bound_ty, t->pattern.size(), t);
      for (size_t i = 0; i < t->pattern.size(); i++)
        inner.linear.emplace_back(t->pattern[i], comps[i]);
    } else {
      for (auto& n : t->pattern) inner.linear.emplace_back(n, nullptr);
    }
    Used ubody;
    TypePtr out;
    if (expected) {
      check(inner, t->b, expected, ubody);
      out = expected;
    } else {
      out = infer(inner, t->b, ubody);
    }
    for (auto& n : t->pattern) {
      if (!ubody.count(n)) err(errc::unused_var, "let-bound variable '" + n + "' unused", t);
      ubody.erase(n);
    }
    if (deferred) {
      comps.clear();
      for (auto& n : t->pattern) {
        auto it = holes.find(n);
        if (it == holes.end())
          err(errc::annotation, "cannot determine the type of let-bound '" + n + "'", t);
        comps.push_back(it->second);
        holes.erase(it);
      }
      TypePtr reconstructed = comps.back();
      for (size_t i = comps.size() - 1; i-- > 0;) reconstructed = ty_tensor(comps[i], reconstructed);
      check(ctx, t->a, reconstructed, ub);
    }
    for (auto& n : ub)
      if (ubody.count(n))
        err(errc::duplicate_var, "linear variable '" + n + "' used across let", t);
    merge_disjoint(used, ub, t);
    merge_disjoint(used, ubody, t);
    return out;
  }

  std::vector<TypePtr> split_tensor(const TypePtr& ty, size_t n, const TermPtr& at) {
    std::vector<TypePtr> out;
    TypePtr cur = ty;
    for (size_t i = 0; i + 1 < n; i++) {
      if (cur->tag != Type::Tag::Tensor)
        err(errc::type_mismatch,
            "let pattern of arity " + std::to_string(n) + " against " + show_type(ty), at);
      out.push_back(cur->lhs);
      cur = cur->rhs;
    }
    out.push_back(cur);
    return out;
  }

  TypePtr infer(const Context& ctx, const TermPtr& t, Used& used) {
    switch (t->tag) {
      case Term::Tag::Unit:
        return ty_unit();
      case Term::Tag::Var: {
        const TypePtr* found = ctx.lookup_linear(t->name);
        if (!found) err(errc::unbound_var, "unbound variable '" + t->name + "'", t);
        if (!*found) {
          auto it = holes.find(t->name);
          if (it == holes.end())
            err(errc::annotation,
                "cannot infer the type of let-bound '" + t->name + "' at this use", t);
          if (used.count(t->name))
            err(errc::duplicate_var, "linear variable '" + t->name + "' used more than once", t);
          used.insert(t->name);
          return it->second;
        }
        if (used.count(t->name))
          err(errc::duplicate_var, "linear variable '" + t->name + "' used more than once", t);
        used.insert(t->name);
        return *found;
      }
      case Term::Tag::Zero:
        if (dialect != Dialect::Quantum) err(errc::dialect, "zero is quantum-only", t);
        return ty_nat();
      case Term::Tag::Suc:
        if (dialect != Dialect::Quantum) err(errc::dialect, "suc is quantum-only", t);
        check(ctx, t->a, ty_nat(), used);
        return ty_nat();
      case Term::Tag::Pair: {
        Used ua, ub;
        TypePtr a = infer(ctx, t->a, ua);
        TypePtr b = infer(ctx, t->b, ub);
        for (auto& n : ua)
          if (ub.count(n))
            err(errc::duplicate_var, "linear variable '" + n + "' used in both pair components",
                t);
        merge_disjoint(used, ua, t);
        merge_disjoint(used, ub, t);
        return ty_tensor(a, b);
      }
      case Term::Tag::App: {
        IsoTypePtr wt = synth_iso(ctx, t->iso);
        if (wt->tag != IsoType::Tag::Ground)
          err(errc::arrow_applied,
              "iso of arrow type " + show_isotype(wt) + " applied to a term", t);
        check(ctx, t->a, wt->src, used);
        return wt->dst;
      }
      case Term::Tag::Let:
        return do_let(ctx, t, nullptr, used);
      case Term::Tag::Sum: {
        if (dialect != Dialect::Quantum)
          err(errc::dialect, "linear combinations are quantum-only", t);
        if (t->parts.empty()) err(errc::norm_violation, "empty linear combination", t);
        Used u0;
        TypePtr ty = infer(ctx, t->parts[0].second, u0);
        // re-run as checking to get the full rule
        Used dummy;
        check(ctx, t, ty, dummy);
        merge_disjoint(used, dummy, t);
        return ty;
      }
      default:
        err(errc::annotation,
            "cannot infer the type of an injection/fold here; add an annotation", t);
    }
  }

  // ---- isos ----
  // Successful checks of closed isos are memoized by node identity: stepping
  // re-typechecks whole configurations and the shared clause sets dominate
  // that cost. The cache pins the nodes so addresses stay unique.
  static std::map<const Iso*, std::pair<IsoPtr, IsoTypePtr>>& iso_memo() {
    static thread_local std::map<const Iso*, std::pair<IsoPtr, IsoTypePtr>> memo;
    if (memo.size() > 200000) memo.clear();
    return memo;
  }

  IsoTypePtr synth_iso(const Context& ctx, const IsoPtr& w) {
    if (ctx.isos.empty() && !fix_types) {
      auto it = iso_memo().find(w.get());
      if (it != iso_memo().end()) return it->second.second;
      IsoTypePtr ty = synth_iso_raw(ctx, w);
      iso_memo().emplace(w.get(), std::make_pair(w, ty));
      return ty;
    }
    return synth_iso_raw(ctx, w);
  }

  IsoTypePtr synth_iso_raw(const Context& ctx, const IsoPtr& w) {
    switch (w->tag) {
      case Iso::Tag::Clauses: {
        if (!w->ann) erri(errc::annotation, "clause set needs a type annotation", w);
        if (w->ann->tag != IsoType::Tag::Ground)
          erri(errc::annotation, "clause set annotated with an arrow type", w);
        check_clauses(ctx, w, w->ann->src, w->ann->dst);
        return w->ann;
      }
      case Iso::Tag::Inverse: {
        if (dialect != Dialect::Quantum)
          erri(errc::dialect, "inv is quantum-only; classical inversion is a meta-operation", w);
        IsoTypePtr inner = synth_iso(ctx, w->a);
        return it_ground(inner->dst, inner->src);
      }
      case Iso::Tag::Compose: {
        if (dialect != Dialect::Quantum) erri(errc::dialect, "';' composition is quantum-only", w);
        IsoTypePtr f = synth_iso(ctx, w->a);
        IsoTypePtr g = synth_iso(ctx, w->b);
        if (!type_equal(f->dst, g->src))
          erri(errc::iso_mismatch,
               "composition mismatch: " + show_type(f->dst) + " vs " + show_type(g->src), w);
        return it_ground(f->src, g->dst);
      }
      case Iso::Tag::Tensor:
      case Iso::Tag::SumC: {
        if (dialect != Dialect::Quantum) erri(errc::dialect, "iso combinators are quantum-only", w);
        IsoTypePtr f = synth_iso(ctx, w->a);
        IsoTypePtr g = synth_iso(ctx, w->b);
        if (w->tag == Iso::Tag::Tensor)
          return it_ground(ty_tensor(f->src, g->src), ty_tensor(f->dst, g->dst));
        return it_ground(ty_sum(f->src, g->src), ty_sum(f->dst, g->dst));
      }
      case Iso::Tag::Ctrl: {
        if (dialect != Dialect::Quantum) erri(errc::dialect, "ctrl is quantum-only", w);
        IsoTypePtr f = synth_iso(ctx, w->a);
        if (!type_equal(f->src, f->dst))
          erri(errc::iso_mismatch, "ctrl needs an endo-iso A <-> A", w);
        TypePtr t = ty_tensor(ty_bool(), f->src);
        return it_ground(t, t);
      }
      case Iso::Tag::Var: {
        if (dialect != Dialect::Classical) erri(errc::dialect, "iso variables are classical-only", w);
        const IsoTypePtr* found = ctx.lookup_iso(w->name);
        if (!found) erri(errc::unbound_iso, "unbound iso variable '" + w->name + "'", w);
        return *found;
      }
      case Iso::Tag::Lambda: {
        if (dialect != Dialect::Classical) erri(errc::dialect, "lambda is classical-only", w);
        if (!w->param_ann) erri(errc::annotation, "lambda parameter needs a type annotation", w);
        Context inner = ctx;
        inner.isos.emplace_back(w->name, w->param_ann);
        return it_arrow(w->param_ann, synth_iso(inner, w->a));
      }
      case Iso::Tag::Fix:
      case Iso::Tag::NFix: {
        if (dialect != Dialect::Classical) erri(errc::dialect, "fix is classical-only", w);
        IsoTypePtr t = w->ann;
        if (!t && w->a->tag == Iso::Tag::Clauses) t = w->a->ann;
        if (!t) erri(errc::annotation, "fix binder needs a type annotation", w);
        Context inner = ctx;
        inner.isos.emplace_back(w->name, t);
        typecheck_iso_at_inner(inner, w->a, t);
        if (fix_types) (*fix_types)[w.get()] = t;
        return t;
      }
      case Iso::Tag::App: {
        if (dialect != Dialect::Classical)
          erri(errc::dialect, "iso-to-iso application is classical-only", w);
        IsoTypePtr fn = synth_iso(ctx, w->a);
        if (fn->tag != IsoType::Tag::Arrow)
          erri(errc::iso_mismatch, "applied iso has ground type " + show_isotype(fn), w);
        typecheck_iso_at_inner(ctx, w->b, fn->from);
        return fn->to;
      }
    }
    erri(errc::internal, "unreachable iso tag", w);
  }

  void typecheck_iso_at_inner(const Context& ctx, const IsoPtr& w, const IsoTypePtr& ty) {
    if (ctx.isos.empty() && !fix_types) {
      auto it = iso_memo().find(w.get());
      if (it != iso_memo().end()) {
        if (!isotype_equal(it->second.second, ty))
          erri(errc::type_mismatch,
               "iso has type " + show_isotype(it->second.second) + ", expected " +
                   show_isotype(ty),
               w);
        return;
      }
      typecheck_iso_at_raw(ctx, w, ty);
      iso_memo().emplace(w.get(), std::make_pair(w, ty));
      return;
    }
    typecheck_iso_at_raw(ctx, w, ty);
  }

  void typecheck_iso_at_raw(const Context& ctx, const IsoPtr& w, const IsoTypePtr& ty) {
    switch (w->tag) {
      case Iso::Tag::Clauses: {
        if (w->ann) {
          if (!isotype_equal(w->ann, ty))
            erri(errc::type_mismatch,
                 "clause set annotated " + show_isotype(w->ann) + ", expected " + show_isotype(ty),
                 w);
        }
        if (ty->tag != IsoType::Tag::Ground)
          erri(errc::type_mismatch, "clause set used at arrow type", w);
        check_clauses(ctx, w, ty->src, ty->dst);
        return;
      }
      case Iso::Tag::Fix:
      case Iso::Tag::NFix: {
        if (dialect != Dialect::Classical) erri(errc::dialect, "fix is classical-only", w);
        if (w->ann && !isotype_equal(w->ann, ty))
          erri(errc::type_mismatch, "fix annotated with a different type", w);
        Context inner = ctx;
        inner.isos.emplace_back(w->name, ty);
        typecheck_iso_at_inner(inner, w->a, ty);
        if (fix_types) (*fix_types)[w.get()] = ty;
        return;
      }
      case Iso::Tag::Lambda: {
        if (dialect != Dialect::Classical) erri(errc::dialect, "lambda is classical-only", w);
        if (ty->tag != IsoType::Tag::Arrow)
          erri(errc::type_mismatch, "lambda used at ground type " + show_isotype(ty), w);
        if (w->param_ann && !isotype_equal(w->param_ann, ty->from))
          erri(errc::type_mismatch, "lambda parameter annotation mismatch", w);
        Context inner = ctx;
        inner.isos.emplace_back(w->name, ty->from);
        typecheck_iso_at_inner(inner, w->a, ty->to);
        return;
      }
      default: {
        IsoTypePtr got = synth_iso(ctx, w);
        if (!isotype_equal(got, ty))
          erri(errc::type_mismatch,
               "iso has type " + show_isotype(got) + ", expected " + show_isotype(ty), w);
        return;
      }
    }
  }

  void check_clauses(const Context& ctx, const IsoPtr& w, const TypePtr& src, const TypePtr& dst) {
    std::vector<TermPtr> lhs, rhs;
    for (auto& [l, r] : w->clauses) {
      lhs.push_back(l);
      rhs.push_back(r);
    }
    for (size_t i = 0; i < w->clauses.size(); i++) {
      const TermPtr& pat = w->clauses[i].first;
      if (dialect == Dialect::Quantum && !is_basis_value(pat))
        erri(errc::malformed, "quantum clause pattern must be a basis value", w);
      if (dialect == Dialect::Classical && !is_classical_value(pat))
        erri(errc::malformed, "classical clause pattern must be a value", w);
      std::vector<std::pair<std::string, TypePtr>> delta;
      bind_rec(pat, src, delta);
      Context inner;
      inner.isos = ctx.isos;
      inner.linear = delta;
      Used used;
      check(inner, w->clauses[i].second, dst, used);
      for (auto& [n, t] : delta)
        if (!used.count(n))
          erri(errc::clause_vars,
               "variable '" + n + "' bound on the left of a clause but unused on the right", w);
    }
    if (dialect == Dialect::Quantum) {
      if (!check_od(src, lhs, ODKind::Basis))
        erri(errc::od_failure, "clause patterns do not form an orthogonal decomposition of " +
                                   show_type(src),
             w);
      if (!check_od(dst, rhs, ODKind::Extended)) {
        // distinguish a failed unitarity test for diagnostics
        bool any_sum = false;
        for (auto& e : rhs) any_sum |= canonicalize_expression(e)->tag == Term::Tag::Sum;
        if (any_sum)
          erri(errc::od_not_unitary,
               "clause outputs do not form an orthogonal decomposition (coefficient matrix is "
               "not unitary or support mismatch)",
               w);
        erri(errc::od_failure,
             "clause outputs do not form an orthogonal decomposition of " + show_type(dst), w);
      }
    } else {
      for (size_t i = 0; i < lhs.size(); i++)
        for (size_t j = i + 1; j < lhs.size(); j++)
          if (!orthogonal(lhs[i], lhs[j], dialect))
            erri(errc::overlap, "clause patterns " + std::to_string(i + 1) + " and " +
                                    std::to_string(j + 1) + " overlap",
                 w);
      for (size_t i = 0; i < rhs.size(); i++)
        for (size_t j = i + 1; j < rhs.size(); j++)
          if (!orthogonal(rhs[i], rhs[j], dialect))
            erri(errc::overlap, "clause outputs " + std::to_string(i + 1) + " and " +
                                    std::to_string(j + 1) + " overlap",
                 w);
    }
  }
};

}  // namespace

std::vector<std::pair<std::string, TypePtr>> bind_pattern(const TermPtr& pat, const TypePtr& ty,
                                                          Dialect dialect) {
  Checker c{dialect, nullptr, {}};
  std::vector<std::pair<std::string, TypePtr>> out;
  c.bind_rec(pat, ty, out);
  return out;
}

TypePtr typecheck_term(const Context& ctx, const TermPtr& t, Dialect dialect,
                       FixTypes* fix_types) {
  Checker c{dialect, fix_types, {}};
  Used used;
  TypePtr ty = c.infer(ctx, t, used);
  for (auto& [n, unused_ty] : ctx.linear) {
    (void)unused_ty;
    if (!used.count(n))
      throw Error(errc::unused_var, "linear variable '" + n + "' unused",
                  t ? t->line : -1, t ? t->col : -1);
  }
  return ty;
}

void typecheck_term_at(const Context& ctx, const TermPtr& t, const TypePtr& ty, Dialect dialect,
                       FixTypes* fix_types) {
  Checker c{dialect, fix_types, {}};
  Used used;
  c.check(ctx, t, ty, used);
  for (auto& [n, unused_ty] : ctx.linear) {
    (void)unused_ty;
    if (!used.count(n))
      throw Error(errc::unused_var, "linear variable '" + n + "' unused",
                  t ? t->line : -1, t ? t->col : -1);
  }
}

IsoTypePtr typecheck_iso(const Context& ctx, const IsoPtr& w, Dialect dialect,
                         FixTypes* fix_types) {
  Checker c{dialect, fix_types, {}};
  return c.synth_iso(ctx, w);
}

void typecheck_iso_at(const Context& ctx, const IsoPtr& w, const IsoTypePtr& ty, Dialect dialect,
                      FixTypes* fix_types) {
  Checker c{dialect, fix_types, {}};
  c.typecheck_iso_at_inner(ctx, w, ty);
}

FixTypes check_program(const SourceProgram& prog) {
  FixTypes ft;
  Context ctx;
  for (const auto& d : prog.decls) {
    if (d.is_iso) {
      typecheck_iso_at(ctx, d.iso, d.iso_type, prog.dialect, &ft);
    } else {
      typecheck_term(ctx, d.term, prog.dialect, &ft);
    }
  }
  return ft;
}

}  // namespace revq
