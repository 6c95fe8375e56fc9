#include "revq/qeval.hpp"

#include <algorithm>

namespace revq {

TermPtr NormalValue::to_term() const {
  return canonicalize_sum(parts);
}

double NormalValue::norm2() const {
  double s = 0;
  for (auto& [c, t] : parts) {
    (void)t;
    s += std::norm(c);
  }
  return s;
}

// ---------------------------------------------------------------------------
// matching

namespace {

bool match_rec(const TermPtr& pat, const TermPtr& sub, Valuation& out) {
  switch (pat->tag) {
    case Term::Tag::Var: {
      if (out.count(pat->name))
        throw Error(errc::malformed,
                    "overlapping variable supports in pattern: '" + pat->name + "'");
      out[pat->name] = sub;
      return true;
    }
    case Term::Tag::Unit:
      return sub->tag == Term::Tag::Unit;
    case Term::Tag::Zero:
      return sub->tag == Term::Tag::Zero;
    case Term::Tag::Suc:
      return sub->tag == Term::Tag::Suc && match_rec(pat->a, sub->a, out);
    case Term::Tag::InL:
      return sub->tag == Term::Tag::InL && match_rec(pat->a, sub->a, out);
    case Term::Tag::InR:
      return sub->tag == Term::Tag::InR && match_rec(pat->a, sub->a, out);
    case Term::Tag::Fold:
      return sub->tag == Term::Tag::Fold && match_rec(pat->a, sub->a, out);
    case Term::Tag::Pair:
      return sub->tag == Term::Tag::Pair && match_rec(pat->a, sub->a, out) &&
             match_rec(pat->b, sub->b, out);
    default:
      throw Error(errc::malformed, "match_value: pattern is not a basis value");
  }
}

}  // namespace

std::optional<Valuation> match_value(const TermPtr& pattern, const TermPtr& subject) {
  if (!is_basis_value(pattern) || !is_basis_value(subject))
    throw Error(errc::malformed, "match_value expects basis values");
  Valuation out;
  if (match_rec(pattern, subject, out)) return out;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// normalization

namespace {

NormalValue from_parts(std::vector<std::pair<Complex, TermPtr>> parts) {
  TermPtr canon = canonicalize_sum(parts);
  NormalValue nv;
  if (canon->tag == Term::Tag::Sum)
    nv.parts = canon->parts;
  else
    nv.parts = {{Complex(1, 0), canon}};
  return nv;
}

NormalValue apply_iso_basis(const IsoPtr& w, const TermPtr& b);

NormalValue apply_per_basis(const IsoPtr& w, const NormalValue& v) {
  std::vector<std::pair<Complex, TermPtr>> parts;
  for (auto& [c, b] : v.parts) {
    NormalValue out = apply_iso_basis(w, b);
    for (auto& [c2, b2] : out.parts) parts.emplace_back(c * c2, b2);
  }
  return from_parts(std::move(parts));
}

NormalValue apply_iso_basis(const IsoPtr& w, const TermPtr& b) {
  switch (w->tag) {
    case Iso::Tag::Clauses: {
      for (auto& [lhs, rhs] : w->clauses) {
        auto sigma = match_value(lhs, b);
        if (sigma) return normalize(substitute(*sigma, rhs));
      }
      throw Error(errc::internal,
                  "no clause matched a well-typed argument (orthogonal decomposition violated)");
    }
    case Iso::Tag::Tensor: {
      if (b->tag != Term::Tag::Pair)
        throw Error(errc::internal, "tensor iso applied to non-pair basis value");
      NormalValue l = apply_iso_basis(w->a, b->a);
      NormalValue r = apply_iso_basis(w->b, b->b);
      std::vector<std::pair<Complex, TermPtr>> parts;
      for (auto& [cl, tl] : l.parts)
        for (auto& [cr, tr] : r.parts) parts.emplace_back(cl * cr, mk_pair(tl, tr));
      return from_parts(std::move(parts));
    }
    case Iso::Tag::SumC: {
      if (b->tag == Term::Tag::InL) {
        NormalValue inner = apply_iso_basis(w->a, b->a);
        std::vector<std::pair<Complex, TermPtr>> parts;
        for (auto& [c, t] : inner.parts) parts.emplace_back(c, mk_inl(t));
        return from_parts(std::move(parts));
      }
      if (b->tag == Term::Tag::InR) {
        NormalValue inner = apply_iso_basis(w->b, b->a);
        std::vector<std::pair<Complex, TermPtr>> parts;
        for (auto& [c, t] : inner.parts) parts.emplace_back(c, mk_inr(t));
        return from_parts(std::move(parts));
      }
      throw Error(errc::internal, "sum iso applied to non-injection basis value");
    }
    case Iso::Tag::Ctrl: {
      if (b->tag != Term::Tag::Pair || b->a->tag == Term::Tag::Var)
        throw Error(errc::internal, "ctrl applied to non-pair basis value");
      if (b->a->tag == Term::Tag::InL) return from_parts({{Complex(1, 0), b}});
      if (b->a->tag == Term::Tag::InR) {
        NormalValue inner = apply_iso_basis(w->a, b->b);
        std::vector<std::pair<Complex, TermPtr>> parts;
        for (auto& [c, t] : inner.parts) parts.emplace_back(c, mk_pair(b->a, t));
        return from_parts(std::move(parts));
      }
      throw Error(errc::internal, "ctrl applied to malformed control qubit");
    }
    case Iso::Tag::Compose: {
      NormalValue mid = apply_iso_basis(w->a, b);
      return apply_per_basis(w->b, mid);
    }
    case Iso::Tag::Inverse:
      return apply_iso(w, NormalValue{{{Complex(1, 0), b}}});
    default:
      throw Error(errc::dialect, "classical iso form in quantum evaluation");
  }
}

}  // namespace

NormalValue apply_iso(const IsoPtr& w, const NormalValue& v) {
  if (w->tag == Iso::Tag::Inverse) {
    const IsoPtr& inner = w->a;
    switch (inner->tag) {
      case Iso::Tag::Inverse:
        return apply_iso(inner->a, v);
      case Iso::Tag::Compose:
        return apply_iso(iso_inverse(inner->a), apply_iso(iso_inverse(inner->b), v));
      case Iso::Tag::Tensor:
        return apply_per_basis(iso_tensor(iso_inverse(inner->a), iso_inverse(inner->b)), v);
      case Iso::Tag::SumC:
        return apply_per_basis(iso_sum(iso_inverse(inner->a), iso_inverse(inner->b)), v);
      case Iso::Tag::Ctrl:
        return apply_per_basis(iso_ctrl(iso_inverse(inner->a)), v);
      case Iso::Tag::Clauses: {
        // invert by decomposing over the clause outputs and reassembling the
        // matching patterns
        std::vector<TermPtr> outputs;
        for (auto& [lhs, rhs] : inner->clauses) {
          (void)lhs;
          outputs.push_back(rhs);
        }
        if (!inner->ann)
          throw Error(errc::annotation, "inverse application needs an annotated clause set");
        ODSet od{inner->ann->dst, outputs, ODKind::Extended};
        std::vector<DecompItem> items = decompose(od, v.to_term());
        std::vector<std::pair<Complex, TermPtr>> parts;
        for (auto& item : items) {
          TermPtr pat = inner->clauses[item.index].first;
          TermPtr back = substitute(item.val, pat);
          parts.emplace_back(item.coef, back);
        }
        return from_parts(std::move(parts));
      }
      default:
        throw Error(errc::dialect, "classical iso form under inv");
    }
  }
  if (w->tag == Iso::Tag::Compose) return apply_iso(w->b, apply_iso(w->a, v));
  return apply_per_basis(w, v);
}

NormalValue normalize(const TermPtr& t) {
  switch (t->tag) {
    case Term::Tag::Unit:
    case Term::Tag::Zero:
      return NormalValue{{{Complex(1, 0), t}}};
    case Term::Tag::Var:
      throw Error(errc::unbound_var, "normalize expects a closed term, found variable '" +
                                         t->name + "'");
    case Term::Tag::InL:
    case Term::Tag::InR:
    case Term::Tag::Suc: {
      NormalValue inner = normalize(t->a);
      std::vector<std::pair<Complex, TermPtr>> parts;
      for (auto& [c, b] : inner.parts)
        parts.emplace_back(c, t->tag == Term::Tag::InL   ? mk_inl(b)
                              : t->tag == Term::Tag::InR ? mk_inr(b)
                                                         : mk_suc(b));
      return from_parts(std::move(parts));
    }
    case Term::Tag::Pair: {
      NormalValue l = normalize(t->a);
      NormalValue r = normalize(t->b);
      std::vector<std::pair<Complex, TermPtr>> parts;
      for (auto& [cl, tl] : l.parts)
        for (auto& [cr, tr] : r.parts) parts.emplace_back(cl * cr, mk_pair(tl, tr));
      return from_parts(std::move(parts));
    }
    case Term::Tag::Sum: {
      std::vector<std::pair<Complex, TermPtr>> parts;
      for (auto& [c, u] : t->parts) {
        NormalValue inner = normalize(u);
        for (auto& [c2, b] : inner.parts) parts.emplace_back(c * c2, b);
      }
      return from_parts(std::move(parts));
    }
    case Term::Tag::App:
      return apply_iso(t->iso, normalize(t->a));
    default:
      throw Error(errc::dialect, "classical construct in quantum normalization");
  }
}

NormalValue apply_inverse(const IsoPtr& w, const TermPtr& v) {
  return apply_iso(iso_inverse(w), normalize(v));
}

bool equal_terms(const TermPtr& t1, const TermPtr& t2) {
  NormalValue a = normalize(t1);
  NormalValue b = normalize(t2);
  if (a.parts.size() != b.parts.size()) return false;
  for (size_t i = 0; i < a.parts.size(); i++) {
    if (compare_basis(a.parts[i].second, b.parts[i].second) != 0) return false;
    if (!approx_equal(a.parts[i].first, b.parts[i].first)) return false;
  }
  return true;
}

}  // namespace revq
