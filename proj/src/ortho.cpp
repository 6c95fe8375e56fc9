#include "revq/ortho.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace revq {

// ---------------------------------------------------------------------------
// orthogonality

namespace {

// flatten a Sum term into merged (coef, component) rows; components are left
// as-is (they may be arbitrary terms), nested sums are distributed
void flatten_sum(const Complex& scale, const TermPtr& t,
                 std::vector<std::pair<Complex, TermPtr>>& out) {
  if (t->tag == Term::Tag::Sum) {
    for (auto& [c, u] : t->parts) flatten_sum(scale * c, u, out);
  } else {
    out.emplace_back(scale, t);
  }
}

std::vector<std::pair<Complex, TermPtr>> merged_components(const TermPtr& sum) {
  std::vector<std::pair<Complex, TermPtr>> flat;
  flatten_sum(Complex(1, 0), sum, flat);
  std::vector<std::pair<Complex, TermPtr>> merged;
  for (auto& [c, t] : flat) {
    bool found = false;
    for (auto& [mc, mt] : merged) {
      if (term_equal(mt, t)) {
        mc += c;
        found = true;
        break;
      }
    }
    if (!found) merged.emplace_back(c, t);
  }
  return merged;
}

TermPtr strip_lets(const TermPtr& t) {
  TermPtr cur = t;
  while (cur->tag == Term::Tag::Let) cur = cur->b;
  return cur;
}

bool ortho_rec(const TermPtr& a, const TermPtr& b, Dialect d);

// t (not a Sum) against the components of a sum: orthogonal to every
// component, except that components equal to t may appear with scalar ~0.
bool ortho_term_vs_sum(const TermPtr& t, const TermPtr& sum, Dialect d) {
  for (auto& [c, u] : merged_components(sum)) {
    if (term_equal(u, t)) {
      if (!approx_zero(c)) return false;
    } else if (!ortho_rec(t, u, d)) {
      return false;
    }
  }
  return true;
}

// Sum against Sum: all distinct components pairwise orthogonal and the inner
// product over syntactically matched components vanishes.
bool ortho_sum_vs_sum(const TermPtr& s1, const TermPtr& s2, Dialect d) {
  auto c1 = merged_components(s1);
  auto c2 = merged_components(s2);
  std::vector<TermPtr> family;
  auto add = [&](const TermPtr& t) {
    for (auto& f : family)
      if (term_equal(f, t)) return;
    family.push_back(t);
  };
  for (auto& [c, t] : c1) add(t);
  for (auto& [c, t] : c2) add(t);
  for (size_t i = 0; i < family.size(); i++)
    for (size_t j = i + 1; j < family.size(); j++)
      if (!ortho_rec(family[i], family[j], d)) return false;
  Complex ip(0, 0);
  for (auto& [ca, ta] : c1)
    for (auto& [cb, tb] : c2)
      if (term_equal(ta, tb)) ip += std::conj(ca) * cb;
  return approx_zero(ip);
}

bool ortho_rec(const TermPtr& a, const TermPtr& b, Dialect d) {
  if (d == Dialect::Classical) {
    TermPtr x = strip_lets(a), y = strip_lets(b);
    if (x->tag == Term::Tag::InL && y->tag == Term::Tag::InR) return true;
    if (x->tag == Term::Tag::InR && y->tag == Term::Tag::InL) return true;
    if (x->tag != y->tag) return false;
    switch (x->tag) {
      case Term::Tag::InL:
      case Term::Tag::InR:
      case Term::Tag::Fold:
        return ortho_rec(x->a, y->a, d);
      case Term::Tag::Pair:
        return ortho_rec(x->a, y->a, d) || ortho_rec(x->b, y->b, d);
      default:
        return false;
    }
  }
  // quantum
  if (a->tag == Term::Tag::Sum && b->tag == Term::Tag::Sum) return ortho_sum_vs_sum(a, b, d);
  if (b->tag == Term::Tag::Sum) return ortho_term_vs_sum(a, b, d);
  if (a->tag == Term::Tag::Sum) return ortho_term_vs_sum(b, a, d);
  if (a->tag == Term::Tag::InL && b->tag == Term::Tag::InR) return true;
  if (a->tag == Term::Tag::InR && b->tag == Term::Tag::InL) return true;
  if (a->tag == Term::Tag::Zero && b->tag == Term::Tag::Suc) return true;
  if (a->tag == Term::Tag::Suc && b->tag == Term::Tag::Zero) return true;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case Term::Tag::InL:
    case Term::Tag::InR:
    case Term::Tag::Suc:
      return ortho_rec(a->a, b->a, d);
    case Term::Tag::Pair:
      return ortho_rec(a->a, b->a, d) || ortho_rec(a->b, b->b, d);
    case Term::Tag::App:
      return iso_equal(a->iso, b->iso) && ortho_rec(a->a, b->a, d);
    default:
      return false;
  }
}

}  // namespace

bool orthogonal(const TermPtr& t1, const TermPtr& t2, Dialect dialect) {
  return ortho_rec(t1, t2, dialect);
}

// ---------------------------------------------------------------------------
// orthogonal decompositions

TermPtr canonicalize_expression(const TermPtr& e) {
  return canonicalize_sum(combination_of_expression(e));
}

namespace {

// comparison of decomposition elements up to the vector-space equations
bool same_element(const TermPtr& a, const TermPtr& b) {
  if (term_equal(a, b)) return true;
  return term_equal(canonicalize_expression(a), canonicalize_expression(b));
}

// a top-level linear combination (after light flattening): rows of
// (coefficient, non-Sum component)
bool is_sum_element(const TermPtr& e) { return e->tag == Term::Tag::Sum; }

std::vector<std::pair<Complex, TermPtr>> element_rows(const TermPtr& e) {
  if (e->tag != Term::Tag::Sum) return {{Complex(1, 0), e}};
  return merged_components(e);
}

struct SAlpha {
  std::vector<TermPtr> support;           // distinct components (original form)
  std::vector<std::vector<Complex>> m;    // coefficient matrix, rows = elements
};

// extract the change-of-basis data; false when the support has the wrong size
bool extract_salpha(const std::vector<TermPtr>& S, SAlpha& out) {
  out.support.clear();
  out.m.assign(S.size(), {});
  for (size_t i = 0; i < S.size(); i++) {
    for (auto& [c, comp] : element_rows(S[i])) {
      size_t j = 0;
      for (; j < out.support.size(); j++)
        if (same_element(out.support[j], comp)) break;
      if (j == out.support.size()) out.support.push_back(comp);
      (void)c;
    }
  }
  if (out.support.size() != S.size()) return false;
  size_t n = S.size();
  for (size_t i = 0; i < n; i++) {
    out.m[i].assign(n, Complex(0, 0));
    for (auto& [c, comp] : element_rows(S[i])) {
      size_t j = 0;
      while (j < n && !same_element(out.support[j], comp)) j++;
      out.m[i][j] += c;
    }
  }
  return true;
}

bool matrix_unitary(const std::vector<std::vector<Complex>>& m) {
  size_t n = m.size();
  for (size_t i = 0; i < n; i++)
    for (size_t j = 0; j < n; j++) {
      Complex s(0, 0);
      for (size_t k = 0; k < n; k++) s += m[i][k] * std::conj(m[j][k]);
      if (i == j) s -= Complex(1, 0);
      if (std::abs(s) >= eps()) return false;
    }
  return true;
}

struct TensorGrouping {
  bool by_first = true;
  std::vector<TermPtr> keys;                  // distinct projections
  std::vector<std::vector<TermPtr>> groups;   // co-projections per key
  std::vector<std::vector<size_t>> backrefs;  // element indices per group slot
};

bool structural_od(const TypePtr& ty, const std::vector<TermPtr>& S, bool extended);

bool try_tensor_grouping(const TypePtr& ty, const std::vector<TermPtr>& S, bool by_first,
                         bool extended, TensorGrouping& out) {
  out = TensorGrouping{};
  out.by_first = by_first;
  for (size_t i = 0; i < S.size(); i++) {
    const TermPtr& el = S[i];
    if (el->tag != Term::Tag::Pair) return false;
    TermPtr key = by_first ? el->a : el->b;
    TermPtr val = by_first ? el->b : el->a;
    size_t k = out.keys.size();
    for (size_t j = 0; j < out.keys.size(); j++)
      if (same_element(out.keys[j], key)) {
        k = j;
        break;
      }
    if (k == out.keys.size()) {
      out.keys.push_back(key);
      out.groups.emplace_back();
      out.backrefs.emplace_back();
    }
    out.groups[k].push_back(val);
    out.backrefs[k].push_back(i);
  }
  const TypePtr key_ty = by_first ? ty->lhs : ty->rhs;
  const TypePtr val_ty = by_first ? ty->rhs : ty->lhs;
  if (!structural_od(key_ty, out.keys, extended)) return false;
  for (auto& g : out.groups)
    if (!structural_od(val_ty, g, extended)) return false;
  return true;
}

// Syntax-directed decision procedure over the original elements; canonical
// forms are used only to compare components.
bool structural_od(const TypePtr& ty, const std::vector<TermPtr>& S, bool extended) {
  if (S.empty()) return false;
  for (size_t i = 0; i < S.size(); i++)
    for (size_t j = i + 1; j < S.size(); j++)
      if (same_element(S[i], S[j])) return false;
  if (S.size() == 1 && S[0]->tag == Term::Tag::Var) return true;
  bool any_sum = false;
  for (auto& el : S) any_sum |= is_sum_element(el);
  if (any_sum) {
    if (!extended) return false;
    SAlpha sa;
    if (!extract_salpha(S, sa)) return false;
    if (!structural_od(ty, sa.support, extended)) return false;
    return matrix_unitary(sa.m);
  }
  for (auto& el : S)
    if (el->tag == Term::Tag::Var) return false;  // variable only as singleton
  switch (ty->tag) {
    case Type::Tag::Unit:
      return S.size() == 1 && S[0]->tag == Term::Tag::Unit;
    case Type::Tag::Sum: {
      std::vector<TermPtr> L, R;
      for (auto& el : S) {
        if (el->tag == Term::Tag::InL)
          L.push_back(el->a);
        else if (el->tag == Term::Tag::InR)
          R.push_back(el->a);
        else
          return false;
      }
      if (L.empty() || R.empty()) return false;
      return structural_od(ty->lhs, L, extended) && structural_od(ty->rhs, R, extended);
    }
    case Type::Tag::Nat: {
      std::vector<TermPtr> sucs;
      size_t zeros = 0;
      for (auto& el : S) {
        if (el->tag == Term::Tag::Zero)
          zeros++;
        else if (el->tag == Term::Tag::Suc)
          sucs.push_back(el->a);
        else
          return false;
      }
      if (zeros != 1 || sucs.empty()) return false;
      return structural_od(ty, sucs, extended);
    }
    case Type::Tag::Tensor: {
      TensorGrouping g;
      return try_tensor_grouping(ty, S, true, extended, g) ||
             try_tensor_grouping(ty, S, false, extended, g);
    }
    default:
      return false;
  }
}

}  // namespace

bool check_od(const TypePtr& type, const std::vector<TermPtr>& S, ODKind kind) {
  if (S.empty()) return false;
  for (auto& el : S) {
    if (kind == ODKind::Basis) {
      if (!is_basis_value(el))
        throw Error(errc::malformed, "basis decomposition element is not a basis value");
    } else if (el->tag == Term::Tag::App || el->tag == Term::Tag::Let) {
      throw Error(errc::malformed, "decomposition element contains an application");
    }
  }
  return structural_od(type, S, kind == ODKind::Extended);
}

// ---------------------------------------------------------------------------
// decomposition of closed expressions

namespace {

struct ItemAcc {
  std::vector<DecompItem> items;

  static bool same_valuation(const Valuation& a, const Valuation& b) {
    if (a.size() != b.size()) return false;
    auto it1 = a.begin();
    auto it2 = b.begin();
    for (; it1 != a.end(); ++it1, ++it2)
      if (it1->first != it2->first || !term_equal(it1->second, it2->second)) return false;
    return true;
  }

  void add(Complex c, size_t idx, const TermPtr& element, const Valuation& v) {
    for (auto& item : items) {
      if (item.index == idx && same_valuation(item.val, v)) {
        item.coef += c;
        return;
      }
    }
    items.push_back(DecompItem{c, idx, element, v});
  }

  std::vector<DecompItem> take() {
    std::vector<DecompItem> out;
    for (auto& item : items)
      if (!approx_zero(item.coef)) out.push_back(item);
    return out;
  }
};

// decompose a single closed basis value over the elements; emits
// (coef, local element index, valuation)
void decomp_basis(const TypePtr& ty, const std::vector<TermPtr>& elems, const TermPtr& b,
                  const Complex& scale,
                  const std::function<void(Complex, size_t, const Valuation&)>& emit) {
  if (elems.size() == 1 && elems[0]->tag == Term::Tag::Var) {
    Valuation v{{elems[0]->name, b}};
    emit(scale, 0, v);
    return;
  }
  bool any_sum = false;
  for (auto& el : elems) any_sum |= is_sum_element(el);
  if (any_sum) {
    // change-of-basis: decompose over the support, then apply the conjugate
    // transpose of the coefficient matrix
    SAlpha sa;
    if (!extract_salpha(elems, sa))
      throw Error(errc::internal, "decompose: support size mismatch in unitary case");
    size_t n = elems.size();
    decomp_basis(ty, sa.support, b, scale, [&](Complex c, size_t j, const Valuation& v) {
      for (size_t i = 0; i < n; i++) {
        Complex coef = c * std::conj(sa.m[i][j]);
        if (approx_zero(coef)) continue;
        for (auto& fv : free_vars(elems[i]))
          if (!v.count(fv))
            throw Error(errc::internal, "decompose: valuation does not cover element variables");
        emit(coef, i, v);
      }
    });
    return;
  }
  switch (ty->tag) {
    case Type::Tag::Unit: {
      if (b->tag != Term::Tag::Unit || elems.size() != 1)
        throw Error(errc::internal, "decompose: unit case mismatch");
      emit(scale, 0, Valuation{});
      return;
    }
    case Type::Tag::Sum: {
      std::vector<TermPtr> sub;
      std::vector<size_t> back;
      bool left = b->tag == Term::Tag::InL;
      if (b->tag != Term::Tag::InL && b->tag != Term::Tag::InR)
        throw Error(errc::internal, "decompose: sum case mismatch");
      for (size_t i = 0; i < elems.size(); i++) {
        if (left && elems[i]->tag == Term::Tag::InL) {
          sub.push_back(elems[i]->a);
          back.push_back(i);
        } else if (!left && elems[i]->tag == Term::Tag::InR) {
          sub.push_back(elems[i]->a);
          back.push_back(i);
        }
      }
      decomp_basis(left ? ty->lhs : ty->rhs, sub, b->a, scale,
                   [&](Complex c, size_t j, const Valuation& v) { emit(c, back[j], v); });
      return;
    }
    case Type::Tag::Nat: {
      if (b->tag == Term::Tag::Zero) {
        for (size_t i = 0; i < elems.size(); i++)
          if (elems[i]->tag == Term::Tag::Zero) {
            emit(scale, i, Valuation{});
            return;
          }
        throw Error(errc::internal, "decompose: no zero element");
      }
      if (b->tag != Term::Tag::Suc) throw Error(errc::internal, "decompose: nat case mismatch");
      std::vector<TermPtr> sub;
      std::vector<size_t> back;
      for (size_t i = 0; i < elems.size(); i++)
        if (elems[i]->tag == Term::Tag::Suc) {
          sub.push_back(elems[i]->a);
          back.push_back(i);
        }
      decomp_basis(ty, sub, b->a, scale,
                   [&](Complex c, size_t j, const Valuation& v) { emit(c, back[j], v); });
      return;
    }
    case Type::Tag::Tensor: {
      if (b->tag != Term::Tag::Pair)
        throw Error(errc::internal, "decompose: tensor case mismatch");
      TensorGrouping g;
      if (!try_tensor_grouping(ty, elems, true, true, g) &&
          !try_tensor_grouping(ty, elems, false, true, g))
        throw Error(errc::internal, "decompose: tensor grouping failed on valid OD");
      const TypePtr key_ty = g.by_first ? ty->lhs : ty->rhs;
      const TypePtr val_ty = g.by_first ? ty->rhs : ty->lhs;
      TermPtr key_b = g.by_first ? b->a : b->b;
      TermPtr val_b = g.by_first ? b->b : b->a;
      decomp_basis(key_ty, g.keys, key_b, scale, [&](Complex c1, size_t k, const Valuation& v1) {
        decomp_basis(val_ty, g.groups[k], val_b, c1,
                     [&](Complex c2, size_t j, const Valuation& v2) {
                       Valuation merged = v1;
                       for (auto& [n, t] : v2) {
                         if (merged.count(n))
                           throw Error(errc::malformed,
                                       "overlapping variable supports in decomposition");
                         merged[n] = t;
                       }
                       emit(c2, g.backrefs[k][j], merged);
                     });
      });
      return;
    }
    default:
      throw Error(errc::internal, "decompose: unsupported type");
  }
}

}  // namespace

std::vector<DecompItem> decompose(const ODSet& od, const TermPtr& e) {
  auto comb = combination_of_expression(e);
  ItemAcc acc;
  for (auto& [c, b] : comb) {
    if (!free_vars(b).empty())
      throw Error(errc::malformed, "decompose expects a closed expression");
    decomp_basis(od.type, od.elements, b, c, [&](Complex coef, size_t idx, const Valuation& v) {
      acc.add(coef, idx, od.elements[idx], v);
    });
  }
  return acc.take();
}

}  // namespace revq
