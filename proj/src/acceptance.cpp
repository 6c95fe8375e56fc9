#include "revq/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "revq/ast.hpp"
#include "revq/ceval.hpp"
#include "revq/denote.hpp"
#include "revq/ortho.hpp"
#include "revq/parser.hpp"
#include "revq/qeval.hpp"
#include "revq/stdlib.hpp"
#include "revq/typeck.hpp"

namespace revq::accept {

namespace {

constexpr int kCutoff = 8;  // Nat truncation used throughout the suite

// ---------------------------------------------------------------------------
// random generation

struct Gen {
  std::mt19937 rng;

  explicit Gen(unsigned seed) : rng(seed) {}

  int irange(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  double ureal() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }
  Complex coef() {
    std::normal_distribution<double> n(0.0, 1.0);
    return Complex(n(rng), n(rng));
  }

  int dim(const TypePtr& ty) {
    switch (ty->tag) {
      case Type::Tag::Unit:
        return 1;
      case Type::Tag::Nat:
        return kCutoff;
      case Type::Tag::Sum:
        return dim(ty->lhs) + dim(ty->rhs);
      case Type::Tag::Tensor:
        return dim(ty->lhs) * dim(ty->rhs);
      default:
        return 0;
    }
  }

  bool finite(const TypePtr& ty) {
    switch (ty->tag) {
      case Type::Tag::Unit:
        return true;
      case Type::Tag::Nat:
        return false;
      case Type::Tag::Sum:
      case Type::Tag::Tensor:
        return finite(ty->lhs) && finite(ty->rhs);
      default:
        return false;
    }
  }

  TypePtr rand_type(int max_dim, bool allow_nat, int depth = 0) {
    for (;;) {
      int pick = irange(0, 9);
      if (depth >= 3 || max_dim <= 1 || pick <= 2) return ty_unit();
      if (pick <= 4 && allow_nat && max_dim >= kCutoff) return ty_nat();
      if (pick <= 7 && max_dim >= 2) {
        TypePtr a = rand_type(max_dim - 1, allow_nat, depth + 1);
        TypePtr b = rand_type(max_dim - dim(a), allow_nat, depth + 1);
        return ty_sum(a, b);
      }
      if (max_dim >= 2) {
        TypePtr a = rand_type(max_dim / 2 < 2 ? 2 : max_dim / 2, allow_nat, depth + 1);
        int da = dim(a);
        if (da == 0 || da > max_dim) continue;
        TypePtr b = rand_type(std::max(1, max_dim / da), allow_nat, depth + 1);
        return ty_tensor(a, b);
      }
    }
  }

  TermPtr rand_basis(const TypePtr& ty) {
    switch (ty->tag) {
      case Type::Tag::Unit:
        return mk_unit();
      case Type::Tag::Nat:
        return mk_nat_q(static_cast<unsigned>(irange(0, 4)));
      case Type::Tag::Sum:
        return irange(0, 1) ? mk_inl(rand_basis(ty->lhs)) : mk_inr(rand_basis(ty->rhs));
      case Type::Tag::Tensor:
        return mk_pair(rand_basis(ty->lhs), rand_basis(ty->rhs));
      default:
        throw Error(errc::internal, "rand_basis on classical type");
    }
  }

  TermPtr rand_value(const TypePtr& ty) {
    int d = dim(ty);
    int k = irange(1, std::min(4, d));
    std::vector<TermPtr> basis;
    int guard = 0;
    while (static_cast<int>(basis.size()) < k && guard++ < 200) {
      TermPtr b = rand_basis(ty);
      bool dup = false;
      for (auto& x : basis) dup |= compare_basis(x, b) == 0;
      if (!dup) basis.push_back(b);
    }
    std::vector<std::pair<Complex, TermPtr>> parts;
    double norm2 = 0;
    std::vector<Complex> cs;
    for (size_t i = 0; i < basis.size(); i++) {
      Complex c = coef();
      cs.push_back(c);
      norm2 += std::norm(c);
    }
    double inv = 1.0 / std::sqrt(norm2);
    for (size_t i = 0; i < basis.size(); i++) parts.emplace_back(cs[i] * inv, basis[i]);
    return mk_sum(std::move(parts));
  }

  // random unitary by Gram-Schmidt on a random complex matrix
  std::vector<std::vector<Complex>> rand_unitary(int k) {
    std::vector<std::vector<Complex>> m(k, std::vector<Complex>(k));
    for (int i = 0; i < k; i++)
      for (int j = 0; j < k; j++) m[i][j] = coef();
    for (int i = 0; i < k; i++) {
      for (int p = 0; p < i; p++) {
        Complex ip(0, 0);
        for (int j = 0; j < k; j++) ip += std::conj(m[p][j]) * m[i][j];
        for (int j = 0; j < k; j++) m[i][j] -= ip * m[p][j];
      }
      double n2 = 0;
      for (int j = 0; j < k; j++) n2 += std::norm(m[i][j]);
      double inv = 1.0 / std::sqrt(n2);
      for (int j = 0; j < k; j++) m[i][j] *= inv;
    }
    return m;
  }

  IsoPtr rand_clause_unitary(const TypePtr& ty) {
    BasisEnumeration e = enumerate_basis(ty, kCutoff);
    int k = e.dim();
    auto u = rand_unitary(k);
    std::vector<std::pair<TermPtr, TermPtr>> clauses;
    for (int i = 0; i < k; i++) {
      std::vector<std::pair<Complex, TermPtr>> parts;
      for (int j = 0; j < k; j++)
        if (std::abs(u[i][j]) > 1e-12) parts.emplace_back(u[i][j], e.values[j]);
      clauses.emplace_back(e.values[i], mk_sum(std::move(parts)));
    }
    return iso_clauses(std::move(clauses), it_ground(ty, ty));
  }

  IsoPtr nat_swap01() {
    std::vector<std::pair<TermPtr, TermPtr>> clauses;
    clauses.emplace_back(mk_zero(), mk_suc(mk_zero()));
    clauses.emplace_back(mk_suc(mk_zero()), mk_zero());
    clauses.emplace_back(mk_suc(mk_suc(mk_var("x"))), mk_suc(mk_suc(mk_var("x"))));
    return iso_clauses(std::move(clauses), it_ground(ty_nat(), ty_nat()));
  }

  IsoPtr identity_iso(const TypePtr& ty) {
    return iso_clauses({{mk_var("x"), mk_var("x")}}, it_ground(ty, ty));
  }

  // endo iso at ty
  IsoPtr rand_iso(const TypePtr& ty, int depth) {
    if (depth > 0) {
      int pick = irange(0, 5);
      if (pick == 0) return iso_compose(rand_iso(ty, depth - 1), rand_iso(ty, depth - 1));
      if (pick == 1) return iso_inverse(rand_iso(ty, depth - 1));
      if (pick == 2 && ty->tag == Type::Tag::Tensor && type_equal(ty->lhs, ty_bool()))
        return iso_ctrl(rand_iso(ty->rhs, depth - 1));
      if (pick == 3 && ty->tag == Type::Tag::Tensor)
        return iso_tensor(rand_iso(ty->lhs, depth - 1), rand_iso(ty->rhs, depth - 1));
      if (pick == 4 && ty->tag == Type::Tag::Sum)
        return iso_sum(rand_iso(ty->lhs, depth - 1), rand_iso(ty->rhs, depth - 1));
    }
    if (finite(ty) && dim(ty) <= 8 && irange(0, 3) > 0) return rand_clause_unitary(ty);
    if (ty->tag == Type::Tag::Nat) return irange(0, 1) ? nat_swap01() : identity_iso(ty);
    if (ty->tag == Type::Tag::Tensor && irange(0, 1))
      return iso_tensor(rand_iso(ty->lhs, 0), rand_iso(ty->rhs, 0));
    if (ty->tag == Type::Tag::Sum && irange(0, 1))
      return iso_sum(rand_iso(ty->lhs, 0), rand_iso(ty->rhs, 0));
    return identity_iso(ty);
  }

  TermPtr rand_term(const TypePtr& ty, int depth) {
    if (depth <= 0) return rand_value(ty);
    int pick = irange(0, 3);
    if (pick == 0) return rand_value(ty);
    if (pick == 1) return mk_app(rand_iso(ty, irange(0, 2)), rand_term(ty, depth - 1));
    if (pick == 2 && ty->tag == Type::Tag::Tensor)
      return mk_pair(rand_term(ty->lhs, depth - 1), rand_term(ty->rhs, depth - 1));
    if (pick == 3 && ty->tag == Type::Tag::Sum)
      return irange(0, 1) ? mk_inl(rand_term(ty->lhs, depth - 1))
                          : mk_inr(rand_term(ty->rhs, depth - 1));
    return mk_app(rand_iso(ty, 1), rand_term(ty, depth - 1));
  }

  // random orthogonal decompositions following the inference rules
  std::vector<TermPtr> rand_od(const TypePtr& ty, bool extended, int depth, int& varc) {
    if (ureal() < 0.15 || depth > 4) return {mk_var("v" + std::to_string(varc++))};
    std::vector<TermPtr> out;
    switch (ty->tag) {
      case Type::Tag::Unit:
        out = {mk_unit()};
        break;
      case Type::Tag::Sum: {
        for (auto& l : rand_od(ty->lhs, extended, depth + 1, varc)) out.push_back(mk_inl(l));
        for (auto& r : rand_od(ty->rhs, extended, depth + 1, varc)) out.push_back(mk_inr(r));
        break;
      }
      case Type::Tag::Nat: {
        out.push_back(mk_zero());
        std::vector<TermPtr> tail =
            depth >= 2 ? std::vector<TermPtr>{mk_var("v" + std::to_string(varc++))}
                       : rand_od(ty, extended, depth + 1, varc);
        for (auto& s : tail) out.push_back(mk_suc(s));
        break;
      }
      case Type::Tag::Tensor: {
        for (auto& f : rand_od(ty->lhs, extended, depth + 1, varc)) {
          for (auto& g : rand_od(ty->rhs, extended, depth + 1, varc))
            out.push_back(mk_pair(f, g));
        }
        break;
      }
      default:
        throw Error(errc::internal, "rand_od on classical type");
    }
    if (extended && ureal() < 0.5) {
      bool closed = true;
      for (auto& e : out) closed &= free_vars(e).empty();
      if (closed && out.size() <= 6) {
        auto u = rand_unitary(static_cast<int>(out.size()));
        std::vector<TermPtr> rotated;
        for (size_t i = 0; i < out.size(); i++) {
          std::vector<std::pair<Complex, TermPtr>> parts;
          for (size_t j = 0; j < out.size(); j++)
            if (std::abs(u[i][j]) > 1e-12) parts.emplace_back(u[i][j], out[j]);
          rotated.push_back(mk_sum(std::move(parts)));
        }
        return rotated;
      }
    }
    return out;
  }
};

// context for an OD element: basis values bind a pattern context; a sum's
// components all share one context, so the first component determines it
std::vector<std::pair<std::string, TypePtr>> od_element_ctx(const TermPtr& e, const TypePtr& ty) {
  if (is_basis_value(e)) return bind_pattern(e, ty, Dialect::Quantum);
  if (e->tag == Term::Tag::Sum && !e->parts.empty())
    return bind_pattern(e->parts[0].second, ty, Dialect::Quantum);
  return {};
}

// ---------------------------------------------------------------------------
// criterion helpers

struct Crit {
  Result r;
  std::ostringstream fail;
  std::chrono::steady_clock::time_point t0;

  Crit(int id, std::string name) {
    r.id = id;
    r.name = std::move(name);
    t0 = std::chrono::steady_clock::now();
  }
  void expect(bool cond, const std::string& what) {
    if (!cond && r.detail.empty()) r.detail = what;
  }
  Result finish() {
    r.pass = r.detail.empty();
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }
};

std::string fmt_value(const NormalValue& nv) { return pretty(nv.to_term(), 12); }

// --------------------------------------------------------------------------

Result crit1_hadamard() {
  Crit c(1, "Hadamard behavior");
  try {
    SourceProgram prog = parse(lib::hadamard_source(), Dialect::Quantum);
    check_program(prog);
    const Decl* had = prog.pick_iso("had");
    NormalValue nv = normalize(mk_app(had->iso, mk_inl(mk_unit())));
    c.expect(nv.parts.size() == 2, "expected a two-component superposition");
    if (nv.parts.size() == 2) {
      c.expect(term_equal(nv.parts[0].second, mk_inl(mk_unit())) &&
                   term_equal(nv.parts[1].second, mk_inr(mk_unit())),
               "wrong basis spine");
      c.expect(std::abs(nv.parts[0].first - Complex(SQRT2_INV, 0)) < 1e-9 &&
                   std::abs(nv.parts[1].first - Complex(SQRT2_INV, 0)) < 1e-9,
               "wrong amplitudes");
    }
    Matrix m = sem_iso(had->iso, kCutoff);
    Matrix expect = Matrix::zeros(2, 2);
    expect.set(0, 0, Complex(SQRT2_INV, 0));
    expect.set(0, 1, Complex(SQRT2_INV, 0));
    expect.set(1, 0, Complex(SQRT2_INV, 0));
    expect.set(1, 1, Complex(-SQRT2_INV, 0));
    c.expect(m.inf_norm_diff(expect) < 1e-9, "matrix differs from the textbook Hadamard");
    c.expect(check_unitary(m), "unitarity check failed");
    c.expect(fmt_value(nv) == "0.707106781187 * inl * + 0.707106781187 * inr *",
             "printed value mismatch: " + fmt_value(nv));
  } catch (const Error& e) {
    c.expect(false, std::string("error: ") + e.what());
  }
  return c.finish();
}

Result crit2_isometry(Gen& g) {
  Crit c(2, "Isometry suite (500 random closed terms)");
  int checked = 0;
  for (int i = 0; i < 500; i++) {
    TypePtr ty = g.rand_type(16, true);
    TermPtr t = g.rand_term(ty, g.irange(0, 3));
    try {
      typecheck_term_at(Context{}, t, ty, Dialect::Quantum);
      Matrix m = sem_term_closed(t, ty, kCutoff);
      double res = isometry_residual(m);
      c.expect(res < 1e-8, "isometry residual " + std::to_string(res) + " for " + pretty(t, 6));
      checked++;
    } catch (const Error& e) {
      c.expect(false, std::string("generator produced an invalid term: ") + e.what());
    }
  }
  c.expect(checked == 500, "wrong sample count");
  return c.finish();
}

Result crit3_completeness(Gen& g) {
  Crit c(3, "Completeness bridge (300 term pairs)");
  for (int i = 0; i < 300; i++) {
    TypePtr ty = g.rand_type(12, i % 2 == 0);
    TermPtr t1 = g.rand_term(ty, g.irange(0, 2));
    TermPtr t2;
    int mode = g.irange(0, 2);
    if (mode == 0) {
      t2 = g.rand_term(ty, g.irange(0, 2));
    } else if (mode == 1) {
      // equal by construction: compose an iso with its inverse
      IsoPtr w = g.rand_iso(ty, 1);
      t2 = mk_app(iso_inverse(w), mk_app(w, t1));
    } else {
      t2 = mk_app(g.identity_iso(ty), t1);
    }
    try {
      typecheck_term_at(Context{}, t1, ty, Dialect::Quantum);
      typecheck_term_at(Context{}, t2, ty, Dialect::Quantum);
      bool eq = equal_terms(t1, t2);
      Matrix m1 = sem_term_closed(t1, ty, kCutoff);
      Matrix m2 = sem_term_closed(t2, ty, kCutoff);
      bool close = m1.inf_norm_diff(m2) < 1e-8;
      c.expect(eq == close, std::string("discrepancy: equal_terms=") + (eq ? "true" : "false") +
                                " but matrix distance " + std::to_string(m1.inf_norm_diff(m2)));
    } catch (const Error& e) {
      c.expect(false, std::string("error: ") + e.what());
    }
  }
  return c.finish();
}

Result crit4_inverse(Gen& g) {
  Crit c(4, "Inverse round-trip (300 samples)");
  for (int i = 0; i < 300; i++) {
    TypePtr ty = g.rand_type(12, i % 3 == 0);
    IsoPtr w = g.rand_iso(ty, g.irange(0, 2));
    TermPtr v = g.rand_term(ty, 1);
    try {
      typecheck_term_at(Context{}, v, ty, Dialect::Quantum);
      NormalValue forward = normalize(mk_app(w, v));
      NormalValue back = apply_inverse(w, forward.to_term());
      NormalValue vn = normalize(v);
      bool same = back.parts.size() == vn.parts.size();
      if (same)
        for (size_t k = 0; k < back.parts.size(); k++)
          same = same && compare_basis(back.parts[k].second, vn.parts[k].second) == 0 &&
                 std::abs(back.parts[k].first - vn.parts[k].first) < 1e-8;
      c.expect(same, "round-trip mismatch: " + fmt_value(back) + " vs " + fmt_value(vn));
      Matrix mi = sem_iso(iso_inverse(w), kCutoff);
      Matrix md = sem_iso(w, kCutoff).dagger();
      c.expect(mi.inf_norm_diff(md) < 1e-8, "inverse matrix is not the conjugate transpose");
      c.expect(mi.mul(sem_iso(w, kCutoff)).inf_norm_diff_identity() < 1e-8,
               "inverse does not cancel the iso");
    } catch (const Error& e) {
      c.expect(false, std::string("error: ") + e.what());
    }
  }
  return c.finish();
}

Result crit5_od(Gen& g) {
  Crit c(5, "Orthogonal decomposition laws");
  // fixed instances
  std::vector<std::pair<TypePtr, std::vector<TermPtr>>> fixed;
  fixed.emplace_back(ty_bool(), std::vector<TermPtr>{mk_inl(mk_unit()), mk_inr(mk_unit())});
  fixed.emplace_back(ty_nat(), std::vector<TermPtr>{mk_var("x")});
  fixed.emplace_back(ty_nat(), std::vector<TermPtr>{mk_zero(), mk_suc(mk_zero()),
                                                    mk_suc(mk_suc(mk_var("x")))});
  {
    TermPtr plus = mk_sum({{Complex(SQRT2_INV, 0), mk_inl(mk_unit())},
                           {Complex(SQRT2_INV, 0), mk_inr(mk_unit())}});
    TermPtr minus = mk_sum({{Complex(SQRT2_INV, 0), mk_inl(mk_unit())},
                            {Complex(-SQRT2_INV, 0), mk_inr(mk_unit())}});
    fixed.emplace_back(ty_bool(), std::vector<TermPtr>{plus, minus});
  }
  {
    // projection-order counterexample from the tensor rule remark
    TypePtr a = ty_sum(ty_unit(), ty_bool());
    TypePtr b = ty_bool();
    std::vector<TermPtr> s{mk_pair(mk_inl(mk_unit()), mk_var("y")),
                           mk_pair(mk_inr(mk_var("x")), mk_inl(mk_unit())),
                           mk_pair(mk_inr(mk_var("x")), mk_inr(mk_unit()))};
    fixed.emplace_back(ty_tensor(a, b), s);
  }
  int total = 0;
  auto check_one = [&](const TypePtr& ty, const std::vector<TermPtr>& els) {
    total++;
    bool ok = check_od(ty, els, ODKind::Extended);
    c.expect(ok, "check_od rejected a valid decomposition at " + show_type(ty));
    if (!ok) return;
    for (size_t i = 0; i < els.size(); i++)
      for (size_t j = i + 1; j < els.size(); j++)
        c.expect(orthogonal(els[i], els[j], Dialect::Quantum),
                 "decomposition elements not pairwise orthogonal");
    int d = 0;
    try {
      Matrix acc = Matrix::zeros(1, 1);
      bool first = true;
      for (auto& e : els) {
        TermPtr canon = canonicalize_expression(e);
        auto ctx = od_element_ctx(canon, ty);
        Matrix m = sem_term(ctx, canon, ty, kCutoff);
        Matrix mm = m.mul(m.dagger());
        if (first) {
          acc = mm;
          first = false;
        } else {
          acc = acc.plus_scaled(Complex(1, 0), mm);
        }
        d = m.rows();
      }
      (void)d;
      double res = acc.inf_norm_diff_identity();
      c.expect(res < 1e-8, "resolution of identity residual " + std::to_string(res) + " at " +
                               show_type(ty));
    } catch (const Error& e) {
      c.expect(false, std::string("error: ") + e.what());
    }
  };
  for (auto& [ty, els] : fixed) check_one(ty, els);
  int varc = 0;
  for (int i = 0; i < 110; i++) {
    TypePtr ty = g.rand_type(12, i % 4 == 0);
    std::vector<TermPtr> els = g.rand_od(ty, true, 0, varc);
    check_one(ty, els);
  }
  c.expect(total >= 105, "not enough decompositions exercised");
  return c.finish();
}

Result crit6_determinism() {
  Crit c(6, "Classical determinism and subject reduction");
  std::vector<std::pair<TermPtr, TypePtr>> jobs;
  FixTypes ft;

  auto add_program = [&](const std::string& src, const std::string& iso_name,
                         const std::vector<TermPtr>& inputs, const TypePtr& in_ty) {
    SourceProgram prog = parse(src, Dialect::Classical);
    FixTypes local = check_program(prog);
    ft.insert(local.begin(), local.end());
    const Decl* d = prog.pick_iso(iso_name);
    for (auto& v : inputs) {
      jobs.emplace_back(mk_app(d->iso, v), d->iso_type->dst);
      (void)in_ty;
    }
  };

  // cantor on a grid
  {
    std::vector<TermPtr> ins;
    for (int i = 0; i <= 5; i++)
      for (int j = 0; j <= 5; j++)
        ins.push_back(mk_pair(mk_nat_rec(i), mk_nat_rec(j)));
    add_program(lib::cantor_source(), "cantor", ins, nullptr);
  }
  // dup over enumerated values of a few types
  for (const char* tys : {"nat", "[I + I]", "(I + I) * nat"}) {
    TypePtr a = parse_type(tys, Dialect::Classical);
    BasisEnumeration e = enumerate_basis(a, 9);
    add_program(lib::dup_source(a), "dup", e.values, a);
  }
  // map succ over lists
  {
    SourceProgram prog = parse(lib::map_source(ty_nat_rec(), ty_nat_rec()), Dialect::Classical);
    FixTypes local = check_program(prog);
    ft.insert(local.begin(), local.end());
    const Decl* mp = prog.pick_iso("map");
    const Decl* sc = prog.pick_iso("succ");
    for (int len = 0; len <= 5; len++) {
      std::vector<TermPtr> xs;
      for (int k = 0; k < len; k++) xs.push_back(mk_nat_rec((k * 2) % 4));
      jobs.emplace_back(mk_app(iso_app(mp->iso, sc->iso), mk_list(xs)),
                        ty_list(ty_nat_rec()));
    }
  }
  // rmblank / rev / growth on symbol lists
  {
    lib::RTMSpec m = lib::unary_increment();
    TypePtr s = lib::symbol_type(m);
    SourceProgram prog = parse(lib::cleanup_source(m), Dialect::Classical);
    FixTypes local = check_program(prog);
    ft.insert(local.begin(), local.end());
    const Decl* rb = prog.pick_iso("rmblank");
    const Decl* rv = prog.pick_iso("revs");
    BasisEnumeration lists = enumerate_basis(ty_list(s), 13);
    for (auto& v : lists.values) {
      jobs.emplace_back(mk_app(rb->iso, v), rb->iso_type->dst);
      jobs.emplace_back(mk_app(rv->iso, v), rv->iso_type->dst);
    }
  }
  // pad with a rotation of small evaluations
  {
    SourceProgram cant = parse(lib::cantor_source(), Dialect::Classical);
    SourceProgram mp = parse(lib::map_source(ty_nat_rec(), ty_nat_rec()), Dialect::Classical);
    SourceProgram dp = parse(lib::dup_source(ty_nat_rec()), Dialect::Classical);
    for (auto* p : {&cant, &mp, &dp}) {
      FixTypes local = check_program(*p);
      ft.insert(local.begin(), local.end());
    }
    const Decl* cd = cant.pick_iso("cantor");
    const Decl* md = mp.pick_iso("map");
    const Decl* sd = mp.pick_iso("succ");
    const Decl* dd = dp.pick_iso("dup");
    int i = 0;
    while (jobs.size() < 1000) {
      switch (i % 3) {
        case 0:
          jobs.emplace_back(mk_app(cd->iso, mk_pair(mk_nat_rec(i % 4), mk_nat_rec((i / 4) % 4))),
                            ty_nat_rec());
          break;
        case 1: {
          std::vector<TermPtr> xs;
          for (int k = 0; k < (i % 4); k++) xs.push_back(mk_nat_rec(k % 3));
          jobs.emplace_back(mk_app(iso_app(md->iso, sd->iso), mk_list(xs)),
                            ty_list(ty_nat_rec()));
          break;
        }
        default:
          jobs.emplace_back(mk_app(dd->iso, mk_nat_rec(i % 11)),
                            ty_tensor(ty_nat_rec(), ty_nat_rec()));
          break;
      }
      i++;
    }
  }

  c.expect(jobs.size() >= 1000, "not enough evaluations assembled");
  long audited = 0;
  for (auto& [t0, ty] : jobs) {
    TermPtr cur = t0;
    for (long step = 0; step < 2500; step++) {
      int n = count_redexes(cur);
      StepOutcome s = step_term_once(cur, false, &ft);
      if (s.tag == StepOutcome::Tag::IsValue || s.tag == StepOutcome::Tag::Stuck) {
        c.expect(n == (s.tag == StepOutcome::Tag::Stuck ? 1 : 0),
                 "redex count wrong at a terminal state");
        break;
      }
      c.expect(n == 1, "expected exactly one applicable rule, found " + std::to_string(n));
      try {
        typecheck_term_at(Context{}, s.next, ty, Dialect::Classical);
      } catch (const Error& e) {
        c.expect(false, std::string("subject reduction failed: ") + e.what());
        break;
      }
      cur = s.next;
      audited++;
      if (!c.r.detail.empty()) break;
    }
    if (!c.r.detail.empty()) break;
  }
  c.expect(audited > 5000, "audit exercised too few steps");
  return c.finish();
}

Result crit7_divergence(Gen& g) {
  Crit c(7, "Divergence handling and finitary normalization");
  try {
    // fix f . f
    SourceProgram p1 = parse(
        "dialect classical\n"
        "iso loop : I + I <-> I + I = fix f :: (I + I <-> I + I) . f\n"
        "def main = loop (inl *)\n",
        Dialect::Classical);
    FixTypes ft1 = check_program(p1);
    Outcome o1 = eval(*p1.entry(), 100, &ft1);
    c.expect(o1.tag == Outcome::Tag::OutOfFuel, "fix f. f should run out of fuel");
    // let-looping iso
    SourceProgram p2 = parse(
        "dialect classical\n"
        "iso loop2 : I + I <-> I + I =\n"
        "  fix f . { x <-> let y = f x in y }\n"
        "def main = loop2 (inr *)\n",
        Dialect::Classical);
    FixTypes ft2 = check_program(p2);
    Outcome o2 = eval(*p2.entry(), 100, &ft2);
    c.expect(o2.tag == Outcome::Tag::OutOfFuel, "the let-looping iso should run out of fuel");
    for (int n : {0, 1, 5}) {
      Outcome f1 = eval_finitary(finitize(*p1.entry(), n, ft1), &ft1);
      Outcome f2 = eval_finitary(finitize(*p2.entry(), n, ft2), &ft2);
      c.expect(f1.tag == Outcome::Tag::Bottom, "finitized fix f. f should hit bottom");
      c.expect(f2.tag == Outcome::Tag::Bottom, "finitized let-loop should hit bottom");
    }
  } catch (const Error& e) {
    c.expect(false, std::string("error: ") + e.what());
  }
  // 500 random finitary terms halt
  try {
    SourceProgram cant = parse(lib::cantor_source(), Dialect::Classical);
    FixTypes ftc = check_program(cant);
    SourceProgram mp = parse(lib::map_source(ty_nat_rec(), ty_nat_rec()), Dialect::Classical);
    FixTypes ftm = check_program(mp);
    SourceProgram dp = parse(lib::dup_source(parse_type("[nat]", Dialect::Classical)),
                             Dialect::Classical);
    FixTypes ftd = check_program(dp);
    int halted = 0;
    for (int i = 0; i < 500; i++) {
      int which = i % 3;
      TermPtr t;
      const FixTypes* ft = nullptr;
      if (which == 0) {
        t = mk_app(cant.pick_iso("cantor")->iso,
                   mk_pair(mk_nat_rec(g.irange(0, 6)), mk_nat_rec(g.irange(0, 6))));
        ft = &ftc;
      } else if (which == 1) {
        std::vector<TermPtr> xs;
        for (int k = 0, len = g.irange(0, 4); k < len; k++)
          xs.push_back(mk_nat_rec(g.irange(0, 3)));
        t = mk_app(iso_app(mp.pick_iso("map")->iso, mp.pick_iso("succ")->iso), mk_list(xs));
        ft = &ftm;
      } else {
        BasisEnumeration e = enumerate_basis(parse_type("[nat]", Dialect::Classical), 11);
        t = mk_app(dp.pick_iso("dup")->iso,
                   e.values[g.irange(0, static_cast<int>(e.values.size()) - 1)]);
        ft = &ftd;
      }
      Outcome o = eval_finitary(finitize(t, g.irange(0, 3), *ft), ft);
      (void)o;  // any outcome is fine; termination is the property
      halted++;
    }
    c.expect(halted == 500, "finitary evaluation failed to halt");
  } catch (const Error& e) {
    c.expect(false, std::string("finitary suite error: ") + e.what());
  }
  return c.finish();
}

Result crit8_stdlib() {
  Crit c(8, "Stdlib semantics (dup, map, cantor)");
  try {
    // duplication on all closed values of size <= 6 at several types
    for (const char* tys : {"nat", "[I + I]", "(I + I) * (I + I)", "I + (I * I)"}) {
      TypePtr a = parse_type(tys, Dialect::Classical);
      SourceProgram prog = parse(lib::dup_source(a), Dialect::Classical);
      FixTypes ft = check_program(prog);
      const Decl* d = prog.pick_iso("dup");
      BasisEnumeration e = enumerate_basis(a, 6);
      c.expect(!e.values.empty(), "no values enumerated");
      for (auto& v : e.values) {
        Outcome o = eval(mk_app(d->iso, v), 100000, &ft);
        c.expect(o.tag == Outcome::Tag::Value, "dup did not terminate");
        if (o.tag == Outcome::Tag::Value)
          c.expect(term_equal(o.value, mk_pair(v, v)),
                   "dup produced " + pretty(o.value, 6) + " for " + pretty(v, 6));
      }
    }
    // map succ against the elementwise oracle
    SourceProgram mp = parse(lib::map_source(ty_nat_rec(), ty_nat_rec()), Dialect::Classical);
    FixTypes ftm = check_program(mp);
    for (int len = 0; len <= 5; len++) {
      std::vector<TermPtr> xs, expect;
      for (int k = 0; k < len; k++) {
        xs.push_back(mk_nat_rec(k));
        expect.push_back(mk_nat_rec(k + 1));
      }
      Outcome o = eval(mk_app(iso_app(mp.pick_iso("map")->iso, mp.pick_iso("succ")->iso),
                              mk_list(xs)),
                       100000, &ftm);
      c.expect(o.tag == Outcome::Tag::Value && term_equal(o.value, mk_list(expect)),
               "map(succ) mismatch on length " + std::to_string(len));
    }
    // cantor pairing against a direct recursion oracle
    std::function<long(long, long)> oracle = [&](long i, long j) -> long {
      if (i == 0 && j == 0) return 0;
      if (i > 0) return 1 + oracle(i - 1, j + 1);
      return 1 + oracle(j - 1, 0);
    };
    SourceProgram cant = parse(lib::cantor_source(), Dialect::Classical);
    FixTypes ftc = check_program(cant);
    const Decl* cd = cant.pick_iso("cantor");
    for (int i = 0; i <= 5; i++)
      for (int j = 0; j <= 5; j++) {
        Outcome o = eval(mk_app(cd->iso, mk_pair(mk_nat_rec(i), mk_nat_rec(j))), 100000, &ftc);
        c.expect(o.tag == Outcome::Tag::Value, "cantor did not terminate");
        if (o.tag == Outcome::Tag::Value)
          c.expect(term_equal(o.value, mk_nat_rec(static_cast<unsigned>(oracle(i, j)))),
                   "cantor mismatch at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
    // injectivity of the extracted table
    PartialInjection pinj = sem_pinj(cd->iso, parse_type("nat * nat", Dialect::Classical), 17,
                                     100000, &ftc);
    c.expect(pinj.defined_count() > 10, "cantor table too small");
  } catch (const Error& e) {
    c.expect(false, std::string("error: ") + e.what());
  }
  return c.finish();
}

Result crit9_rtm() {
  Crit c(9, "RTM encoding agreement");
  try {
    lib::RTMSpec m = lib::unary_increment();
    SourceProgram prog = parse(lib::rtm_runner_source(m), Dialect::Classical);
    FixTypes ft = check_program(prog);
    const Decl* run = prog.pick_iso("run");
    for (int len = 0; len <= 4; len++) {
      std::vector<int> input(static_cast<size_t>(len), 1);
      auto expect = lib::rtm_string_semantics(m, input, 10000);
      c.expect(expect.has_value(), "oracle failed to halt");
      TermPtr arg = lib::encode_standard(m, m.start, input);
      Outcome o = eval(mk_app(run->iso, arg), 2000000, &ft);
      c.expect(o.tag == Outcome::Tag::Value, "runner did not produce a value at length " +
                                                 std::to_string(len));
      if (o.tag != Outcome::Tag::Value) continue;
      auto got = lib::decode_standard(m, o.value);
      c.expect(got.has_value(), "runner output is not a clean standard configuration");
      if (got && expect)
        c.expect(*got == *expect, "runner output disagrees with the string semantics at length " +
                                      std::to_string(len));
    }
  } catch (const Error& e) {
    c.expect(false, std::string("error: ") + e.what());
  }
  return c.finish();
}

Result crit10_negative() {
  Crit c(10, "Negative suite");
  auto expect_code = [&](const std::function<void()>& f, const std::string& code,
                         const std::string& what) {
    try {
      f();
      c.expect(false, what + ": no error raised");
    } catch (const Error& e) {
      c.expect(e.code == code, what + ": expected code " + code + ", got " + e.code);
    }
  };
  expect_code(
      [&] {
        TermPtr t = parse_term("sqrt2inv * inl * + sqrt2inv * inl *", Dialect::Quantum);
        typecheck_term_at(Context{}, t, ty_bool(), Dialect::Quantum);
      },
      errc::non_orthogonal, "non-orthogonal superposition");
  expect_code(
      [&] {
        SourceProgram prog = parse(
            "dialect quantum\n"
            "iso bad : I + I <-> I + I =\n"
            "  { inl * <-> 0.6 * inl * + 0.8 * inr *\n"
            "  | inr * <-> 0.8 * inl * + 0.6 * inr * }\n",
            Dialect::Quantum);
        check_program(prog);
      },
      errc::od_not_unitary, "non-unitary coefficient matrix");
  expect_code(
      [&] {
        SourceProgram prog = parse(
            "dialect quantum\n"
            "iso bad : (I + I) * (I + I) <-> (I + I) * (I + I) =\n"
            "  { (x, x) <-> (x, x) }\n",
            Dialect::Quantum);
        check_program(prog);
      },
      errc::duplicate_var, "duplicated linear variable");
  expect_code(
      [&] {
        SourceProgram prog = parse(
            "dialect classical\n"
            "iso map : (nat <-> nat) -> ([nat] <-> [nat]) =\n"
            "  \\g :: (nat <-> nat) . fix m :: ([nat] <-> [nat]) . { [] <-> []"
            " | h :: t <-> let h2 = g h in let t2 = m t in h2 :: t2 }\n"
            "def main = map [0]\n",
            Dialect::Classical);
        check_program(prog);
      },
      errc::arrow_applied, "arrow-typed iso applied to a term");
  return c.finish();
}

}  // namespace

std::vector<Result> run_all(unsigned seed) {
  Gen g(seed);
  std::vector<Result> out;
  out.push_back(crit1_hadamard());
  out.push_back(crit2_isometry(g));
  out.push_back(crit3_completeness(g));
  out.push_back(crit4_inverse(g));
  out.push_back(crit5_od(g));
  out.push_back(crit6_determinism());
  out.push_back(crit7_divergence(g));
  out.push_back(crit8_stdlib());
  out.push_back(crit9_rtm());
  out.push_back(crit10_negative());
  return out;
}

int run_and_print(std::ostream& os, unsigned seed) {
  std::vector<Result> rs = run_all(seed);
  bool all = true;
  for (auto& r : rs) {
    os << "[criterion " << r.id << "] " << (r.pass ? "PASS" : "FAIL") << "  " << r.name << " ("
       << static_cast<long>(r.seconds * 1000) << " ms)";
    if (!r.pass) os << "\n            " << r.detail;
    os << "\n";
    all &= r.pass;
  }
  os << (all ? "all acceptance criteria passed\n" : "ACCEPTANCE FAILURES PRESENT\n");
  return all ? 0 : 1;
}

}  // namespace revq::accept
