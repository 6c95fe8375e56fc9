#include <random>

#include "doctest.h"
#include "revq/denote.hpp"
#include "revq/kernels.hpp"
#include "revq/parser.hpp"
#include "revq/qeval.hpp"
#include "revq/stdlib.hpp"
#include "revq/typeck.hpp"

using namespace revq;

namespace {

TermPtr B0() { return mk_inl(mk_unit()); }
TermPtr B1() { return mk_inr(mk_unit()); }
Complex h() { return Complex(SQRT2_INV, 0); }

IsoPtr hadamard() {
  return iso_clauses({{B0(), mk_sum({{h(), B0()}, {h(), B1()}})},
                      {B1(), mk_sum({{h(), B0()}, {-h(), B1()}})}},
                     it_ground(ty_bool(), ty_bool()));
}

std::vector<kern::cd> random_cvec(std::mt19937& rng, size_t n) {
  std::normal_distribution<double> d(0, 1);
  std::vector<kern::cd> v(n);
  for (auto& x : v) x = kern::cd(d(rng), d(rng));
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// kernels: the SIMD variant must agree with the scalar reference

TEST_CASE("kernel dispatch reports an implementation") {
  CHECK(kern::active_name() != nullptr);
  CHECK(kern::force("scalar"));
  CHECK(std::string(kern::active_name()) == "scalar");
  kern::force("auto");
}

TEST_CASE("gemm agrees with a naive triple loop") {
  std::mt19937 rng(5);
  for (int round = 0; round < 20; round++) {
    int m = 1 + static_cast<int>(rng() % 17);
    int k = 1 + static_cast<int>(rng() % 17);
    int n = 1 + static_cast<int>(rng() % 17);
    auto a = random_cvec(rng, static_cast<size_t>(m) * k);
    auto b = random_cvec(rng, static_cast<size_t>(k) * n);
    std::vector<kern::cd> naive(static_cast<size_t>(m) * n, kern::cd(0, 0));
    for (int i = 0; i < m; i++)
      for (int j = 0; j < n; j++)
        for (int kk = 0; kk < k; kk++) naive[i * n + j] += a[i * k + kk] * b[kk * n + j];
    std::vector<kern::cd> out(static_cast<size_t>(m) * n);
    kern::gemm(m, n, k, a.data(), b.data(), out.data());
    for (size_t i = 0; i < out.size(); i++) CHECK(std::abs(out[i] - naive[i]) < 1e-10);
  }
}

TEST_CASE("simd and scalar kernels are equivalent") {
  bool has_simd = kern::force("simd");
  if (!has_simd) {
    MESSAGE("no SIMD variant on this host; scalar only");
    kern::force("auto");
    return;
  }
  std::mt19937 rng(9);
  for (int round = 0; round < 30; round++) {
    size_t n = 1 + rng() % 33;
    auto x = random_cvec(rng, n);
    auto y = random_cvec(rng, n);
    kern::cd alpha(0.3, -1.2);

    std::vector<kern::cd> y_simd = y, y_scalar = y;
    kern::force("simd");
    kern::axpy(n, alpha, x.data(), y_simd.data());
    kern::force("scalar");
    kern::axpy(n, alpha, x.data(), y_scalar.data());
    for (size_t i = 0; i < n; i++) CHECK(std::abs(y_simd[i] - y_scalar[i]) < 1e-12);

    std::vector<kern::cd> c_simd(n), c_scalar(n);
    kern::force("simd");
    kern::scal_copy(n, alpha, x.data(), c_simd.data());
    kern::force("scalar");
    kern::scal_copy(n, alpha, x.data(), c_scalar.data());
    for (size_t i = 0; i < n; i++) CHECK(std::abs(c_simd[i] - c_scalar[i]) < 1e-12);

    int m = 1 + static_cast<int>(rng() % 9);
    int k = 1 + static_cast<int>(rng() % 9);
    int cols = 1 + static_cast<int>(rng() % 9);
    auto a = random_cvec(rng, static_cast<size_t>(m) * k);
    auto b = random_cvec(rng, static_cast<size_t>(k) * cols);
    std::vector<kern::cd> g_simd(static_cast<size_t>(m) * cols),
        g_scalar(static_cast<size_t>(m) * cols);
    kern::force("simd");
    kern::gemm(m, cols, k, a.data(), b.data(), g_simd.data());
    kern::force("scalar");
    kern::gemm(m, cols, k, a.data(), b.data(), g_scalar.data());
    for (size_t i = 0; i < g_simd.size(); i++) CHECK(std::abs(g_simd[i] - g_scalar[i]) < 1e-10);
  }
  kern::force("auto");
}

// ---------------------------------------------------------------------------
// matrices

TEST_CASE("storage switches to sparse above the threshold") {
  CHECK(Matrix::zeros(8, 8).dense());
  CHECK_FALSE(Matrix::zeros(64, 64).dense());
  Matrix big = Matrix::identity(100);
  CHECK(big.inf_norm_diff_identity() < 1e-15);
  Matrix prod = big.mul(big);
  CHECK(prod.inf_norm_diff_identity() < 1e-15);
}

TEST_CASE("dense and sparse paths agree") {
  std::mt19937 rng(17);
  Matrix a = Matrix::zeros(6, 6);
  for (int i = 0; i < 6; i++)
    for (int j = 0; j < 6; j++)
      a.set(i, j, Complex((static_cast<int>(rng() % 100) - 50) / 25.0,
                          (static_cast<int>(rng() % 100) - 50) / 25.0));
  // kron into the sparse regime and compare a few entries against the formula
  Matrix k = a.kron(a.kron(a));  // 216 x 216, sparse
  CHECK_FALSE(k.dense());
  for (int probes = 0; probes < 50; probes++) {
    int r = static_cast<int>(rng() % 216), c = static_cast<int>(rng() % 216);
    Complex expect = a.at(r / 36, c / 36) * a.at((r / 6) % 6, (c / 6) % 6) * a.at(r % 6, c % 6);
    CHECK(std::abs(k.at(r, c) - expect) < 1e-12);
  }
}

TEST_CASE("matrix json export") {
  Matrix m = Matrix::zeros(2, 2);
  m.set(0, 1, Complex(1, 0));
  m.set(1, 0, Complex(0, -0.5));
  CHECK(m.to_json() == "{\"rows\":2,\"cols\":2,\"entries\":[[0,1,1,0],[1,0,0,-0.5]]}");
}

// ---------------------------------------------------------------------------
// basis enumeration

TEST_CASE("quantum basis enumeration") {
  BasisEnumeration qb = enumerate_basis(ty_bool(), 4);
  REQUIRE(qb.dim() == 2);
  CHECK(term_equal(qb.values[0], B0()));
  CHECK(term_equal(qb.values[1], B1()));

  BasisEnumeration nat = enumerate_basis(ty_nat(), 3);
  REQUIRE(nat.dim() == 3);
  CHECK(term_equal(nat.values[0], mk_zero()));
  CHECK(term_equal(nat.values[2], mk_nat_q(2)));

  BasisEnumeration prod = enumerate_basis(ty_tensor(ty_unit(), ty_bool()), 4);
  REQUIRE(prod.dim() == 2);
  CHECK(term_equal(prod.values[0], mk_pair(mk_unit(), B0())));
  CHECK(term_equal(prod.values[1], mk_pair(mk_unit(), B1())));

  CHECK(enumerate_basis(ty_sum(ty_nat(), ty_bool()), 4).dim() == 6);
}

TEST_CASE("classical enumeration is size-bounded and ordered") {
  BasisEnumeration lists = enumerate_basis(ty_list(ty_bool()), 13);
  CHECK(!lists.values.empty());
  for (auto& v : lists.values) CHECK(term_size(v) <= 13);
  for (size_t i = 0; i + 1 < lists.values.size(); i++)
    CHECK(compare_basis(lists.values[i], lists.values[i + 1]) < 0);
  CHECK(lists.index_of(mk_nil()) >= 0);
}

// ---------------------------------------------------------------------------
// term and iso semantics

TEST_CASE("term interpretation basics") {
  Matrix inj = sem_term_closed(B0(), ty_bool(), 4);
  CHECK(std::abs(inj.at(0, 0) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(inj.at(1, 0)) < 1e-15);

  Matrix plus = sem_term_closed(mk_sum({{h(), B0()}, {h(), B1()}}), ty_bool(), 4);
  CHECK(std::abs(plus.at(0, 0) - h()) < 1e-15);
  CHECK(std::abs(plus.at(1, 0) - h()) < 1e-15);

  Matrix one = sem_term_closed(mk_suc(mk_zero()), ty_nat(), 3);
  CHECK(std::abs(one.at(0, 0)) < 1e-15);
  CHECK(std::abs(one.at(1, 0) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(one.at(2, 0)) < 1e-15);
}

TEST_CASE("suc past the cutoff is an error, never a wrap") {
  CHECK_NOTHROW(sem_term_closed(mk_nat_q(2), ty_nat(), 3));
  try {
    sem_term_closed(mk_nat_q(3), ty_nat(), 3);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code == std::string(errc::cutoff_overflow));
  }
}

TEST_CASE("iso interpretation matches the textbook matrices") {
  Matrix had = sem_iso(hadamard(), 4);
  CHECK(std::abs(had.at(0, 0) - h()) < 1e-12);
  CHECK(std::abs(had.at(0, 1) - h()) < 1e-12);
  CHECK(std::abs(had.at(1, 0) - h()) < 1e-12);
  CHECK(std::abs(had.at(1, 1) + h()) < 1e-12);

  IsoPtr swap = iso_clauses({{mk_inl(mk_var("x")), mk_inr(mk_var("x"))},
                             {mk_inr(mk_var("y")), mk_inl(mk_var("y"))}},
                            it_ground(ty_bool(), ty_bool()));
  Matrix sw = sem_iso(swap, 4);
  CHECK(std::abs(sw.at(0, 1) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(sw.at(1, 0) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(sw.at(0, 0)) < 1e-15);
  CHECK(std::abs(sw.at(1, 1)) < 1e-15);
}

TEST_CASE("inverse is the conjugate transpose; control is the block formula") {
  std::vector<IsoPtr> isos = {hadamard(), iso_compose(hadamard(), hadamard()),
                              iso_tensor(hadamard(), hadamard())};
  for (auto& w : isos) {
    Matrix mi = sem_iso(iso_inverse(w), 4);
    Matrix md = sem_iso(w, 4).dagger();
    CHECK(mi.inf_norm_diff(md) < 1e-12);
  }
  // control: block identity on the first summand, the iso on the second
  Matrix ctl = sem_iso(iso_ctrl(hadamard()), 4);
  Matrix f = sem_iso(hadamard(), 4);
  Matrix p0 = Matrix::zeros(2, 2), p1 = Matrix::zeros(2, 2);
  p0.set(0, 0, Complex(1, 0));
  p1.set(1, 1, Complex(1, 0));
  Matrix expect =
      p0.kron(Matrix::identity(2)).plus_scaled(Complex(1, 0), p1.kron(f));
  CHECK(ctl.inf_norm_diff(expect) < 1e-12);
}

TEST_CASE("isometry and unitarity checks") {
  CHECK(check_isometry(Matrix::identity(3)));
  CHECK(check_unitary(Matrix::identity(3)));
  Matrix col = Matrix::zeros(2, 1);
  col.set(0, 0, Complex(1, 0));
  CHECK(check_isometry(col));
  CHECK_FALSE(check_unitary(col));
  CHECK(check_unitary(sem_iso(hadamard(), 4)));
}

TEST_CASE("closed well-typed terms denote isometries") {
  std::vector<std::pair<TermPtr, TypePtr>> samples = {
      {mk_app(hadamard(), B0()), ty_bool()},
      {mk_pair(B0(), mk_sum({{h(), B0()}, {Complex(0, SQRT2_INV), B1()}})),
       ty_tensor(ty_bool(), ty_bool())},
      {mk_nat_q(2), ty_nat()},
  };
  for (auto& [t, ty] : samples) {
    typecheck_term_at(Context{}, t, ty, Dialect::Quantum);
    CHECK(isometry_residual(sem_term_closed(t, ty, 6)) < 1e-9);
  }
}

TEST_CASE("open contexts: clause matrices assemble with sorted variables") {
  // a pattern with two variables denotes the identity up to the tensor split
  TermPtr pat = mk_pair(mk_var("b"), mk_var("a"));
  auto ctx = bind_pattern(pat, ty_tensor(ty_bool(), ty_bool()), Dialect::Quantum);
  Matrix m = sem_term(ctx, pat, ty_tensor(ty_bool(), ty_bool()), 4);
  // columns are indexed by the name-sorted context (a then b); entry (i,j)
  // relates |b a> to |a b|, a permutation
  CHECK(check_unitary(m));
  double sum = 0;
  for (int r = 0; r < 4; r++)
    for (int c = 0; c < 4; c++) sum += std::abs(m.at(r, c));
  CHECK(sum == doctest::Approx(4.0));
}

TEST_CASE("evaluator and matrix semantics agree column by column") {
  std::mt19937 rng(41);
  // random unitary clause sets on the qubit type, wrapped in combinators
  auto rand_unitary_iso = [&](const TypePtr& ty) {
    BasisEnumeration e = enumerate_basis(ty, 4);
    int k = e.dim();
    // Gram-Schmidt rows of a random complex matrix
    std::normal_distribution<double> nd(0, 1);
    std::vector<std::vector<Complex>> u(k, std::vector<Complex>(k));
    for (auto& row : u)
      for (auto& x : row) x = Complex(nd(rng), nd(rng));
    for (int i = 0; i < k; i++) {
      for (int p = 0; p < i; p++) {
        Complex ip(0, 0);
        for (int j = 0; j < k; j++) ip += std::conj(u[p][j]) * u[i][j];
        for (int j = 0; j < k; j++) u[i][j] -= ip * u[p][j];
      }
      double n2 = 0;
      for (int j = 0; j < k; j++) n2 += std::norm(u[i][j]);
      for (int j = 0; j < k; j++) u[i][j] /= std::sqrt(n2);
    }
    std::vector<std::pair<TermPtr, TermPtr>> clauses;
    for (int i = 0; i < k; i++) {
      std::vector<std::pair<Complex, TermPtr>> parts;
      for (int j = 0; j < k; j++)
        if (std::abs(u[i][j]) > 1e-12) parts.emplace_back(u[i][j], e.values[j]);
      clauses.emplace_back(e.values[i], mk_sum(std::move(parts)));
    }
    return iso_clauses(std::move(clauses), it_ground(ty, ty));
  };
  for (int round = 0; round < 60; round++) {
    IsoPtr w;
    switch (round % 5) {
      case 0:
        w = rand_unitary_iso(ty_bool());
        break;
      case 1:
        w = iso_compose(rand_unitary_iso(ty_bool()), rand_unitary_iso(ty_bool()));
        break;
      case 2:
        w = iso_tensor(rand_unitary_iso(ty_bool()), rand_unitary_iso(ty_bool()));
        break;
      case 3:
        w = iso_ctrl(rand_unitary_iso(ty_bool()));
        break;
      default:
        w = iso_inverse(rand_unitary_iso(ty_tensor(ty_bool(), ty_bool())));
        break;
    }
    IsoTypePtr ty = typecheck_iso(Context{}, w, Dialect::Quantum);
    Matrix m = sem_iso(w, 4);
    REQUIRE(check_unitary(m));
    BasisEnumeration e = enumerate_basis(ty->src, 4);
    BasisEnumeration out = enumerate_basis(ty->dst, 4);
    for (int col = 0; col < e.dim(); col++) {
      NormalValue nv = normalize(mk_app(w, e.values[col]));
      std::vector<Complex> dense(static_cast<size_t>(out.dim()), Complex(0, 0));
      for (auto& [c, b] : nv.parts) {
        int row = out.index_of(b);
        REQUIRE(row >= 0);
        dense[static_cast<size_t>(row)] = c;
      }
      for (int row = 0; row < out.dim(); row++)
        CHECK(std::abs(m.at(row, col) - dense[static_cast<size_t>(row)]) < 1e-9);
    }
  }
}

// ---------------------------------------------------------------------------
// partial injections

TEST_CASE("partial injection of a total bijection") {
  SourceProgram prog = parse(
      "dialect classical\niso sw : I + I <-> I + I = { inl x <-> inr x | inr y <-> inl y }\n",
      Dialect::Classical);
  FixTypes ft = check_program(prog);
  PartialInjection p = sem_pinj(prog.pick_iso("sw")->iso, ty_bool(), 4, 1000, &ft);
  REQUIRE(p.domain.values.size() == 2);
  CHECK(p.defined_count() == 2);
  CHECK(term_equal(p.outputs[0], B1()));
  CHECK(term_equal(p.outputs[1], B0()));
}

TEST_CASE("partial injection of a partial iso") {
  SourceProgram prog = parse(
      "dialect classical\niso part : I + I <-> I + I = { inr * <-> inl * }\n",
      Dialect::Classical);
  FixTypes ft = check_program(prog);
  PartialInjection p = sem_pinj(prog.pick_iso("part")->iso, ty_bool(), 4, 1000, &ft);
  REQUIRE(p.domain.values.size() == 2);
  CHECK(p.defined_count() == 1);
  CHECK(p.mapping[0] == -1);  // the first injection is stuck
  CHECK(term_equal(p.outputs[1], B0()));
}

TEST_CASE("duplication is total with a diagonal image") {
  SourceProgram prog = parse(lib::dup_source(ty_bool()), Dialect::Classical);
  FixTypes ft = check_program(prog);
  const Decl* d = prog.pick_iso("dup");
  PartialInjection p = sem_pinj(d->iso, ty_bool(), 4, 10000, &ft);
  CHECK(p.defined_count() == p.domain.values.size());
  for (size_t i = 0; i < p.domain.values.size(); i++)
    CHECK(term_equal(p.outputs[i], mk_pair(p.domain.values[i], p.domain.values[i])));
}

TEST_CASE("classical evaluation agrees with the injection table pointwise") {
  SourceProgram prog = parse(lib::cantor_source(), Dialect::Classical);
  FixTypes ft = check_program(prog);
  const Decl* d = prog.pick_iso("cantor");
  PartialInjection p = sem_pinj(d->iso, d->iso_type->src, 15, 100000, &ft);
  for (size_t i = 0; i < p.domain.values.size(); i++) {
    Outcome o = eval(mk_app(d->iso, p.domain.values[i]), 100000, &ft);
    if (o.tag == Outcome::Tag::Value) {
      REQUIRE(p.mapping[i] >= 0);
      CHECK(term_equal(o.value, p.outputs[i]));
    } else {
      CHECK(p.mapping[i] == -1);
    }
  }
}
