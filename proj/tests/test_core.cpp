#include <functional>
#include <random>

#include "doctest.h"
#include "revq/ast.hpp"
#include "revq/denote.hpp"
#include "revq/ortho.hpp"
#include "revq/parser.hpp"
#include "revq/typeck.hpp"

using namespace revq;

namespace {

TermPtr B0() { return mk_inl(mk_unit()); }
TermPtr B1() { return mk_inr(mk_unit()); }
Complex h() { return Complex(SQRT2_INV, 0); }

TermPtr ket_plus() { return mk_sum({{h(), B0()}, {h(), B1()}}); }
TermPtr ket_minus() { return mk_sum({{h(), B0()}, {-h(), B1()}}); }

TermPtr random_basis(std::mt19937& rng, int depth = 0) {
  std::uniform_int_distribution<int> pick(0, 7);
  switch (depth > 3 ? pick(rng) % 3 : pick(rng)) {
    case 0:
      return mk_unit();
    case 1:
      return mk_var(std::string(1, static_cast<char>('a' + pick(rng))));
    case 2:
      return mk_zero();
    case 3:
      return mk_suc(random_basis(rng, depth + 1));
    case 4:
      return mk_inl(random_basis(rng, depth + 1));
    case 5:
      return mk_inr(random_basis(rng, depth + 1));
    case 6:
      return mk_pair(random_basis(rng, depth + 1), random_basis(rng, depth + 1));
    default:
      return mk_fold(random_basis(rng, depth + 1));
  }
}

bool has_fold(const TermPtr& u) {
  if (u->tag == Term::Tag::Fold) return true;
  if (u->a && has_fold(u->a)) return true;
  if (u->b && has_fold(u->b)) return true;
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------
TEST_CASE("compare_basis constructor precedence") {
  CHECK(compare_basis(B0(), B1()) < 0);
  CHECK(compare_basis(mk_zero(), mk_suc(mk_zero())) < 0);
  CHECK(compare_basis(mk_suc(mk_zero()), mk_suc(mk_zero())) == 0);
  CHECK(compare_basis(mk_unit(), mk_var("a")) < 0);
  CHECK(compare_basis(mk_var("a"), mk_var("b")) < 0);
  CHECK(compare_basis(mk_var("z"), mk_zero()) < 0);
  CHECK(compare_basis(mk_pair(B0(), B0()), mk_fold(mk_unit())) < 0);
  CHECK_THROWS_AS(compare_basis(ket_plus(), B0()), Error);
}

TEST_CASE("compare_basis is a total order") {
  std::mt19937 rng(7);
  std::vector<TermPtr> vals;
  for (int i = 0; i < 40; i++) vals.push_back(random_basis(rng));
  for (auto& a : vals)
    for (auto& b : vals) {
      int ab = compare_basis(a, b), ba = compare_basis(b, a);
      CHECK(ab == -ba);
      if (ab == 0) CHECK(term_equal(a, b));
      for (auto& c : vals)
        if (ab < 0 && compare_basis(b, c) < 0) CHECK(compare_basis(a, c) < 0);
    }
}

TEST_CASE("canonicalize_sum merges, drops zeros and collapses units") {
  TermPtr merged = canonicalize_sum({{h(), B0()}, {h(), B0()}});
  REQUIRE(merged->tag == Term::Tag::Sum);
  REQUIRE(merged->parts.size() == 1);
  CHECK(std::abs(merged->parts[0].first - Complex(2 * SQRT2_INV, 0)) < 1e-12);

  TermPtr bare = canonicalize_sum({{Complex(0, 0), B1()}, {Complex(1, 0), B0()}});
  CHECK(term_equal(bare, B0()));

  TermPtr nested = canonicalize_sum({{Complex(1, 0), ket_plus()}});
  REQUIRE(nested->tag == Term::Tag::Sum);
  REQUIRE(nested->parts.size() == 2);
  CHECK(std::abs(nested->parts[0].first - h()) < 1e-12);
  CHECK(std::abs(nested->parts[1].first - h()) < 1e-12);
}

TEST_CASE("canonicalize_sum is idempotent and permutation invariant") {
  std::mt19937 rng(11);
  for (int round = 0; round < 50; round++) {
    std::vector<std::pair<Complex, TermPtr>> parts;
    int n = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < n; i++) {
      double re = (static_cast<int>(rng() % 200) - 100) / 70.0;
      double im = (static_cast<int>(rng() % 200) - 100) / 70.0;
      parts.emplace_back(Complex(re, im), random_basis(rng));
    }
    TermPtr once = canonicalize_sum(parts);
    std::shuffle(parts.begin(), parts.end(), rng);
    TermPtr shuffled = canonicalize_sum(parts);
    CHECK(term_equal(once, shuffled));
    TermPtr twice = canonicalize_sum({{Complex(1, 0), once}});
    CHECK(term_equal(once, twice));
  }
}

TEST_CASE("canonicalize_sum preserves the denoted vector") {
  std::vector<std::pair<Complex, TermPtr>> parts = {
      {Complex(0.5, 0), B1()}, {Complex(0.5, 0), B0()}, {Complex(0.2, 0.3), B1()}};
  TermPtr canon = canonicalize_sum(parts);
  Matrix direct = Matrix::zeros(2, 1);
  for (auto& [c, b] : parts) direct = direct.plus_scaled(c, sem_term_closed(b, ty_bool(), 4));
  CHECK(direct.inf_norm_diff(sem_term_closed(canon, ty_bool(), 4)) < 1e-12);
}

TEST_CASE("free_vars") {
  CHECK(free_vars(mk_pair(mk_var("x"), mk_var("y"))) == std::set<std::string>{"x", "y"});
  CHECK(free_vars(mk_inl(mk_unit())).empty());
  TermPtr l = mk_let({"p"}, mk_var("t1"), mk_var("p"));
  CHECK(free_vars(l) == std::set<std::string>{"t1"});
}

// ---------------------------------------------------------------------------
TEST_CASE("parser accepts the swap clause set") {
  SourceProgram prog = parse(
      "dialect quantum\niso swap : I + I <-> I + I = {| inl * <-> inr * | inr * <-> inl * }\n",
      Dialect::Quantum);
  const Decl* d = prog.pick_iso("");
  REQUIRE(d != nullptr);
  REQUIRE(d->iso->tag == Iso::Tag::Clauses);
  CHECK(d->iso->clauses.size() == 2);
  CHECK(term_equal(d->iso->clauses[0].first, B0()));
  CHECK(term_equal(d->iso->clauses[0].second, B1()));
}

TEST_CASE("parser builds fix f . f") {
  SourceProgram prog = parse(
      "dialect classical\niso loop : I <-> I = fix f :: (I <-> I) . f\n", Dialect::Classical);
  const Decl* d = prog.pick_iso("loop");
  REQUIRE(d->iso->tag == Iso::Tag::Fix);
  CHECK(d->iso->a->tag == Iso::Tag::Var);
  CHECK(d->iso->a->name == "f");
}

TEST_CASE("parsing is not typing: sub-normalized scalars parse") {
  TermPtr t = parse_term("0.5 * inl * + 0.5 * inr *", Dialect::Quantum);
  REQUIRE(t->tag == Term::Tag::Sum);
  try {
    typecheck_term_at(Context{}, t, ty_bool(), Dialect::Quantum);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code == std::string(errc::norm_violation));
  }
}

TEST_CASE("diagnostics carry positions and parse does not abort") {
  try {
    parse("dialect quantum\niso bad : I <-> I =\n  { inl }\n", Dialect::Quantum);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.line == 3);
    CHECK(e.col > 0);
    CHECK(e.code == std::string(errc::syntax));
    CHECK(e.render("f.qrev").rfind("f.qrev:3:", 0) == 0);
  }
}

TEST_CASE("program pretty/parse round trip") {
  const char* src =
      "dialect quantum\niso had : I + I <-> I + I =\n"
      "  { inl * <-> sqrt2inv * inl * + sqrt2inv * inr *\n"
      "  | inr * <-> sqrt2inv * inl * - sqrt2inv * inr * }\n";
  SourceProgram prog = parse(src, Dialect::Quantum);
  SourceProgram again = parse(pretty_program(prog), Dialect::Quantum);
  REQUIRE(again.decls.size() == prog.decls.size());
  for (size_t i = 0; i < prog.decls.size(); i++)
    CHECK(iso_alpha_equal(prog.decls[i].iso, again.decls[i].iso));
}

TEST_CASE("round trip property over random terms") {
  std::mt19937 rng(23);
  for (int i = 0; i < 300; i++) {
    TermPtr t = random_basis(rng);
    Dialect d = has_fold(t) ? Dialect::Classical : Dialect::Quantum;
    bool quantum_only = false;
    std::function<void(const TermPtr&)> scan = [&](const TermPtr& u) {
      if (u->tag == Term::Tag::Zero || u->tag == Term::Tag::Suc) quantum_only = true;
      if (u->a) scan(u->a);
      if (u->b) scan(u->b);
    };
    scan(t);
    if (quantum_only && d == Dialect::Classical) continue;  // mixed shapes are unparseable
    TermPtr back = parse_term(pretty(t), d);
    CHECK(term_alpha_equal(t, back));
  }
}

TEST_CASE("complex scalar literals round trip") {
  std::vector<Complex> coefs = {Complex(0.6, 0),  Complex(0, 0.8),    Complex(0.5, 0.5),
                                Complex(-0.5, 0.5), Complex(0.25, -0.75), Complex(-0.3, -0.4)};
  for (auto& c : coefs) {
    double other = std::sqrt(1 - std::norm(c));
    TermPtr t = mk_sum({{c, B0()}, {Complex(other, 0), B1()}});
    TermPtr back = parse_term(pretty(t), Dialect::Quantum);
    CHECK(term_alpha_equal(t, back));
  }
  CHECK(term_alpha_equal(parse_term("(0.5+0.5i) * inl * + sqrt2inv * inr *", Dialect::Quantum),
                         mk_sum({{Complex(0.5, 0.5), B0()}, {h(), B1()}})));
}

TEST_CASE("classical let/cons round trip") {
  const char* src = "let (a, b) = f (x, y) in a :: b";
  // f must resolve; embed in a program
  SourceProgram prog = parse(
      "dialect classical\n"
      "iso f : nat * [nat] <-> nat * [nat] = { p <-> p }\n"
      "iso g : nat * [nat] <-> [nat] = { (x, y) <-> let (a, b) = f (x, y) in a :: b }\n",
      Dialect::Classical);
  (void)src;
  SourceProgram again = parse(pretty_program(prog), Dialect::Classical);
  CHECK(iso_alpha_equal(prog.decls[1].iso, again.decls[1].iso));
}

// ---------------------------------------------------------------------------
TEST_CASE("orthogonality base and congruence rules") {
  CHECK(orthogonal(mk_inl(mk_var("t")), mk_inr(mk_var("u")), Dialect::Quantum));
  CHECK_FALSE(orthogonal(mk_var("x"), mk_var("y"), Dialect::Quantum));
  CHECK(orthogonal(ket_plus(), ket_minus(), Dialect::Quantum));
  CHECK_FALSE(orthogonal(ket_plus(), ket_plus(), Dialect::Quantum));
  CHECK(orthogonal(mk_zero(), mk_suc(mk_var("n")), Dialect::Quantum));
  CHECK(orthogonal(mk_pair(mk_var("a"), B0()), mk_pair(mk_var("b"), B1()), Dialect::Quantum));
  TermPtr padded = mk_sum({{Complex(0, 0), B0()}, {Complex(1, 0), B1()}});
  CHECK(orthogonal(B0(), padded, Dialect::Quantum));
  // the relation is deliberately static: an application is never orthogonal
  // to a plain value, even when their denotations are
  IsoPtr swap = iso_clauses({{mk_inl(mk_var("x")), mk_inr(mk_var("x"))},
                             {mk_inr(mk_var("y")), mk_inl(mk_var("y"))}},
                            it_ground(ty_bool(), ty_bool()));
  CHECK_FALSE(orthogonal(mk_app(swap, B0()), B0(), Dialect::Quantum));
}

TEST_CASE("orthogonality is stable under substitution") {
  TermPtr t1 = mk_inl(mk_var("x"));
  TermPtr t2 = mk_inr(mk_var("y"));
  REQUIRE(orthogonal(t1, t2, Dialect::Quantum));
  Valuation s1{{"x", mk_zero()}};
  Valuation s2{{"y", mk_zero()}};
  CHECK(orthogonal(substitute(s1, t1), substitute(s2, t2), Dialect::Quantum));
  // also when both instantiate to the same inner value
  CHECK(orthogonal(mk_inl(mk_zero()), mk_inr(mk_zero()), Dialect::Quantum));
}

TEST_CASE("syntactic orthogonality implies vanishing inner products") {
  std::vector<std::pair<TermPtr, TermPtr>> pairs = {
      {B0(), B1()},
      {ket_plus(), ket_minus()},
      {mk_zero(), mk_suc(mk_zero())},
      {mk_pair(B0(), B0()), mk_pair(B1(), B0())},
  };
  std::vector<TypePtr> tys = {ty_bool(), ty_bool(), ty_nat(), ty_tensor(ty_bool(), ty_bool())};
  for (size_t i = 0; i < pairs.size(); i++) {
    REQUIRE(orthogonal(pairs[i].first, pairs[i].second, Dialect::Quantum));
    Matrix m1 = sem_term_closed(pairs[i].first, tys[i], 6);
    Matrix m2 = sem_term_closed(pairs[i].second, tys[i], 6);
    CHECK(std::abs(m1.dagger().mul(m2).at(0, 0)) < 1e-12);
  }
}

TEST_CASE("classical orthogonality looks through lets and folds") {
  TermPtr l1 = mk_let({"y"}, mk_var("t"), mk_fold(mk_inl(mk_unit())));
  TermPtr l2 = mk_let({"z"}, mk_var("u"), mk_fold(mk_inr(mk_var("w"))));
  CHECK(orthogonal(l1, l2, Dialect::Classical));
  CHECK_FALSE(orthogonal(l1, l1, Dialect::Classical));
  CHECK(orthogonal(mk_pair(mk_inl(mk_var("a")), mk_var("r")),
                   mk_pair(mk_inr(mk_var("b")), mk_var("s")), Dialect::Classical));
}

TEST_CASE("check_od base cases") {
  CHECK(check_od(ty_nat(), {mk_var("x")}, ODKind::Basis));
  CHECK(check_od(ty_unit(), {mk_unit()}, ODKind::Basis));
  CHECK(check_od(ty_nat(), {mk_zero(), mk_suc(mk_zero()), mk_suc(mk_suc(mk_var("x")))},
                 ODKind::Basis));
  CHECK(check_od(ty_bool(), {ket_plus(), ket_minus()}, ODKind::Extended));
  CHECK_FALSE(check_od(ty_bool(), {B0()}, ODKind::Basis));
  CHECK_FALSE(check_od(ty_nat(), {mk_zero()}, ODKind::Basis));
  CHECK_FALSE(check_od(ty_bool(), {ket_plus(), ket_plus()}, ODKind::Extended));
  CHECK_THROWS_AS(check_od(ty_bool(), {ket_plus()}, ODKind::Basis), Error);
}

TEST_CASE("check_od tensor rule tries both projection orders") {
  TypePtr a = ty_sum(ty_unit(), ty_bool());
  TypePtr b = ty_bool();
  std::vector<TermPtr> s{mk_pair(mk_inl(mk_unit()), mk_var("y")),
                         mk_pair(mk_inr(mk_var("x")), B0()),
                         mk_pair(mk_inr(mk_var("x")), B1())};
  CHECK(check_od(ty_tensor(a, b), s, ODKind::Basis));
}

TEST_CASE("check_od accepts rotations inside tensor components") {
  // elements pair a rotated qubit basis with per-key variables
  std::vector<TermPtr> s{mk_pair(ket_plus(), mk_var("y1")), mk_pair(ket_minus(), mk_var("y2"))};
  CHECK(check_od(ty_tensor(ty_bool(), ty_nat()), s, ODKind::Extended));
}

TEST_CASE("decompose over a variable splits per basis component") {
  ODSet od{ty_bool(), {mk_var("x")}, ODKind::Extended};
  auto items = decompose(od, ket_plus());
  REQUIRE(items.size() == 2);
  CHECK(std::abs(items[0].coef - h()) < 1e-12);
  CHECK(std::abs(items[1].coef - h()) < 1e-12);
  CHECK(term_equal(items[0].val.at("x"), B0()));
  CHECK(term_equal(items[1].val.at("x"), B1()));
}

TEST_CASE("decompose identity case") {
  ODSet od{ty_unit(), {mk_unit()}, ODKind::Extended};
  auto items = decompose(od, mk_unit());
  REQUIRE(items.size() == 1);
  CHECK(std::abs(items[0].coef - Complex(1, 0)) < 1e-12);
  CHECK(items[0].val.empty());
}

TEST_CASE("decompose against a rotated basis matches the conjugate-transpose solve") {
  Complex u[2][2] = {{h(), h()}, {h(), -h()}};
  Complex rhs[2] = {Complex(1, 0), Complex(0, 0)};
  Complex expect[2];
  for (int i = 0; i < 2; i++)
    expect[i] = std::conj(u[0][i]) * rhs[0] + std::conj(u[1][i]) * rhs[1];

  ODSet od{ty_bool(), {ket_plus(), ket_minus()}, ODKind::Extended};
  auto items = decompose(od, B0());
  REQUIRE(items.size() == 2);
  for (auto& it : items) {
    CHECK(std::abs(it.coef - expect[it.index]) < 1e-12);
    CHECK(it.val.empty());
  }
}

TEST_CASE("decompose recombination yields the input normal form") {
  std::vector<std::pair<TypePtr, std::vector<TermPtr>>> ods = {
      {ty_bool(), {ket_plus(), ket_minus()}},
      {ty_nat(), {mk_zero(), mk_suc(mk_var("x"))}},
      {ty_tensor(ty_bool(), ty_bool()), {mk_pair(mk_var("a"), mk_var("b"))}},
  };
  std::vector<TermPtr> inputs = {
      ket_minus(), mk_suc(mk_suc(mk_zero())),
      mk_sum({{Complex(0.6, 0), mk_pair(B0(), B0())}, {Complex(0.8, 0), mk_pair(B1(), B1())}})};
  for (size_t k = 0; k < ods.size(); k++) {
    ODSet od{ods[k].first, ods[k].second, ODKind::Extended};
    REQUIRE(check_od(od.type, od.elements, ODKind::Extended));
    auto items = decompose(od, inputs[k]);
    std::vector<std::pair<Complex, TermPtr>> recomb;
    for (auto& it : items)
      recomb.emplace_back(it.coef, canonicalize_expression(substitute(it.val, it.element)));
    CHECK(term_equal(canonicalize_sum(recomb), canonicalize_expression(inputs[k])));
  }
}

TEST_CASE("basis decompositions match each closed value exactly once") {
  std::vector<TermPtr> od = {mk_zero(), mk_suc(mk_zero()), mk_suc(mk_suc(mk_var("x")))};
  REQUIRE(check_od(ty_nat(), od, ODKind::Basis));
  for (unsigned n = 0; n < 8; n++) {
    ODSet s{ty_nat(), od, ODKind::Extended};
    auto items = decompose(s, mk_nat_q(n));
    REQUIRE(items.size() == 1);
  }
}

// ---------------------------------------------------------------------------
TEST_CASE("typecheck infers variables") {
  Context ctx;
  ctx.linear.emplace_back("x", ty_nat());
  CHECK(type_equal(typecheck_term(ctx, mk_var("x"), Dialect::Quantum), ty_nat()));
}

TEST_CASE("non-orthogonal superpositions are rejected") {
  TermPtr t = mk_sum({{h(), B0()}, {h(), B0()}});
  try {
    typecheck_term_at(Context{}, t, ty_bool(), Dialect::Quantum);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code == std::string(errc::non_orthogonal));
  }
}

TEST_CASE("divergent iso applications are well-typed") {
  SourceProgram prog = parse(
      "dialect classical\n"
      "iso loop : I + I <-> I + I = fix f :: (I + I <-> I + I) . f\n"
      "def main = loop (inl *)\n",
      Dialect::Classical);
  CHECK_NOTHROW(check_program(prog));
}

TEST_CASE("hadamard clause set types as an endo iso") {
  SourceProgram prog = parse(
      "dialect quantum\niso had : I + I <-> I + I =\n"
      "  { inl * <-> sqrt2inv * inl * + sqrt2inv * inr *\n"
      "  | inr * <-> sqrt2inv * inl * - sqrt2inv * inr * }\n",
      Dialect::Quantum);
  const Decl* d = prog.pick_iso("had");
  IsoTypePtr ty = typecheck_iso(Context{}, d->iso, Dialect::Quantum);
  CHECK(isotype_equal(ty, it_ground(ty_bool(), ty_bool())));
}

TEST_CASE("non-exhaustive classical clause sets are accepted") {
  SourceProgram prog = parse(
      "dialect classical\niso part : I + I <-> I + I = { inr * <-> inl * }\n",
      Dialect::Classical);
  CHECK_NOTHROW(check_program(prog));
}

TEST_CASE("higher-order iso types") {
  SourceProgram prog = parse(
      "dialect classical\n"
      "iso map : (nat <-> nat) -> ([nat] <-> [nat]) =\n"
      "  \\g :: (nat <-> nat) . fix m :: ([nat] <-> [nat]) . { [] <-> []"
      " | h :: t <-> let h2 = g h in let t2 = m t in h2 :: t2 }\n",
      Dialect::Classical);
  const Decl* d = prog.pick_iso("map");
  IsoTypePtr ty = typecheck_iso(Context{}, d->iso, Dialect::Classical);
  REQUIRE(ty->tag == IsoType::Tag::Arrow);
  CHECK(isotype_equal(ty->from, it_ground(ty_nat_rec(), ty_nat_rec())));
}

TEST_CASE("named rejection codes") {
  auto code_of = [](const std::function<void()>& f) -> std::string {
    try {
      f();
      return "";
    } catch (const Error& e) {
      return e.code;
    }
  };
  CHECK(code_of([] {
          typecheck_term_at(Context{}, parse_term("x", Dialect::Quantum), ty_unit(),
                            Dialect::Quantum);
        }) == errc::unbound_var);
  CHECK(code_of([] {
          Context ctx;
          ctx.linear.emplace_back("x", ty_unit());
          typecheck_term_at(ctx, mk_unit(), ty_unit(), Dialect::Quantum);
        }) == errc::unused_var);
  CHECK(code_of([] {
          Context ctx;
          ctx.linear.emplace_back("x", ty_unit());
          typecheck_term_at(ctx, mk_pair(mk_var("x"), mk_var("x")),
                            ty_tensor(ty_unit(), ty_unit()), Dialect::Quantum);
        }) == errc::duplicate_var);
  CHECK(code_of([] {
          typecheck_term_at(Context{}, mk_fold(mk_unit()), ty_nat_rec(), Dialect::Quantum);
        }) == errc::dialect);
  CHECK(code_of([] {
          SourceProgram prog = parse(
              "dialect quantum\niso bad : I + I <-> I = { inl * <-> * }\n", Dialect::Quantum);
          check_program(prog);
        }) == errc::od_failure);
  CHECK(code_of([] {
          SourceProgram prog = parse(
              "dialect classical\n"
              "iso over : I + I <-> I + I = { x <-> x | inl * <-> inr * }\n",
              Dialect::Classical);
          check_program(prog);
        }) == errc::overlap);
  CHECK(code_of([] {
          SourceProgram prog = parse(
              "dialect quantum\niso bad : I + I <-> I + I = { inl y <-> inr * }\n",
              Dialect::Quantum);
          check_program(prog);
        }) == errc::clause_vars);
  CHECK(code_of([] {
          SourceProgram prog = parse(
              "dialect quantum\n"
              "iso a : I <-> I = { * <-> * }\n"
              "iso b : I + I <-> I + I = { inl * <-> inr * | inr * <-> inl * }\n"
              "iso bad : I <-> I + I = a ; b\n",
              Dialect::Quantum);
          check_program(prog);
        }) == errc::iso_mismatch);
}

TEST_CASE("combinator types") {
  SourceProgram prog = parse(
      "dialect quantum\n"
      "iso nq : I + I <-> I + I = { inl * <-> inr * | inr * <-> inl * }\n"
      "iso both : (I + I) * (I + I) <-> (I + I) * (I + I) = nq <*> nq\n"
      "iso either : (I + I) + (I + I) <-> (I + I) + (I + I) = nq <+> nq\n"
      "iso ctl : (I + I) * (I + I) <-> (I + I) * (I + I) = ctrl nq\n"
      "iso undo : I + I <-> I + I = nq ; inv nq\n",
      Dialect::Quantum);
  CHECK_NOTHROW(check_program(prog));
}
