#include <functional>

#include "doctest.h"
#include "revq/ceval.hpp"
#include "revq/denote.hpp"
#include "revq/parser.hpp"
#include "revq/stdlib.hpp"
#include "revq/typeck.hpp"

using namespace revq;

namespace {

struct Prog {
  SourceProgram prog;
  FixTypes ft;
};

Prog load(const std::string& src) {
  Prog p;
  p.prog = parse(src, Dialect::Classical);
  p.ft = check_program(p.prog);
  return p;
}

// direct recursion oracle for the pairing isos
long pairing_oracle(long i, long j) {
  if (i == 0 && j == 0) return 0;
  if (i > 0) return 1 + pairing_oracle(i - 1, j + 1);
  return 1 + pairing_oracle(j - 1, 0);
}

}  // namespace

// ---------------------------------------------------------------------------
TEST_CASE("iso reduction: fix unfolds, beta fires, values stop") {
  Prog p = load("dialect classical\niso loop : I <-> I = fix f :: (I <-> I) . f\n");
  IsoPtr loop = p.prog.pick_iso("loop")->iso;
  IsoPtr once = step_iso(loop, &p.ft);
  REQUIRE(once != nullptr);
  CHECK(iso_alpha_equal(once, loop));  // f[fix f. f / f] = fix f. f

  Prog q = load(
      "dialect classical\n"
      "iso id2 : I + I <-> I + I = { x <-> x }\n"
      "iso ap : I + I <-> I + I = (\\g :: (I + I <-> I + I) . g) id2\n");
  IsoPtr ap = q.prog.pick_iso("ap")->iso;
  IsoPtr stepped = step_iso(ap, &q.ft);
  REQUIRE(stepped != nullptr);
  CHECK(stepped->tag == Iso::Tag::Clauses);

  CHECK(step_iso(q.prog.pick_iso("id2")->iso, &q.ft) == nullptr);  // iso value
}

TEST_CASE("stuck applications and fuel exhaustion") {
  Prog p = load(
      "dialect classical\n"
      "iso part : I + I <-> I + I = { inr * <-> inl * }\n"
      "iso loop : I + I <-> I + I = fix f :: (I + I <-> I + I) . f\n");
  Outcome stuck = eval(mk_app(p.prog.pick_iso("part")->iso, mk_inl(mk_unit())), 100, &p.ft);
  CHECK(stuck.tag == Outcome::Tag::Stuck);
  Outcome ok = eval(mk_app(p.prog.pick_iso("part")->iso, mk_inr(mk_unit())), 100, &p.ft);
  REQUIRE(ok.tag == Outcome::Tag::Value);
  CHECK(term_equal(ok.value, mk_inl(mk_unit())));

  Outcome fuel = eval(mk_app(p.prog.pick_iso("loop")->iso, mk_inl(mk_unit())), 100, &p.ft);
  CHECK(fuel.tag == Outcome::Tag::OutOfFuel);
  CHECK(fuel.steps == 100);
}

TEST_CASE("pairing follows the recursion oracle") {
  Prog p = load(lib::cantor_source());
  const Decl* d = p.prog.pick_iso("cantor");
  for (int i = 0; i <= 4; i++)
    for (int j = 0; j <= 4; j++) {
      Outcome o = eval(mk_app(d->iso, mk_pair(mk_nat_rec(i), mk_nat_rec(j))), 100000, &p.ft);
      REQUIRE(o.tag == Outcome::Tag::Value);
      CHECK(term_equal(o.value, mk_nat_rec(static_cast<unsigned>(pairing_oracle(i, j)))));
    }
  // the specific worked example: (1,1) lands on 4
  CHECK(pairing_oracle(1, 1) == 4);
}

TEST_CASE("evaluation order inside pairs is left first") {
  Prog p = load(
      "dialect classical\n"
      "iso id : nat <-> nat = { x <-> x }\n");
  TermPtr t = mk_pair(mk_app(p.prog.pick_iso("id")->iso, mk_nat_rec(1)),
                      mk_app(p.prog.pick_iso("id")->iso, mk_nat_rec(2)));
  StepOutcome s = step_term_once(t, false, &p.ft);
  REQUIRE(s.tag == StepOutcome::Tag::Stepped);
  // the left application fired first
  CHECK(s.next->tag == Term::Tag::Pair);
  CHECK(s.next->a->tag != Term::Tag::App);
  CHECK(s.next->b->tag == Term::Tag::App);
}

// ---------------------------------------------------------------------------
TEST_CASE("finitize replaces fix by bounded unfoldings") {
  Prog p = load("dialect classical\niso loop : I <-> I = fix f :: (I <-> I) . f\n");
  IsoPtr fin = finitize(p.prog.pick_iso("loop")->iso, 0, p.ft);
  REQUIRE(fin->tag == Iso::Tag::NFix);
  CHECK(fin->n == 0);

  // a fix-free term is untouched
  TermPtr t = mk_fold(mk_inl(mk_unit()));
  CHECK(term_equal(finitize(t, 3, p.ft), t));
}

TEST_CASE("exhausted unfoldings bottom out") {
  Prog p = load("dialect classical\niso loop : I + I <-> I + I = fix f :: (I + I <-> I + I) . f\n");
  TermPtr t = mk_app(finitize(p.prog.pick_iso("loop")->iso, 0, p.ft), mk_inl(mk_unit()));
  Outcome o = eval_finitary(t, &p.ft);
  CHECK(o.tag == Outcome::Tag::Bottom);

  // bottom propagates through evaluation contexts
  TermPtr wrapped = mk_inl(t);
  CHECK(eval_finitary(wrapped, &p.ft).tag == Outcome::Tag::Bottom);
  TermPtr inpair = mk_pair(mk_unit(), t);
  CHECK(eval_finitary(inpair, &p.ft).tag == Outcome::Tag::Bottom);
}

TEST_CASE("finitized mapping evaluates exactly the lists its depth allows") {
  Prog p = load(lib::map_source(ty_nat_rec(), ty_nat_rec()));
  IsoPtr mp = p.prog.pick_iso("map")->iso;
  IsoPtr sc = p.prog.pick_iso("succ")->iso;

  // oracle first: find, per list length, the least depth that succeeds
  auto outcome_at = [&](int len, int depth) {
    std::vector<TermPtr> xs;
    for (int k = 0; k < len; k++) xs.push_back(mk_nat_rec(0));
    TermPtr t = mk_app(finitize(iso_app(mp, sc), depth, p.ft), mk_list(xs));
    return eval_finitary(t, &p.ft).tag;
  };
  std::vector<int> least_depth;
  for (int len = 0; len <= 4; len++) {
    int d = 0;
    while (outcome_at(len, d) != Outcome::Tag::Value) d++;
    least_depth.push_back(d);
  }
  // frozen oracle result: a list of length L needs L+1 unfoldings
  CHECK(least_depth == std::vector<int>{1, 2, 3, 4, 5});
  // monotone in the depth: deeper finitizations still succeed
  for (int len = 0; len <= 4; len++)
    for (int extra = 0; extra <= 2; extra++)
      CHECK(outcome_at(len, least_depth[len] + extra) == Outcome::Tag::Value);
  // and the successful finitary value matches the unbounded run
  std::vector<TermPtr> xs = {mk_nat_rec(1), mk_nat_rec(2)};
  Outcome fin = eval_finitary(mk_app(finitize(iso_app(mp, sc), 5, p.ft), mk_list(xs)), &p.ft);
  Outcome full = eval(mk_app(iso_app(mp, sc), mk_list(xs)), 10000, &p.ft);
  REQUIRE(fin.tag == Outcome::Tag::Value);
  REQUIRE(full.tag == Outcome::Tag::Value);
  CHECK(term_equal(fin.value, full.value));
}

TEST_CASE("finitary evaluation terminates on the whole corpus sample") {
  Prog p = load(lib::cantor_source());
  for (int n = 0; n <= 3; n++)
    for (int i = 0; i <= 5; i++) {
      TermPtr t = mk_app(finitize(p.prog.pick_iso("cantor")->iso, n, p.ft),
                         mk_pair(mk_nat_rec(i), mk_nat_rec(i)));
      CHECK_NOTHROW(eval_finitary(t, &p.ft));  // halting is the property
    }
  // values evaluate to themselves
  TermPtr v = mk_pair(mk_nat_rec(2), mk_nat_rec(3));
  Outcome o = eval_finitary(v, &p.ft);
  REQUIRE(o.tag == Outcome::Tag::Value);
  CHECK(term_equal(o.value, v));
}

TEST_CASE("deep enough finitizations agree with the unbounded run") {
  Prog p = load(lib::cantor_source());
  TermPtr arg = mk_pair(mk_nat_rec(1), mk_nat_rec(1));
  Outcome full = eval(mk_app(p.prog.pick_iso("cantor")->iso, arg), 100000, &p.ft);
  REQUIRE(full.tag == Outcome::Tag::Value);
  CHECK(term_equal(full.value, mk_nat_rec(4)));
  for (int n : {8, 12}) {
    Outcome fin =
        eval_finitary(mk_app(finitize(p.prog.pick_iso("cantor")->iso, n, p.ft), arg), &p.ft);
    REQUIRE(fin.tag == Outcome::Tag::Value);
    CHECK(term_equal(fin.value, full.value));
  }
  // and a too-shallow depth bottoms out instead of producing a wrong value
  Outcome shallow =
      eval_finitary(mk_app(finitize(p.prog.pick_iso("cantor")->iso, 2, p.ft), arg), &p.ft);
  CHECK(shallow.tag == Outcome::Tag::Bottom);
}

TEST_CASE("forward determinism: one redex per configuration") {
  Prog p = load(lib::cantor_source());
  TermPtr cur = mk_app(p.prog.pick_iso("cantor")->iso, mk_pair(mk_nat_rec(2), mk_nat_rec(1)));
  for (;;) {
    StepOutcome s = step_term_once(cur, false, &p.ft);
    if (s.tag != StepOutcome::Tag::Stepped) break;
    CHECK(count_redexes(cur) == 1);
    cur = s.next;
  }
}

// ---------------------------------------------------------------------------
TEST_CASE("syntactic inversion runs the let chain backwards") {
  Prog p = load(lib::cantor_source());
  IsoPtr inv = invert_iso(p.prog.pick_iso("cantor")->iso);
  typecheck_iso_at(Context{}, inv, it_ground(ty_nat_rec(), ty_tensor(ty_nat_rec(), ty_nat_rec())),
                   Dialect::Classical);
  FixTypes ft2;
  typecheck_iso(Context{}, inv, Dialect::Classical, &ft2);
  Outcome o = eval(mk_app(inv, mk_nat_rec(4)), 100000, &ft2);
  REQUIRE(o.tag == Outcome::Tag::Value);
  CHECK(term_equal(o.value, mk_pair(mk_nat_rec(1), mk_nat_rec(1))));
}

TEST_CASE("inversion round-trips sampled evaluations") {
  Prog p = load(lib::dup_source(ty_nat_rec()));
  IsoPtr dup = p.prog.pick_iso("dup")->iso;
  IsoPtr undup = invert_iso(dup);
  FixTypes ft2;
  typecheck_iso(Context{}, undup, Dialect::Classical, &ft2);
  for (unsigned n = 0; n < 6; n++) {
    Outcome fwd = eval(mk_app(dup, mk_nat_rec(n)), 10000, &p.ft);
    REQUIRE(fwd.tag == Outcome::Tag::Value);
    Outcome back = eval(mk_app(undup, fwd.value), 10000, &ft2);
    REQUIRE(back.tag == Outcome::Tag::Value);
    CHECK(term_equal(back.value, mk_nat_rec(n)));
  }
  // the inverse of a duplicate rejects unequal pairs
  Outcome bad = eval(mk_app(undup, mk_pair(mk_nat_rec(1), mk_nat_rec(2))), 10000, &ft2);
  CHECK(bad.tag == Outcome::Tag::Stuck);
}

TEST_CASE("backward determinism witnessed through the injection table") {
  Prog p = load(lib::cantor_source());
  const Decl* d = p.prog.pick_iso("cantor");
  PartialInjection table = sem_pinj(d->iso, d->iso_type->src, 15, 100000, &p.ft);
  CHECK(table.defined_count() >= 6);
  // recover every defined input through the syntactic inverse
  IsoPtr inv = invert_iso(d->iso);
  FixTypes ft2;
  typecheck_iso(Context{}, inv, Dialect::Classical, &ft2);
  for (size_t i = 0; i < table.domain.values.size(); i++) {
    if (table.mapping[i] < 0) continue;
    Outcome back = eval(mk_app(inv, table.outputs[i]), 100000, &ft2);
    REQUIRE(back.tag == Outcome::Tag::Value);
    CHECK(term_equal(back.value, table.domain.values[i]));
  }
}

TEST_CASE("nfix parses, prints and reduces") {
  SourceProgram prog = parse(
      "dialect classical\n"
      "iso bounded : I + I <-> I + I = nfix 2 f :: (I + I <-> I + I) . f\n",
      Dialect::Classical);
  FixTypes ft = check_program(prog);
  const Decl* d = prog.pick_iso("bounded");
  SourceProgram again = parse(pretty_program(prog), Dialect::Classical);
  CHECK(iso_alpha_equal(d->iso, again.pick_iso("bounded")->iso));
  // two unfoldings then the empty iso: applying it bottoms out
  Outcome o = eval_finitary(mk_app(d->iso, mk_inl(mk_unit())), &ft);
  CHECK(o.tag == Outcome::Tag::Bottom);
}

TEST_CASE("let-looping iso diverges but its finitizations bottom") {
  Prog p = load(
      "dialect classical\n"
      "iso loop2 : I + I <-> I + I = fix f . { x <-> let y = f x in y }\n"
      "def main = loop2 (inl *)\n");
  Outcome o = eval(*p.prog.entry(), 50, &p.ft);
  CHECK(o.tag == Outcome::Tag::OutOfFuel);
  for (int n : {0, 1, 3}) {
    Outcome fin = eval_finitary(finitize(*p.prog.entry(), n, p.ft), &p.ft);
    CHECK(fin.tag == Outcome::Tag::Bottom);
  }
}
