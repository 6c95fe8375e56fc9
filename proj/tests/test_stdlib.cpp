#include <fstream>
#include <sstream>

#include "doctest.h"
#include "revq/ceval.hpp"
#include "revq/denote.hpp"
#include "revq/parser.hpp"
#include "revq/qeval.hpp"
#include "revq/stdlib.hpp"
#include "revq/typeck.hpp"

using namespace revq;
using namespace revq::lib;

#ifndef REVQ_CORPUS_DIR
#define REVQ_CORPUS_DIR "corpus"
#endif

namespace {

struct Prog {
  SourceProgram prog;
  FixTypes ft;
};

Prog load(const std::string& src, Dialect d = Dialect::Classical) {
  Prog p;
  p.prog = parse(src, d);
  p.ft = check_program(p.prog);
  return p;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
TEST_CASE("every generator output parses and typechecks at its stated type") {
  for (auto& id : program_ids()) {
    CAPTURE(id);
    SourceProgram prog = generate(id);
    CHECK_NOTHROW(check_program(prog));
  }
}

TEST_CASE("golden corpus files match the generators") {
  std::vector<std::pair<std::string, std::string>> files = {
      {"hadamard", "hadamard.qrev"}, {"swap", "swap.qrev"},     {"not", "not.qrev"},
      {"map", "map.rev"},            {"dup", "dup.rev"},        {"erase", "erase.rev"},
      {"cantor", "cantor.rev"},      {"floor", "floor.rev"},    {"growth", "growth.rev"},
      {"it", "it.rev"},              {"rmblank", "rmblank.rev"}, {"rev", "rev.rev"},
      {"cleanup", "cleanup.rev"},    {"rtm", "rtm.rev"},        {"rtmb", "rtmb.rev"},
      {"rtmrun", "rtmrun.rev"},      {"rtmgarrem", "rtmgarrem.rev"},
  };
  for (auto& [id, file] : files) {
    CAPTURE(id);
    CHECK(generate_source(id, {}) == slurp(std::string(REVQ_CORPUS_DIR) + "/" + file));
  }
}

TEST_CASE("stated types of the flagship programs") {
  {
    Prog p = load(dup_source(ty_nat_rec()));
    CHECK(isotype_equal(p.prog.pick_iso("dup")->iso_type,
                        it_ground(ty_nat_rec(), ty_tensor(ty_nat_rec(), ty_nat_rec()))));
  }
  {
    Prog p = load(it_source(ty_bool()));
    IsoTypePtr t = p.prog.pick_iso("it")->iso_type;
    REQUIRE(t->tag == IsoType::Tag::Arrow);
    CHECK(isotype_equal(t->from, it_ground(ty_bool(), ty_tensor(ty_bool(), ty_bool()))));
    CHECK(isotype_equal(t->to, it_ground(ty_bool(), ty_tensor(ty_bool(), ty_nat_rec()))));
  }
  {
    Prog p = load(map_source(ty_nat_rec(), ty_nat_rec()));
    IsoTypePtr t = p.prog.pick_iso("map")->iso_type;
    REQUIRE(t->tag == IsoType::Tag::Arrow);
    CHECK(isotype_equal(t->to, it_ground(ty_list(ty_nat_rec()), ty_list(ty_nat_rec()))));
  }
}

TEST_CASE("duplication agrees with the diagonal on enumerated values") {
  for (const char* tys : {"nat", "[I + I]"}) {
    TypePtr a = parse_type(tys, Dialect::Classical);
    Prog p = load(dup_source(a));
    BasisEnumeration e = enumerate_basis(a, 6);
    for (auto& v : e.values) {
      Outcome o = eval(mk_app(p.prog.pick_iso("dup")->iso, v), 100000, &p.ft);
      REQUIRE(o.tag == Outcome::Tag::Value);
      CHECK(term_equal(o.value, mk_pair(v, v)));
    }
  }
}

TEST_CASE("erase removes its constant and introduces it in reverse") {
  Prog p = load(erase_source(ty_nat_rec(), ty_nat_rec(), mk_nat_rec(0)));
  IsoPtr er = p.prog.pick_iso("erase")->iso;
  Outcome o = eval(mk_app(er, mk_pair(mk_nat_rec(3), mk_nat_rec(0))), 1000, &p.ft);
  REQUIRE(o.tag == Outcome::Tag::Value);
  CHECK(term_equal(o.value, mk_nat_rec(3)));
  // the wrong constant is simply not in the domain
  Outcome bad = eval(mk_app(er, mk_pair(mk_nat_rec(3), mk_nat_rec(1))), 1000, &p.ft);
  CHECK(bad.tag == Outcome::Tag::Stuck);
  // reversed it introduces the constant
  IsoPtr intro = invert_iso(er);
  FixTypes ft2;
  typecheck_iso(Context{}, intro, Dialect::Classical, &ft2);
  Outcome back = eval(mk_app(intro, mk_nat_rec(3)), 1000, &ft2);
  REQUIRE(back.tag == Outcome::Tag::Value);
  CHECK(term_equal(back.value, mk_pair(mk_nat_rec(3), mk_nat_rec(0))));
}

TEST_CASE("flat encoding is injective and reversible") {
  for (const char* tys : {"nat", "[I + I]", "(I + I) * nat"}) {
    TypePtr a = parse_type(tys, Dialect::Classical);
    Prog p = load(floor_source(a));
    const Decl* d = p.prog.pick_iso("floor");
    BasisEnumeration e = enumerate_basis(a, 8);
    std::vector<TermPtr> images;
    for (auto& v : e.values) {
      Outcome o = eval(mk_app(d->iso, v), 1000000, &p.ft);
      REQUIRE(o.tag == Outcome::Tag::Value);
      for (auto& prev : images) CHECK_FALSE(term_equal(prev, o.value));
      images.push_back(o.value);
    }
    // decode through the syntactic inverse
    IsoPtr dec = invert_iso(d->iso);
    FixTypes ft2;
    typecheck_iso(Context{}, dec, Dialect::Classical, &ft2);
    for (size_t i = 0; i < e.values.size(); i++) {
      Outcome back = eval(mk_app(dec, images[i]), 1000000, &ft2);
      REQUIRE(back.tag == Outcome::Tag::Value);
      CHECK(term_equal(back.value, e.values[i]));
    }
  }
}

// ---------------------------------------------------------------------------
TEST_CASE("string simulation of the increment machine") {
  RTMSpec m = unary_increment();
  auto out = rtm_string_semantics(m, {1, 1, 1}, 100);
  REQUIRE(out.has_value());
  CHECK(*out == std::vector<int>{1, 1, 1, 1});
  auto empty = rtm_string_semantics(m, {}, 100);
  REQUIRE(empty.has_value());
  CHECK(*empty == std::vector<int>{1});
}

TEST_CASE("the identity machine maps the empty string to itself") {
  RTMSpec ident;
  ident.num_states = 2;
  ident.num_symbols = 2;
  ident.start = 0;
  ident.fin = 0;  // starts in the final state: zero steps
  auto out = rtm_string_semantics(ident, {}, 10);
  REQUIRE(out.has_value());
  CHECK(out->empty());
}

TEST_CASE("a non-halting machine yields no result") {
  RTMSpec m;
  m.name = "spinner";
  m.num_states = 4;
  m.num_symbols = 3;
  m.start = 0;
  m.fin = 3;
  RTMSpec::Rule r0;  // write a marker, then bounce between two states forever
  r0.from = 0;
  r0.kind = RTMSpec::Rule::Kind::Write;
  r0.read = 0;
  r0.write = 1;
  r0.to = 1;
  RTMSpec::Rule r1;
  r1.from = 1;
  r1.kind = RTMSpec::Rule::Kind::MoveR;
  r1.to = 2;
  RTMSpec::Rule r2;
  r2.from = 2;
  r2.kind = RTMSpec::Rule::Kind::Write;
  r2.read = 0;
  r2.write = 2;
  r2.to = 1;
  m.rules = {r0, r1, r2};
  m.validate();
  CHECK_FALSE(rtm_string_semantics(m, {1}, 500).has_value());
}

TEST_CASE("machine validation rejects nondeterminism") {
  RTMSpec m = unary_increment();
  RTMSpec::Rule dup = m.rules[0];
  m.rules.push_back(dup);  // duplicate transition breaks both directions
  CHECK_THROWS_AS(m.validate(), Error);
}

TEST_CASE("inverted machines run the semantics backwards") {
  RTMSpec m = unary_increment();
  RTMSpec inv = m.inverted();
  inv.validate();
  auto fwd = rtm_string_semantics(m, {1, 1}, 100);
  REQUIRE(fwd.has_value());
  auto back = rtm_string_semantics(inv, *fwd, 100);
  REQUIRE(back.has_value());
  CHECK(*back == std::vector<int>{1, 1});
}

TEST_CASE("encoded machine agrees with the string semantics") {
  RTMSpec m = unary_increment();
  Prog p = load(rtm_runner_source(m));
  const Decl* run = p.prog.pick_iso("run");
  for (int len = 0; len <= 4; len++) {
    std::vector<int> input(static_cast<size_t>(len), 1);
    auto expect = rtm_string_semantics(m, input, 1000);
    REQUIRE(expect.has_value());
    Outcome o = eval(mk_app(run->iso, encode_standard(m, m.start, input)), 2000000, &p.ft);
    REQUIRE(o.tag == Outcome::Tag::Value);
    auto got = decode_standard(m, o.value);
    REQUIRE(got.has_value());
    CHECK(*got == *expect);
  }
}

TEST_CASE("garbage-free machine returns exactly the output configuration") {
  RTMSpec m = unary_increment();
  Prog p = load(rtm_garrem_source(m));
  const Decl* gr = p.prog.pick_iso("garrem");
  CHECK(isotype_equal(gr->iso_type, it_ground(conf_type(m), conf_type(m))));
  for (int len = 0; len <= 2; len++) {
    std::vector<int> input(static_cast<size_t>(len), 1);
    std::vector<int> expect(static_cast<size_t>(len) + 1, 1);
    Outcome o = eval(mk_app(gr->iso, encode_standard(m, m.start, input)), 4000000, &p.ft);
    REQUIRE(o.tag == Outcome::Tag::Value);
    CHECK(term_equal(o.value, encode_standard(m, m.fin, expect)));
  }
}

TEST_CASE("garbage-free machine round-trips with its own inverse") {
  RTMSpec m = unary_increment();
  Prog p = load(rtm_garrem_source(m));
  const Decl* gr = p.prog.pick_iso("garrem");
  IsoPtr inv = invert_iso(gr->iso);
  FixTypes ft2;
  typecheck_iso(Context{}, inv, Dialect::Classical, &ft2);
  std::vector<int> input = {1};
  Outcome fwd = eval(mk_app(gr->iso, encode_standard(m, m.start, input)), 4000000, &p.ft);
  REQUIRE(fwd.tag == Outcome::Tag::Value);
  Outcome back = eval(mk_app(inv, fwd.value), 8000000, &ft2);
  REQUIRE(back.tag == Outcome::Tag::Value);
  CHECK(term_equal(back.value, encode_standard(m, m.start, input)));
}

TEST_CASE("injection table of the garbage-free machine matches the oracle") {
  RTMSpec m = unary_increment();
  Prog p = load(rtm_garrem_source(m));
  const Decl* gr = p.prog.pick_iso("garrem");
  for (int len = 0; len <= 2; len++) {
    std::vector<int> input(static_cast<size_t>(len), 1);
    auto expect = rtm_string_semantics(m, input, 1000);
    REQUIRE(expect.has_value());
    Outcome o = eval(mk_app(gr->iso, encode_standard(m, m.start, input)), 4000000, &p.ft);
    REQUIRE(o.tag == Outcome::Tag::Value);
    CHECK(term_equal(o.value, encode_standard(m, m.fin, *expect)));
  }
}

TEST_CASE("quantum corpus files load and run") {
  SourceProgram had = parse(slurp(std::string(REVQ_CORPUS_DIR) + "/hadamard.qrev"),
                            Dialect::Quantum);
  check_program(had);
  NormalValue nv = normalize(mk_app(had.pick_iso("had")->iso, mk_inl(mk_unit())));
  CHECK(nv.parts.size() == 2);
  CHECK(check_unitary(sem_iso(had.pick_iso("had")->iso, 4)));
}
