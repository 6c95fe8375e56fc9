#include "revq/stdlib.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "revq/ceval.hpp"

namespace revq::lib {

// ---------------------------------------------------------------------------
// RTM core

void RTMSpec::validate() const {
  if (num_states < 2 || num_symbols < 1) throw Error(errc::malformed, "degenerate RTM");
  for (auto& r : rules) {
    if (r.from == fin) throw Error(errc::malformed, "RTM has a transition out of the final state");
    if (r.to == start) throw Error(errc::malformed, "RTM has a transition into the start state");
    if (r.from < 0 || r.from >= num_states || r.to < 0 || r.to >= num_states)
      throw Error(errc::malformed, "RTM rule state out of range");
  }
  for (size_t i = 0; i < rules.size(); i++)
    for (size_t j = i + 1; j < rules.size(); j++) {
      const Rule &a = rules[i], &b = rules[j];
      if (a.from == b.from) {
        bool ok = a.kind == Rule::Kind::Write && b.kind == Rule::Kind::Write && a.read != b.read;
        if (!ok) throw Error(errc::malformed, "RTM is not forward deterministic");
      }
      if (a.to == b.to) {
        bool ok = a.kind == Rule::Kind::Write && b.kind == Rule::Kind::Write && a.write != b.write;
        if (!ok) throw Error(errc::malformed, "RTM is not backward deterministic");
      }
    }
}

RTMSpec RTMSpec::inverted() const {
  RTMSpec out = *this;
  out.start = fin;
  out.fin = start;
  out.name = name + "_inv";
  out.rules.clear();
  for (auto& r : rules) {
    Rule n;
    n.from = r.to;
    n.to = r.from;
    switch (r.kind) {
      case Rule::Kind::Write:
        n.kind = Rule::Kind::Write;
        n.read = r.write;
        n.write = r.read;
        break;
      case Rule::Kind::MoveL:
        n.kind = Rule::Kind::MoveR;
        break;
      case Rule::Kind::MoveR:
        n.kind = Rule::Kind::MoveL;
        break;
      case Rule::Kind::Stay:
        n.kind = Rule::Kind::Stay;
        break;
    }
    out.rules.push_back(n);
  }
  return out;
}

std::optional<std::vector<int>> rtm_string_semantics(const RTMSpec& m,
                                                     const std::vector<int>& input,
                                                     long max_steps) {
  m.validate();
  // tapes stored with the cursor-adjacent symbol at the front
  std::vector<int> left, right(input.begin(), input.end());
  int q = m.start, s = 0;
  auto pop_front = [](std::vector<int>& v) {
    int x = v.empty() ? 0 : v.front();
    if (!v.empty()) v.erase(v.begin());
    return x;
  };
  for (long step = 0; step < max_steps; step++) {
    if (q == m.fin) break;
    const RTMSpec::Rule* chosen = nullptr;
    for (auto& r : m.rules) {
      if (r.from != q) continue;
      if (r.kind == RTMSpec::Rule::Kind::Write && r.read != s) continue;
      chosen = &r;
      break;
    }
    if (!chosen) return std::nullopt;  // stuck off the final state
    switch (chosen->kind) {
      case RTMSpec::Rule::Kind::Write:
        s = chosen->write;
        break;
      case RTMSpec::Rule::Kind::MoveR:
        left.insert(left.begin(), s);
        s = pop_front(right);
        break;
      case RTMSpec::Rule::Kind::MoveL:
        right.insert(right.begin(), s);
        s = pop_front(left);
        break;
      case RTMSpec::Rule::Kind::Stay:
        break;
    }
    q = chosen->to;
  }
  if (q != m.fin) return std::nullopt;
  // standardness: left all blank, cursor blank, right = blank-free prefix + blanks
  for (int x : left)
    if (x != 0) return std::nullopt;
  if (s != 0) return std::nullopt;
  std::vector<int> out;
  size_t i = 0;
  while (i < right.size() && right[i] != 0) out.push_back(right[i++]);
  while (i < right.size())
    if (right[i++] != 0) return std::nullopt;  // interior blank: not standard
  return out;
}

RTMSpec unary_increment() {
  RTMSpec m;
  m.name = "unary_increment";
  m.num_states = 3;  // start, carry, final
  m.num_symbols = 2;
  m.start = 0;
  m.fin = 2;
  RTMSpec::Rule w;
  w.from = 0;
  w.kind = RTMSpec::Rule::Kind::Write;
  w.read = 0;
  w.write = 1;
  w.to = 1;
  RTMSpec::Rule mv;
  mv.from = 1;
  mv.kind = RTMSpec::Rule::Kind::MoveL;
  mv.to = 2;
  m.rules = {w, mv};
  m.validate();
  return m;
}

// ---------------------------------------------------------------------------
// encodings

static TypePtr finite_sum(int n) {
  if (n <= 1) return ty_unit();
  return ty_sum(ty_unit(), finite_sum(n - 1));
}

static TermPtr finite_sum_value(int i, int n) {
  if (n <= 1) return mk_unit();
  if (i == 0) return mk_inl(mk_unit());
  return mk_inr(finite_sum_value(i - 1, n - 1));
}

TypePtr state_type(const RTMSpec& m) { return finite_sum(m.num_states); }
TypePtr symbol_type(const RTMSpec& m) { return finite_sum(m.num_symbols); }
TypePtr conf_type(const RTMSpec& m) {
  TypePtr s = symbol_type(m);
  return ty_tensor(state_type(m), ty_tensor(ty_list(s), ty_tensor(s, ty_list(s))));
}
TermPtr encode_state(const RTMSpec& m, int q) { return finite_sum_value(q, m.num_states); }
TermPtr encode_symbol(const RTMSpec& m, int s) { return finite_sum_value(s, m.num_symbols); }

TermPtr encode_standard(const RTMSpec& m, int q, const std::vector<int>& s) {
  std::vector<TermPtr> rs;
  for (int x : s) rs.push_back(encode_symbol(m, x));
  return mk_pair(encode_state(m, q),
                 mk_pair(mk_nil(), mk_pair(encode_symbol(m, 0), mk_list(rs))));
}

static bool decode_list(const TermPtr& t, std::vector<TermPtr>& out) {
  TermPtr cur = t;
  for (;;) {
    if (cur->tag != Term::Tag::Fold) return false;
    TermPtr inner = cur->a;
    if (inner->tag == Term::Tag::InL) return inner->a->tag == Term::Tag::Unit;
    if (inner->tag != Term::Tag::InR || inner->a->tag != Term::Tag::Pair) return false;
    out.push_back(inner->a->a);
    cur = inner->a->b;
  }
}

std::optional<std::vector<int>> decode_standard(const RTMSpec& m, const TermPtr& out) {
  // runner output: (conf, garbage)
  if (out->tag != Term::Tag::Pair) return std::nullopt;
  TermPtr conf = out->a;
  if (conf->tag != Term::Tag::Pair || conf->b->tag != Term::Tag::Pair ||
      conf->b->b->tag != Term::Tag::Pair)
    return std::nullopt;
  TermPtr q = conf->a, l = conf->b->a, s = conf->b->b->a, r = conf->b->b->b;
  if (!term_equal(q, encode_state(m, m.fin))) return std::nullopt;
  if (!term_equal(l, mk_nil())) return std::nullopt;
  if (!term_equal(s, encode_symbol(m, 0))) return std::nullopt;
  std::vector<TermPtr> items;
  if (!decode_list(r, items)) return std::nullopt;
  std::vector<int> result;
  for (auto& it : items) {
    int found = -1;
    for (int i = 0; i < m.num_symbols; i++)
      if (term_equal(it, encode_symbol(m, i))) {
        found = i;
        break;
      }
    if (found <= 0) return std::nullopt;  // blank or unknown on the clean tape
    result.push_back(found);
  }
  return result;
}

// ---------------------------------------------------------------------------
// source emission helpers

namespace {

struct Emitter {
  std::vector<std::pair<std::string, std::string>> decls;  // name, text
  std::set<std::string> names;

  void add(const std::string& name, const std::string& text) {
    if (names.count(name)) {
      for (auto& [n, t] : decls)
        if (n == name && t != text)
          throw Error(errc::internal, "generator emitted conflicting declarations for " + name);
      return;
    }
    names.insert(name);
    decls.emplace_back(name, text);
  }

  std::string program() const {
    std::ostringstream os;
    os << "dialect classical\n\n";
    for (auto& [n, t] : decls) os << t << "\n";
    return os.str();
  }
};

std::string ground(const TypePtr& a, const TypePtr& b) {
  return show_isotype(it_ground(a, b));
}

// Duplication of closed values, by induction on the type. `env` maps the mu
// types currently being unfolded to their fix variables.
std::string dup_expr(const TypePtr& a, std::vector<std::pair<TypePtr, std::string>>& env,
                     int& fresh) {
  for (auto& [ty, var] : env)
    if (type_equal(ty, a)) return var;
  std::string ann = " :: (" + ground(a, ty_tensor(a, a)) + ")";
  switch (a->tag) {
    case Type::Tag::Unit:
      return "({ * <-> (*, *) }" + ann + ")";
    case Type::Tag::Sum: {
      std::string dl = dup_expr(a->lhs, env, fresh);
      std::string dr = dup_expr(a->rhs, env, fresh);
      return "({ inl x <-> let (x1, x2) = " + dl +
             " x in (inl x1, inl x2)"
             " | inr y <-> let (y1, y2) = " +
             dr + " y in (inr y1, inr y2) }" + ann + ")";
    }
    case Type::Tag::Tensor: {
      std::string dl = dup_expr(a->lhs, env, fresh);
      std::string dr = dup_expr(a->rhs, env, fresh);
      return "({ (x, y) <-> let (x1, x2) = " + dl + " x in let (y1, y2) = " + dr +
             " y in ((x1, y1), (x2, y2)) }" + ann + ")";
    }
    case Type::Tag::Mu: {
      std::string f = "dfix" + std::to_string(fresh++);
      env.emplace_back(a, f);
      std::string inner = dup_expr(mu_unfold(a), env, fresh);
      env.pop_back();
      return "(fix " + f + " :: (" + ground(a, ty_tensor(a, a)) +
             ") . { fold x <-> let (x1, x2) = " + inner + " x in (fold x1, fold x2) })";
    }
    default:
      throw Error(errc::malformed, "dup: cannot duplicate type " + show_type(a));
  }
}

void emit_dup(Emitter& em, const std::string& name, const TypePtr& a) {
  std::vector<std::pair<TypePtr, std::string>> env;
  int fresh = 0;
  em.add(name, "iso " + name + " : " + ground(a, ty_tensor(a, a)) + " =\n  " +
                   dup_expr(a, env, fresh) + "\n");
}

void emit_inverse(Emitter& em, const std::string& name, const std::string& of_name,
                  const SourceProgram& parsed) {
  const Decl* d = parsed.pick_iso(of_name);
  if (!d) throw Error(errc::internal, "emit_inverse: missing declaration " + of_name);
  IsoPtr inv = invert_iso(d->iso);
  em.add(name, "iso " + name + " : " + show_isotype(isotype_invert(d->iso_type)) + " =\n  " +
                   pretty(inv) + "\n");
}

// list helpers over an element type
void emit_list_helpers(Emitter& em, const TypePtr& s, const std::string& suffix) {
  TypePtr ls = ty_list(s);
  std::string lt = show_type(ls);
  std::string st = show_type(s);
  emit_dup(em, "dup" + suffix, s);
  em.add("len" + suffix, "iso len" + suffix + " : " + ground(ls, ty_tensor(ls, ty_nat_rec())) +
                             " =\n  fix f . { [] <-> ([], 0)"
                             " | h :: t <-> let (t2, n) = f t in (h :: t2, fold (inr n)) }\n");
  em.add("snocp" + suffix,
         "iso snocp" + suffix + " : " +
             ground(ty_tensor(ls, ty_tensor(s, ty_nat_rec())),
                    ty_tensor(ls, ty_tensor(s, ty_nat_rec()))) +
             " =\n  fix f . { ([], x, 0) <-> let (x1, x2) = dup" + suffix +
             " x in ([x1], x2, 0)"
             " | (h :: t, x, fold (inr n)) <-> let (t2, x2, n2) = f (t, x, n) in"
             " (h :: t2, x2, fold (inr n2)) }\n");
  em.add("lenpred" + suffix,
         "iso lenpred" + suffix + " : " + ground(ls, ty_tensor(ls, ty_nat_rec())) +
             " =\n  { h :: t <-> let (t2, n) = len" + suffix + " t in (h :: t2, n) }\n");
  {
    SourceProgram prog = parse(em.program(), Dialect::Classical);
    emit_inverse(em, "invlenpred" + suffix, "lenpred" + suffix, prog);
  }
  em.add("snoc" + suffix,
         "iso snoc" + suffix + " : " + ground(ty_tensor(ls, s), ty_tensor(ls, s)) +
             " =\n  { (l, x) <-> let (l1, n) = len" + suffix +
             " l in let (l2, x2, n2) = snocp" + suffix + " (l1, x, n) in let l3 = invlenpred" +
             suffix + " (l2, n2) in (l3, x2) }\n");
}

}  // namespace

TypePtr enc_type() {
  // B + I + I + I + I + nat, right associated
  return ty_sum(ty_bool(),
                ty_sum(ty_unit(),
                       ty_sum(ty_unit(), ty_sum(ty_unit(), ty_sum(ty_unit(), ty_nat_rec())))));
}

namespace {

// Enc tokens
TermPtr enc_tok_tt() { return mk_inl(mk_tt()); }
TermPtr enc_tok_ff() { return mk_inl(mk_ff()); }
TermPtr enc_tok_s() { return mk_inr(mk_inl(mk_unit())); }
TermPtr enc_tok_dsum() { return mk_inr(mk_inr(mk_inl(mk_unit()))); }
TermPtr enc_tok_dprod() { return mk_inr(mk_inr(mk_inr(mk_inl(mk_unit())))); }
TermPtr enc_tok_dmu() { return mk_inr(mk_inr(mk_inr(mk_inr(mk_inl(mk_unit()))))); }

void emit_append(Emitter& em) {
  TypePtr le = ty_list(enc_type());
  em.add("append", "iso append : " +
                       ground(ty_tensor(le, le), ty_tensor(le, ty_nat_rec())) +
                       " =\n  fix f . { ([], x) <-> (x, 0)"
                       " | (h :: t, x) <-> let (y, n) = f (t, x) in (h :: y, fold (inr n)) }\n");
}

std::string floor_expr(const TypePtr& a, std::vector<std::pair<TypePtr, std::string>>& env,
                       int& fresh) {
  for (auto& [ty, var] : env)
    if (type_equal(ty, a)) return var;
  TypePtr le = ty_list(enc_type());
  std::string ann = " :: (" + ground(a, le) + ")";
  switch (a->tag) {
    case Type::Tag::Unit:
      return "({ * <-> [" + pretty(enc_tok_s()) + "] }" + ann + ")";
    case Type::Tag::Sum: {
      std::string fl = floor_expr(a->lhs, env, fresh);
      std::string fr = floor_expr(a->rhs, env, fresh);
      return "({ inl x <-> let y = " + fl + " x in " + pretty(enc_tok_dsum()) + " :: " +
             pretty(enc_tok_ff()) + " :: y | inr x <-> let y = " + fr + " x in " +
             pretty(enc_tok_dsum()) + " :: " + pretty(enc_tok_tt()) + " :: y }" + ann + ")";
    }
    case Type::Tag::Tensor: {
      std::string fl = floor_expr(a->lhs, env, fresh);
      std::string fr = floor_expr(a->rhs, env, fresh);
      return "({ (x, y) <-> let x2 = " + fl + " x in let y2 = " + fr +
             " y in let (z, n) = append (x2, y2) in " + pretty(enc_tok_dprod()) +
             " :: (inr (inr (inr (inr (inr n))))) :: z }" + ann + ")";
    }
    case Type::Tag::Mu: {
      std::string f = "ffix" + std::to_string(fresh++);
      env.emplace_back(a, f);
      std::string inner = floor_expr(mu_unfold(a), env, fresh);
      env.pop_back();
      return "(fix " + f + " :: (" + ground(a, le) + ") . { fold x <-> let y = " + inner +
             " x in " + pretty(enc_tok_dmu()) + " :: y })";
    }
    default:
      throw Error(errc::malformed, "floor: cannot encode type " + show_type(a));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// individual programs

std::string hadamard_source() {
  return "dialect quantum\n\n"
         "iso had : I + I <-> I + I =\n"
         "  { inl * <-> sqrt2inv * inl * + sqrt2inv * inr *\n"
         "  | inr * <-> sqrt2inv * inl * - sqrt2inv * inr * }\n"
         "\ndef main = had (inl *)\n";
}

std::string swap_source() {
  return "dialect quantum\n\n"
         "iso swap : I + I <-> I + I =\n"
         "  { inl x <-> inr x | inr y <-> inl y }\n";
}

std::string not_source() {
  return "dialect quantum\n\n"
         "iso notq : I + I <-> I + I =\n"
         "  { inl * <-> inr * | inr * <-> inl * }\n";
}

std::string map_source(const TypePtr& a, const TypePtr& b) {
  Emitter em;
  if (type_equal(a, ty_nat_rec()) && type_equal(b, ty_nat_rec()))
    em.add("succ", "iso succ : nat <-> nat = { x <-> fold (inr x) }\n");
  std::string t1 = "(" + ground(a, b) + ")";
  std::string t2 = "(" + ground(ty_list(a), ty_list(b)) + ")";
  em.add("map", "iso map : " + t1 + " -> " + t2 + " =\n  \\g :: " + t1 + " . fix m :: " + t2 +
                    " . { [] <-> []"
                    " | h :: t <-> let h2 = g h in let t2 = m t in h2 :: t2 }\n");
  std::string out = em.program();
  if (type_equal(a, ty_nat_rec()) && type_equal(b, ty_nat_rec()))
    out += "def main = (map succ) [0, 1, 2]\n";
  return out;
}

std::string dup_source(const TypePtr& a) {
  Emitter em;
  emit_dup(em, "dup", a);
  return em.program();
}

std::string erase_source(const TypePtr& a, const TypePtr& t, const TermPtr& v) {
  Emitter em;
  em.add("erase", "iso erase : " + ground(ty_tensor(a, t), a) + " =\n  { (x, " + pretty(v) +
                      ") <-> x }\n");
  return em.program();
}

std::string cantor_source() {
  Emitter em;
  TypePtr nn = ty_tensor(ty_nat_rec(), ty_nat_rec());
  TypePtr step_out = ty_sum(nn, ty_unit());
  em.add("step", "iso step : " + ground(nn, step_out) +
                     " =\n  { (fold (inr i), j) <-> inl (i, fold (inr j))\n"
                     "  | (0, fold (inr j)) <-> inl (j, 0)\n"
                     "  | (0, 0) <-> inr * }\n");
  em.add("cantor", "iso cantor : " + ground(nn, ty_nat_rec()) +
                       " =\n  fix c . { x <-> let y = step x in let z = ({ inl p <-> let q = c p"
                       " in fold (inr q) | inr * <-> 0 } :: (" +
                       ground(step_out, ty_nat_rec()) + ")) y in z }\n");
  return em.program() + "def main = cantor (1, 1)\n";
}

std::string floor_source(const TypePtr& a) {
  Emitter em;
  emit_append(em);
  std::vector<std::pair<TypePtr, std::string>> env;
  int fresh = 0;
  std::string body = floor_expr(a, env, fresh);
  em.add("floor",
         "iso floor : " + ground(a, ty_list(enc_type())) + " =\n  " + body + "\n");
  return em.program();
}

namespace {

void emit_growth(Emitter& em, const RTMSpec& m) {
  TypePtr s = symbol_type(m);
  TypePtr ls = ty_list(s);
  emit_list_helpers(em, s, "s");
  std::string blank = pretty(encode_symbol(m, 0));
  em.add("eraseb", "iso eraseb : " + ground(ty_tensor(ls, s), ls) + " =\n  { (x, " + blank +
                       ") <-> x }\n");
  {
    SourceProgram prog = parse(em.program(), Dialect::Classical);
    emit_inverse(em, "inveraseb", "eraseb", prog);
  }
  em.add("growth", "iso growth : " + ground(ty_tensor(ls, ls), ty_tensor(ls, ls)) +
                       " =\n  { (l, r) <->\n"
                       "      let (l1, bl) = inveraseb l in\n"
                       "      let (l2, bl2) = snocs (l1, bl) in\n"
                       "      let l3 = eraseb (l2, bl2) in\n"
                       "      let (r1, br) = inveraseb r in\n"
                       "      let (r2, br2) = snocs (r1, br) in\n"
                       "      let r3 = eraseb (r2, br2) in (l3, r3) }\n");
}

void emit_rev(Emitter& em, const TypePtr& a, const std::string& suffix) {
  TypePtr la = ty_list(a);
  emit_dup(em, "dup" + suffix, a);
  em.add("consit" + suffix, "iso consit" + suffix + " : " + ground(ty_tensor(a, la), la) +
                                " =\n  { (h, t) <-> h :: t }\n");
  em.add("padnil" + suffix, "iso padnil" + suffix + " : " + ground(la, ty_tensor(la, la)) +
                                " =\n  { x <-> (x, []) }\n");
  em.add("revaux" + suffix,
         "iso revaux" + suffix + " : " + ground(ty_tensor(la, la), ty_tensor(la, la)) +
             " =\n  fix f . { ([], y) <-> ([], y)"
             " | (h :: t, y) <-> let (h1, h2) = dup" + suffix +
             " h in let y2 = consit" + suffix +
             " (h2, y) in let (t1, t2) = f (t, y2) in (h1 :: t1, t2) }\n");
  em.add("rev" + suffix, "iso rev" + suffix + " : " + ground(la, ty_tensor(la, la)) +
                             " =\n  { x <-> let (x1, e) = padnil" + suffix +
                             " x in let (t1, t2) = revaux" + suffix + " (x1, e) in (t1, t2) }\n");
}

void emit_rmblank(Emitter& em, const RTMSpec& m) {
  TypePtr s = symbol_type(m);
  TypePtr ls = ty_list(s);
  std::ostringstream body;
  body << "iso rmblank : " << ground(ls, ty_tensor(ls, ty_nat_rec()))
       << " =\n  fix f . { [] <-> ([], 0)\n"
       << "  | " << pretty(encode_symbol(m, 0))
       << " :: t <-> let (t2, n) = f t in (t2, fold (inr n))\n";
  for (int i = 1; i < m.num_symbols; i++) {
    std::string sym = pretty(encode_symbol(m, i));
    body << "  | " << sym << " :: t <-> (" << sym << " :: t, 0)\n";
  }
  body << "  }\n";
  em.add("rmblank", body.str());
}

void emit_cleanup(Emitter& em, const RTMSpec& m) {
  TypePtr s = symbol_type(m);
  TypePtr ls = ty_list(s);
  TypePtr conf = conf_type(m);
  TypePtr nat = ty_nat_rec();
  TypePtr garbage =
      ty_tensor(nat, ty_tensor(nat, ty_tensor(nat, ty_tensor(ls, ls))));
  emit_rmblank(em, m);
  emit_rev(em, s, "s");
  em.add("cleanup",
         "iso cleanup : " + ground(ty_tensor(conf, nat), ty_tensor(conf, garbage)) +
             " =\n  { ((q, (l, y, r)), n) <->\n"
             "      let (l2, n1) = rmblank l in\n"
             "      let (rori, rrev) = revs r in\n"
             "      let (rclean, n2) = rmblank rrev in\n"
             "      let (grev, r2) = revs rclean in\n"
             "      ((q, (l2, y, r2)), (n, (n1, (n2, (rori, grev))))) }\n");
}

std::string machine_clauses(const RTMSpec& m, bool with_flag) {
  std::ostringstream os;
  bool first = true;
  for (auto& r : m.rules) {
    std::string q = pretty(encode_state(m, r.from));
    std::string qp = pretty(encode_state(m, r.to));
    std::string lhs, conf_out;
    switch (r.kind) {
      case RTMSpec::Rule::Kind::Write:
        lhs = "(" + q + ", (x1, " + pretty(encode_symbol(m, r.read)) + ", y1))";
        conf_out = "(" + qp + ", (l2, " + pretty(encode_symbol(m, r.write)) + ", r2))";
        break;
      case RTMSpec::Rule::Kind::MoveR:
        lhs = "(" + q + ", (x1, z, y :: y1))";
        conf_out = "(" + qp + ", (z :: l2, y, r2))";
        break;
      case RTMSpec::Rule::Kind::MoveL:
        lhs = "(" + q + ", (x :: x1, z, y1))";
        conf_out = "(" + qp + ", (l2, x, z :: r2))";
        break;
      case RTMSpec::Rule::Kind::Stay:
        lhs = "(" + q + ", (x1, z, y1))";
        conf_out = "(" + qp + ", (l2, z, r2))";
        break;
    }
    std::string rhs = "let (l2, r2) = growth (x1, y1) in ";
    if (with_flag)
      rhs += "(" + conf_out + ", " + (r.to == m.fin ? "ff" : "tt") + ")";
    else
      rhs += conf_out;
    os << (first ? "  { " : "  | ") << lhs << " <-> " << rhs << "\n";
    first = false;
  }
  os << "  }";
  return os.str();
}

}  // namespace

std::string growth_source(int num_symbols) {
  RTMSpec dummy;
  dummy.num_symbols = num_symbols;
  dummy.num_states = 2;
  dummy.fin = 1;
  Emitter em;
  emit_growth(em, dummy);
  return em.program();
}

std::string it_source(const TypePtr& a) {
  Emitter em;
  TypePtr nat = ty_nat_rec();
  std::string t1 = "(" + ground(a, ty_tensor(a, ty_bool())) + ")";
  std::string t2 = "(" + ground(a, ty_tensor(a, nat)) + ")";
  std::string inner_ann = ground(ty_tensor(a, ty_bool()), ty_tensor(a, nat));
  em.add("it", "iso it : " + t1 + " -> " + t2 + " =\n  \\g :: " + t1 + " . fix f :: " + t2 +
                   " . { x <-> let y = g x in let z = ({ (a1, tt) <->"
                   " let (b1, n1) = f a1 in (b1, fold (inr n1)) | (a1, ff) <-> (a1, 0) } :: (" +
                   inner_ann + ")) y in z }\n");
  return em.program();
}

std::string rmblank_source(int num_symbols) {
  RTMSpec dummy;
  dummy.num_symbols = num_symbols;
  dummy.num_states = 2;
  dummy.fin = 1;
  Emitter em;
  emit_rmblank(em, dummy);
  return em.program();
}

std::string rev_source(const TypePtr& a) {
  Emitter em;
  emit_rev(em, a, "");
  return em.program();
}

std::string cleanup_source(const RTMSpec& m) {
  Emitter em;
  emit_cleanup(em, m);
  return em.program();
}

std::string rtm_iso_source(const RTMSpec& m) {
  m.validate();
  Emitter em;
  emit_growth(em, m);
  TypePtr conf = conf_type(m);
  em.add("machine",
         "iso machine : " + ground(conf, conf) + " =\n" + machine_clauses(m, false) + "\n");
  return em.program();
}

std::string rtm_isob_source(const RTMSpec& m) {
  m.validate();
  Emitter em;
  emit_growth(em, m);
  TypePtr conf = conf_type(m);
  em.add("machineb", "iso machineb : " + ground(conf, ty_tensor(conf, ty_bool())) + " =\n" +
                         machine_clauses(m, true) + "\n");
  return em.program();
}

namespace {

// shared machinery (growth chain, iterator, cleanup, seed) plus a runner for
// one machine; `suffix` distinguishes the forward and inverted runners
void emit_runner(Emitter& em, const RTMSpec& m, const std::string& suffix) {
  emit_growth(em, m);
  TypePtr conf = conf_type(m);
  TypePtr nat = ty_nat_rec();
  TypePtr s = symbol_type(m);
  TypePtr ls = ty_list(s);
  TypePtr garbage = ty_tensor(nat, ty_tensor(nat, ty_tensor(nat, ty_tensor(ls, ls))));
  em.add("machineb" + suffix,
         "iso machineb" + suffix + " : " + ground(conf, ty_tensor(conf, ty_bool())) + " =\n" +
             machine_clauses(m, true) + "\n");
  {
    std::string it_src = it_source(conf);
    size_t at = it_src.find("iso it :");
    em.add("it", it_src.substr(at));
  }
  emit_cleanup(em, m);
  std::string blank = pretty(encode_symbol(m, 0));
  em.add("seed", "iso seed : " + ground(conf, conf) + " =\n  { (q, (l, z, r)) <-> (q, (" +
                     blank + " :: l, z, r)) }\n");
  em.add("run" + suffix,
         "iso run" + suffix + " : " + ground(conf, ty_tensor(conf, garbage)) +
             " =\n  { c <-> let c1 = seed c in let (c2, n) = (it machineb" + suffix +
             ") c1 in let o = cleanup (c2, n) in o }\n");
}

}  // namespace

std::string rtm_runner_source(const RTMSpec& m) {
  m.validate();
  Emitter em;
  emit_runner(em, m, "");
  return em.program() +
         "def main = run " + pretty(encode_standard(m, m.start, {1, 1})) + "\n";
}

std::string rtm_garrem_source(const RTMSpec& m) {
  m.validate();
  RTMSpec minv = m.inverted();
  Emitter em;
  emit_runner(em, m, "");
  emit_runner(em, minv, "2");
  TypePtr conf = conf_type(m);
  emit_dup(em, "dupconf", conf);
  {
    SourceProgram prog = parse(em.program(), Dialect::Classical);
    emit_inverse(em, "invrun", "run", prog);
    emit_inverse(em, "invrun2", "run2", prog);
    emit_inverse(em, "invdupconf", "dupconf", prog);
  }
  em.add("garrem", "iso garrem : " + ground(conf, conf) +
                       " =\n  { x1 <-> let (x2, y) = run x1 in\n"
                       "      let (x3, z) = dupconf x2 in\n"
                       "      let x4 = invrun (x3, y) in\n"
                       "      let (z2, y2) = run2 z in\n"
                       "      let z3 = invdupconf (z2, x4) in\n"
                       "      let z4 = invrun2 (z3, y2) in z4 }\n");
  return em.program();
}

// ---------------------------------------------------------------------------
// registry

std::vector<std::string> program_ids() {
  return {"hadamard", "swap",  "not",     "map",     "dup", "erase",  "cantor", "floor",
          "growth",   "it",    "rmblank", "rev",     "cleanup", "rtm", "rtmb",  "rtmrun",
          "rtmgarrem"};
}

static TypePtr arg_type(const std::vector<std::string>& args, size_t i, const char* dflt) {
  return parse_type(i < args.size() ? args[i] : dflt, Dialect::Classical);
}

std::string generate_source(const std::string& id, const std::vector<std::string>& args) {
  if (id == "hadamard") return hadamard_source();
  if (id == "swap") return swap_source();
  if (id == "not") return not_source();
  if (id == "map") return map_source(arg_type(args, 0, "nat"), arg_type(args, 1, "nat"));
  if (id == "dup") return dup_source(arg_type(args, 0, "nat"));
  if (id == "erase") {
    TypePtr a = arg_type(args, 0, "nat");
    TypePtr t = arg_type(args, 1, "nat");
    TermPtr v = parse_term(args.size() > 2 ? args[2] : "0", Dialect::Classical);
    return erase_source(a, t, v);
  }
  if (id == "cantor") return cantor_source();
  if (id == "floor") return floor_source(arg_type(args, 0, "nat"));
  if (id == "growth") return growth_source(args.empty() ? 2 : std::stoi(args[0]));
  if (id == "it") return it_source(arg_type(args, 0, "nat"));
  if (id == "rmblank") return rmblank_source(args.empty() ? 2 : std::stoi(args[0]));
  if (id == "rev") return rev_source(arg_type(args, 0, "nat"));
  if (id == "cleanup") return cleanup_source(unary_increment());
  if (id == "rtm") return rtm_iso_source(unary_increment());
  if (id == "rtmb") return rtm_isob_source(unary_increment());
  if (id == "rtmrun") return rtm_runner_source(unary_increment());
  if (id == "rtmgarrem") return rtm_garrem_source(unary_increment());
  throw Error(errc::malformed, "unknown program id '" + id + "'");
}

SourceProgram generate(const std::string& id, const std::vector<std::string>& args) {
  std::string src = generate_source(id, args);
  Dialect d = src.rfind("dialect quantum", 0) == 0 ? Dialect::Quantum : Dialect::Classical;
  return parse(src, d);
}

}  // namespace revq::lib
