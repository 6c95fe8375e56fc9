#include "revq/ast.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <sstream>

namespace revq {

// ---------------------------------------------------------------------------
// scalar policy

static double g_eps = []() {
  if (const char* e = std::getenv("REVQ_EPS")) {
    double v = std::atof(e);
    if (v > 0) return v;
  }
  return 1e-9;
}();

double eps() { return g_eps; }
void set_eps(double e) { g_eps = e; }

bool approx_zero(double x) { return std::abs(x) < g_eps; }
bool approx_zero(const Complex& z) { return std::abs(z) < g_eps; }
bool approx_equal(double a, double b) { return std::abs(a - b) < g_eps; }
bool approx_equal(const Complex& a, const Complex& b) { return std::abs(a - b) < g_eps; }
bool approx_one(double x) { return std::abs(x - 1.0) < g_eps; }

std::string Error::render(const std::string& file) const {
  std::ostringstream os;
  os << file << ':' << (line < 0 ? 0 : line) << ':' << (col < 0 ? 0 : col) << ": " << code
     << ": " << what();
  return os.str();
}

// ---------------------------------------------------------------------------
// types

static TypePtr mk_type(Type t) { return std::make_shared<Type>(std::move(t)); }

TypePtr ty_unit() {
  static TypePtr u = mk_type({Type::Tag::Unit, nullptr, nullptr, "", nullptr});
  return u;
}
TypePtr ty_sum(TypePtr a, TypePtr b) {
  return mk_type({Type::Tag::Sum, std::move(a), std::move(b), "", nullptr});
}
TypePtr ty_tensor(TypePtr a, TypePtr b) {
  return mk_type({Type::Tag::Tensor, std::move(a), std::move(b), "", nullptr});
}
TypePtr ty_nat() {
  static TypePtr n = mk_type({Type::Tag::Nat, nullptr, nullptr, "", nullptr});
  return n;
}
TypePtr ty_mu(std::string var, TypePtr body) {
  return mk_type({Type::Tag::Mu, nullptr, nullptr, std::move(var), std::move(body)});
}
TypePtr ty_var(std::string name) {
  return mk_type({Type::Tag::Var, nullptr, nullptr, std::move(name), nullptr});
}
TypePtr ty_nat_rec() {
  static TypePtr n = ty_mu("X", ty_sum(ty_unit(), ty_var("X")));
  return n;
}
TypePtr ty_list(TypePtr elem) {
  return ty_mu("X", ty_sum(ty_unit(), ty_tensor(std::move(elem), ty_var("X"))));
}
TypePtr ty_bool() {
  static TypePtr b = ty_sum(ty_unit(), ty_unit());
  return b;
}

static bool type_equal_rec(const TypePtr& a, const TypePtr& b,
                           std::vector<std::pair<std::string, std::string>>& binders) {
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case Type::Tag::Unit:
    case Type::Tag::Nat:
      return true;
    case Type::Tag::Sum:
    case Type::Tag::Tensor:
      return type_equal_rec(a->lhs, b->lhs, binders) && type_equal_rec(a->rhs, b->rhs, binders);
    case Type::Tag::Var: {
      for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
        if (it->first == a->name || it->second == b->name)
          return it->first == a->name && it->second == b->name;
      }
      return a->name == b->name;
    }
    case Type::Tag::Mu: {
      binders.emplace_back(a->name, b->name);
      bool r = type_equal_rec(a->body, b->body, binders);
      binders.pop_back();
      return r;
    }
  }
  return false;
}

bool type_equal(const TypePtr& a, const TypePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  std::vector<std::pair<std::string, std::string>> binders;
  return type_equal_rec(a, b, binders);
}

bool type_closed(const TypePtr& t) {
  switch (t->tag) {
    case Type::Tag::Unit:
    case Type::Tag::Nat:
      return true;
    case Type::Tag::Sum:
    case Type::Tag::Tensor:
      return type_closed(t->lhs) && type_closed(t->rhs);
    case Type::Tag::Var:
      return false;
    case Type::Tag::Mu: {
      // closed if the only free variable of the body is the binder
      std::set<std::string> fv;
      std::vector<std::string> bound{t->name};
      std::function<void(const TypePtr&)> go = [&](const TypePtr& u) {
        switch (u->tag) {
          case Type::Tag::Var:
            if (std::find(bound.begin(), bound.end(), u->name) == bound.end()) fv.insert(u->name);
            break;
          case Type::Tag::Sum:
          case Type::Tag::Tensor:
            go(u->lhs);
            go(u->rhs);
            break;
          case Type::Tag::Mu:
            bound.push_back(u->name);
            go(u->body);
            bound.pop_back();
            break;
          default:
            break;
        }
      };
      go(t->body);
      return fv.empty();
    }
  }
  return false;
}

TypePtr type_subst(const TypePtr& body, const std::string& var, const TypePtr& repl) {
  switch (body->tag) {
    case Type::Tag::Unit:
    case Type::Tag::Nat:
      return body;
    case Type::Tag::Sum:
      return ty_sum(type_subst(body->lhs, var, repl), type_subst(body->rhs, var, repl));
    case Type::Tag::Tensor:
      return ty_tensor(type_subst(body->lhs, var, repl), type_subst(body->rhs, var, repl));
    case Type::Tag::Var:
      return body->name == var ? repl : body;
    case Type::Tag::Mu:
      if (body->name == var) return body;  // shadowed
      return ty_mu(body->name, type_subst(body->body, var, repl));
  }
  return body;
}

TypePtr mu_unfold(const TypePtr& mu) {
  if (mu->tag != Type::Tag::Mu) throw Error(errc::internal, "mu_unfold on non-mu type");
  return type_subst(mu->body, mu->name, mu);
}

std::string show_type(const TypePtr& t) {
  switch (t->tag) {
    case Type::Tag::Unit:
      return "I";
    case Type::Tag::Nat:
      return "Nat";
    case Type::Tag::Sum:
      return "(" + show_type(t->lhs) + " + " + show_type(t->rhs) + ")";
    case Type::Tag::Tensor:
      return "(" + show_type(t->lhs) + " * " + show_type(t->rhs) + ")";
    case Type::Tag::Var:
      return t->name;
    case Type::Tag::Mu: {
      if (type_equal(t, ty_nat_rec())) return "nat";
      if (t->body->tag == Type::Tag::Sum && t->body->lhs->tag == Type::Tag::Unit &&
          t->body->rhs->tag == Type::Tag::Tensor && t->body->rhs->rhs->tag == Type::Tag::Var &&
          t->body->rhs->rhs->name == t->name && type_closed(t->body->rhs->lhs))
        return "[" + show_type(t->body->rhs->lhs) + "]";
      return "(mu " + t->name + " . " + show_type(t->body) + ")";
    }
  }
  return "?";
}

IsoTypePtr it_ground(TypePtr a, TypePtr b) {
  return std::make_shared<IsoType>(IsoType{IsoType::Tag::Ground, std::move(a), std::move(b), nullptr, nullptr});
}
IsoTypePtr it_arrow(IsoTypePtr f, IsoTypePtr t) {
  return std::make_shared<IsoType>(IsoType{IsoType::Tag::Arrow, nullptr, nullptr, std::move(f), std::move(t)});
}
bool isotype_equal(const IsoTypePtr& a, const IsoTypePtr& b) {
  if (a == b) return true;
  if (!a || !b || a->tag != b->tag) return false;
  if (a->tag == IsoType::Tag::Ground)
    return type_equal(a->src, b->src) && type_equal(a->dst, b->dst);
  return isotype_equal(a->from, b->from) && isotype_equal(a->to, b->to);
}
IsoTypePtr isotype_invert(const IsoTypePtr& t) {
  if (t->tag == IsoType::Tag::Ground) return it_ground(t->dst, t->src);
  return it_arrow(isotype_invert(t->from), isotype_invert(t->to));
}
std::string show_isotype(const IsoTypePtr& t) {
  if (t->tag == IsoType::Tag::Ground)
    return show_type(t->src) + " <-> " + show_type(t->dst);
  return "(" + show_isotype(t->from) + ") -> (" + show_isotype(t->to) + ")";
}

// ---------------------------------------------------------------------------
// term constructors

static TermPtr mk_term(Term t) { return std::make_shared<Term>(std::move(t)); }

TermPtr mk_unit() {
  static TermPtr u = mk_term({Term::Tag::Unit, "", nullptr, nullptr, nullptr, {}, {}});
  return u;
}
TermPtr mk_var(std::string name) {
  return mk_term({Term::Tag::Var, std::move(name), nullptr, nullptr, nullptr, {}, {}});
}
TermPtr mk_inl(TermPtr t) {
  return mk_term({Term::Tag::InL, "", std::move(t), nullptr, nullptr, {}, {}});
}
TermPtr mk_inr(TermPtr t) {
  return mk_term({Term::Tag::InR, "", std::move(t), nullptr, nullptr, {}, {}});
}
TermPtr mk_pair(TermPtr a, TermPtr b) {
  return mk_term({Term::Tag::Pair, "", std::move(a), std::move(b), nullptr, {}, {}});
}
TermPtr mk_zero() {
  static TermPtr z = mk_term({Term::Tag::Zero, "", nullptr, nullptr, nullptr, {}, {}});
  return z;
}
TermPtr mk_suc(TermPtr t) {
  return mk_term({Term::Tag::Suc, "", std::move(t), nullptr, nullptr, {}, {}});
}
TermPtr mk_fold(TermPtr t) {
  return mk_term({Term::Tag::Fold, "", std::move(t), nullptr, nullptr, {}, {}});
}
TermPtr mk_app(IsoPtr iso, TermPtr arg) {
  return mk_term({Term::Tag::App, "", std::move(arg), nullptr, std::move(iso), {}, {}});
}
TermPtr mk_let(std::vector<std::string> pattern, TermPtr bound, TermPtr body) {
  return mk_term({Term::Tag::Let, "", std::move(bound), std::move(body), nullptr, std::move(pattern), {}});
}
TermPtr mk_sum(std::vector<std::pair<Complex, TermPtr>> parts) {
  return mk_term({Term::Tag::Sum, "", nullptr, nullptr, nullptr, {}, std::move(parts)});
}
TermPtr with_pos(TermPtr t, int line, int col) {
  Term copy = *t;
  copy.line = line;
  copy.col = col;
  return mk_term(std::move(copy));
}

TermPtr mk_nat_rec(unsigned n) {
  TermPtr t = mk_fold(mk_inl(mk_unit()));
  for (unsigned i = 0; i < n; i++) t = mk_fold(mk_inr(t));
  return t;
}
TermPtr mk_nat_q(unsigned n) {
  TermPtr t = mk_zero();
  for (unsigned i = 0; i < n; i++) t = mk_suc(t);
  return t;
}
TermPtr mk_nil() { return mk_fold(mk_inl(mk_unit())); }
TermPtr mk_cons(TermPtr h, TermPtr t) { return mk_fold(mk_inr(mk_pair(std::move(h), std::move(t)))); }
TermPtr mk_list(const std::vector<TermPtr>& xs) {
  TermPtr t = mk_nil();
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) t = mk_cons(*it, t);
  return t;
}
TermPtr mk_tt() { return mk_inl(mk_unit()); }
TermPtr mk_ff() { return mk_inr(mk_unit()); }

// ---------------------------------------------------------------------------
// iso constructors

static IsoPtr mk_iso(Iso i) { return std::make_shared<Iso>(std::move(i)); }

IsoPtr iso_clauses(std::vector<std::pair<TermPtr, TermPtr>> clauses, IsoTypePtr ann) {
  Iso i{};
  i.tag = Iso::Tag::Clauses;
  i.clauses = std::move(clauses);
  i.ann = std::move(ann);
  return mk_iso(std::move(i));
}
static IsoPtr mk_iso2(Iso::Tag tag, IsoPtr a, IsoPtr b) {
  Iso i{};
  i.tag = tag;
  i.a = std::move(a);
  i.b = std::move(b);
  return mk_iso(std::move(i));
}
IsoPtr iso_tensor(IsoPtr a, IsoPtr b) { return mk_iso2(Iso::Tag::Tensor, std::move(a), std::move(b)); }
IsoPtr iso_sum(IsoPtr a, IsoPtr b) { return mk_iso2(Iso::Tag::SumC, std::move(a), std::move(b)); }
IsoPtr iso_compose(IsoPtr first, IsoPtr then) {
  return mk_iso2(Iso::Tag::Compose, std::move(first), std::move(then));
}
IsoPtr iso_inverse(IsoPtr a) { return mk_iso2(Iso::Tag::Inverse, std::move(a), nullptr); }
IsoPtr iso_ctrl(IsoPtr a) { return mk_iso2(Iso::Tag::Ctrl, std::move(a), nullptr); }
IsoPtr iso_lambda(std::string var, IsoTypePtr param, IsoPtr body) {
  Iso i{};
  i.tag = Iso::Tag::Lambda;
  i.name = std::move(var);
  i.param_ann = std::move(param);
  i.a = std::move(body);
  return mk_iso(std::move(i));
}
IsoPtr iso_var(std::string name) {
  Iso i{};
  i.tag = Iso::Tag::Var;
  i.name = std::move(name);
  return mk_iso(std::move(i));
}
IsoPtr iso_app(IsoPtr fn, IsoPtr arg) { return mk_iso2(Iso::Tag::App, std::move(fn), std::move(arg)); }
IsoPtr iso_fix(std::string var, IsoPtr body, IsoTypePtr ann) {
  Iso i{};
  i.tag = Iso::Tag::Fix;
  i.name = std::move(var);
  i.a = std::move(body);
  i.ann = std::move(ann);
  return mk_iso(std::move(i));
}
IsoPtr iso_nfix(int n, std::string var, IsoPtr body, IsoTypePtr ann) {
  Iso i{};
  i.tag = Iso::Tag::NFix;
  i.n = n;
  i.name = std::move(var);
  i.a = std::move(body);
  i.ann = std::move(ann);
  return mk_iso(std::move(i));
}
IsoPtr make_omega(const IsoTypePtr& t) {
  if (t->tag == IsoType::Tag::Ground) return iso_clauses({}, t);
  return iso_lambda("_w", t->from, make_omega(t->to));
}

// ---------------------------------------------------------------------------
// basis values & canonical order

bool is_basis_value(const TermPtr& t) {
  switch (t->tag) {
    case Term::Tag::Unit:
    case Term::Tag::Var:
    case Term::Tag::Zero:
      return true;
    case Term::Tag::Suc:
    case Term::Tag::InL:
    case Term::Tag::InR:
    case Term::Tag::Fold:
      return is_basis_value(t->a);
    case Term::Tag::Pair:
      return is_basis_value(t->a) && is_basis_value(t->b);
    default:
      return false;
  }
}

bool is_classical_value(const TermPtr& t) {
  switch (t->tag) {
    case Term::Tag::Unit:
    case Term::Tag::Var:
      return true;
    case Term::Tag::InL:
    case Term::Tag::InR:
    case Term::Tag::Fold:
      return is_classical_value(t->a);
    case Term::Tag::Pair:
      return is_classical_value(t->a) && is_classical_value(t->b);
    default:
      return false;
  }
}

static int ctor_rank(Term::Tag t) {
  switch (t) {
    case Term::Tag::Unit: return 0;
    case Term::Tag::Var: return 1;
    case Term::Tag::Zero: return 2;
    case Term::Tag::Suc: return 3;
    case Term::Tag::InL: return 4;
    case Term::Tag::InR: return 5;
    case Term::Tag::Pair: return 6;
    case Term::Tag::Fold: return 7;
    default: return -1;
  }
}

int compare_basis(const TermPtr& a, const TermPtr& b) {
  int ra = ctor_rank(a->tag), rb = ctor_rank(b->tag);
  if (ra < 0 || rb < 0) throw Error(errc::malformed, "compare_basis on non-basis value");
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (a->tag) {
    case Term::Tag::Unit:
    case Term::Tag::Zero:
      return 0;
    case Term::Tag::Var:
      return a->name < b->name ? -1 : (a->name == b->name ? 0 : 1);
    case Term::Tag::Suc:
    case Term::Tag::InL:
    case Term::Tag::InR:
    case Term::Tag::Fold:
      return compare_basis(a->a, b->a);
    case Term::Tag::Pair: {
      int c = compare_basis(a->a, b->a);
      return c != 0 ? c : compare_basis(a->b, b->b);
    }
    default:
      return 0;
  }
}

// ---------------------------------------------------------------------------
// equality

bool term_equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case Term::Tag::Unit:
    case Term::Tag::Zero:
      return true;
    case Term::Tag::Var:
      return a->name == b->name;
    case Term::Tag::InL:
    case Term::Tag::InR:
    case Term::Tag::Suc:
    case Term::Tag::Fold:
      return term_equal(a->a, b->a);
    case Term::Tag::Pair:
      return term_equal(a->a, b->a) && term_equal(a->b, b->b);
    case Term::Tag::App:
      return iso_equal(a->iso, b->iso) && term_equal(a->a, b->a);
    case Term::Tag::Let:
      return a->pattern == b->pattern && term_equal(a->a, b->a) && term_equal(a->b, b->b);
    case Term::Tag::Sum: {
      if (a->parts.size() != b->parts.size()) return false;
      for (size_t i = 0; i < a->parts.size(); i++)
        if (!approx_equal(a->parts[i].first, b->parts[i].first) ||
            !term_equal(a->parts[i].second, b->parts[i].second))
          return false;
      return true;
    }
  }
  return false;
}

bool iso_equal(const IsoPtr& a, const IsoPtr& b) {
  if (a == b) return true;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case Iso::Tag::Clauses: {
      if (a->clauses.size() != b->clauses.size()) return false;
      for (size_t i = 0; i < a->clauses.size(); i++)
        if (!term_equal(a->clauses[i].first, b->clauses[i].first) ||
            !term_equal(a->clauses[i].second, b->clauses[i].second))
          return false;
      return true;
    }
    case Iso::Tag::Var:
      return a->name == b->name;
    case Iso::Tag::Inverse:
    case Iso::Tag::Ctrl:
      return iso_equal(a->a, b->a);
    case Iso::Tag::Tensor:
    case Iso::Tag::SumC:
    case Iso::Tag::Compose:
    case Iso::Tag::App:
      return iso_equal(a->a, b->a) && iso_equal(a->b, b->b);
    case Iso::Tag::Lambda:
    case Iso::Tag::Fix:
      return a->name == b->name && iso_equal(a->a, b->a);
    case Iso::Tag::NFix:
      return a->n == b->n && a->name == b->name && iso_equal(a->a, b->a);
  }
  return false;
}

// alpha-equivalence ---------------------------------------------------------

namespace {
struct AlphaEnv {
  std::vector<std::pair<std::string, std::string>> terms;  // Let-bound names
  std::vector<std::pair<std::string, std::string>> isos;   // fix/lambda binders

  bool term_names_match(const std::string& x, const std::string& y) const {
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
      if (it->first == x || it->second == y) return it->first == x && it->second == y;
    }
    return x == y;  // both free (pattern variables)
  }
  bool iso_names_match(const std::string& x, const std::string& y) const {
    for (auto it = isos.rbegin(); it != isos.rend(); ++it) {
      if (it->first == x || it->second == y) return it->first == x && it->second == y;
    }
    return x == y;
  }
};

bool alpha_term(const TermPtr& a, const TermPtr& b, AlphaEnv& env);

bool alpha_iso(const IsoPtr& a, const IsoPtr& b, AlphaEnv& env) {
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case Iso::Tag::Clauses: {
      if (a->clauses.size() != b->clauses.size()) return false;
      for (size_t i = 0; i < a->clauses.size(); i++) {
        // clause pattern variables are clause-local: match both sides with the
        // pattern names treated as free (they must agree literally on the lhs,
        // up to nothing; to keep the relation usable we require lhs literal
        // match up to alpha of enclosing binders and the same for rhs).
        if (!alpha_term(a->clauses[i].first, b->clauses[i].first, env)) return false;
        if (!alpha_term(a->clauses[i].second, b->clauses[i].second, env)) return false;
      }
      if ((a->ann == nullptr) != (b->ann == nullptr)) return false;
      if (a->ann && !isotype_equal(a->ann, b->ann)) return false;
      return true;
    }
    case Iso::Tag::Var:
      return env.iso_names_match(a->name, b->name);
    case Iso::Tag::Inverse:
    case Iso::Tag::Ctrl:
      return alpha_iso(a->a, b->a, env);
    case Iso::Tag::Tensor:
    case Iso::Tag::SumC:
    case Iso::Tag::Compose:
    case Iso::Tag::App:
      return alpha_iso(a->a, b->a, env) && alpha_iso(a->b, b->b, env);
    case Iso::Tag::Lambda:
    case Iso::Tag::Fix:
    case Iso::Tag::NFix: {
      if (a->tag == Iso::Tag::NFix && a->n != b->n) return false;
      env.isos.emplace_back(a->name, b->name);
      bool r = alpha_iso(a->a, b->a, env);
      env.isos.pop_back();
      return r;
    }
  }
  return false;
}

bool alpha_term(const TermPtr& a, const TermPtr& b, AlphaEnv& env) {
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case Term::Tag::Unit:
    case Term::Tag::Zero:
      return true;
    case Term::Tag::Var:
      return env.term_names_match(a->name, b->name);
    case Term::Tag::InL:
    case Term::Tag::InR:
    case Term::Tag::Suc:
    case Term::Tag::Fold:
      return alpha_term(a->a, b->a, env);
    case Term::Tag::Pair:
      return alpha_term(a->a, b->a, env) && alpha_term(a->b, b->b, env);
    case Term::Tag::App:
      return alpha_iso(a->iso, b->iso, env) && alpha_term(a->a, b->a, env);
    case Term::Tag::Let: {
      if (a->pattern.size() != b->pattern.size()) return false;
      if (!alpha_term(a->a, b->a, env)) return false;
      for (size_t i = 0; i < a->pattern.size(); i++)
        env.terms.emplace_back(a->pattern[i], b->pattern[i]);
      bool r = alpha_term(a->b, b->b, env);
      for (size_t i = 0; i < a->pattern.size(); i++) env.terms.pop_back();
      return r;
    }
    case Term::Tag::Sum: {
      if (a->parts.size() != b->parts.size()) return false;
      for (size_t i = 0; i < a->parts.size(); i++)
        if (!approx_equal(a->parts[i].first, b->parts[i].first) ||
            !alpha_term(a->parts[i].second, b->parts[i].second, env))
          return false;
      return true;
    }
  }
  return false;
}
}  // namespace

bool term_alpha_equal(const TermPtr& a, const TermPtr& b) {
  AlphaEnv env;
  return alpha_term(a, b, env);
}
bool iso_alpha_equal(const IsoPtr& a, const IsoPtr& b) {
  AlphaEnv env;
  return alpha_iso(a, b, env);
}

// ---------------------------------------------------------------------------
// canonical sums

static void flatten_into(const Complex& scale, const TermPtr& t,
                         std::vector<std::pair<Complex, TermPtr>>& out) {
  if (t->tag == Term::Tag::Sum) {
    for (const auto& [c, u] : t->parts) flatten_into(scale * c, u, out);
  } else {
    out.emplace_back(scale, t);
  }
}

TermPtr canonicalize_sum(const std::vector<std::pair<Complex, TermPtr>>& parts) {
  std::vector<std::pair<Complex, TermPtr>> flat;
  for (const auto& [c, t] : parts) flatten_into(c, t, flat);
  for (const auto& [c, t] : flat) {
    (void)c;
    if (!is_basis_value(t))
      throw Error(errc::malformed, "canonicalize_sum: component is not a basis value");
  }
  std::sort(flat.begin(), flat.end(),
            [](const auto& x, const auto& y) { return compare_basis(x.second, y.second) < 0; });
  std::vector<std::pair<Complex, TermPtr>> merged;
  for (const auto& [c, t] : flat) {
    if (!merged.empty() && compare_basis(merged.back().second, t) == 0)
      merged.back().first += c;
    else
      merged.emplace_back(c, t);
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const auto& p) { return approx_zero(p.first); }),
               merged.end());
  if (merged.size() == 1 && approx_equal(merged[0].first, Complex(1.0, 0.0)))
    return merged[0].second;
  return mk_sum(std::move(merged));
}

std::vector<std::pair<Complex, TermPtr>> combination_of_expression(const TermPtr& e) {
  using Parts = std::vector<std::pair<Complex, TermPtr>>;
  switch (e->tag) {
    case Term::Tag::Unit:
    case Term::Tag::Var:
    case Term::Tag::Zero:
      return {{Complex(1, 0), e}};
    case Term::Tag::InL:
    case Term::Tag::InR:
    case Term::Tag::Suc:
    case Term::Tag::Fold: {
      Parts inner = combination_of_expression(e->a);
      Parts out;
      for (auto& [c, t] : inner) {
        TermPtr w = e->tag == Term::Tag::InL   ? mk_inl(t)
                    : e->tag == Term::Tag::InR ? mk_inr(t)
                    : e->tag == Term::Tag::Suc ? mk_suc(t)
                                               : mk_fold(t);
        out.emplace_back(c, w);
      }
      return out;
    }
    case Term::Tag::Pair: {
      Parts l = combination_of_expression(e->a);
      Parts r = combination_of_expression(e->b);
      Parts out;
      for (auto& [cl, tl] : l)
        for (auto& [cr, tr] : r) out.emplace_back(cl * cr, mk_pair(tl, tr));
      return out;
    }
    case Term::Tag::Sum: {
      Parts out;
      for (auto& [c, t] : e->parts)
        for (auto& [ci, ti] : combination_of_expression(t)) out.emplace_back(c * ci, ti);
      return out;
    }
    default:
      throw Error(errc::malformed, "combination_of_expression: App/Let not allowed");
  }
}

std::set<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> out;
  std::function<void(const TermPtr&, std::vector<std::string>&)> go =
      [&](const TermPtr& u, std::vector<std::string>& bound) {
        switch (u->tag) {
          case Term::Tag::Var:
            if (std::find(bound.begin(), bound.end(), u->name) == bound.end()) out.insert(u->name);
            break;
          case Term::Tag::InL:
          case Term::Tag::InR:
          case Term::Tag::Suc:
          case Term::Tag::Fold:
          case Term::Tag::App:
            go(u->a, bound);
            break;
          case Term::Tag::Pair:
            go(u->a, bound);
            go(u->b, bound);
            break;
          case Term::Tag::Let: {
            go(u->a, bound);
            size_t n = bound.size();
            for (auto& x : u->pattern) bound.push_back(x);
            go(u->b, bound);
            bound.resize(n);
            break;
          }
          case Term::Tag::Sum:
            for (auto& [c, v] : u->parts) {
              (void)c;
              go(v, bound);
            }
            break;
          default:
            break;
        }
      };
  std::vector<std::string> bound;
  go(t, bound);
  return out;
}

static TermPtr subst_rec(const Valuation& sigma, const TermPtr& t,
                         std::vector<std::string>& bound) {
  switch (t->tag) {
    case Term::Tag::Unit:
    case Term::Tag::Zero:
      return t;
    case Term::Tag::Var: {
      if (std::find(bound.begin(), bound.end(), t->name) != bound.end()) return t;
      auto it = sigma.find(t->name);
      if (it == sigma.end())
        throw Error(errc::unbound_var, "substitution: no binding for " + t->name);
      return it->second;
    }
    case Term::Tag::InL:
      return mk_inl(subst_rec(sigma, t->a, bound));
    case Term::Tag::InR:
      return mk_inr(subst_rec(sigma, t->a, bound));
    case Term::Tag::Suc:
      return mk_suc(subst_rec(sigma, t->a, bound));
    case Term::Tag::Fold:
      return mk_fold(subst_rec(sigma, t->a, bound));
    case Term::Tag::Pair:
      return mk_pair(subst_rec(sigma, t->a, bound), subst_rec(sigma, t->b, bound));
    case Term::Tag::App:
      return mk_app(t->iso, subst_rec(sigma, t->a, bound));
    case Term::Tag::Let: {
      TermPtr b1 = subst_rec(sigma, t->a, bound);
      size_t n = bound.size();
      for (auto& x : t->pattern) bound.push_back(x);
      TermPtr b2 = subst_rec(sigma, t->b, bound);
      bound.resize(n);
      return mk_let(t->pattern, b1, b2);
    }
    case Term::Tag::Sum: {
      std::vector<std::pair<Complex, TermPtr>> parts;
      parts.reserve(t->parts.size());
      for (auto& [c, u] : t->parts) parts.emplace_back(c, subst_rec(sigma, u, bound));
      return mk_sum(std::move(parts));
    }
  }
  return t;
}

TermPtr substitute(const Valuation& sigma, const TermPtr& t) {
  std::vector<std::string> bound;
  return subst_rec(sigma, t, bound);
}

size_t term_size(const TermPtr& t) {
  switch (t->tag) {
    case Term::Tag::Unit:
    case Term::Tag::Var:
    case Term::Tag::Zero:
      return 1;
    case Term::Tag::InL:
    case Term::Tag::InR:
    case Term::Tag::Suc:
    case Term::Tag::Fold:
    case Term::Tag::App:
      return 1 + term_size(t->a);
    case Term::Tag::Pair:
      return 1 + term_size(t->a) + term_size(t->b);
    case Term::Tag::Let:
      return 1 + term_size(t->a) + term_size(t->b);
    case Term::Tag::Sum: {
      size_t s = 1;
      for (auto& [c, u] : t->parts) {
        (void)c;
        s += term_size(u);
      }
      return s;
    }
  }
  return 1;
}

}  // namespace revq
