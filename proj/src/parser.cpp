#include "revq/parser.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace revq {

const Decl* SourceProgram::find(const std::string& name) const {
  for (const auto& d : decls)
    if (d.name == name) return &d;
  return nullptr;
}

const Decl* SourceProgram::pick_iso(const std::string& name) const {
  if (!name.empty()) {
    const Decl* d = find(name);
    return (d && d->is_iso) ? d : nullptr;
  }
  for (auto it = decls.rbegin(); it != decls.rend(); ++it)
    if (it->is_iso) return &*it;
  return nullptr;
}

std::optional<TermPtr> SourceProgram::entry() const {
  const Decl* d = find("main");
  if (d && !d->is_iso) return d->term;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok {
  Ident, UIdent, Int, Float, Star, LParen, RParen, LBrace, RBrace, LBrack, RBrack,
  Plus, Minus, Comma, Pipe, Harpoon, Arrow, DColon, Dot, Semi, Eq, Colon,
  TensorOp, SumOp, ConsOp, Backslash, ImagLit, Eof
};

struct Token {
  Tok kind;
  std::string text;
  double num = 0;
  int line = 1, col = 1;
};

struct Lexer {
  const std::string& src;
  size_t pos = 0;
  int line = 1, col = 1;
  std::vector<Token> toks;

  explicit Lexer(const std::string& s) : src(s) {}

  [[noreturn]] void fail(const std::string& msg) {
    throw Error(errc::lexical, msg, line, col);
  }

  char peek(size_t off = 0) const { return pos + off < src.size() ? src[pos + off] : '\0'; }
  char get() {
    char c = src[pos++];
    if (c == '\n') {
      line++;
      col = 1;
    } else {
      col++;
    }
    return c;
  }

  void push(Tok k, std::string text, int l, int c, double num = 0) {
    toks.push_back({k, std::move(text), num, l, c});
  }

  void run() {
    while (pos < src.size()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        get();
        continue;
      }
      if (c == '-' && peek(1) == '-') {
        while (pos < src.size() && peek() != '\n') get();
        continue;
      }
      int l = line, cl = col;
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::string n;
        bool has_dot = false, has_exp = false;
        while (pos < src.size()) {
          char d = peek();
          if (std::isdigit(static_cast<unsigned char>(d))) {
            n += get();
          } else if (d == '.' && !has_dot && !has_exp &&
                     std::isdigit(static_cast<unsigned char>(peek(1)))) {
            has_dot = true;
            n += get();
          } else if ((d == 'e' || d == 'E') && !has_exp &&
                     (std::isdigit(static_cast<unsigned char>(peek(1))) ||
                      ((peek(1) == '-' || peek(1) == '+') &&
                       std::isdigit(static_cast<unsigned char>(peek(2)))))) {
            has_exp = true;
            n += get();
            if (peek() == '-' || peek() == '+') n += get();
          } else {
            break;
          }
        }
        if (peek() == 'i') {
          get();
          push(Tok::ImagLit, n, l, cl, std::atof(n.c_str()));
        } else if (has_dot || has_exp) {
          push(Tok::Float, n, l, cl, std::atof(n.c_str()));
        } else {
          push(Tok::Int, n, l, cl, std::atof(n.c_str()));
        }
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string id;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                peek() == '\''))
          id += get();
        bool upper = std::isupper(static_cast<unsigned char>(id[0]));
        push(upper ? Tok::UIdent : Tok::Ident, id, l, cl);
        continue;
      }
      switch (c) {
        case '*':
          get();
          push(Tok::Star, "*", l, cl);
          break;
        case '(':
          get();
          push(Tok::LParen, "(", l, cl);
          break;
        case ')':
          get();
          push(Tok::RParen, ")", l, cl);
          break;
        case '{':
          get();
          push(Tok::LBrace, "{", l, cl);
          break;
        case '}':
          get();
          push(Tok::RBrace, "}", l, cl);
          break;
        case '[':
          get();
          push(Tok::LBrack, "[", l, cl);
          break;
        case ']':
          get();
          push(Tok::RBrack, "]", l, cl);
          break;
        case '+':
          get();
          push(Tok::Plus, "+", l, cl);
          break;
        case ',':
          get();
          push(Tok::Comma, ",", l, cl);
          break;
        case '|':
          get();
          push(Tok::Pipe, "|", l, cl);
          break;
        case '.':
          get();
          push(Tok::Dot, ".", l, cl);
          break;
        case ';':
          get();
          push(Tok::Semi, ";", l, cl);
          break;
        case '=':
          get();
          push(Tok::Eq, "=", l, cl);
          break;
        case '\\':
          get();
          push(Tok::Backslash, "\\", l, cl);
          break;
        case '-': {
          get();
          if (peek() == '>') {
            get();
            push(Tok::Arrow, "->", l, cl);
          } else {
            push(Tok::Minus, "-", l, cl);
          }
          break;
        }
        case ':': {
          get();
          if (peek() == ':') {
            get();
            push(Tok::DColon, "::", l, cl);
          } else {
            push(Tok::Colon, ":", l, cl);
          }
          break;
        }
        case '<': {
          get();
          if (peek() == '-' && peek(1) == '>') {
            get();
            get();
            push(Tok::Harpoon, "<->", l, cl);
          } else if (peek() == '*' && peek(1) == '>') {
            get();
            get();
            push(Tok::TensorOp, "<*>", l, cl);
          } else if (peek() == '+' && peek(1) == '>') {
            get();
            get();
            push(Tok::SumOp, "<+>", l, cl);
          } else {
            fail("unexpected '<'");
          }
          break;
        }
        default:
          fail(std::string("unexpected character '") + c + "'");
      }
      // cons operator is two colons followed by neither '(' annotation nor
      // identifier start? No: '::' is shared between cons and annotations.
      // Disambiguated in the parser by context.
    }
    push(Tok::Eof, "", line, col);
  }
};

// ---------------------------------------------------------------------------
// Parser

bool is_keyword(const std::string& s) {
  static const std::set<std::string> kw = {"inl", "inr", "zero", "suc", "fold", "let", "in",
                                           "fix", "nfix", "ctrl", "inv", "iso", "def", "mu",
                                           "dialect", "quantum", "classical", "tt", "ff",
                                           "sqrt2inv", "nat", "main"};
  return kw.count(s) > 0;
}

struct Parser {
  std::vector<Token> toks;
  size_t pos = 0;
  Dialect dialect;
  // scope: names visible as isos (declarations + binders), innermost last
  std::vector<std::pair<std::string, IsoPtr>> iso_decls;  // resolved decl bodies
  std::vector<std::string> iso_binders;

  Parser(std::vector<Token> t, Dialect d) : toks(std::move(t)), dialect(d) {}

  const Token& cur() const { return toks[pos]; }
  const Token& ahead(size_t k = 1) const { return toks[std::min(pos + k, toks.size() - 1)]; }
  Token eat() { return toks[pos++]; }

  [[noreturn]] void fail(const std::string& msg, const Token& t) {
    throw Error(errc::syntax, msg, t.line, t.col);
  }
  Token expect(Tok k, const std::string& what) {
    if (cur().kind != k) fail("expected " + what + ", found '" + cur().text + "'", cur());
    return eat();
  }
  bool at_ident(const char* s) const { return cur().kind == Tok::Ident && cur().text == s; }
  bool accept_ident(const char* s) {
    if (at_ident(s)) {
      eat();
      return true;
    }
    return false;
  }

  bool is_iso_name(const std::string& n) const {
    for (auto it = iso_binders.rbegin(); it != iso_binders.rend(); ++it)
      if (*it == n) return true;
    for (auto& [k, v] : iso_decls)
      if (k == n) return true;
    return false;
  }
  bool is_iso_binder(const std::string& n) const {
    for (auto it = iso_binders.rbegin(); it != iso_binders.rend(); ++it)
      if (*it == n) return true;
    return false;
  }
  IsoPtr lookup_decl(const std::string& n) const {
    for (auto it = iso_decls.rbegin(); it != iso_decls.rend(); ++it)
      if (it->first == n) return it->second;
    return nullptr;
  }

  // ---- types ----
  TypePtr parse_type() {
    TypePtr l = parse_type_tensor();
    if (cur().kind == Tok::Plus) {
      eat();
      return ty_sum(l, parse_type());
    }
    return l;
  }
  TypePtr parse_type_tensor() {
    TypePtr l = parse_type_atom();
    if (cur().kind == Tok::Star) {
      eat();
      return ty_tensor(l, parse_type_tensor());
    }
    return l;
  }
  TypePtr parse_type_atom() {
    const Token& t = cur();
    if (t.kind == Tok::UIdent) {
      if (t.text == "I") {
        eat();
        return ty_unit();
      }
      if (t.text == "Nat") {
        if (dialect != Dialect::Quantum) fail("Nat is quantum-only; use nat", t);
        eat();
        return ty_nat();
      }
      eat();
      return ty_var(t.text);
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "nat") {
        if (dialect != Dialect::Classical) fail("nat is classical-only; use Nat", t);
        eat();
        return ty_nat_rec();
      }
      if (t.text == "mu") {
        eat();
        Token v = expect(Tok::UIdent, "type variable");
        expect(Tok::Dot, "'.'");
        return ty_mu(v.text, parse_type());
      }
    }
    if (t.kind == Tok::LBrack) {
      eat();
      TypePtr e = parse_type();
      expect(Tok::RBrack, "']'");
      if (dialect != Dialect::Classical) fail("list types are classical-only", t);
      return ty_list(e);
    }
    if (t.kind == Tok::LParen) {
      eat();
      TypePtr inner = parse_type();
      expect(Tok::RParen, "')'");
      return inner;
    }
    fail("expected a type", t);
  }

  IsoTypePtr parse_isotype() {
    // ground := type <-> type ; arrow := iso -> iso (right assoc)
    IsoTypePtr l = parse_isotype_atom();
    if (cur().kind == Tok::Arrow) {
      eat();
      return it_arrow(l, parse_isotype());
    }
    return l;
  }
  IsoTypePtr parse_isotype_atom() {
    if (cur().kind == Tok::LParen) {
      // could be a parenthesized isotype or a parenthesized ground type;
      // try isotype first by scanning for "<->"/"->" at depth 0 after ')'.
      size_t save = pos;
      eat();
      try {
        IsoTypePtr inner = parse_isotype();
        expect(Tok::RParen, "')'");
        if (cur().kind == Tok::Harpoon) fail("unexpected", cur());
        return inner;
      } catch (const Error&) {
        pos = save;
      }
    }
    TypePtr a = parse_type();
    expect(Tok::Harpoon, "'<->'");
    TypePtr b = parse_type();
    return it_ground(a, b);
  }

  // ---- scalars ----
  bool at_scalar_start() const {
    // a scalar literal followed by '*' that multiplies a term
    if (at_ident("sqrt2inv")) return true;
    if (cur().kind == Tok::Float || cur().kind == Tok::ImagLit) return cur().kind != Tok::Int;
    if (cur().kind == Tok::Int) {
      // integer literal is a numeral unless followed by '*'
      return ahead().kind == Tok::Star;
    }
    if (cur().kind == Tok::LParen) {
      // (a + bi) or (a - bi) complex literal
      size_t k = 1;
      if (ahead(k).kind == Tok::Minus) ++k;
      if (ahead(k).kind != Tok::Float && ahead(k).kind != Tok::Int && ahead(k).kind != Tok::ImagLit)
        return false;
      ++k;
      if (ahead(k).kind == Tok::RParen)
        return ahead(k - 1).kind == Tok::ImagLit && ahead(k + 1).kind == Tok::Star;
      if (ahead(k).kind != Tok::Plus && ahead(k).kind != Tok::Minus) return false;
      ++k;
      if (ahead(k).kind != Tok::ImagLit) return false;
      ++k;
      return ahead(k).kind == Tok::RParen && ahead(k + 1).kind == Tok::Star;
    }
    return false;
  }

  Complex parse_scalar() {
    if (accept_ident("sqrt2inv")) return Complex(SQRT2_INV, 0);
    if (cur().kind == Tok::LParen) {
      eat();
      double sign = 1;
      if (cur().kind == Tok::Minus) {
        eat();
        sign = -1;
      }
      Token first = eat();
      if (first.kind == Tok::ImagLit) {
        expect(Tok::RParen, "')'");
        return Complex(0, sign * first.num);
      }
      if (first.kind != Tok::Float && first.kind != Tok::Int) fail("expected number", first);
      double re = sign * first.num;
      if (cur().kind == Tok::RParen) {
        eat();
        return Complex(re, 0);
      }
      double isign = cur().kind == Tok::Minus ? -1 : 1;
      if (cur().kind != Tok::Plus && cur().kind != Tok::Minus) fail("expected '+'/'-'", cur());
      eat();
      Token im = expect(Tok::ImagLit, "imaginary literal");
      expect(Tok::RParen, "')'");
      return Complex(re, isign * im.num);
    }
    Token t = eat();
    if (t.kind == Tok::ImagLit) return Complex(0, t.num);
    if (t.kind == Tok::Float || t.kind == Tok::Int) return Complex(t.num, 0);
    fail("expected scalar", t);
  }

  // ---- terms ----
  TermPtr parse_term() {
    // linear combination: signed (+|- signed)*
    int l = cur().line, c = cur().col;
    bool neg = false;
    if (cur().kind == Tok::Minus) {
      eat();
      neg = true;
    }
    auto [coef, t] = parse_signed();
    if (neg) coef = -coef;
    bool is_sum = neg || coef != Complex(1, 0) || cur().kind == Tok::Plus ||
                  cur().kind == Tok::Minus;
    if (!is_sum) return t;
    std::vector<std::pair<Complex, TermPtr>> parts{{coef, t}};
    while (cur().kind == Tok::Plus || cur().kind == Tok::Minus) {
      bool minus = eat().kind == Tok::Minus;
      auto [c2, t2] = parse_signed();
      parts.emplace_back(minus ? -c2 : c2, t2);
    }
    if (dialect != Dialect::Quantum)
      throw Error(errc::dialect, "linear combinations are quantum-only", l, c);
    if (parts.size() == 1 && parts[0].first == Complex(1, 0)) return parts[0].second;
    return with_pos(mk_sum(std::move(parts)), l, c);
  }

  std::pair<Complex, TermPtr> parse_signed() {
    if (at_scalar_start()) {
      Complex coef = parse_scalar();
      expect(Tok::Star, "'*' after scalar");
      return {coef, parse_app_term()};
    }
    return {Complex(1, 0), parse_app_term()};
  }

  // iso application / cons / atoms
  TermPtr parse_app_term() {
    if (at_iso_atom_start()) {
      // possible iso application; in term context an iso must be applied
      size_t save = pos;
      bool ok = true;
      IsoPtr w;
      try {
        w = parse_iso_atom_chain();
      } catch (const Error&) {
        ok = false;
      }
      if (ok && at_term_atom_start()) {
        TermPtr arg = parse_app_term();
        return mk_app(w, arg);
      }
      // not an application after all: backtrack (e.g. a variable named like a decl)
      pos = save;
    }
    return parse_cons_term();
  }

  bool at_term_atom_start() const {
    switch (cur().kind) {
      case Tok::Star:
      case Tok::LParen:
      case Tok::LBrack:
      case Tok::Int:
        return true;
      case Tok::Ident:
        if (is_keyword(cur().text))
          return cur().text == "inl" || cur().text == "inr" || cur().text == "zero" ||
                 cur().text == "suc" || cur().text == "fold" || cur().text == "let" ||
                 cur().text == "tt" || cur().text == "ff";
        return true;
      default:
        return false;
    }
  }

  TermPtr parse_cons_term() {
    TermPtr h = parse_atom_term();
    if (cur().kind == Tok::DColon) {
      // cons sugar; only valid in classical dialect
      if (dialect != Dialect::Classical) return h;  // '::' belongs to annotation elsewhere
      eat();
      TermPtr t = parse_cons_term();
      return mk_cons(h, t);
    }
    return h;
  }

  TermPtr parse_atom_term() {
    const Token& t = cur();
    int l = t.line, c = t.col;
    switch (t.kind) {
      case Tok::Star:
        eat();
        return with_pos(mk_unit(), l, c);
      case Tok::Int: {
        eat();
        unsigned n = static_cast<unsigned>(t.num);
        return with_pos(dialect == Dialect::Quantum ? mk_nat_q(n) : mk_nat_rec(n), l, c);
      }
      case Tok::LBrack: {
        eat();
        if (dialect != Dialect::Classical) fail("list literals are classical-only", t);
        std::vector<TermPtr> xs;
        if (cur().kind != Tok::RBrack) {
          xs.push_back(parse_term());
          while (cur().kind == Tok::Comma) {
            eat();
            xs.push_back(parse_term());
          }
        }
        expect(Tok::RBrack, "']'");
        return with_pos(mk_list(xs), l, c);
      }
      case Tok::LParen: {
        eat();
        TermPtr first = parse_term();
        if (cur().kind == Tok::Comma) {
          std::vector<TermPtr> xs{first};
          while (cur().kind == Tok::Comma) {
            eat();
            xs.push_back(parse_term());
          }
          expect(Tok::RParen, "')'");
          TermPtr out = xs.back();
          for (size_t i = xs.size() - 1; i-- > 0;) out = mk_pair(xs[i], out);
          return with_pos(out, l, c);
        }
        expect(Tok::RParen, "')'");
        return first;
      }
      case Tok::Ident: {
        const std::string& id = t.text;
        if (id == "inl") {
          eat();
          return with_pos(mk_inl(parse_atom_term()), l, c);
        }
        if (id == "inr") {
          eat();
          return with_pos(mk_inr(parse_atom_term()), l, c);
        }
        if (id == "suc") {
          if (dialect != Dialect::Quantum) fail("suc is quantum-only", t);
          eat();
          return with_pos(mk_suc(parse_atom_term()), l, c);
        }
        if (id == "zero") {
          if (dialect != Dialect::Quantum) fail("zero is quantum-only", t);
          eat();
          return with_pos(mk_zero(), l, c);
        }
        if (id == "fold") {
          if (dialect != Dialect::Classical) fail("fold is classical-only", t);
          eat();
          return with_pos(mk_fold(parse_atom_term()), l, c);
        }
        if (id == "tt") {
          eat();
          return with_pos(mk_tt(), l, c);
        }
        if (id == "ff") {
          eat();
          return with_pos(mk_ff(), l, c);
        }
        if (id == "let") {
          if (dialect != Dialect::Classical) fail("let is classical-only", t);
          eat();
          std::vector<std::string> names;
          if (cur().kind == Tok::LParen) {
            eat();
            names.push_back(expect(Tok::Ident, "variable").text);
            while (cur().kind == Tok::Comma) {
              eat();
              names.push_back(expect(Tok::Ident, "variable").text);
            }
            expect(Tok::RParen, "')'");
          } else {
            names.push_back(expect(Tok::Ident, "variable").text);
          }
          expect(Tok::Eq, "'='");
          TermPtr bound = parse_term();
          if (!accept_ident("in")) fail("expected 'in'", cur());
          TermPtr body = parse_term();
          return with_pos(mk_let(std::move(names), bound, body), l, c);
        }
        if (is_keyword(id)) fail("unexpected keyword '" + id + "' in term", t);
        eat();
        return with_pos(mk_var(id), l, c);
      }
      default:
        fail("expected a term", t);
    }
  }

  // ---- isos ----
  IsoPtr parse_iso() {
    IsoPtr l = parse_iso_combinator();
    while (cur().kind == Tok::Semi) {
      eat();
      IsoPtr r = parse_iso_combinator();
      if (dialect != Dialect::Quantum)
        throw Error(errc::dialect, "';' composition is quantum-only", cur().line, cur().col);
      l = iso_compose(l, r);
    }
    return l;
  }

  IsoPtr parse_iso_combinator() {
    IsoPtr l = parse_iso_prefix();
    while (cur().kind == Tok::TensorOp || cur().kind == Tok::SumOp) {
      bool tensor = eat().kind == Tok::TensorOp;
      IsoPtr r = parse_iso_prefix();
      if (dialect != Dialect::Quantum)
        throw Error(errc::dialect, "iso combinators are quantum-only", cur().line, cur().col);
      l = tensor ? iso_tensor(l, r) : iso_sum(l, r);
    }
    return l;
  }

  IsoPtr parse_iso_prefix() {
    const Token& t = cur();
    if (t.kind == Tok::Ident && t.text == "inv") {
      if (dialect != Dialect::Quantum) fail("inv is quantum-only (inversion of classical isos is a meta-operation)", t);
      eat();
      return iso_inverse(parse_iso_prefix());
    }
    if (t.kind == Tok::Ident && t.text == "ctrl") {
      if (dialect != Dialect::Quantum) fail("ctrl is quantum-only", t);
      eat();
      return iso_ctrl(parse_iso_prefix());
    }
    if (t.kind == Tok::Ident && (t.text == "fix" || t.text == "nfix")) {
      if (dialect != Dialect::Classical) fail("fix is classical-only", t);
      bool is_n = t.text == "nfix";
      eat();
      int depth = 0;
      if (is_n) depth = static_cast<int>(expect(Tok::Int, "nfix depth").num);
      Token v = expect(Tok::Ident, "iso variable");
      IsoTypePtr ann;
      if (cur().kind == Tok::DColon) {
        eat();
        expect(Tok::LParen, "'('");
        ann = parse_isotype();
        expect(Tok::RParen, "')'");
      }
      expect(Tok::Dot, "'.'");
      iso_binders.push_back(v.text);
      IsoPtr body = parse_iso();
      iso_binders.pop_back();
      if (ann && !body->ann && body->tag == Iso::Tag::Clauses) {
        Iso copy = *body;
        copy.ann = ann;
        body = std::make_shared<Iso>(std::move(copy));
      }
      return is_n ? iso_nfix(depth, v.text, body, ann) : iso_fix(v.text, body, ann);
    }
    if (t.kind == Tok::Backslash) {
      if (dialect != Dialect::Classical) fail("lambda is classical-only", t);
      eat();
      Token v = expect(Tok::Ident, "iso variable");
      expect(Tok::DColon, "'::'");
      expect(Tok::LParen, "'('");
      IsoTypePtr ann = parse_isotype();
      expect(Tok::RParen, "')'");
      expect(Tok::Dot, "'.'");
      iso_binders.push_back(v.text);
      IsoPtr body = parse_iso();
      iso_binders.pop_back();
      return iso_lambda(v.text, ann, body);
    }
    return parse_iso_atom_chain();
  }

  // juxtaposed application of iso atoms (classical higher order)
  IsoPtr parse_iso_atom_chain() {
    IsoPtr head = parse_iso_atom();
    while (at_iso_atom_start()) {
      IsoPtr arg = parse_iso_atom();
      if (dialect != Dialect::Classical)
        throw Error(errc::dialect, "iso-to-iso application is classical-only", cur().line,
                    cur().col);
      head = iso_app(head, arg);
    }
    return head;
  }

  bool at_iso_atom_start() const {
    if (cur().kind == Tok::LBrace) return true;
    if (cur().kind == Tok::LParen) {
      // only treat as iso argument when it starts an iso expression
      size_t k = 1;
      while (ahead(k).kind == Tok::LParen) k++;
      const Token& n = ahead(k);
      if (n.kind == Tok::LBrace || n.kind == Tok::Backslash) return true;
      if (n.kind == Tok::Ident &&
          (n.text == "fix" || n.text == "nfix" || n.text == "ctrl" || n.text == "inv" ||
           is_iso_name(n.text)))
        return true;
      return false;
    }
    if (cur().kind == Tok::Ident && !is_keyword(cur().text) && is_iso_name(cur().text))
      return true;
    return false;
  }

  IsoPtr parse_iso_atom() {
    const Token& t = cur();
    if (t.kind == Tok::Ident) {
      if (t.text == "fix" || t.text == "nfix" || t.text == "ctrl" || t.text == "inv")
        return parse_iso_prefix();
      if (is_keyword(t.text)) fail("unexpected keyword '" + t.text + "' in iso", t);
      eat();
      if (is_iso_binder(t.text)) return iso_var(t.text);
      if (IsoPtr d = lookup_decl(t.text)) return d;
      throw Error(errc::unbound_iso, "unbound iso variable '" + t.text + "'", t.line, t.col);
    }
    if (t.kind == Tok::LParen) {
      eat();
      IsoPtr inner = parse_iso();
      expect(Tok::RParen, "')'");
      return maybe_annotate(inner);
    }
    if (t.kind == Tok::LBrace) {
      int l = t.line, c = t.col;
      eat();
      std::vector<std::pair<TermPtr, TermPtr>> clauses;
      if (cur().kind == Tok::Pipe) eat();
      if (cur().kind != Tok::RBrace) {
        for (;;) {
          TermPtr lhs = parse_term();
          expect(Tok::Harpoon, "'<->'");
          TermPtr rhs = parse_term();
          clauses.emplace_back(lhs, rhs);
          if (cur().kind == Tok::Pipe) {
            eat();
            continue;
          }
          break;
        }
      }
      expect(Tok::RBrace, "'}'");
      IsoPtr out = maybe_annotate(iso_clauses(std::move(clauses)));
      Iso copy = *out;
      copy.line = l;
      copy.col = c;
      return std::make_shared<Iso>(std::move(copy));
    }
    if (t.kind == Tok::Backslash) return parse_iso_prefix();
    fail("expected an iso", t);
  }

  IsoPtr maybe_annotate(IsoPtr w) {
    if (cur().kind == Tok::DColon && ahead().kind == Tok::LParen) {
      eat();
      eat();
      IsoTypePtr ann = parse_isotype();
      expect(Tok::RParen, "')'");
      Iso copy = *w;
      copy.ann = ann;
      return std::make_shared<Iso>(std::move(copy));
    }
    return w;
  }

  // ---- program ----
  SourceProgram parse_program() {
    SourceProgram prog;
    prog.dialect = dialect;
    if (accept_ident("dialect")) {
      if (accept_ident("quantum")) {
        if (dialect != Dialect::Quantum)
          fail("file declares dialect quantum but was loaded as classical", cur());
      } else if (accept_ident("classical")) {
        if (dialect != Dialect::Classical)
          fail("file declares dialect classical but was loaded as quantum", cur());
      } else {
        fail("expected 'quantum' or 'classical'", cur());
      }
    }
    std::set<std::string> names;
    while (cur().kind != Tok::Eof) {
      const Token& t = cur();
      if (accept_ident("iso")) {
        Token name = expect(Tok::Ident, "iso name");
        if (names.count(name.text))
          throw Error(errc::syntax, "duplicate declaration '" + name.text + "'", name.line,
                      name.col);
        expect(Tok::Colon, "':'");
        IsoTypePtr ty = parse_isotype();
        expect(Tok::Eq, "'='");
        IsoPtr body = parse_iso();
        // propagate declared annotation onto an unannotated body (and through
        // a fix onto its clause set, so unfolding preserves the type)
        if (!body->ann && (body->tag == Iso::Tag::Clauses || body->tag == Iso::Tag::Fix ||
                           body->tag == Iso::Tag::NFix)) {
          Iso copy = *body;
          copy.ann = ty;
          if ((copy.tag == Iso::Tag::Fix || copy.tag == Iso::Tag::NFix) && copy.a &&
              copy.a->tag == Iso::Tag::Clauses && !copy.a->ann) {
            Iso inner = *copy.a;
            inner.ann = ty;
            copy.a = std::make_shared<Iso>(std::move(inner));
          }
          body = std::make_shared<Iso>(std::move(copy));
        }
        Decl d;
        d.name = name.text;
        d.is_iso = true;
        d.iso = body;
        d.iso_type = ty;
        d.line = name.line;
        d.col = name.col;
        prog.decls.push_back(d);
        iso_decls.emplace_back(name.text, body);
        names.insert(name.text);
        continue;
      }
      if (accept_ident("def")) {
        Token name = expect(Tok::Ident, "definition name");
        if (names.count(name.text))
          throw Error(errc::syntax, "duplicate declaration '" + name.text + "'", name.line,
                      name.col);
        expect(Tok::Eq, "'='");
        TermPtr body = parse_term();
        Decl d;
        d.name = name.text;
        d.term = body;
        d.line = name.line;
        d.col = name.col;
        prog.decls.push_back(d);
        names.insert(name.text);
        continue;
      }
      fail("expected 'iso' or 'def' declaration", t);
    }
    return prog;
  }
};

}  // namespace

SourceProgram parse(const std::string& text, Dialect dialect) {
  Lexer lex(text);
  lex.run();
  Parser p(std::move(lex.toks), dialect);
  return p.parse_program();
}

TermPtr parse_term(const std::string& text, Dialect dialect) {
  Lexer lex(text);
  lex.run();
  Parser p(std::move(lex.toks), dialect);
  TermPtr t = p.parse_term();
  if (p.cur().kind != Tok::Eof) p.fail("trailing input after term", p.cur());
  return t;
}

TypePtr parse_type(const std::string& text, Dialect dialect) {
  Lexer lex(text);
  lex.run();
  Parser p(std::move(lex.toks), dialect);
  TypePtr t = p.parse_type();
  if (p.cur().kind != Tok::Eof) p.fail("trailing input after type", p.cur());
  return t;
}

IsoTypePtr parse_isotype(const std::string& text, Dialect dialect) {
  Lexer lex(text);
  lex.run();
  Parser p(std::move(lex.toks), dialect);
  IsoTypePtr t = p.parse_isotype();
  if (p.cur().kind != Tok::Eof) p.fail("trailing input after iso type", p.cur());
  return t;
}

// ---------------------------------------------------------------------------
// Pretty printer

namespace {

std::string fmt_double(double x, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, x);
  return buf;
}

std::string fmt_scalar(const Complex& z, int precision) {
  if (approx_zero(z.imag())) return fmt_double(z.real(), precision);
  if (approx_zero(z.real())) return fmt_double(z.imag(), precision) + "i";
  std::string re = fmt_double(z.real(), precision);
  std::string im = fmt_double(std::abs(z.imag()), precision);
  return "(" + re + (z.imag() < 0 ? " - " : " + ") + im + "i)";
}

// returns numeral when the term is a canonical quantum/classical numeral
bool as_numeral(const TermPtr& t, unsigned& n, bool quantum) {
  const Term* cur = t.get();
  unsigned k = 0;
  if (quantum) {
    while (cur->tag == Term::Tag::Suc) {
      k++;
      cur = cur->a.get();
    }
    if (cur->tag == Term::Tag::Zero) {
      n = k;
      return true;
    }
    return false;
  }
  for (;;) {
    if (cur->tag != Term::Tag::Fold) return false;
    const Term* inner = cur->a.get();
    if (inner->tag == Term::Tag::InL && inner->a->tag == Term::Tag::Unit) {
      n = k;
      return true;
    }
    if (inner->tag != Term::Tag::InR) return false;
    k++;
    cur = inner->a.get();
  }
}

bool as_list(const TermPtr& t, std::vector<TermPtr>& xs) {
  const Term* cur = t.get();
  for (;;) {
    if (cur->tag != Term::Tag::Fold) return false;
    const Term* inner = cur->a.get();
    if (inner->tag == Term::Tag::InL && inner->a->tag == Term::Tag::Unit) return true;
    if (inner->tag != Term::Tag::InR || inner->a->tag != Term::Tag::Pair) return false;
    xs.push_back(inner->a->a);
    cur = inner->a->b.get();
  }
}

struct Printer {
  int precision;
  std::ostringstream os;

  void term_atom(const TermPtr& t) {
    switch (t->tag) {
      case Term::Tag::Unit:
        os << '*';
        return;
      case Term::Tag::Var:
        os << t->name;
        return;
      case Term::Tag::Zero:
        os << "zero";
        return;
      case Term::Tag::Suc: {
        unsigned n;
        if (as_numeral(t, n, true)) {
          os << n;
          return;
        }
        os << "suc ";
        term_atom_arg(t->a);
        return;
      }
      case Term::Tag::InL:
        os << "inl ";
        term_atom_arg(t->a);
        return;
      case Term::Tag::InR:
        os << "inr ";
        term_atom_arg(t->a);
        return;
      case Term::Tag::Fold: {
        unsigned n;
        if (as_numeral(t, n, false)) {
          os << n;
          return;
        }
        std::vector<TermPtr> xs;
        if (as_list(t, xs)) {
          os << '[';
          for (size_t i = 0; i < xs.size(); i++) {
            if (i) os << ", ";
            term(xs[i]);
          }
          os << ']';
          return;
        }
        os << "fold ";
        term_atom_arg(t->a);
        return;
      }
      case Term::Tag::Pair: {
        os << '(';
        const Term* cur = t.get();
        term(cur->a);
        while (cur->b->tag == Term::Tag::Pair) {
          os << ", ";
          cur = cur->b.get();
          term(cur->a);
        }
        os << ", ";
        term(cur->b);
        os << ')';
        return;
      }
      default:
        os << '(';
        term(t);
        os << ')';
        return;
    }
  }

  void term_atom_arg(const TermPtr& t) {
    // argument of a unary constructor: parenthesize non-atoms
    switch (t->tag) {
      case Term::Tag::Unit:
      case Term::Tag::Var:
      case Term::Tag::Zero:
      case Term::Tag::Pair:
        term_atom(t);
        return;
      case Term::Tag::Suc:
      case Term::Tag::Fold: {
        unsigned n;
        if (as_numeral(t, n, t->tag == Term::Tag::Suc)) {
          os << n;
          return;
        }
        os << '(';
        term(t);
        os << ')';
        return;
      }
      default: {
        std::vector<TermPtr> xs;
        if (t->tag == Term::Tag::Fold && as_list(t, xs)) {
          term_atom(t);
          return;
        }
        os << '(';
        term(t);
        os << ')';
        return;
      }
    }
  }

  void term(const TermPtr& t) {
    switch (t->tag) {
      case Term::Tag::Sum: {
        bool first = true;
        for (auto& [c, u] : t->parts) {
          Complex coef = c;
          if (!first && coef.imag() == 0 && coef.real() < 0) {
            os << " - ";
            coef = -coef;
          } else if (!first) {
            os << " + ";
          }
          first = false;
          if (approx_equal(coef, Complex(1, 0))) {
            term_app(u);
          } else {
            os << fmt_scalar(coef, precision) << " * ";
            term_app(u);
          }
        }
        if (t->parts.empty()) os << "0 * *";  // degenerate; callers reject
        return;
      }
      case Term::Tag::App:
      case Term::Tag::Let:
        term_app(t);
        return;
      default:
        term_atom(t);
        return;
    }
  }

  void term_app(const TermPtr& t) {
    if (t->tag == Term::Tag::App) {
      iso_atom(t->iso);
      os << ' ';
      term_atom_arg(t->a);
      return;
    }
    if (t->tag == Term::Tag::Let) {
      os << "let ";
      if (t->pattern.size() == 1) {
        os << t->pattern[0];
      } else {
        os << '(';
        for (size_t i = 0; i < t->pattern.size(); i++) {
          if (i) os << ", ";
          os << t->pattern[i];
        }
        os << ')';
      }
      os << " = ";
      term(t->a);
      os << " in ";
      term(t->b);
      return;
    }
    term_atom(t);
  }

  void iso_atom(const IsoPtr& w) {
    switch (w->tag) {
      case Iso::Tag::Var:
        os << w->name;
        return;
      case Iso::Tag::Clauses: {
        os << "{ ";
        for (size_t i = 0; i < w->clauses.size(); i++) {
          if (i) os << " | ";
          term(w->clauses[i].first);
          os << " <-> ";
          term(w->clauses[i].second);
        }
        os << " }";
        if (w->ann) os << " :: (" << show_isotype_str(w->ann) << ')';
        return;
      }
      default:
        os << '(';
        iso(w);
        os << ')';
        return;
    }
  }

  std::string show_isotype_str(const IsoTypePtr& t) {
    if (t->tag == IsoType::Tag::Ground)
      return show_type(t->src) + " <-> " + show_type(t->dst);
    return "(" + show_isotype_str(t->from) + ") -> (" + show_isotype_str(t->to) + ")";
  }

  void iso(const IsoPtr& w) {
    switch (w->tag) {
      case Iso::Tag::Compose:
        iso_bin(w->a);
        os << " ; ";
        iso_bin(w->b);
        return;
      case Iso::Tag::Tensor:
        iso_bin(w->a);
        os << " <*> ";
        iso_bin(w->b);
        return;
      case Iso::Tag::SumC:
        iso_bin(w->a);
        os << " <+> ";
        iso_bin(w->b);
        return;
      case Iso::Tag::Inverse:
        os << "inv ";
        iso_bin(w->a);
        return;
      case Iso::Tag::Ctrl:
        os << "ctrl ";
        iso_bin(w->a);
        return;
      case Iso::Tag::Lambda:
        os << '\\' << w->name << " :: (" << show_isotype_str(w->param_ann) << ") . ";
        iso(w->a);
        return;
      case Iso::Tag::Fix:
        os << "fix " << w->name;
        if (w->ann) os << " :: (" << show_isotype_str(w->ann) << ')';
        os << " . ";
        iso(w->a);
        return;
      case Iso::Tag::NFix:
        os << "nfix " << w->n << ' ' << w->name;
        if (w->ann) os << " :: (" << show_isotype_str(w->ann) << ')';
        os << " . ";
        iso(w->a);
        return;
      case Iso::Tag::App:
        iso_app_chain(w);
        return;
      default:
        iso_atom(w);
        return;
    }
  }

  void iso_app_chain(const IsoPtr& w) {
    if (w->tag == Iso::Tag::App) {
      iso_app_chain(w->a);
      os << ' ';
      iso_atom(w->b);
      return;
    }
    iso_atom(w);
  }

  void iso_bin(const IsoPtr& w) {
    // operands of binary combinators: parenthesize anything non-atomic
    if (w->tag == Iso::Tag::Var || w->tag == Iso::Tag::Clauses) {
      iso_atom(w);
    } else {
      os << '(';
      iso(w);
      os << ')';
    }
  }
};

}  // namespace

std::string pretty(const TermPtr& t, int precision) {
  Printer p{precision, {}};
  p.term(t);
  return p.os.str();
}

std::string pretty(const IsoPtr& w, int precision) {
  Printer p{precision, {}};
  p.iso(w);
  return p.os.str();
}

std::string pretty(const TypePtr& t) { return show_type(t); }
std::string pretty(const IsoTypePtr& t) { return show_isotype(t); }

std::string pretty_program(const SourceProgram& p, int precision) {
  std::ostringstream os;
  os << "dialect " << (p.dialect == Dialect::Quantum ? "quantum" : "classical") << "\n\n";
  for (const auto& d : p.decls) {
    if (d.is_iso) {
      IsoPtr body = d.iso;
      // the declared type re-propagates on parse, so drop a matching annotation
      if (body->ann && isotype_equal(body->ann, d.iso_type) &&
          (body->tag == Iso::Tag::Clauses || body->tag == Iso::Tag::Fix ||
           body->tag == Iso::Tag::NFix)) {
        Iso copy = *body;
        copy.ann = nullptr;
        body = std::make_shared<Iso>(std::move(copy));
      }
      os << "iso " << d.name << " : " << show_isotype(d.iso_type) << " =\n  "
         << pretty(body, precision) << "\n\n";
    } else {
      os << "def " << d.name << " = " << pretty(d.term, precision) << "\n\n";
    }
  }
  return os.str();
}

}  // namespace revq
