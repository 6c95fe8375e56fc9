#include "revq/denote.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "revq/kernels.hpp"
#include "revq/parser.hpp"

namespace revq {

// ---------------------------------------------------------------------------
// Matrix

bool Matrix::prefer_dense(int r, int c) { return std::max(r, c) < 64; }

Matrix Matrix::zeros(int rows, int cols) {
  Matrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.dense_ = prefer_dense(rows, cols);
  if (m.dense_) m.d_.assign(static_cast<size_t>(rows) * cols, Complex(0, 0));
  return m;
}

Matrix Matrix::identity(int n) {
  Matrix m = zeros(n, n);
  for (int i = 0; i < n; i++) m.set(i, i, Complex(1, 0));
  return m;
}

Complex Matrix::at(int r, int c) const {
  if (dense_) return d_[static_cast<size_t>(r) * cols_ + c];
  auto key = std::make_pair(r, c);
  auto it = std::lower_bound(s_.begin(), s_.end(), key,
                             [](const auto& e, const auto& k) { return e.first < k; });
  if (it != s_.end() && it->first == key) return it->second;
  return Complex(0, 0);
}

void Matrix::set(int r, int c, const Complex& v) {
  if (dense_) {
    d_[static_cast<size_t>(r) * cols_ + c] = v;
    return;
  }
  auto key = std::make_pair(r, c);
  auto it = std::lower_bound(s_.begin(), s_.end(), key,
                             [](const auto& e, const auto& k) { return e.first < k; });
  if (it != s_.end() && it->first == key)
    it->second = v;
  else
    s_.insert(it, {key, v});
}

void Matrix::add_at(int r, int c, const Complex& v) {
  if (dense_) {
    d_[static_cast<size_t>(r) * cols_ + c] += v;
    return;
  }
  auto key = std::make_pair(r, c);
  auto it = std::lower_bound(s_.begin(), s_.end(), key,
                             [](const auto& e, const auto& k) { return e.first < k; });
  if (it != s_.end() && it->first == key)
    it->second += v;
  else
    s_.insert(it, {key, v});
}

void Matrix::coalesce() {
  if (dense_) return;
  s_.erase(std::remove_if(s_.begin(), s_.end(),
                          [](const auto& e) { return e.second == Complex(0, 0); }),
           s_.end());
}

Matrix densify(const Matrix& m) {
  if (m.dense_) return m;
  Matrix out;
  out.rows_ = m.rows_;
  out.cols_ = m.cols_;
  out.dense_ = true;
  out.d_.assign(static_cast<size_t>(m.rows_) * m.cols_, Complex(0, 0));
  for (auto& [rc, v] : m.s_) out.d_[static_cast<size_t>(rc.first) * m.cols_ + rc.second] = v;
  return out;
}

Matrix Matrix::mul(const Matrix& rhs) const {
  if (cols_ != rhs.rows_) throw Error(errc::internal, "matrix product dimension mismatch");
  Matrix out = zeros(rows_, rhs.cols_);
  if (dense_ && rhs.dense_ && out.dense_) {
    kern::gemm(rows_, rhs.cols_, cols_, d_.data(), rhs.d_.data(), out.d_.data());
    return out;
  }
  // generic path: iterate nonzeros of this, scale rows of rhs
  auto each_nonzero = [](const Matrix& m, auto&& f) {
    if (m.dense_) {
      for (int r = 0; r < m.rows_; r++)
        for (int c = 0; c < m.cols_; c++) {
          const Complex& v = m.d_[static_cast<size_t>(r) * m.cols_ + c];
          if (v != Complex(0, 0)) f(r, c, v);
        }
    } else {
      for (auto& [rc, v] : m.s_) f(rc.first, rc.second, v);
    }
  };
  auto each_nonzero_in_row = [](const Matrix& m, int row, auto&& f) {
    if (m.dense_) {
      for (int c = 0; c < m.cols_; c++) {
        const Complex& v = m.d_[static_cast<size_t>(row) * m.cols_ + c];
        if (v != Complex(0, 0)) f(c, v);
      }
    } else {
      auto lo = std::lower_bound(m.s_.begin(), m.s_.end(), std::make_pair(row, 0),
                                 [](const auto& e, const auto& k) { return e.first < k; });
      for (auto it = lo; it != m.s_.end() && it->first.first == row; ++it)
        f(it->first.second, it->second);
    }
  };
  each_nonzero(*this, [&](int r, int k, const Complex& a) {
    each_nonzero_in_row(rhs, k, [&](int c, const Complex& b) { out.add_at(r, c, a * b); });
  });
  out.coalesce();
  return out;
}

Matrix Matrix::kron(const Matrix& rhs) const {
  Matrix out = zeros(rows_ * rhs.rows_, cols_ * rhs.cols_);
  auto each_nonzero = [](const Matrix& m, auto&& f) {
    if (m.dense_) {
      for (int r = 0; r < m.rows_; r++)
        for (int c = 0; c < m.cols_; c++) {
          const Complex& v = m.d_[static_cast<size_t>(r) * m.cols_ + c];
          if (v != Complex(0, 0)) f(r, c, v);
        }
    } else {
      for (auto& [rc, v] : m.s_) f(rc.first, rc.second, v);
    }
  };
  if (out.dense_ && dense_ && rhs.dense_) {
    for (int ra = 0; ra < rows_; ra++)
      for (int ca = 0; ca < cols_; ca++) {
        Complex a = d_[static_cast<size_t>(ra) * cols_ + ca];
        if (a == Complex(0, 0)) continue;
        for (int rb = 0; rb < rhs.rows_; rb++) {
          // scaled copy of one row of rhs into the block row
          kern::scal_copy(static_cast<size_t>(rhs.cols_), a,
                          rhs.d_.data() + static_cast<size_t>(rb) * rhs.cols_,
                          out.d_.data() +
                              static_cast<size_t>(ra * rhs.rows_ + rb) * out.cols_ +
                              static_cast<size_t>(ca) * rhs.cols_);
        }
      }
    return out;
  }
  each_nonzero(*this, [&](int ra, int ca, const Complex& a) {
    each_nonzero(rhs, [&](int rb, int cb, const Complex& b) {
      out.set(ra * rhs.rows_ + rb, ca * rhs.cols_ + cb, a * b);
    });
  });
  out.coalesce();
  return out;
}

Matrix Matrix::dagger() const {
  Matrix out = zeros(cols_, rows_);
  if (dense_ && out.dense_) {
    for (int r = 0; r < rows_; r++)
      for (int c = 0; c < cols_; c++)
        out.d_[static_cast<size_t>(c) * rows_ + r] =
            std::conj(d_[static_cast<size_t>(r) * cols_ + c]);
    return out;
  }
  if (dense_) {
    for (int r = 0; r < rows_; r++)
      for (int c = 0; c < cols_; c++) {
        Complex v = d_[static_cast<size_t>(r) * cols_ + c];
        if (v != Complex(0, 0)) out.set(c, r, std::conj(v));
      }
  } else {
    for (auto& [rc, v] : s_) out.set(rc.second, rc.first, std::conj(v));
  }
  out.coalesce();
  return out;
}

Matrix Matrix::scaled(const Complex& alpha) const {
  Matrix out = *this;
  if (out.dense_) {
    kern::scal_copy(out.d_.size(), alpha, d_.data(), out.d_.data());
  } else {
    for (auto& [rc, v] : out.s_) v *= alpha;
  }
  return out;
}

Matrix Matrix::plus_scaled(const Complex& alpha, const Matrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw Error(errc::internal, "matrix sum dimension mismatch");
  Matrix out = *this;
  if (out.dense_ && rhs.dense_) {
    kern::axpy(out.d_.size(), alpha, rhs.d_.data(), out.d_.data());
    return out;
  }
  if (rhs.dense_) {
    for (int r = 0; r < rhs.rows_; r++)
      for (int c = 0; c < rhs.cols_; c++) {
        Complex v = rhs.d_[static_cast<size_t>(r) * rhs.cols_ + c];
        if (v != Complex(0, 0)) out.add_at(r, c, alpha * v);
      }
  } else {
    for (auto& [rc, v] : rhs.s_) out.add_at(rc.first, rc.second, alpha * v);
  }
  out.coalesce();
  return out;
}

Matrix Matrix::permute_cols(const std::vector<int>& src_of) const {
  Matrix out = zeros(rows_, static_cast<int>(src_of.size()));
  for (int j = 0; j < static_cast<int>(src_of.size()); j++)
    for (int r = 0; r < rows_; r++) {
      Complex v = at(r, src_of[j]);
      if (v != Complex(0, 0)) out.set(r, j, v);
    }
  return out;
}

Matrix Matrix::embedded(int rows, int cols, int row_off, int col_off) const {
  Matrix out = zeros(rows, cols);
  for (int r = 0; r < rows_; r++)
    for (int c = 0; c < cols_; c++) {
      Complex v = at(r, c);
      if (v != Complex(0, 0)) out.set(r + row_off, c + col_off, v);
    }
  return out;
}

double Matrix::inf_norm_diff(const Matrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw Error(errc::internal, "matrix comparison dimension mismatch");
  double m = 0;
  for (int r = 0; r < rows_; r++)
    for (int c = 0; c < cols_; c++) m = std::max(m, std::abs(at(r, c) - rhs.at(r, c)));
  return m;
}

double Matrix::inf_norm_diff_identity() const {
  double m = 0;
  for (int r = 0; r < rows_; r++)
    for (int c = 0; c < cols_; c++) {
      Complex expect = r == c ? Complex(1, 0) : Complex(0, 0);
      m = std::max(m, std::abs(at(r, c) - expect));
    }
  return m;
}

std::string Matrix::to_json() const {
  std::ostringstream os;
  os << "{\"rows\":" << rows_ << ",\"cols\":" << cols_ << ",\"entries\":[";
  bool first = true;
  char buf[64];
  for (int r = 0; r < rows_; r++)
    for (int c = 0; c < cols_; c++) {
      Complex v = at(r, c);
      if (v == Complex(0, 0)) continue;
      if (!first) os << ',';
      first = false;
      os << '[' << r << ',' << c << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", v.real());
      os << buf << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", v.imag());
      os << buf << ']';
    }
  os << "]}";
  return os.str();
}

// ---------------------------------------------------------------------------
// basis enumeration

namespace {

bool type_has_mu(const TypePtr& t) {
  switch (t->tag) {
    case Type::Tag::Mu:
    case Type::Tag::Var:
      return true;
    case Type::Tag::Sum:
    case Type::Tag::Tensor:
      return type_has_mu(t->lhs) || type_has_mu(t->rhs);
    default:
      return false;
  }
}

void enum_quantum(const TypePtr& ty, int cutoff, std::vector<TermPtr>& out) {
  switch (ty->tag) {
    case Type::Tag::Unit:
      out.push_back(mk_unit());
      return;
    case Type::Tag::Nat:
      for (int i = 0; i < cutoff; i++) out.push_back(mk_nat_q(static_cast<unsigned>(i)));
      return;
    case Type::Tag::Sum: {
      std::vector<TermPtr> l, r;
      enum_quantum(ty->lhs, cutoff, l);
      enum_quantum(ty->rhs, cutoff, r);
      for (auto& b : l) out.push_back(mk_inl(b));
      for (auto& b : r) out.push_back(mk_inr(b));
      return;
    }
    case Type::Tag::Tensor: {
      std::vector<TermPtr> l, r;
      enum_quantum(ty->lhs, cutoff, l);
      enum_quantum(ty->rhs, cutoff, r);
      for (auto& a : l)
        for (auto& b : r) out.push_back(mk_pair(a, b));
      return;
    }
    default:
      throw Error(errc::malformed, "quantum enumeration of a mu type");
  }
}

void enum_classical_exact(const TypePtr& ty, int size, std::vector<TermPtr>& out);

// enumerate closed classical values of syntactic size <= budget
void enum_classical(const TypePtr& ty, int budget, std::vector<TermPtr>& out) {
  if (budget <= 0) return;
  switch (ty->tag) {
    case Type::Tag::Unit:
      out.push_back(mk_unit());
      return;
    case Type::Tag::Sum: {
      std::vector<TermPtr> l, r;
      enum_classical(ty->lhs, budget - 1, l);
      enum_classical(ty->rhs, budget - 1, r);
      for (auto& b : l) out.push_back(mk_inl(b));
      for (auto& b : r) out.push_back(mk_inr(b));
      return;
    }
    case Type::Tag::Tensor: {
      // size(pair) = 1 + size(a) + size(b)
      for (int la = 1; la <= budget - 2; la++) {
        std::vector<TermPtr> l, r;
        enum_classical_exact(ty->lhs, la, l);
        enum_classical(ty->rhs, budget - 1 - la, r);
        for (auto& a : l)
          for (auto& b : r) out.push_back(mk_pair(a, b));
      }
      return;
    }
    case Type::Tag::Mu: {
      std::vector<TermPtr> inner;
      enum_classical(mu_unfold(ty), budget - 1, inner);
      for (auto& b : inner) out.push_back(mk_fold(b));
      return;
    }
    default:
      throw Error(errc::malformed, "cannot enumerate type " + show_type(ty));
  }
}

// values of exactly the given size (helper for tensor splits)
void enum_classical_exact(const TypePtr& ty, int size, std::vector<TermPtr>& out) {
  std::vector<TermPtr> all;
  enum_classical(ty, size, all);
  for (auto& v : all)
    if (static_cast<int>(term_size(v)) == size) out.push_back(v);
}

}  // namespace

BasisEnumeration enumerate_basis(const TypePtr& ty, int cutoff) {
  BasisEnumeration e;
  e.type = ty;
  e.cutoff = cutoff;
  if (type_has_mu(ty))
    enum_classical(ty, cutoff, e.values);
  else
    enum_quantum(ty, cutoff, e.values);
  std::sort(e.values.begin(), e.values.end(),
            [](const TermPtr& a, const TermPtr& b) { return compare_basis(a, b) < 0; });
  return e;
}

int BasisEnumeration::index_of(const TermPtr& b) const {
  int lo = 0, hi = static_cast<int>(values.size()) - 1;
  while (lo <= hi) {
    int mid = (lo + hi) / 2;
    int c = compare_basis(values[mid], b);
    if (c == 0) return mid;
    if (c < 0)
      lo = mid + 1;
    else
      hi = mid - 1;
  }
  return -1;
}

// ---------------------------------------------------------------------------
// semantics of terms and isos

namespace {

int dim_of(const TypePtr& ty, int cutoff) {
  switch (ty->tag) {
    case Type::Tag::Unit:
      return 1;
    case Type::Tag::Nat:
      return cutoff;
    case Type::Tag::Sum:
      return dim_of(ty->lhs, cutoff) + dim_of(ty->rhs, cutoff);
    case Type::Tag::Tensor:
      return dim_of(ty->lhs, cutoff) * dim_of(ty->rhs, cutoff);
    default:
      throw Error(errc::malformed, "no finite dimension for " + show_type(ty));
  }
}

using Ctx = std::vector<std::pair<std::string, TypePtr>>;

int ctx_dim(const Ctx& ctx, int cutoff) {
  int d = 1;
  for (auto& [n, t] : ctx) d *= dim_of(t, cutoff);
  return d;
}

Ctx sorted_ctx(Ctx ctx) {
  std::sort(ctx.begin(), ctx.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return ctx;
}

// column permutation assembling a split context product back into the sorted
// parent order: parent column p corresponds to kron column phi(p)
std::vector<int> split_perm(const Ctx& parent, const Ctx& left, const Ctx& right, int cutoff) {
  std::vector<int> dims(parent.size());
  std::vector<bool> in_left(parent.size());
  for (size_t i = 0; i < parent.size(); i++) {
    dims[i] = dim_of(parent[i].second, cutoff);
    in_left[i] = false;
    for (auto& [n, t] : left)
      if (n == parent[i].first) in_left[i] = true;
  }
  int dl = ctx_dim(left, cutoff), dr = ctx_dim(right, cutoff);
  int total = ctx_dim(parent, cutoff);
  std::vector<int> out(static_cast<size_t>(total));
  for (int p = 0; p < total; p++) {
    // decode mixed radix, most significant first
    int rest = p, li = 0, ri = 0;
    for (size_t i = 0; i < parent.size(); i++) {
      int radix = 1;
      for (size_t j = i + 1; j < parent.size(); j++) radix *= dims[j];
      int digit = rest / radix;
      rest %= radix;
      if (in_left[i])
        li = li * dims[i] + digit;
      else
        ri = ri * dims[i] + digit;
    }
    (void)dl;
    out[p] = li * dr + ri;
  }
  return out;
}

Matrix succ_matrix(int cutoff) {
  Matrix m = Matrix::zeros(cutoff, cutoff);
  for (int i = 0; i + 1 < cutoff; i++) m.set(i + 1, i, Complex(1, 0));
  return m;
}

struct Sem {
  int cutoff;

  Matrix term(const Ctx& ctx, const TermPtr& t, const TypePtr& ty) {
    switch (t->tag) {
      case Term::Tag::Unit:
        return Matrix::identity(1);
      case Term::Tag::Var: {
        if (ctx.size() != 1 || ctx[0].first != t->name)
          throw Error(errc::internal, "sem_term: context does not match variable");
        return Matrix::identity(dim_of(ty, cutoff));
      }
      case Term::Tag::Zero: {
        Matrix m = Matrix::zeros(cutoff, 1);
        m.set(0, 0, Complex(1, 0));
        return m;
      }
      case Term::Tag::Suc: {
        Matrix inner = term(ctx, t->a, ty_nat());
        // a closed term losing weight off the top of the truncated space is an
        // error; open contexts truncate (the finite approximation boundary)
        if (ctx.empty()) {
          for (int c = 0; c < inner.cols(); c++)
            if (std::abs(inner.at(cutoff - 1, c)) > eps())
              throw Error(errc::cutoff_overflow,
                          "suc would leave the truncated Nat space (cutoff " +
                              std::to_string(cutoff) + ")");
        }
        return succ_matrix(cutoff).mul(inner);
      }
      case Term::Tag::InL: {
        if (ty->tag != Type::Tag::Sum) throw Error(errc::internal, "sem_term: inl at non-sum");
        Matrix inner = term(ctx, t->a, ty->lhs);
        int da = dim_of(ty->lhs, cutoff), db = dim_of(ty->rhs, cutoff);
        return inner.embedded(da + db, inner.cols(), 0, 0);
      }
      case Term::Tag::InR: {
        if (ty->tag != Type::Tag::Sum) throw Error(errc::internal, "sem_term: inr at non-sum");
        Matrix inner = term(ctx, t->a, ty->rhs);
        int da = dim_of(ty->lhs, cutoff), db = dim_of(ty->rhs, cutoff);
        return inner.embedded(da + db, inner.cols(), da, 0);
      }
      case Term::Tag::Pair: {
        if (ty->tag != Type::Tag::Tensor)
          throw Error(errc::internal, "sem_term: pair at non-tensor");
        auto fa = free_vars(t->a);
        Ctx left, right;
        for (auto& [n, typ] : ctx)
          (fa.count(n) ? left : right).emplace_back(n, typ);
        Matrix ml = term(left, t->a, ty->lhs);
        Matrix mr = term(right, t->b, ty->rhs);
        Matrix k = ml.kron(mr);
        return k.permute_cols(split_perm(ctx, left, right, cutoff));
      }
      case Term::Tag::Sum: {
        Matrix acc = Matrix::zeros(dim_of(ty, cutoff), ctx_dim(ctx, cutoff));
        for (auto& [c, u] : t->parts) acc = acc.plus_scaled(c, term(ctx, u, ty));
        return acc;
      }
      case Term::Tag::App: {
        Context tctx;
        IsoTypePtr wt = typecheck_iso(tctx, t->iso, Dialect::Quantum);
        Matrix mw = iso(t->iso, wt);
        Matrix mt = term(ctx, t->a, wt->src);
        return mw.mul(mt);
      }
      default:
        throw Error(errc::dialect, "classical construct has no matrix semantics");
    }
  }

  Matrix iso(const IsoPtr& w, const IsoTypePtr& wt) {
    switch (w->tag) {
      case Iso::Tag::Clauses: {
        int rows = dim_of(wt->dst, cutoff), cols = dim_of(wt->src, cutoff);
        Matrix acc = Matrix::zeros(rows, cols);
        for (auto& [lhs, rhs] : w->clauses) {
          Ctx delta = sorted_ctx(bind_pattern(lhs, wt->src, Dialect::Quantum));
          Matrix mb = term(delta, lhs, wt->src);
          Matrix me = term(delta, rhs, wt->dst);
          acc = acc.plus_scaled(Complex(1, 0), me.mul(mb.dagger()));
        }
        return acc;
      }
      case Iso::Tag::Compose: {
        Context tctx;
        IsoTypePtr at = typecheck_iso(tctx, w->a, Dialect::Quantum);
        IsoTypePtr bt = typecheck_iso(tctx, w->b, Dialect::Quantum);
        return iso(w->b, bt).mul(iso(w->a, at));
      }
      case Iso::Tag::Tensor: {
        Context tctx;
        IsoTypePtr at = typecheck_iso(tctx, w->a, Dialect::Quantum);
        IsoTypePtr bt = typecheck_iso(tctx, w->b, Dialect::Quantum);
        return iso(w->a, at).kron(iso(w->b, bt));
      }
      case Iso::Tag::SumC: {
        Context tctx;
        IsoTypePtr at = typecheck_iso(tctx, w->a, Dialect::Quantum);
        IsoTypePtr bt = typecheck_iso(tctx, w->b, Dialect::Quantum);
        Matrix ma = iso(w->a, at);
        Matrix mb = iso(w->b, bt);
        int rows = ma.rows() + mb.rows(), cols = ma.cols() + mb.cols();
        return ma.embedded(rows, cols, 0, 0)
            .plus_scaled(Complex(1, 0), mb.embedded(rows, cols, ma.rows(), ma.cols()));
      }
      case Iso::Tag::Inverse: {
        Context tctx;
        IsoTypePtr at = typecheck_iso(tctx, w->a, Dialect::Quantum);
        return iso(w->a, at).dagger();
      }
      case Iso::Tag::Ctrl: {
        Context tctx;
        IsoTypePtr at = typecheck_iso(tctx, w->a, Dialect::Quantum);
        Matrix f = iso(w->a, at);
        int da = f.rows();
        Matrix p0 = Matrix::zeros(2, 2), p1 = Matrix::zeros(2, 2);
        p0.set(0, 0, Complex(1, 0));
        p1.set(1, 1, Complex(1, 0));
        return p0.kron(Matrix::identity(da)).plus_scaled(Complex(1, 0), p1.kron(f));
      }
      default:
        throw Error(errc::dialect, "classical iso form has no matrix semantics");
    }
  }
};

}  // namespace

Matrix sem_term(const std::vector<std::pair<std::string, TypePtr>>& ctx, const TermPtr& t,
                const TypePtr& ty, int cutoff) {
  Sem s{cutoff};
  return s.term(sorted_ctx(ctx), t, ty);
}

Matrix sem_term_closed(const TermPtr& t, const TypePtr& ty, int cutoff) {
  return sem_term({}, t, ty, cutoff);
}

Matrix sem_iso(const IsoPtr& w, int cutoff) {
  Context tctx;
  IsoTypePtr wt = typecheck_iso(tctx, w, Dialect::Quantum);
  Sem s{cutoff};
  return s.iso(w, wt);
}

double isometry_residual(const Matrix& m) {
  return m.dagger().mul(m).inf_norm_diff_identity();
}
double unitarity_residual(const Matrix& m) {
  return std::max(isometry_residual(m), m.mul(m.dagger()).inf_norm_diff_identity());
}
bool check_isometry(const Matrix& m) { return isometry_residual(m) < eps(); }
bool check_unitary(const Matrix& m) { return unitarity_residual(m) < eps(); }

// ---------------------------------------------------------------------------
// partial injections

size_t PartialInjection::defined_count() const {
  size_t n = 0;
  for (int i : mapping)
    if (i >= 0) n++;
  return n;
}

PartialInjection sem_pinj(const IsoPtr& w, const TypePtr& src, int bound, long fuel,
                          const FixTypes* fix_types) {
  PartialInjection p;
  p.domain = enumerate_basis(src, bound);
  p.outputs.resize(p.domain.values.size());
  p.mapping.assign(p.domain.values.size(), -1);
  for (size_t i = 0; i < p.domain.values.size(); i++) {
    Outcome out = eval(mk_app(w, p.domain.values[i]), fuel, fix_types);
    if (out.tag != Outcome::Tag::Value) continue;
    p.outputs[i] = out.value;
    int idx = -1;
    for (size_t j = 0; j < p.codomain.size(); j++)
      if (term_equal(p.codomain[j], out.value)) {
        idx = static_cast<int>(j);
        break;
      }
    if (idx < 0) {
      idx = static_cast<int>(p.codomain.size());
      p.codomain.push_back(out.value);
    } else {
      throw Error(errc::internal,
                  "backward determinism violated: two inputs map to " + pretty(out.value, 6));
    }
    p.mapping[i] = idx;
  }
  return p;
}

}  // namespace revq
