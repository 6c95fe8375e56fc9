#ifndef REVQ_DENOTE_HPP
#define REVQ_DENOTE_HPP

#include <string>
#include <vector>

#include "revq/ast.hpp"
#include "revq/ceval.hpp"
#include "revq/typeck.hpp"

namespace revq {

// Complex matrix over the enumerated canonical basis of a (truncated) type.
// Storage is dense below dimension 64 and coordinate-sparse above.
class Matrix {
 public:
  Matrix() = default;
  static Matrix zeros(int rows, int cols);
  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool dense() const { return dense_; }

  Complex at(int r, int c) const;
  void set(int r, int c, const Complex& v);
  void add_at(int r, int c, const Complex& v);

  Matrix mul(const Matrix& rhs) const;
  Matrix kron(const Matrix& rhs) const;
  Matrix dagger() const;
  Matrix scaled(const Complex& alpha) const;
  Matrix plus_scaled(const Complex& alpha, const Matrix& rhs) const;  // this + alpha*rhs
  // result column j takes this->column src_of[j]
  Matrix permute_cols(const std::vector<int>& src_of) const;
  // place this block at (row_off, col_off) inside a zeros(rows, cols) matrix
  Matrix embedded(int rows, int cols, int row_off, int col_off) const;

  double inf_norm_diff(const Matrix& rhs) const;   // max |a_ij - b_ij|
  double inf_norm_diff_identity() const;           // max |a_ij - delta_ij|

  // {"rows":R,"cols":C,"entries":[[r,c,re,im],...]} with nonzero entries in
  // row-major order
  std::string to_json() const;

 private:
  int rows_ = 0, cols_ = 0;
  bool dense_ = true;
  std::vector<Complex> d_;                              // dense row-major
  std::vector<std::pair<std::pair<int, int>, Complex>> s_;  // sorted row-major

  static bool prefer_dense(int r, int c);
  void coalesce();
  friend Matrix densify(const Matrix&);
};

// Canonical ordered basis of a type. Quantum types enumerate exactly
// (Nat truncated to `cutoff` numerals); classical types with mu enumerate all
// closed values of syntactic size <= cutoff. Sorted by compare_basis.
struct BasisEnumeration {
  TypePtr type;
  int cutoff = 0;
  std::vector<TermPtr> values;

  int dim() const { return static_cast<int>(values.size()); }
  int index_of(const TermPtr& b) const;  // -1 when absent
};

BasisEnumeration enumerate_basis(const TypePtr& ty, int cutoff);

inline constexpr int kDefaultCutoff = 16;

// Interpretation of a term judgement as a dim(A) x dim(ctx) matrix. The
// context is ordered by variable name. Raises cutoff-overflow when a suc
// would leave the truncated Nat space.
Matrix sem_term(const std::vector<std::pair<std::string, TypePtr>>& ctx, const TermPtr& t,
                const TypePtr& ty, int cutoff);
Matrix sem_term_closed(const TermPtr& t, const TypePtr& ty, int cutoff);

// Interpretation of a closed well-typed quantum iso.
Matrix sem_iso(const IsoPtr& w, int cutoff);

double isometry_residual(const Matrix& m);  // ||M^dagger M - I||_inf
double unitarity_residual(const Matrix& m);
bool check_isometry(const Matrix& m);
bool check_unitary(const Matrix& m);

// Partial injection extracted from a classical iso by bounded evaluation of
// every enumerated input. Injectivity of the table is asserted.
struct PartialInjection {
  BasisEnumeration domain;
  std::vector<TermPtr> outputs;  // aligned with domain.values; null = undefined
  std::vector<int> mapping;      // index into `codomain`, -1 = undefined
  std::vector<TermPtr> codomain;

  size_t defined_count() const;
};

PartialInjection sem_pinj(const IsoPtr& w, const TypePtr& src, int bound, long fuel,
                          const FixTypes* fix_types = nullptr);

}  // namespace revq

#endif
