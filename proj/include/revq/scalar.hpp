#ifndef REVQ_SCALAR_HPP
#define REVQ_SCALAR_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace revq {

using Complex = std::complex<double>;

// Global comparison tolerance. Defaults to 1e-9; REVQ_EPS overrides it at
// process start. All equality, zero and norm tests in the library go
// through these helpers.
double eps();
void set_eps(double e);

bool approx_zero(double x);
bool approx_zero(const Complex& z);
bool approx_equal(double a, double b);
bool approx_equal(const Complex& a, const Complex& b);
bool approx_one(double x);

inline constexpr double SQRT2_INV = 0.70710678118654752440;

// Structured library error. `code` is a stable machine-readable slug
// (e.g. "non-orthogonal", "syntax-error"); line/col are 1-based when known.
struct Error : std::runtime_error {
  std::string code;
  int line = -1;
  int col = -1;
  Error(std::string code_, const std::string& msg, int line_ = -1, int col_ = -1)
      : std::runtime_error(msg), code(std::move(code_)), line(line_), col(col_) {}
  // Rendered as "file:line:col: code: message".
  std::string render(const std::string& file) const;
};

namespace errc {
inline constexpr const char* lexical = "lexical-error";
inline constexpr const char* syntax = "syntax-error";
inline constexpr const char* unbound_iso = "unbound-iso-variable";
inline constexpr const char* unbound_var = "unbound-variable";
inline constexpr const char* duplicate_var = "duplicate-linear-var";
inline constexpr const char* unused_var = "unused-linear-var";
inline constexpr const char* norm_violation = "norm-violation";
inline constexpr const char* non_orthogonal = "non-orthogonal";
inline constexpr const char* dialect = "dialect-violation";
inline constexpr const char* iso_mismatch = "iso-ground-mismatch";
inline constexpr const char* arrow_applied = "arrow-iso-applied";
inline constexpr const char* od_failure = "od-failure";
inline constexpr const char* od_not_unitary = "od-ext-not-unitary";
inline constexpr const char* overlap = "overlap-failure";
inline constexpr const char* clause_vars = "clause-var-mismatch";
inline constexpr const char* type_mismatch = "type-mismatch";
inline constexpr const char* annotation = "missing-annotation";
inline constexpr const char* malformed = "malformed-input";
inline constexpr const char* cutoff_overflow = "cutoff-overflow";
inline constexpr const char* not_invertible = "not-invertible";
inline constexpr const char* internal = "internal-invariant";
}  // namespace errc

}  // namespace revq

#endif
