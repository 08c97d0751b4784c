#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparsebound {

using Int = mpz_class;
using Rat = mpq_class;
using Vec = std::vector<Int>;
using QVec = std::vector<Rat>;

// Raised when a configured work cap would be exceeded. Results are never
// silently truncated; callers either raise the cap or get this error.
struct cap_exceeded : std::runtime_error {
  explicit cap_exceeded(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when an integer cannot be completely factored below the trial
// division ceiling. Prime-factor counts must be exact, so we refuse to guess.
struct factorization_incomplete : std::runtime_error {
  explicit factorization_incomplete(const std::string& msg)
      : std::runtime_error(msg) {}
};

// Work caps shared across the library.
struct Caps {
  long group = 1'000'000;                // residue group size / coset tables
  long minors = 200'000;                 // column subsets in minor enumeration
  long long box = 2'000'000;             // exhaustive right-hand-side boxes
  int oracle_cols = 12;                  // columns per restricted system
  long long oracle_points = 10'000'000;  // enumerated kernel points per call
  Int factor_ceiling{1'000'000'000};     // trial division ceiling
};

// Dense row-major matrix of arbitrary-precision integers. All arithmetic in
// this library is exact; no floating point appears anywhere.
class IntegerMatrix {
 public:
  IntegerMatrix(int rows, int cols);
  static IntegerMatrix identity(int n);
  static IntegerMatrix from_rows(const std::vector<Vec>& rows);
  static IntegerMatrix from_columns(const std::vector<Vec>& cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  const Int& operator()(int i, int j) const {
    return e_[std::size_t(i) * cols_ + j];
  }
  Int& operator()(int i, int j) { return e_[std::size_t(i) * cols_ + j]; }

  Vec col(int j) const;
  Vec row(int i) const;
  IntegerMatrix transpose() const;
  // Column submatrix in the given index order.
  IntegerMatrix columns(const std::vector<int>& idx) const;

  bool operator==(const IntegerMatrix&) const = default;

 private:
  int rows_, cols_;
  std::vector<Int> e_;
};

IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b);
Vec operator*(const IntegerMatrix& a, const Vec& v);

Vec vec_add(const Vec& a, const Vec& b);
Vec vec_sub(const Vec& a, const Vec& b);
bool vec_is_zero(const Vec& v);
Int dot(const Vec& a, const Vec& b);

struct LexLess {
  bool operator()(const Vec& a, const Vec& b) const;
};

// Canonicalized rational from an integer pair (denominator may be negative).
Rat make_rat(const Int& num, const Int& den);

// Shared matrix text format: a header line "m n", then m lines of n decimal
// integers separated by whitespace. '#' starts a comment running to the end
// of the line. Parse errors carry 1-based line numbers.
IntegerMatrix parse_matrix(std::istream& in);
IntegerMatrix parse_matrix_file(const std::string& path);
std::string format_matrix(const IntegerMatrix& m);

std::string to_string(const Vec& v);

}  // namespace sparsebound
