#pragma once

#include <optional>

#include "sparsebound/matrix.hpp"

namespace sparsebound {

// Exact determinant via fraction-free (Bareiss) elimination.
Int det(const IntegerMatrix& m);

// Column Hermite normal form. h has a lower-triangular profile: column j has
// its pivot at pivot_rows[j], pivots are positive, and within each pivot row
// the entries of earlier columns are reduced to [0, pivot). u is unimodular
// with input * u == h, so h spans the same column lattice as the input.
struct HnfResult {
  IntegerMatrix h{1, 1};
  IntegerMatrix u{1, 1};
  std::vector<int> pivot_rows;
  int rank() const { return int(pivot_rows.size()); }
};

HnfResult hnf(const IntegerMatrix& m);

// Smith normal form: u * input * v == diag(diag), with d_1 | d_2 | ... and
// u, v unimodular.
struct SnfResult {
  std::vector<Int> diag;
  IntegerMatrix u{1, 1}, v{1, 1};
  int rank = 0;
};

SnfResult snf(const IntegerMatrix& m);

// Exact rational solution of m x = b, or nullopt when inconsistent. Free
// variables, if any, are fixed to zero.
std::optional<QVec> solve_rational(const IntegerMatrix& m, const Vec& b);
std::optional<QVec> solve_rational_q(const IntegerMatrix& m, const QVec& b);

// Prime factors of n >= 1 with multiplicity, by trial division. A cofactor
// that survives division up to `ceiling` is prime whenever it is at most
// ceiling^2; larger cofactors raise factorization_incomplete.
std::vector<Int> factorize(const Int& n, const Int& ceiling);

// Number of prime factors with multiplicity; omega(1) == 0.
unsigned omega(const Int& n, const Int& ceiling = Int(1'000'000'000));

// Statistics over the m x m minors of a full-row-rank matrix: the set of
// absolute values of invertible minors, their prime-factor counts, the gcd of
// all minors, and det(w w^T), which equals the sum of all squared minors.
struct MinorStats {
  std::set<Int> delta_set;
  std::set<unsigned> phi_set;
  Int delta_max, delta_min;
  unsigned phi_max = 0, phi_min = 0;
  Int minor_gcd;
  Int gram_det;
  long subsets_enumerated = 0;
};

MinorStats minor_stats(const IntegerMatrix& w, const Caps& caps = {});

// Integer lattice spanned by a set of columns, held as a canonical column
// HNF basis. Membership is a triangular divisibility solve.
class Lattice {
 public:
  static Lattice from_columns(const IntegerMatrix& generators);
  static Lattice from_columns(const std::vector<Vec>& generators, int dim);

  int dim() const { return dim_; }
  int rank() const { return int(basis_.size()); }
  const std::vector<Vec>& basis() const { return basis_; }
  const std::vector<int>& pivot_rows() const { return pivot_rows_; }

  bool contains(const Vec& v) const;
  // Lattice spanned by this basis plus one extra generator.
  Lattice extended(const Vec& extra) const;

  bool operator==(const Lattice&) const = default;

 private:
  int dim_ = 0;
  std::vector<Vec> basis_;      // columns, lower-triangular profile
  std::vector<int> pivot_rows_;
};

// Enumerate k-element subsets of {0..n-1} in lexicographic order.
bool next_combination(std::vector<int>& idx, int n);
std::vector<int> first_combination(int k);

}  // namespace sparsebound
