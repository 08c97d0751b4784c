#pragma once

#include <optional>

#include "sparsebound/matrix.hpp"

namespace sparsebound {

// A full-dimensional simplicial cone spanned by m linearly independent
// integer vectors. Membership is decided exactly from the basis coordinates;
// the inner normals a^1..a^m (rows of -basis^{-1}) satisfy a^i . v^j = 0 for
// i != j and a^i . v^i < 0, so the cone is also {x : a^i . x <= 0 for all i}.
class SimplicialCone {
 public:
  explicit SimplicialCone(IntegerMatrix basis, std::vector<int> source_cols = {});

  int dim() const { return basis_.rows(); }
  const IntegerMatrix& basis() const { return basis_; }
  const Int& basis_det() const { return det_; }
  // Which columns of the covered matrix span this cone (empty when the cone
  // was built standalone).
  const std::vector<int>& source_cols() const { return source_cols_; }

  const std::vector<QVec>& inner_normals() const { return normals_; }

  bool contains(const Vec& x) const;
  bool contains(const QVec& x) const;
  QVec coordinates(const QVec& x) const;
  QVec coordinates(const Vec& x) const;
  // Basis coordinates when they are all integral, nullopt otherwise.
  std::optional<Vec> integral_coordinates(const Vec& x) const;

 private:
  IntegerMatrix basis_;
  IntegerMatrix adj_;
  Int det_;
  std::vector<int> source_cols_;
  std::vector<QVec> normals_;
};

// All m-element column subsets of w with nonzero determinant, in
// lexicographic subset order. Their union is cone(w).
struct ConeCover {
  std::vector<SimplicialCone> subcones;
  IntegerMatrix source;
};

ConeCover caratheodory_cover(const IntegerMatrix& w, const Caps& caps = {});

// Whether cone(a) equals cone(w), given that the columns of w are a subset of
// the columns of a: every column of a must lie in some subcone of the cover.
bool cone_equal(const IntegerMatrix& a, const IntegerMatrix& w,
                const Caps& caps = {});

// A point z = sum k_i v^i with nonnegative integer coordinates k such that
// K + z is contained in K and in every translate K + x. Built by folding the
// two-translate halfspace construction over xs and rounding the basis
// coordinates up; the containment conditions z in K and z - x in K are
// checked exactly before returning.
Vec overlap_translate(const SimplicialCone& k, const std::vector<Vec>& xs);

}  // namespace sparsebound
